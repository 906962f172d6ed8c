// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "zkti/u256.hpp"

namespace zkti {

/// Canonical residue in [0, p). Plain 32-byte value; all arithmetic goes
/// through the owning Field context.
struct FieldElement {
    U256 v{};

    friend bool operator==(const FieldElement& a, const FieldElement& b) = default;
};

/// Prime-field context: the modulus plus precomputed Barrett constants.
/// Elements are canonically reduced; products are reduced via Barrett when
/// p has at least 193 bits (always true for the default prime), otherwise
/// via plain long division.
class Field {
public:
    // BN254 scalar field modulus; 254 bits, so any precision w <= 84 satisfies
    // the p > 2^(3w+1) requirement.
    static constexpr const char* kDefaultPrimeDec =
        "21888242871839275222246405745257275088548364400416034343698204186575808495617";

    explicit Field(const U256& prime) : p_(prime) {
        bits_ = limb::bit_length(p_);
        if (bits_ < 3 || (p_[0] & 1) == 0) throw std::invalid_argument("field modulus must be an odd prime >= 3");
        if (bits_ >= 193) {
            // mu = floor(2^512 / p), fits in 5 limbs for p >= 2^193.
            Limbs<9> two512{};
            two512[8] = 1;
            Limbs<9> mu = limb::divmod(two512, p_);
            mu_ = limb::resize<5>(mu);
            fast_ = true;
            // Montgomery constants for the bulk-multiplication path:
            // n0inv = -p^-1 mod 2^64, r2 = 2^512 mod p
            std::uint64_t inv = 1;
            for (int i = 0; i < 6; ++i) inv *= 2 - p_[0] * inv;
            n0inv_ = ~inv + 1;
            Limbs<9> rem{};
            limb::divmod(two512, limb::resize<9>(p_), &rem);
            r2_ = limb::resize<4>(rem);
        } else {
            fast_ = false;
        }
    }

    static Field default_field() { return Field(limb::from_decimal<4>(kDefaultPrimeDec)); }
    static std::shared_ptr<const Field> default_field_shared() {
        static const auto f = std::make_shared<const Field>(limb::from_decimal<4>(kDefaultPrimeDec));
        return f;
    }

    const U256& prime() const { return p_; }
    unsigned prime_bits() const { return bits_; }

    /// Appendix-style soundness bound: the widest intermediate of the float
    /// relations is below 2^(3w+1), which must stay below p.
    bool supports_precision(unsigned w) const { return 3 * w + 1 < bits_; }

    FieldElement zero() const { return {}; }
    FieldElement one() const { return {limb::from_u64<4>(1)}; }

    FieldElement from_u64(std::uint64_t x) const { return reduce_u256(limb::from_u64<4>(x)); }
    FieldElement from_u128(limb::u128 x) const { return reduce_u256(limb::from_u128<4>(x)); }
    FieldElement from_decimal(const std::string& s) const { return reduce_u256(limb::from_decimal<4>(s)); }

    FieldElement from_i64(std::int64_t x) const {
        return x >= 0 ? from_u64(static_cast<std::uint64_t>(x))
                      : neg(from_u64(static_cast<std::uint64_t>(-x)));
    }

    FieldElement reduce_u256(U256 x) const {
        if (limb::cmp(x, p_) >= 0) {
            Limbs<4> rem{};
            limb::divmod(x, p_, &rem);
            x = rem;
        }
        return {x};
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        Limbs<5> s = limb::resize<5>(a.v);
        limb::add_in_place(s, limb::resize<5>(b.v));
        Limbs<5> p5 = limb::resize<5>(p_);
        if (limb::cmp(s, p5) >= 0) limb::sub_in_place(s, p5);
        return {limb::resize<4>(s)};
    }

    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        U256 r = a.v;
        if (limb::sub_in_place(r, b.v)) limb::add_in_place(r, p_);
        return {r};
    }

    FieldElement neg(const FieldElement& a) const { return sub(zero(), a); }

    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        if (!fast_) return reduce_512(limb::mul(a.v, b.v));
        // fixed-size schoolbook product and Barrett reduction, no copies
        using u128 = limb::u128;
        std::uint64_t x[8] = {};
        for (int i = 0; i < 4; ++i) {
            std::uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                u128 cur = static_cast<u128>(a.v[i]) * b.v[j] + x[i + j] + carry;
                x[i + j] = static_cast<std::uint64_t>(cur);
                carry = static_cast<std::uint64_t>(cur >> 64);
            }
            x[i + 4] = carry;
        }
        // q2 = (x >> 192) * mu, keep limbs 5..9 => q3 (5 limbs)
        std::uint64_t q2[10] = {};
        for (int i = 0; i < 5; ++i) {
            std::uint64_t carry = 0;
            for (int j = 0; j < 5; ++j) {
                u128 cur = static_cast<u128>(x[3 + i]) * mu_[j] + q2[i + j] + carry;
                q2[i + j] = static_cast<std::uint64_t>(cur);
                carry = static_cast<std::uint64_t>(cur >> 64);
            }
            q2[i + 5] = carry;
        }
        // r = x - q3 * p over 5 limbs (r < 3p < 2^256 ample)
        std::uint64_t qp[10] = {};
        for (int i = 0; i < 5; ++i) {
            std::uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                u128 cur = static_cast<u128>(q2[5 + i]) * p_[j] + qp[i + j] + carry;
                qp[i + j] = static_cast<std::uint64_t>(cur);
                carry = static_cast<std::uint64_t>(cur >> 64);
            }
            qp[i + 4] += carry;
        }
        std::uint64_t r[5];
        std::uint64_t borrow = 0;
        for (int i = 0; i < 5; ++i) {
            u128 d = static_cast<u128>(x[i]) - qp[i] - borrow;
            r[i] = static_cast<std::uint64_t>(d);
            borrow = static_cast<std::uint64_t>((d >> 64) & 1);
        }
        for (int rounds = 0; rounds < 3; ++rounds) {
            bool ge = r[4] != 0;
            if (!ge) {
                ge = true;
                for (int i = 3; i >= 0; --i) {
                    if (r[i] != p_[i]) {
                        ge = r[i] > p_[i];
                        break;
                    }
                }
            }
            if (!ge) break;
            std::uint64_t bw = 0;
            for (int i = 0; i < 4; ++i) {
                u128 d = static_cast<u128>(r[i]) - p_[i] - bw;
                r[i] = static_cast<std::uint64_t>(d);
                bw = static_cast<std::uint64_t>((d >> 64) & 1);
            }
            r[4] -= bw;
        }
        return {U256{r[0], r[1], r[2], r[3]}};
    }

    FieldElement square(const FieldElement& a) const { return mul(a, a); }

    FieldElement pow(FieldElement base, U256 exp) const {
        FieldElement acc = one();
        const unsigned n = limb::bit_length(exp);
        for (unsigned i = n; i-- > 0;) {
            acc = square(acc);
            if (limb::get_bit(exp, i)) acc = mul(acc, base);
        }
        return acc;
    }

    /// Multiplicative inverse via Fermat; throws on zero.
    FieldElement inv(const FieldElement& a) const {
        if (limb::is_zero(a.v)) throw std::domain_error("field inversion of zero");
        U256 e = p_;
        limb::sub_in_place(e, limb::from_u64<4>(2));
        return pow(a, e);
    }

    bool is_zero(const FieldElement& a) const { return limb::is_zero(a.v); }

    /// 2^k as a field element; k may exceed the field bit width.
    FieldElement pow2(unsigned k) const {
        FieldElement two = from_u64(2);
        U256 e{};
        e[0] = k;
        return pow(two, e);
    }

    std::string to_decimal(const FieldElement& a) const { return limb::to_decimal(a.v); }
    std::string to_hex(const FieldElement& a) const { return limb::to_hex(a.v); }

    /// Montgomery-form helpers for multiplication-heavy inner loops (the
    /// Poseidon permutation). Representation-changing: callers convert in and
    /// out explicitly. Requires the fast path (p >= 2^193).
    FieldElement to_mont(const FieldElement& a) const { return mont_mul(a, {r2_}); }
    FieldElement from_mont(const FieldElement& a) const { return mont_mul(a, {limb::from_u64<4>(1)}); }

    FieldElement mont_mul(const FieldElement& a, const FieldElement& b) const {
        using u128 = limb::u128;
        // CIOS with 4 limbs
        std::uint64_t t[6] = {};
        for (int i = 0; i < 4; ++i) {
            std::uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                u128 cur = static_cast<u128>(a.v[i]) * b.v[j] + t[j] + carry;
                t[j] = static_cast<std::uint64_t>(cur);
                carry = static_cast<std::uint64_t>(cur >> 64);
            }
            u128 cur = static_cast<u128>(t[4]) + carry;
            t[4] = static_cast<std::uint64_t>(cur);
            t[5] = static_cast<std::uint64_t>(cur >> 64);

            std::uint64_t m = t[0] * n0inv_;
            u128 acc = static_cast<u128>(m) * p_[0] + t[0];
            carry = static_cast<std::uint64_t>(acc >> 64);
            for (int j = 1; j < 4; ++j) {
                acc = static_cast<u128>(m) * p_[j] + t[j] + carry;
                t[j - 1] = static_cast<std::uint64_t>(acc);
                carry = static_cast<std::uint64_t>(acc >> 64);
            }
            acc = static_cast<u128>(t[4]) + carry;
            t[3] = static_cast<std::uint64_t>(acc);
            t[4] = t[5] + static_cast<std::uint64_t>(acc >> 64);
        }
        std::uint64_t r[4] = {t[0], t[1], t[2], t[3]};
        bool ge = t[4] != 0;
        if (!ge) {
            ge = true;
            for (int i = 3; i >= 0; --i) {
                if (r[i] != p_[i]) {
                    ge = r[i] > p_[i];
                    break;
                }
            }
        }
        if (ge) {
            std::uint64_t bw = 0;
            for (int i = 0; i < 4; ++i) {
                u128 d = static_cast<u128>(r[i]) - p_[i] - bw;
                r[i] = static_cast<std::uint64_t>(d);
                bw = static_cast<std::uint64_t>((d >> 64) & 1);
            }
        }
        return {U256{r[0], r[1], r[2], r[3]}};
    }

    /// Interprets a as a signed residue around zero (for diagnostics).
    bool is_small(const FieldElement& a, std::uint64_t bound) const {
        return limb::bit_length(a.v) <= 63 && a.v[0] <= bound;
    }

private:
    FieldElement reduce_512(const Limbs<8>& x) const {
        if (!fast_) {
            Limbs<4> rem{};
            limb::divmod(x, p_, &rem);
            return {rem};
        }
        // Barrett with k = 4 limbs: q = ((x >> 192) * mu) >> 320, r = x - q*p.
        Limbs<5> q1 = limb::resize<5>(limb::shr(x, 192));
        Limbs<10> q2 = limb::mul(q1, mu_);
        Limbs<5> q3 = limb::resize<5>(limb::shr(q2, 320));
        Limbs<9> qp = limb::mul(q3, p_);
        Limbs<9> r = limb::resize<9>(x);
        limb::sub_in_place(r, qp);
        // r < 3p after the estimate, so at most two corrections.
        Limbs<9> p9 = limb::resize<9>(p_);
        while (limb::cmp(r, p9) >= 0) limb::sub_in_place(r, p9);
        return {limb::resize<4>(r)};
    }

    U256 p_{};
    Limbs<5> mu_{};
    U256 r2_{};
    std::uint64_t n0inv_ = 0;
    unsigned bits_ = 0;
    bool fast_ = false;
};

/// Dispatcher used by callers that want the spec's single-entry-point shape.
enum class FeOp { add, sub, mul, inv, neg, pow };

inline FieldElement fe_arith(const Field& f, FeOp op, const FieldElement& a,
                             const FieldElement& b = {}) {
    switch (op) {
        case FeOp::add: return f.add(a, b);
        case FeOp::sub: return f.sub(a, b);
        case FeOp::mul: return f.mul(a, b);
        case FeOp::inv: return f.inv(a);
        case FeOp::neg: return f.neg(a);
        case FeOp::pow: return f.pow(a, b.v);
    }
    throw std::logic_error("unreachable");
}

}  // namespace zkti
