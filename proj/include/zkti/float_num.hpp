// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Positive decimal numbers as normalized binary floats (s, e) with a
// w-bit significand, plus the native arithmetic whose intermediate values
// double as the extended witness of the corresponding circuits.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "zkti/u256.hpp"

namespace zkti {

using limb::u128;

/// Precision profile: w significand bits, relative error delta = 2^-(w-1).
struct Precision {
    unsigned w;

    explicit Precision(unsigned w_) : w(w_) {
        if (w < 4 || w > 80) throw std::invalid_argument("precision w must be in [4, 80]");
    }
    u128 delta_inv() const { return u128{1} << (w - 1); }
    u128 sig_min() const { return u128{1} << (w - 1); }
    u128 sig_max() const { return u128{1} << w; }  // exclusive
};

inline constexpr int kExpMin = -128;
inline constexpr int kExpMax = 127;
inline constexpr int kExpShift = 128;  // circuit encoding: E = e + 128

/// Auxiliary values produced by a native op; the prover feeds them to the
/// matching circuit as extended witness.
struct FloatAux {
    unsigned theta = 0;    // normalization shift (add cutoff path: the a+a core shift, 1)
    unsigned lambda = 0;   // exponent gap after ordering (add only)
    bool swapped = false;  // operands permuted so the first has the larger exponent
    bool trivial_zero = false;  // op short-circuited on a zero operand, no circuit aux

    bool is_cutoff(unsigned w) const { return lambda > w; }
    u128 mid() const { return u128{1} << theta; }
    u128 mid_prime(unsigned w) const { return is_cutoff(w) ? 1 : (u128{1} << lambda); }
};

struct Float {
    u128 s = 0;
    int e = 0;
    bool is_zero = true;
    unsigned w = 0;

    static Float zero(unsigned w) { return Float{0, 0, true, w}; }

    static Float from_parts(u128 s, int e, unsigned w) {
        Precision pr(w);
        if (s < pr.sig_min() || s >= pr.sig_max())
            throw std::invalid_argument("significand out of normalized range");
        check_exp(e);
        return Float{s, e, false, w};
    }

    /// Nearest representable value of num/den, ties to even.
    static Float encode(u128 num, u128 den, unsigned w) {
        Precision pr(w);
        if (den == 0) throw std::domain_error("encode: zero denominator");
        if (num == 0) return zero(w);

        U256 n = limb::from_u128<4>(num);
        U256 d = limb::from_u128<4>(den);
        // target exponent so that num/den * 2^-e lands near [2^(w-1), 2^w)
        int e = static_cast<int>(limb::bit_length(n)) - static_cast<int>(limb::bit_length(d)) - static_cast<int>(w);
        for (;;) {
            // s = round(num * 2^-e / den)
            U256 shifted_num = n, shifted_den = d;
            if (e <= 0) shifted_num = limb::shl(n, static_cast<unsigned>(-e));
            else shifted_den = limb::shl(d, static_cast<unsigned>(e));
            U256 rem{};
            U256 q = limb::divmod(shifted_num, shifted_den, &rem);
            u128 s = limb::to_u128(q);
            // ties-to-even on the remainder
            U256 rem2 = limb::shl(rem, 1);
            int c = limb::cmp(rem2, shifted_den);
            if (c > 0 || (c == 0 && (s & 1))) ++s;
            if (s >= pr.sig_max()) {
                ++e;
                continue;
            }
            if (s < pr.sig_min()) {
                --e;
                continue;
            }
            check_exp(e);
            return Float{s, e, false, w};
        }
    }

    static Float encode_int(std::uint64_t v, unsigned w) { return encode(v, 1, w); }

    /// Integer encode with floor rounding of the shifted significand; matches
    /// the in-circuit integer-to-float conversion when v needs more than w bits.
    static Float from_int_floor(u128 v, unsigned w) {
        Precision pr(w);
        if (v == 0) return zero(w);
        int e = 0;
        u128 s = v;
        while (s >= pr.sig_max()) {
            s >>= 1;
            ++e;
        }
        while (s < pr.sig_min()) {
            s <<= 1;
            --e;
        }
        if (e > 0) s = v >> e;  // floor against the original value
        check_exp(e);
        return Float{s, e, false, w};
    }

    /// Nearest representable value of a positive double (0 maps to the zero
    /// float); used for re-encoding natively computed logarithms.
    static Float encode_double(double x, unsigned w) {
        if (x < 0) throw std::domain_error("encode_double: negative value");
        if (x == 0) return zero(w);
        int exp = 0;
        double mant = std::frexp(x, &exp);  // mant in [0.5, 1)
        auto num = static_cast<u128>(std::llround(std::ldexp(mant, 53)));
        int e2 = exp - 53;
        if (e2 >= 0) return encode(num << e2, 1, w);
        return encode(num, u128{1} << -e2, w);
    }

    long double decode() const {
        if (is_zero) return 0.0L;
        long double x = static_cast<long double>(static_cast<std::uint64_t>(s >> 64)) * 18446744073709551616.0L +
                        static_cast<long double>(static_cast<std::uint64_t>(s));
        return std::ldexp(x, e);
    }

    friend bool operator==(const Float& a, const Float& b) {
        if (a.is_zero || b.is_zero) return a.is_zero == b.is_zero;
        return a.s == b.s && a.e == b.e && a.w == b.w;
    }

    static void check_exp(int e) {
        if (e < kExpMin || e > kExpMax)
            throw std::range_error("float exponent " + std::to_string(e) + " outside [-128, 127]");
    }
};

namespace detail {

inline void require_same_w(const Float& a, const Float& b) {
    if (a.w != b.w) throw std::invalid_argument("operand precision mismatch");
}

}  // namespace detail

/// c = a*b with floor rounding of the shifted significand; theta in {w-1, w},
/// the smaller value preferred when both normalize.
inline std::pair<Float, FloatAux> float_mul_native(const Float& a, const Float& b) {
    detail::require_same_w(a, b);
    const Precision pr(a.w);
    if (a.is_zero || b.is_zero) return {Float::zero(a.w), FloatAux{.trivial_zero = true}};

    U256 hat = limb::mul(limb::from_u128<2>(a.s), limb::from_u128<2>(b.s));
    unsigned theta = a.w - 1;
    u128 s = limb::to_u128(limb::shr(hat, theta));
    if (s >= pr.sig_max()) {
        theta = a.w;
        s >>= 1;
    }
    int e = a.e + b.e + static_cast<int>(theta);
    Float::check_exp(e);
    return {Float{s, e, false, a.w}, FloatAux{.theta = theta}};
}

/// c = a/b via s_c = floor(s_a * 2^theta / s_b); theta in {w-1, w}.
inline std::pair<Float, FloatAux> float_div_native(const Float& a, const Float& b) {
    detail::require_same_w(a, b);
    const Precision pr(a.w);
    if (b.is_zero) throw std::domain_error("float division by zero");
    if (a.is_zero) return {Float::zero(a.w), FloatAux{.trivial_zero = true}};

    unsigned theta = a.w - 1;
    U256 den = limb::from_u128<4>(b.s);
    u128 s = limb::to_u128(limb::divmod(limb::shl(limb::from_u128<4>(a.s), theta), den));
    if (s < pr.sig_min()) {
        theta = a.w;
        s = limb::to_u128(limb::divmod(limb::shl(limb::from_u128<4>(a.s), theta), den));
    }
    int e = a.e - b.e - static_cast<int>(theta);
    Float::check_exp(e);
    return {Float{s, e, false, a.w}, FloatAux{.theta = theta}};
}

/// c = a+b. Operands are ordered by exponent; when the gap exceeds w the
/// larger operand is returned exactly (cutoff rule), otherwise
/// s_c = floor((s_big * 2^lambda + s_small) / 2^theta) with theta in
/// {lambda, lambda+1}.
inline std::pair<Float, FloatAux> float_add_native(const Float& a, const Float& b) {
    detail::require_same_w(a, b);
    const Precision pr(a.w);
    if (a.is_zero) return {b, FloatAux{.trivial_zero = true}};
    if (b.is_zero) return {a, FloatAux{.trivial_zero = true}};

    FloatAux aux;
    aux.swapped = a.e < b.e;
    const Float& big = aux.swapped ? b : a;
    const Float& small = aux.swapped ? a : b;
    aux.lambda = static_cast<unsigned>(big.e - small.e);

    if (aux.is_cutoff(a.w)) {
        // Dropping the small operand stays within delta; the circuit's core
        // path degenerates to big+big and is selected away.
        aux.theta = 1;
        return {big, aux};
    }

    U256 hat = limb::from_u128<4>(small.s);
    limb::add_in_place(hat, limb::shl(limb::from_u128<4>(big.s), aux.lambda));
    aux.theta = aux.lambda;
    u128 s = limb::to_u128(limb::shr(hat, aux.theta));
    if (s >= pr.sig_max()) {
        aux.theta = aux.lambda + 1;
        s = limb::to_u128(limb::shr(hat, aux.theta));
    }
    int e = small.e + static_cast<int>(aux.theta);
    Float::check_exp(e);
    return {Float{s, e, false, a.w}, aux};
}

/// a <= b. Zero is below every nonzero value; otherwise lexicographic on
/// (e, s), valid because significands are normalized.
inline bool float_leq(const Float& a, const Float& b) {
    if (a.is_zero) return true;
    if (b.is_zero) return false;
    if (a.e != b.e) return a.e < b.e;
    return a.s <= b.s;
}

inline bool float_lt(const Float& a, const Float& b) { return !float_leq(b, a); }

}  // namespace zkti
