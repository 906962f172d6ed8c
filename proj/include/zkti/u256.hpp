// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zkti {

/// Fixed-width little-endian unsigned integers. These back the prime field
/// and the wide intermediates of the float layer; no allocation, no sign.
template <std::size_t N>
using Limbs = std::array<std::uint64_t, N>;

using U256 = Limbs<4>;
using U320 = Limbs<5>;
using U512 = Limbs<8>;

namespace limb {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

template <std::size_t N>
constexpr Limbs<N> zero() {
    return Limbs<N>{};
}

template <std::size_t N>
constexpr bool is_zero(const Limbs<N>& a) {
    for (std::size_t i = 0; i < N; ++i)
        if (a[i] != 0) return false;
    return true;
}

template <std::size_t N>
constexpr int cmp(const Limbs<N>& a, const Limbs<N>& b) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

// a += b, returns carry-out.
template <std::size_t N>
constexpr u64 add_in_place(Limbs<N>& a, const Limbs<N>& b) {
    u64 carry = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u128 s = static_cast<u128>(a[i]) + b[i] + carry;
        a[i] = static_cast<u64>(s);
        carry = static_cast<u64>(s >> 64);
    }
    return carry;
}

// a -= b, returns borrow-out (1 if b > a).
template <std::size_t N>
constexpr u64 sub_in_place(Limbs<N>& a, const Limbs<N>& b) {
    u64 borrow = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
        a[i] = static_cast<u64>(d);
        borrow = static_cast<u64>((d >> 64) & 1);
    }
    return borrow;
}

template <std::size_t N>
constexpr Limbs<N> add(Limbs<N> a, const Limbs<N>& b) {
    add_in_place(a, b);
    return a;
}

template <std::size_t N>
constexpr Limbs<N> sub(Limbs<N> a, const Limbs<N>& b) {
    sub_in_place(a, b);
    return a;
}

// Schoolbook product, full width.
template <std::size_t NA, std::size_t NB>
constexpr Limbs<NA + NB> mul(const Limbs<NA>& a, const Limbs<NB>& b) {
    Limbs<NA + NB> out{};
    for (std::size_t i = 0; i < NA; ++i) {
        u64 carry = 0;
        for (std::size_t j = 0; j < NB; ++j) {
            u128 cur = static_cast<u128>(a[i]) * b[j] + out[i + j] + carry;
            out[i + j] = static_cast<u64>(cur);
            carry = static_cast<u64>(cur >> 64);
        }
        out[i + NB] = carry;
    }
    return out;
}

template <std::size_t NO, std::size_t NI>
constexpr Limbs<NO> resize(const Limbs<NI>& a) {
    Limbs<NO> out{};
    for (std::size_t i = 0; i < NO && i < NI; ++i) out[i] = a[i];
    if constexpr (NO < NI) {
        for (std::size_t i = NO; i < NI; ++i) {
            if (a[i] != 0) throw std::overflow_error("limb resize truncates nonzero limbs");
        }
    }
    return out;
}

template <std::size_t N>
constexpr Limbs<N> shl(const Limbs<N>& a, unsigned bits) {
    Limbs<N> out{};
    const unsigned limb_shift = bits / 64, bit_shift = bits % 64;
    for (std::size_t i = N; i-- > 0;) {
        if (i < limb_shift) continue;
        u64 lo = a[i - limb_shift] << bit_shift;
        u64 hi = (bit_shift && i - limb_shift >= 1) ? (a[i - limb_shift - 1] >> (64 - bit_shift)) : 0;
        out[i] = lo | hi;
    }
    return out;
}

template <std::size_t N>
constexpr Limbs<N> shr(const Limbs<N>& a, unsigned bits) {
    Limbs<N> out{};
    const unsigned limb_shift = bits / 64, bit_shift = bits % 64;
    for (std::size_t i = 0; i < N; ++i) {
        if (i + limb_shift >= N) break;
        u64 lo = a[i + limb_shift] >> bit_shift;
        u64 hi = (bit_shift && i + limb_shift + 1 < N) ? (a[i + limb_shift + 1] << (64 - bit_shift)) : 0;
        out[i] = lo | hi;
    }
    return out;
}

template <std::size_t N>
constexpr unsigned bit_length(const Limbs<N>& a) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != 0) {
            unsigned b = 64;
            u64 v = a[i];
            while (!(v >> 63)) { v <<= 1; --b; }
            return static_cast<unsigned>(i) * 64 + b;
        }
    }
    return 0;
}

template <std::size_t N>
constexpr bool get_bit(const Limbs<N>& a, unsigned i) {
    return (a[i / 64] >> (i % 64)) & 1;
}

template <std::size_t N>
constexpr void set_bit(Limbs<N>& a, unsigned i) {
    a[i / 64] |= (u64{1} << (i % 64));
}

/// Long division by shift-and-subtract: slow, but exact for any operand
/// sizes. Used for setup-time constants and the small-prime fallback.
template <std::size_t N, std::size_t M>
constexpr Limbs<N> divmod(const Limbs<N>& num, const Limbs<M>& den, Limbs<M>* rem_out = nullptr) {
    if (is_zero(den)) throw std::domain_error("division by zero");
    Limbs<N> quot{};
    Limbs<M> rem{};
    const unsigned nbits = bit_length(num);
    for (unsigned i = nbits; i-- > 0;) {
        // rem = rem << 1 | bit(num, i)
        if (get_bit(rem, M * 64 - 1)) throw std::overflow_error("divmod remainder overflow");
        rem = shl(rem, 1);
        if (get_bit(num, i)) rem[0] |= 1;
        if (cmp(rem, den) >= 0) {
            sub_in_place(rem, den);
            set_bit(quot, i);
        }
    }
    if (rem_out) *rem_out = rem;
    return quot;
}

// Multiply by a single 64-bit word, in place over N limbs; returns carry-out.
template <std::size_t N>
constexpr u64 mul_word_add(Limbs<N>& acc, u64 word) {
    u64 carry = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u128 cur = static_cast<u128>(acc[i]) * word + carry;
        acc[i] = static_cast<u64>(cur);
        carry = static_cast<u64>(cur >> 64);
    }
    return carry;
}

template <std::size_t N>
std::string to_hex(const Limbs<N>& a) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    bool started = false;
    for (std::size_t i = N; i-- > 0;) {
        for (int nib = 15; nib >= 0; --nib) {
            unsigned d = static_cast<unsigned>((a[i] >> (nib * 4)) & 0xf);
            if (!started && d == 0) continue;
            started = true;
            out.push_back(digits[d]);
        }
    }
    if (!started) out = "0";
    return "0x" + out;
}

template <std::size_t N>
Limbs<N> from_hex(std::string_view s) {
    if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") s.remove_prefix(2);
    Limbs<N> out{};
    for (char c : s) {
        unsigned d;
        if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
        else throw std::invalid_argument("bad hex digit");
        if (bit_length(out) + 4 > N * 64) throw std::overflow_error("hex literal too wide");
        out = shl(out, 4);
        out[0] |= d;
    }
    return out;
}

template <std::size_t N>
Limbs<N> from_decimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty decimal literal");
    Limbs<N> out{};
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
        u64 carry = mul_word_add(out, 10);
        Limbs<N> d{};
        d[0] = static_cast<u64>(c - '0');
        carry += add_in_place(out, d);
        if (carry) throw std::overflow_error("decimal literal too wide");
    }
    return out;
}

template <std::size_t N>
std::string to_decimal(Limbs<N> a) {
    if (is_zero(a)) return "0";
    std::string out;
    Limbs<1> ten{10};
    while (!is_zero(a)) {
        Limbs<1> rem{};
        a = divmod(a, ten, &rem);
        out.push_back(static_cast<char>('0' + rem[0]));
    }
    return {out.rbegin(), out.rend()};
}

template <std::size_t N>
constexpr Limbs<N> from_u64(u64 v) {
    Limbs<N> out{};
    out[0] = v;
    return out;
}

template <std::size_t N>
constexpr Limbs<N> from_u128(u128 v) {
    static_assert(N >= 2);
    Limbs<N> out{};
    out[0] = static_cast<u64>(v);
    out[1] = static_cast<u64>(v >> 64);
    return out;
}

template <std::size_t N>
constexpr u128 to_u128(const Limbs<N>& a) {
    for (std::size_t i = 2; i < N; ++i)
        if (a[i] != 0) throw std::overflow_error("value exceeds 128 bits");
    return (static_cast<u128>(N > 1 ? a[1] : 0) << 64) | a[0];
}

}  // namespace limb
}  // namespace zkti
