// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Constraint gadgets: bit decomposition, unsigned comparison, power-of-two
// checking and the two-pair permutation check. Each gadget emits constraints
// and, when the Synth carries an assignment, computes the witness values of
// everything it allocates.

#pragma once

#include <vector>

#include "zkti/r1cs.hpp"

namespace zkti {

/// LSB-first bit variables of a decomposed value.
struct BitVector {
    std::vector<VarId> bits;
    unsigned width = 0;
};

/// v = sum 2^i * b_i with every b_i boolean. Takes width+1 gates.
/// Witness generation fails if the assigned value needs more than `width` bits.
inline BitVector bit_decompose(Synth& syn, const Lc& v, unsigned width) {
    const Field& f = syn.f();
    BitVector out;
    out.width = width;
    out.bits.reserve(width);

    U256 val{};
    if (syn.assigning()) {
        val = syn.value(v).v;
        if (limb::bit_length(val) > width && !syn.lenient())
            throw std::range_error("bit_decompose: value does not fit in " + std::to_string(width) + " bits");
        // lenient mode keeps the low bits; the recomposition row then fails
    }

    Lc recomposed(f);
    for (unsigned i = 0; i < width; ++i) {
        VarId b = syn.alloc("bit", [&] { return limb::get_bit(val, i) ? f.one() : f.zero(); });
        // (1 - b) * b = 0
        syn.cs().enforce(Lc::constant_u64(f, 1) - syn.lc(b), syn.lc(b), syn.lc_zero());
        recomposed.add_term(b.index, f.pow2(i));
        out.bits.push_back(b);
    }
    syn.cs().enforce_linear(recomposed, v);
    return out;
}

/// Result bit for a <= b over `width`-bit operands: decomposes
/// m = b - a + 2^width into width+1 bits and returns the top bit.
/// Takes width+2 gates. The bit is free; callers that need the relation to
/// hold pin it to 1.
inline VarId compare_leq(Synth& syn, const Lc& a, const Lc& b, unsigned width) {
    const Field& f = syn.f();
    Lc m = b;
    m -= a;
    m += Lc::constant(f, f.pow2(width));
    BitVector bits = bit_decompose(syn, m, width + 1);
    return bits.bits[width];
}

/// Pins a <= b (the paper's "1 := compare(a, b)"). width+3 gates.
inline void enforce_leq(Synth& syn, const Lc& a, const Lc& b, unsigned width) {
    VarId msb = compare_leq(syn, a, b, width);
    syn.cs().enforce_linear(syn.lc(msb), syn.lc_const(1));
}

/// Checks claimed = 2^exponent by repeated squaring over the exponent bits,
/// with the 2^(2^i) constants folded in as public constants. Takes
/// 2*max_bits + 2 gates; exponent must fit in max_bits bits.
inline void exponential_check(Synth& syn, const Lc& exponent, const Lc& claimed, unsigned max_bits) {
    const Field& f = syn.f();
    BitVector bits = bit_decompose(syn, exponent, max_bits);
    Lc cur = Lc::constant_u64(f, 1);
    for (unsigned i = 0; i < max_bits; ++i) {
        // cur' = cur * (1 - b_i) + cur * 2^(2^i) * b_i  ==  cur + (2^(2^i)-1) * cur * b_i
        VarId t = syn.alloc("exp_t", [&] { return f.mul(syn.value(cur), syn.value(syn.lc(bits.bits[i]))); });
        syn.cs().enforce(cur, syn.lc(bits.bits[i]), syn.lc(t));
        FieldElement scale = f.sub(f.pow2(1u << i), f.one());
        Lc next = cur;
        next.add_term(t.index, scale);
        cur = next;
    }
    syn.cs().enforce_linear(cur, claimed);
}

/// Two-pair permutation check at verifier-supplied points r, z:
/// (r - (a1+z*b1))(r - (a2+z*b2)) = (r - (c1+z*d1))(r - (c2+z*d2)).
/// Takes 6 gates. Sound except with probability <= 4/p over r, z.
inline void permutation_check(Synth& syn, const std::array<std::pair<Lc, Lc>, 2>& input_pairs,
                              const std::array<std::pair<Lc, Lc>, 2>& claimed_pairs, const Lc& r,
                              const Lc& z) {
    const Field& f = syn.f();
    auto fold = [&](const std::pair<Lc, Lc>& p) {
        VarId c = syn.alloc("perm_fold", [&] {
            return f.add(syn.value(p.first), f.mul(syn.value(z), syn.value(p.second)));
        });
        // c = a + z*b
        syn.cs().enforce(z, p.second, syn.lc(c) - p.first);
        return syn.lc(c);
    };
    Lc c1 = fold(input_pairs[0]), c2 = fold(input_pairs[1]);
    Lc c3 = fold(claimed_pairs[0]), c4 = fold(claimed_pairs[1]);
    VarId lhs = syn.alloc("perm_lhs", [&] {
        return f.mul(f.sub(syn.value(r), syn.value(c1)), f.sub(syn.value(r), syn.value(c2)));
    });
    syn.cs().enforce(r - c1, r - c2, syn.lc(lhs));
    syn.cs().enforce(r - c3, r - c4, syn.lc(lhs));
}

/// result = 1 iff x == 0, via the inverse trick. 2 gates.
inline VarId is_zero_gadget(Synth& syn, const Lc& x) {
    const Field& f = syn.f();
    VarId z = syn.alloc("is_zero", [&] { return f.is_zero(syn.value(x)) ? f.one() : f.zero(); });
    VarId xinv = syn.alloc("inv_or_0", [&] {
        FieldElement v = syn.value(x);
        return f.is_zero(v) ? f.zero() : f.inv(v);
    });
    // x * xinv = 1 - z  and  x * z = 0
    syn.cs().enforce(x, syn.lc(xinv), Lc::constant_u64(f, 1) - syn.lc(z));
    syn.cs().enforce(x, syn.lc(z), syn.lc_zero());
    return z;
}

/// cond ? when_true : when_false, with cond boolean. 1 gate; the result is a
/// linear combination (when_false + cond*(when_true - when_false)).
inline Lc select(Synth& syn, const Lc& cond, const Lc& when_true, const Lc& when_false) {
    const Field& f = syn.f();
    VarId d = syn.alloc("select_d", [&] {
        return f.mul(syn.value(cond), f.sub(syn.value(when_true), syn.value(when_false)));
    });
    Lc diff = when_true;
    diff -= when_false;
    syn.cs().enforce(cond, diff, syn.lc(d));
    Lc out = when_false;
    out += syn.lc(d);
    return out;
}

/// Allocates a boolean witness with an explicit constraint.
inline VarId alloc_boolean(Synth& syn, const std::string& label, bool value) {
    const Field& f = syn.f();
    VarId b = syn.alloc(label, [&] { return value ? f.one() : f.zero(); });
    syn.cs().enforce(Lc::constant_u64(f, 1) - syn.lc(b), syn.lc(b), syn.lc_zero());
    return b;
}

}  // namespace zkti
