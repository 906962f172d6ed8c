// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#include "zkti/float_circuits.hpp"

namespace zkti {

namespace {

Lc lc_i64(const Field& f, std::int64_t v) { return Lc::constant(f, f.from_i64(v)); }

}  // namespace

FloatVars FloatOps::constant(const Float& v) const {
    if (v.is_zero) throw std::invalid_argument("core float constant cannot be zero");
    const Field& f = syn_.f();
    return {Lc::constant(f, f.from_u128(v.s)), Lc::constant_u64(f, static_cast<std::uint64_t>(v.e + kExpShift))};
}

FloatVarsZ FloatOps::constant_z(const Float& v) const {
    const Field& f = syn_.f();
    if (v.is_zero) {
        return {Lc(f), Lc::constant_u64(f, kExpShift), Lc::constant_u64(f, 1)};
    }
    FloatVars c = constant(v);
    return {c.s, c.e, Lc(f)};
}

FloatVars FloatOps::unit_float() const {
    return constant(Float::from_parts(pr_.sig_min(), -static_cast<int>(pr_.w - 1), pr_.w));
}

FloatVars FloatOps::alloc_checked(const std::string& label, const Float& value) {
    const Field& f = syn_.f();
    VarId s = syn_.alloc(label + ".s", [&] { return f.from_u128(value.s); });
    VarId e = syn_.alloc(label + ".e", [&] { return f.from_u64(static_cast<std::uint64_t>(value.e + kExpShift)); });
    BitVector sbits = bit_decompose(syn_, syn_.lc(s), pr_.w);
    syn_.cs().enforce_linear(syn_.lc(sbits.bits[pr_.w - 1]), syn_.lc_const(1));
    bit_decompose(syn_, syn_.lc(e), 8);
    return {syn_.lc(s), syn_.lc(e)};
}

Float FloatOps::value_of(const FloatVars& v) const {
    FieldElement sv = syn_.value(v.s);
    FieldElement ev = syn_.value(v.e);
    try {
        int e = static_cast<int>(ev.v[0]) - kExpShift;
        if (limb::bit_length(ev.v) > 9) throw std::range_error("exponent value out of encoding range");
        return Float::from_parts(limb::to_u128(sv.v), e, pr_.w);
    } catch (const std::exception&) {
        // adversarial values under lenient assignment: substitute 1.0 so the
        // assignment can proceed to an is_satisfied rejection
        if (syn_.lenient())
            return Float::from_parts(pr_.sig_min(), -static_cast<int>(pr_.w - 1), pr_.w);
        throw;
    }
}

Float FloatOps::value_of(const FloatVarsZ& v) const {
    if (!v.z.empty() && syn_.value(v.z) == syn_.f().one()) return Float::zero(pr_.w);
    return value_of(FloatVars{v.s, v.e});
}

FloatVars FloatOps::mul(const FloatVars& a, const FloatVars& b, const Float* claimed,
                        const FloatAux* aux_override) {
    const Field& f = syn_.f();
    const unsigned w = pr_.w;

    Float cv;
    FloatAux aux;
    if (syn_.assigning()) {
        std::tie(cv, aux) = float_mul_native(value_of(a), value_of(b));
        if (claimed) cv = *claimed;
        if (aux_override) aux = *aux_override;
    }

    VarId theta = syn_.alloc("mul.theta", [&] { return f.from_u64(aux.theta); });
    // theta in {w-1, w}
    syn_.cs().enforce(syn_.lc(theta) - lc_i64(f, w), syn_.lc(theta) - lc_i64(f, w - 1), syn_.lc_zero());
    // mid = 2^theta by interpolation over the two admissible values
    Lc mid = syn_.lc_scaled(theta, f.pow2(w - 1));
    mid += Lc::constant(f, f.mul(f.pow2(w - 1), f.from_i64(2 - static_cast<std::int64_t>(w))));

    VarId x = syn_.alloc("mul.x", [&] { return f.mul(syn_.value(a.s), syn_.value(b.s)); });
    syn_.cs().enforce(a.s, b.s, syn_.lc(x));
    VarId sc = syn_.alloc("mul.s_c", [&] { return f.from_u128(cv.s); });
    VarId y = syn_.alloc("mul.y", [&] { return f.mul(syn_.value(syn_.lc(sc)), syn_.value(mid)); });
    syn_.cs().enforce(syn_.lc(sc), mid, syn_.lc(y));

    // z = delta^-1 * (x - y) must stay below x
    Lc zres = syn_.lc(x) - syn_.lc(y);
    zres.scale(f.from_u128(pr_.delta_inv()));
    VarId ok = compare_leq(syn_, zres, syn_.lc(x), 2 * w);
    syn_.cs().enforce_linear(syn_.lc(ok), syn_.lc_const(1));

    BitVector scbits = bit_decompose(syn_, syn_.lc(sc), w);
    syn_.cs().enforce_linear(syn_.lc(scbits.bits[w - 1]), syn_.lc_const(1));

    Lc ec = a.e + b.e + syn_.lc(theta) - Lc::constant_u64(f, kExpShift);
    return {syn_.lc(sc), ec};
}

FloatVars FloatOps::div(const FloatVars& a, const FloatVars& b, const Float* claimed,
                        const FloatAux* aux_override) {
    const Field& f = syn_.f();
    const unsigned w = pr_.w;

    Float cv;
    FloatAux aux;
    if (syn_.assigning()) {
        std::tie(cv, aux) = float_div_native(value_of(a), value_of(b));
        if (claimed) cv = *claimed;
        if (aux_override) aux = *aux_override;
    }

    VarId theta = syn_.alloc("div.theta", [&] { return f.from_u64(aux.theta); });
    syn_.cs().enforce(syn_.lc(theta) - lc_i64(f, w), syn_.lc(theta) - lc_i64(f, w - 1), syn_.lc_zero());
    Lc mid = syn_.lc_scaled(theta, f.pow2(w - 1));
    mid += Lc::constant(f, f.mul(f.pow2(w - 1), f.from_i64(2 - static_cast<std::int64_t>(w))));

    VarId x = syn_.alloc("div.x", [&] { return f.mul(syn_.value(a.s), syn_.value(mid)); });
    syn_.cs().enforce(a.s, mid, syn_.lc(x));
    VarId sc = syn_.alloc("div.s_c", [&] { return f.from_u128(cv.s); });
    VarId y = syn_.alloc("div.y", [&] { return f.mul(syn_.value(syn_.lc(sc)), syn_.value(b.s)); });
    syn_.cs().enforce(syn_.lc(sc), b.s, syn_.lc(y));

    Lc zres = syn_.lc(x) - syn_.lc(y);
    zres.scale(f.from_u128(pr_.delta_inv()));
    VarId ok = compare_leq(syn_, zres, syn_.lc(x), 2 * w);
    syn_.cs().enforce_linear(syn_.lc(ok), syn_.lc_const(1));

    BitVector scbits = bit_decompose(syn_, syn_.lc(sc), w);
    syn_.cs().enforce_linear(syn_.lc(scbits.bits[w - 1]), syn_.lc_const(1));

    // e_c + theta = e_a - e_b
    Lc ec = a.e - b.e - syn_.lc(theta) + Lc::constant_u64(f, kExpShift);
    return {syn_.lc(sc), ec};
}

FloatVars FloatOps::add(const FloatVars& a, const FloatVars& b, const Float* claimed,
                        const FloatAux* aux_override) {
    const Field& f = syn_.f();
    const unsigned w = pr_.w;

    Float cv, av, bv;
    FloatAux aux;
    if (syn_.assigning()) {
        av = value_of(a);
        bv = value_of(b);
        std::tie(cv, aux) = float_add_native(av, bv);
        if (claimed) cv = *claimed;
        if (aux_override) aux = *aux_override;
    }
    const Float& big = aux.swapped ? bv : av;
    const Float& small = aux.swapped ? av : bv;

    // Prover-supplied permuted operands with e_big >= e_small, tied to the
    // inputs by the pairwise permutation check at (r, z).
    VarId e_big = syn_.alloc("add.e_big", [&] { return f.from_u64(static_cast<std::uint64_t>(big.e + kExpShift)); });
    VarId s_big = syn_.alloc("add.s_big", [&] { return f.from_u128(big.s); });
    VarId e_small =
        syn_.alloc("add.e_small", [&] { return f.from_u64(static_cast<std::uint64_t>(small.e + kExpShift)); });
    VarId s_small = syn_.alloc("add.s_small", [&] { return f.from_u128(small.s); });
    permutation_check(syn_, {std::pair{a.e, a.s}, std::pair{b.e, b.s}},
                      {std::pair{syn_.lc(e_big), syn_.lc(s_big)}, std::pair{syn_.lc(e_small), syn_.lc(s_small)}},
                      r_, z_);
    enforce_leq(syn_, syn_.lc(e_small), syn_.lc(e_big), 8);

    // Cutoff selector: lambda > w drops the small operand; the core path then
    // degenerates to big+big and is selected away below.
    Lc lambda = syn_.lc(e_big) - syn_.lc(e_small);
    VarId is_cut = compare_leq(syn_, lc_i64(f, w + 1), lambda, 9);

    Lc s_sub = select(syn_, syn_.lc(is_cut), syn_.lc(s_big), syn_.lc(s_small));
    Lc e_sub = select(syn_, syn_.lc(is_cut), syn_.lc(e_big), syn_.lc(e_small));
    Lc lambda_eff = syn_.lc(e_big) - e_sub;

    VarId theta = syn_.alloc("add.theta", [&] { return f.from_u64(aux.theta); });
    // theta in {lambda_eff, lambda_eff + 1}
    syn_.cs().enforce(syn_.lc(theta) - lambda_eff, syn_.lc(theta) - lambda_eff - syn_.lc_const(1),
                      syn_.lc_zero());

    VarId mid_prime = syn_.alloc("add.mid_prime", [&] { return f.from_u128(aux.mid_prime(w)); });
    exponential_check(syn_, lambda_eff, syn_.lc(mid_prime), 6);

    // mid = 2^theta = mid' * (theta - lambda_eff + 1)
    VarId mid = syn_.alloc("add.mid", [&] { return f.from_u128(aux.mid()); });
    syn_.cs().enforce(syn_.lc(mid_prime), syn_.lc(theta) - lambda_eff + syn_.lc_const(1), syn_.lc(mid));

    VarId tx = syn_.alloc("add.s_big_shifted",
                          [&] { return f.mul(syn_.value(syn_.lc(s_big)), syn_.value(syn_.lc(mid_prime))); });
    syn_.cs().enforce(syn_.lc(s_big), syn_.lc(mid_prime), syn_.lc(tx));
    Lc x = syn_.lc(tx) + s_sub;

    VarId s_core = syn_.alloc("add.s_core", [&] { return f.from_u128(aux.is_cutoff(w) ? big.s : cv.s); });
    VarId y = syn_.alloc("add.y", [&] { return f.mul(syn_.value(syn_.lc(s_core)), syn_.value(syn_.lc(mid))); });
    syn_.cs().enforce(syn_.lc(s_core), syn_.lc(mid), syn_.lc(y));

    Lc zres = x - syn_.lc(y);
    zres.scale(f.from_u128(pr_.delta_inv()));
    VarId ok = compare_leq(syn_, zres, x, 2 * w + 1);
    syn_.cs().enforce_linear(syn_.lc(ok), syn_.lc_const(1));

    BitVector scbits = bit_decompose(syn_, syn_.lc(s_core), w);
    syn_.cs().enforce_linear(syn_.lc(scbits.bits[w - 1]), syn_.lc_const(1));

    Lc e_core = e_sub + syn_.lc(theta);
    Lc s_out = select(syn_, syn_.lc(is_cut), syn_.lc(s_big), syn_.lc(s_core));
    Lc e_out = select(syn_, syn_.lc(is_cut), syn_.lc(e_big), e_core);
    return {s_out, e_out};
}

std::pair<FloatVars, Float> FloatOps::substitute_zero(const FloatVarsZ& a) {
    Float val;
    if (syn_.assigning()) {
        val = value_of(a);
        if (val.is_zero) val = Float::from_parts(pr_.sig_min(), -static_cast<int>(pr_.w - 1), pr_.w);
    }
    if (a.z.empty()) return {FloatVars{a.s, a.e}, val};
    FloatVars one = unit_float();
    Lc s = select(syn_, a.z, one.s, a.s);
    Lc e = select(syn_, a.z, one.e, a.e);
    return {FloatVars{s, e}, val};
}

FloatVarsZ FloatOps::mul_z(const FloatVarsZ& a, const FloatVarsZ& b) {
    const Field& f = syn_.f();
    if (a.z.empty() && b.z.empty()) {
        return {mul(FloatVars{a.s, a.e}, FloatVars{b.s, b.e}), f};
    }
    Lc za = a.z.empty() ? Lc(f) : a.z;
    Lc zb = b.z.empty() ? Lc(f) : b.z;
    VarId u = syn_.alloc("mulz.u", [&] { return f.mul(syn_.value(za), syn_.value(zb)); });
    syn_.cs().enforce(za, zb, syn_.lc(u));
    Lc z_out = za + zb - syn_.lc(u);

    FloatVars core = mul(substitute_zero(a).first, substitute_zero(b).first);
    // zero out the selected-away result; exponent falls back to the canonical 128
    VarId ds = syn_.alloc("mulz.ds", [&] { return f.mul(syn_.value(z_out), syn_.value(core.s)); });
    syn_.cs().enforce(z_out, core.s, syn_.lc(ds));
    VarId de = syn_.alloc("mulz.de", [&] {
        return f.mul(syn_.value(z_out), f.sub(syn_.value(core.e), f.from_u64(kExpShift)));
    });
    syn_.cs().enforce(z_out, core.e - Lc::constant_u64(f, kExpShift), syn_.lc(de));
    return {core.s - syn_.lc(ds), core.e - syn_.lc(de), z_out};
}

FloatVarsZ FloatOps::add_z(const FloatVarsZ& a, const FloatVarsZ& b) {
    const Field& f = syn_.f();
    if (a.z.empty() && b.z.empty()) {
        return {add(FloatVars{a.s, a.e}, FloatVars{b.s, b.e}), f};
    }
    Lc za = a.z.empty() ? Lc(f) : a.z;
    Lc zb = b.z.empty() ? Lc(f) : b.z;
    VarId u = syn_.alloc("addz.u", [&] { return f.mul(syn_.value(za), syn_.value(zb)); });
    syn_.cs().enforce(za, zb, syn_.lc(u));

    FloatVars core = add(substitute_zero(a).first, substitute_zero(b).first);

    // weights: both zero -> 0, a zero -> b, b zero -> a, else the core result
    Lc w_core = Lc::constant_u64(f, 1) - za - zb + syn_.lc(u);
    Lc w_b = za - syn_.lc(u);
    Lc w_a = zb - syn_.lc(u);

    auto blend = [&](const Lc& core_part, const Lc& a_part, const Lc& b_part, const char* tag) {
        VarId t1 = syn_.alloc(std::string("addz.") + tag + "1",
                              [&] { return f.mul(syn_.value(core_part), syn_.value(w_core)); });
        syn_.cs().enforce(core_part, w_core, syn_.lc(t1));
        VarId t2 = syn_.alloc(std::string("addz.") + tag + "2",
                              [&] { return f.mul(syn_.value(b_part), syn_.value(w_b)); });
        syn_.cs().enforce(b_part, w_b, syn_.lc(t2));
        VarId t3 = syn_.alloc(std::string("addz.") + tag + "3",
                              [&] { return f.mul(syn_.value(a_part), syn_.value(w_a)); });
        syn_.cs().enforce(a_part, w_a, syn_.lc(t3));
        return syn_.lc(t1) + syn_.lc(t2) + syn_.lc(t3);
    };
    Lc s_out = blend(core.s, a.s, b.s, "s");
    Lc e_out = blend(core.e, a.e, b.e, "e");
    e_out += syn_.lc_scaled(u, f.from_u64(kExpShift));
    return {s_out, e_out, syn_.lc(u)};
}

FloatVarsZ FloatOps::div_z(const FloatVarsZ& a, const FloatVarsZ& b) {
    const Field& f = syn_.f();
    if (!b.z.empty()) syn_.cs().enforce_linear(b.z, syn_.lc_zero());
    if (a.z.empty()) {
        return {div(FloatVars{a.s, a.e}, FloatVars{b.s, b.e}), f};
    }
    FloatVars core = div(substitute_zero(a).first, FloatVars{b.s, b.e});
    VarId ds = syn_.alloc("divz.ds", [&] { return f.mul(syn_.value(a.z), syn_.value(core.s)); });
    syn_.cs().enforce(a.z, core.s, syn_.lc(ds));
    VarId de = syn_.alloc("divz.de", [&] {
        return f.mul(syn_.value(a.z), f.sub(syn_.value(core.e), f.from_u64(kExpShift)));
    });
    syn_.cs().enforce(a.z, core.e - Lc::constant_u64(f, kExpShift), syn_.lc(de));
    return {core.s - syn_.lc(ds), core.e - syn_.lc(de), a.z};
}

Lc FloatOps::leq(const FloatVars& a, const FloatVars& b) {
    const Field& f = syn_.f();
    // strictly smaller exponent, or equal exponents and s_a <= s_b
    VarId lt_e = compare_leq(syn_, a.e + Lc::constant_u64(f, 1), b.e, 8);
    VarId eq_e = is_zero_gadget(syn_, a.e - b.e);
    VarId le_s = compare_leq(syn_, a.s, b.s, pr_.w);
    VarId t = syn_.alloc("leq.t", [&] { return f.mul(syn_.value(syn_.lc(eq_e)), syn_.value(syn_.lc(le_s))); });
    syn_.cs().enforce(syn_.lc(eq_e), syn_.lc(le_s), syn_.lc(t));
    return syn_.lc(lt_e) + syn_.lc(t);
}

Lc FloatOps::leq_z(const FloatVarsZ& a, const FloatVarsZ& b) {
    const Field& f = syn_.f();
    Lc core = leq(substitute_zero(a).first, substitute_zero(b).first);
    Lc za = a.z.empty() ? Lc(f) : a.z;
    Lc zb = b.z.empty() ? Lc(f) : b.z;
    VarId nz = syn_.alloc("leqz.nz", [&] {
        return f.mul(f.sub(f.one(), syn_.value(za)), f.sub(f.one(), syn_.value(zb)));
    });
    syn_.cs().enforce(Lc::constant_u64(f, 1) - za, Lc::constant_u64(f, 1) - zb, syn_.lc(nz));
    VarId t = syn_.alloc("leqz.t", [&] { return f.mul(syn_.value(syn_.lc(nz)), syn_.value(core)); });
    syn_.cs().enforce(syn_.lc(nz), core, syn_.lc(t));
    return za + syn_.lc(t);
}

void FloatOps::enforce_equal(const FloatVars& v, const FloatVars& expect) {
    syn_.cs().enforce_linear(v.s, expect.s);
    syn_.cs().enforce_linear(v.e, expect.e);
}

}  // namespace zkti
