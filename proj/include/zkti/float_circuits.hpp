// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Circuit counterparts of the native float ops. Core circuits follow the
// FloatMul / FloatDiv / FloatAdd relations under the relative-error model;
// zero handling lives in wrapper selectors outside the cores, so the cores
// only ever see normalized nonzero operands.

#pragma once

#include "zkti/float_num.hpp"
#include "zkti/gadgets.hpp"

namespace zkti {

/// Nonzero normalized float in the circuit; e is carried shifted (E = e+128).
struct FloatVars {
    Lc s;
    Lc e;
};

/// Zero-aware float: z is a boolean LC, 1 meaning "value is zero". The
/// canonical zero assignment is (s, E) = (0, 128).
struct FloatVarsZ {
    Lc s;
    Lc e;
    Lc z;

    FloatVarsZ() = default;
    FloatVarsZ(Lc s_, Lc e_, Lc z_) : s(std::move(s_)), e(std::move(e_)), z(std::move(z_)) {}
    FloatVarsZ(const FloatVars& v, const Field& f) : s(v.s), e(v.e), z(Lc(f)) {}
};

/// Emits float-arithmetic circuits into a Synth. The challenge points feed
/// the permutation gadget inside additions.
class FloatOps {
public:
    FloatOps(Synth& syn, Precision pr, Lc challenge_r, Lc challenge_z)
        : syn_(syn), pr_(pr), r_(std::move(challenge_r)), z_(std::move(challenge_z)) {}

    Synth& synth() { return syn_; }
    const Precision& precision() const { return pr_; }

    /// Constant (compile-time) float as constant LCs.
    FloatVars constant(const Float& v) const;
    FloatVarsZ constant_z(const Float& v) const;

    /// Fresh witness float with normalization and exponent range checks.
    /// `value` is used only when assigning.
    FloatVars alloc_checked(const std::string& label, const Float& value);

    /// Core circuits; operands must be nonzero and normalized. The prover's
    /// claimed result and auxiliary values default to the native computation;
    /// overrides let tests carry adversarial witnesses into the constraints.
    FloatVars mul(const FloatVars& a, const FloatVars& b, const Float* claimed = nullptr,
                  const FloatAux* aux_override = nullptr);
    FloatVars div(const FloatVars& a, const FloatVars& b, const Float* claimed = nullptr,
                  const FloatAux* aux_override = nullptr);
    FloatVars add(const FloatVars& a, const FloatVars& b, const Float* claimed = nullptr,
                  const FloatAux* aux_override = nullptr);

    /// Zero-aware wrappers (selector substitution around the cores).
    FloatVarsZ mul_z(const FloatVarsZ& a, const FloatVarsZ& b);
    FloatVarsZ add_z(const FloatVarsZ& a, const FloatVarsZ& b);
    FloatVarsZ div_z(const FloatVarsZ& a, const FloatVarsZ& b);  // divisor pinned nonzero

    /// a <= b as a boolean LC (lexicographic on (e, s)).
    Lc leq(const FloatVars& a, const FloatVars& b);
    /// Zero-aware a <= b: zero compares below every nonzero value.
    Lc leq_z(const FloatVarsZ& a, const FloatVarsZ& b);

    /// Pins the value of `v` to equal `expect` exactly (2 linear gates).
    void enforce_equal(const FloatVars& v, const FloatVars& expect);

    /// Reads back the assigned value (prover side only).
    Float value_of(const FloatVars& v) const;
    Float value_of(const FloatVarsZ& v) const;

private:
    FloatVars unit_float() const;  // 1.0 at the configured precision
    std::pair<FloatVars, Float> substitute_zero(const FloatVarsZ& a);

    Synth& syn_;
    Precision pr_;
    Lc r_, z_;
};

}  // namespace zkti
