// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zkti/field.hpp"

namespace zkti {

enum class VarKind : std::uint8_t { constant_one, public_input, witness };

/// Dense, allocation-ordered variable handle. Index 0 is the constant-one
/// variable; public inputs come next, then witness variables.
struct VarId {
    std::uint32_t index = 0;
    VarKind kind = VarKind::constant_one;

    friend bool operator==(const VarId&, const VarId&) = default;
};

struct Term {
    std::uint32_t var;
    FieldElement coeff;
};

/// Builder for sparse linear combinations. Terms are kept sorted by variable
/// index with no duplicates and no zero coefficients, so the final form is
/// canonical for serialization.
class Lc {
public:
    Lc() = default;
    explicit Lc(const Field& f) : f_(&f) {}

    static Lc constant(const Field& f, FieldElement c) {
        Lc lc(f);
        lc.add_term(0, c);
        return lc;
    }
    static Lc constant_u64(const Field& f, std::uint64_t c) { return constant(f, f.from_u64(c)); }
    static Lc var(const Field& f, VarId v) {
        Lc lc(f);
        lc.add_term(v.index, f.one());
        return lc;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    const Field* field() const { return f_; }

    /// True when the combination is a plain constant (only the 1-var).
    std::optional<FieldElement> as_constant() const {
        if (terms_.empty()) return FieldElement{};
        if (terms_.size() == 1 && terms_[0].var == 0) return terms_[0].coeff;
        return std::nullopt;
    }

    /// Efficient k-way merge of scaled combinations (all term lists sorted).
    static Lc weighted_sum(const Field& f, std::span<const std::pair<const Lc*, FieldElement>> parts) {
        Lc out(f);
        std::vector<std::size_t> heads(parts.size(), 0);
        for (;;) {
            std::uint32_t next_var = UINT32_MAX;
            for (std::size_t k = 0; k < parts.size(); ++k) {
                const auto& terms = parts[k].first->terms_;
                if (heads[k] < terms.size()) next_var = std::min(next_var, terms[heads[k]].var);
            }
            if (next_var == UINT32_MAX) break;
            FieldElement acc{};
            for (std::size_t k = 0; k < parts.size(); ++k) {
                const auto& terms = parts[k].first->terms_;
                if (heads[k] < terms.size() && terms[heads[k]].var == next_var) {
                    acc = f.add(acc, f.mul(parts[k].second, terms[heads[k]].coeff));
                    ++heads[k];
                }
            }
            if (!f.is_zero(acc)) out.terms_.push_back(Term{next_var, acc});
        }
        return out;
    }

    Lc& add_term(std::uint32_t var, const FieldElement& c) {
        if (f_->is_zero(c)) return *this;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                                   [](const Term& t, std::uint32_t v) { return t.var < v; });
        if (it != terms_.end() && it->var == var) {
            it->coeff = f_->add(it->coeff, c);
            if (f_->is_zero(it->coeff)) terms_.erase(it);
        } else {
            terms_.insert(it, Term{var, c});
        }
        return *this;
    }

    Lc& operator+=(const Lc& o) {
        adopt(o);
        for (const Term& t : o.terms_) add_term(t.var, t.coeff);
        return *this;
    }
    Lc& operator-=(const Lc& o) {
        adopt(o);
        for (const Term& t : o.terms_) add_term(t.var, f_->neg(t.coeff));
        return *this;
    }
    Lc& scale(const FieldElement& c) {
        if (f_->is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (Term& t : terms_) t.coeff = f_->mul(t.coeff, c);
        return *this;
    }

    friend Lc operator+(Lc a, const Lc& b) { return a += b; }
    friend Lc operator-(Lc a, const Lc& b) { return a -= b; }

private:
    void adopt(const Lc& o) {
        if (!f_) f_ = o.f_;
    }

    const Field* f_ = nullptr;
    std::vector<Term> terms_;
};

struct SatResult {
    bool ok = true;
    std::uint32_t failing_index = 0;
    std::string context;
};

/// Full variable assignment: index 0 holds 1, then public inputs, then
/// witness values, matching VarId indices.
struct Witness {
    std::vector<FieldElement> assignment;

    const FieldElement& operator[](std::uint32_t i) const { return assignment[i]; }
    FieldElement& operator[](std::uint32_t i) { return assignment[i]; }
    std::size_t size() const { return assignment.size(); }
};

/// Sparse R1CS with a flat term pool. Single-writer while building; a
/// finished system is immutable and freely shareable.
class ConstraintSystem {
public:
    explicit ConstraintSystem(std::shared_ptr<const Field> field) : field_(std::move(field)) {}

    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }

    VarId alloc_public(const std::string& label = {}) {
        if (num_witness_ > 0)
            throw std::logic_error("public inputs must be allocated before witness variables");
        VarId v{1 + num_public_, VarKind::public_input};
        ++num_public_;
        if (!label.empty()) var_labels_.emplace(v.index, label);
        return v;
    }

    VarId alloc_witness(const std::string& label = {}) {
        VarId v{1 + num_public_ + num_witness_, VarKind::witness};
        ++num_witness_;
        if (!label.empty()) var_labels_.emplace(v.index, label);
        return v;
    }

    std::uint32_t num_public() const { return num_public_; }
    std::uint32_t num_witness() const { return num_witness_; }
    std::uint32_t num_vars() const { return 1 + num_public_ + num_witness_; }
    std::uint32_t num_constraints() const { return static_cast<std::uint32_t>(rows_.size()); }

    /// Appends one a*b = c constraint (one gate).
    void enforce(const Lc& a, const Lc& b, const Lc& c) {
        Row row;
        row.off[0] = push_lc(a);
        row.len[0] = static_cast<std::uint32_t>(a.terms().size());
        row.off[1] = push_lc(b);
        row.len[1] = static_cast<std::uint32_t>(b.terms().size());
        row.off[2] = push_lc(c);
        row.len[2] = static_cast<std::uint32_t>(c.terms().size());
        rows_.push_back(row);
    }

    /// Convenience for linear relations: lhs * 1 = rhs.
    void enforce_linear(const Lc& lhs, const Lc& rhs) {
        enforce(lhs, Lc::constant(*field_, field_->one()), rhs);
    }

    void begin_region(const std::string& name) { regions_.emplace_back(name, num_constraints()); }

    const std::vector<std::pair<std::string, std::uint32_t>>& regions() const { return regions_; }

    std::string region_of(std::uint32_t constraint_index) const {
        std::string name = "(none)";
        for (const auto& [n, start] : regions_) {
            if (start <= constraint_index) name = n;
            else break;
        }
        return name;
    }

    std::uint32_t constraints_in_region(const std::string& name) const {
        std::uint32_t total = 0;
        for (std::size_t i = 0; i < regions_.size(); ++i) {
            if (regions_[i].first != name) continue;
            std::uint32_t end = (i + 1 < regions_.size()) ? regions_[i + 1].second : num_constraints();
            total += end - regions_[i].second;
        }
        return total;
    }

    const std::map<std::uint32_t, std::string>& var_labels() const { return var_labels_; }

    /// Structural equality of the constraint matrices (labels and regions are
    /// not part of the shape).
    bool same_shape(const ConstraintSystem& o) const {
        if (num_public_ != o.num_public_ || num_witness_ != o.num_witness_) return false;
        if (rows_.size() != o.rows_.size() || pool_.size() != o.pool_.size()) return false;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (int k = 0; k < 3; ++k) {
                if (rows_[i].off[k] != o.rows_[i].off[k] || rows_[i].len[k] != o.rows_[i].len[k])
                    return false;
            }
        }
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (pool_[i].var != o.pool_[i].var || !(pool_[i].coeff == o.pool_[i].coeff)) return false;
        }
        return true;
    }

    std::span<const Term> lc_span(std::uint32_t row, int which) const {
        const Row& r = rows_[row];
        return {pool_.data() + r.off[which], r.len[which]};
    }

    FieldElement eval_lc(std::span<const Term> terms, const std::vector<FieldElement>& assignment) const {
        FieldElement acc{};
        for (const Term& t : terms) {
            if (t.var >= assignment.size()) throw std::out_of_range("LC references unassigned variable");
            acc = field_->add(acc, field_->mul(t.coeff, assignment[t.var]));
        }
        return acc;
    }

    /// Checks every constraint against the assignment. Deterministic; on
    /// failure reports the earliest failing row and its region/label context.
    SatResult is_satisfied(const std::vector<FieldElement>& public_inputs, const Witness& w) const {
        if (w.size() != num_vars())
            throw std::invalid_argument("witness length mismatch: expected " + std::to_string(num_vars()) +
                                        ", got " + std::to_string(w.size()));
        if (public_inputs.size() != num_public_)
            throw std::invalid_argument("public input count mismatch");
        if (!(w[0] == field_->one())) return {false, 0, "constant-one slot not 1"};
        for (std::uint32_t i = 0; i < num_public_; ++i) {
            if (!(w[1 + i] == public_inputs[i]))
                return {false, 0, "public input " + std::to_string(i) + " disagrees with witness"};
        }
        for (std::uint32_t r = 0; r < rows_.size(); ++r) {
            FieldElement av = eval_lc(lc_span(r, 0), w.assignment);
            FieldElement bv = eval_lc(lc_span(r, 1), w.assignment);
            FieldElement cv = eval_lc(lc_span(r, 2), w.assignment);
            if (!(field_->mul(av, bv) == cv)) {
                return {false, r, "constraint " + std::to_string(r) + " in region " + region_of(r)};
            }
        }
        return {};
    }

private:
    std::uint32_t push_lc(const Lc& lc) {
        auto off = static_cast<std::uint32_t>(pool_.size());
        for (const Term& t : lc.terms()) {
            if (t.var >= num_vars())
                throw std::invalid_argument("constraint references unallocated variable " + std::to_string(t.var));
            pool_.push_back(t);
        }
        return off;
    }

    struct Row {
        std::uint32_t off[3];
        std::uint32_t len[3];
    };

    std::shared_ptr<const Field> field_;
    std::uint32_t num_public_ = 0;
    std::uint32_t num_witness_ = 0;
    std::vector<Term> pool_;
    std::vector<Row> rows_;
    std::map<std::uint32_t, std::string> var_labels_;
    std::vector<std::pair<std::string, std::uint32_t>> regions_;
};

/// Synthesis context: a constraint system plus (on the prover side) the
/// assignment being built. Verifier-side synthesis passes no assignment and
/// emits the identical constraint shape.
class Synth {
public:
    Synth(ConstraintSystem& cs, Witness* w) : cs_(cs), w_(w) {}

    ConstraintSystem& cs() { return cs_; }
    const Field& f() const { return cs_.field(); }
    bool assigning() const { return w_ != nullptr; }

    /// In lenient mode out-of-range assignments are clipped instead of
    /// throwing, so adversarial witnesses can be carried through to an
    /// is_satisfied rejection.
    void set_lenient(bool on) { lenient_ = on; }
    bool lenient() const { return lenient_; }

    VarId alloc_public(const std::string& label, const FieldElement& value_if_assigning = {}) {
        VarId v = cs_.alloc_public(label);
        if (w_) {
            grow();
            (*w_)[v.index] = value_if_assigning;
        }
        return v;
    }

    /// Allocates a witness variable; `compute` is only invoked when an
    /// assignment is being built.
    template <typename F>
    VarId alloc(const std::string& label, F&& compute) {
        VarId v = cs_.alloc_witness(label);
        if (w_) {
            grow();
            (*w_)[v.index] = compute();
        }
        return v;
    }

    VarId alloc_unassigned(const std::string& label = {}) {
        VarId v = cs_.alloc_witness(label);
        if (w_) grow();
        return v;
    }

    void set(VarId v, const FieldElement& val) {
        if (w_) (*w_)[v.index] = val;
    }

    FieldElement value(const Lc& lc) const {
        if (!w_) throw std::logic_error("value() requires an assignment");
        FieldElement acc{};
        for (const Term& t : lc.terms()) acc = f().add(acc, f().mul(t.coeff, (*w_)[t.var]));
        return acc;
    }

    Lc lc(VarId v) const { return Lc::var(f(), v); }
    Lc lc_const(std::uint64_t c) const { return Lc::constant_u64(f(), c); }
    Lc lc_const_fe(const FieldElement& c) const { return Lc::constant(f(), c); }
    Lc lc_zero() const { return Lc(f()); }
    Lc lc_scaled(VarId v, const FieldElement& c) const {
        Lc l(f());
        l.add_term(v.index, c);
        return l;
    }

    Witness* witness() { return w_; }

private:
    void grow() {
        if (w_->assignment.size() < cs_.num_vars()) w_->assignment.resize(cs_.num_vars());
        if (!w_->assignment.empty()) w_->assignment[0] = f().one();
    }

    ConstraintSystem& cs_;
    Witness* w_;
    bool lenient_ = false;
};

}  // namespace zkti
