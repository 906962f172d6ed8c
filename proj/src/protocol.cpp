// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#include "zkti/protocol.hpp"

#include <algorithm>

namespace zkti {

namespace {

unsigned exp_check_bits(unsigned max_value) {
    unsigned bits = 6;
    while ((1u << bits) <= max_value) ++bits;
    return bits;
}

unsigned int_bit_width(std::uint64_t max_value) {
    unsigned b = 1;
    while ((std::uint64_t{1} << b) <= max_value) ++b;
    return b;
}

}  // namespace

PublicParams setup(const SetupConfig& cfg) {
    PublicParams pp;
    pp.field = Field::default_field_shared();
    pp.precision = Precision(cfg.w);  // throws outside [4, 80]
    if (!pp.field->supports_precision(cfg.w))
        throw std::invalid_argument("precision w=" + std::to_string(cfg.w) +
                                    " violates p > 2^(3w+1) for the configured field");
    pp.sponge = &SpongeParams::bn254_t5();
    pp.prior = cfg.prior;
    if (cfg.backend != "mock" && cfg.backend != "external-export")
        throw std::invalid_argument("unknown backend '" + cfg.backend + "'");
    pp.backend = cfg.backend;
    return pp;
}

std::vector<FieldElement> worker_message(const Field& f, const AnswerMatrix& v, std::uint32_t worker) {
    std::vector<FieldElement> msg;
    msg.reserve(v.of_worker(worker).size() * 2);
    for (auto [task, answer] : v.of_worker(worker)) {
        msg.push_back(f.from_u64(task));
        msg.push_back(f.from_u64(answer));
    }
    return msg;
}

std::vector<FieldElement> truth_message(const Field& f, const std::vector<std::uint32_t>& labels) {
    std::vector<FieldElement> msg;
    msg.reserve(labels.size() * 2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        msg.push_back(f.from_u64(i));
        msg.push_back(f.from_u64(labels[i]));
    }
    return msg;
}

Commitment commit_answers(const PublicParams& pp, const AnswerMatrix& v, std::uint32_t worker,
                          const FieldElement& randomness) {
    return commit(*pp.sponge, worker_message(*pp.field, v, worker), randomness);
}

Commitment commit_truth(const PublicParams& pp, const std::vector<std::uint32_t>& labels,
                        const FieldElement& randomness) {
    return commit(*pp.sponge, truth_message(*pp.field, labels), randomness);
}

CommitmentSet commit_all(const PublicParams& pp, const AnswerMatrix& v,
                         const std::vector<std::uint32_t>& labels, std::uint64_t randomness_seed) {
    CommitmentSet out;
    SpongePrg prg(*pp.sponge, randomness_seed);
    out.worker_randomness.resize(v.workers());
    out.workers.resize(v.workers());
    for (std::uint32_t j = 0; j < v.workers(); ++j) {
        out.worker_randomness[j] = prg.next();
        out.workers[j] = commit_answers(pp, v, j, out.worker_randomness[j]);
    }
    out.truth_randomness = prg.next();
    out.truth = commit_truth(pp, labels, out.truth_randomness);
    return out;
}

CircuitLayout CircuitLayout::plan(Algorithm alg, std::uint32_t n, std::uint32_t m, std::uint32_t l,
                                  unsigned w) {
    CircuitLayout lay;
    lay.alg = alg;
    lay.n = n;
    lay.m = m;
    lay.l = l;
    lay.w = w;
    lay.commitments_offset = 0;
    lay.q_out_offset = m + 1;
    lay.q_out_count = alg == Algorithm::mv ? 0 : 2 * m;
    lay.eta_offset = lay.q_out_offset + lay.q_out_count;
    lay.challenge_offset = lay.eta_offset + 4;
    lay.total_public = lay.challenge_offset + 2;
    return lay;
}

FieldElement CircuitLayout::digest(const SpongeParams& sponge) const {
    const Field& f = *sponge.field;
    std::vector<FieldElement> desc{
        f.from_u64(0x7a6b7469),  // "zkti" tag
        f.from_u64(static_cast<std::uint64_t>(alg)),
        f.from_u64(n),
        f.from_u64(m),
        f.from_u64(l),
        f.from_u64(w),
        f.from_u64(q_out_offset),
        f.from_u64(q_out_count),
        f.from_u64(eta_offset),
        f.from_u64(challenge_offset),
        f.from_u64(total_public),
    };
    return sponge_hash(sponge, desc);
}

Challenges derive_challenges(const PublicParams& pp, const CircuitLayout& layout,
                             const CommitmentSet& coms) {
    std::vector<FieldElement> transcript;
    transcript.reserve(coms.workers.size() + 2);
    for (const Commitment& c : coms.workers) transcript.push_back(c.digest);
    transcript.push_back(coms.truth.digest);
    transcript.push_back(layout.digest(*pp.sponge));
    std::vector<FieldElement> out = sponge_hash_many(*pp.sponge, transcript, 2);
    return Challenges{out[0], out[1]};
}

namespace {

/// Everything one synthesis pass needs to carry around.
struct Ctx {
    const PublicParams& pp;
    Synth& syn;
    FloatOps& ops;
    const CircuitLayout& lay;
    const ProverInputs* assign;

    const Field& f() const { return syn.f(); }
    unsigned w() const { return pp.precision.w; }
};

/// One answer slot as circuit structures: one-hot choice bits plus derived
/// value/float views.
struct AnswerSlot {
    std::vector<Lc> onehot;  // l combinations summing to 1
    Lc value;                // sum k * onehot_k
};

AnswerSlot make_onehot(Ctx& ctx, std::uint32_t l, std::uint32_t assigned_value, const std::string& label) {
    const Field& f = ctx.f();
    AnswerSlot slot;
    slot.onehot.resize(l);
    slot.value = Lc(f);
    if (l == 2) {
        VarId b = alloc_boolean(ctx.syn, label, assigned_value == 1);
        slot.onehot[0] = Lc::constant_u64(f, 1) - ctx.syn.lc(b);
        slot.onehot[1] = ctx.syn.lc(b);
        slot.value = ctx.syn.lc(b);
        return slot;
    }
    Lc sum(f);
    for (std::uint32_t k = 0; k < l; ++k) {
        VarId b = alloc_boolean(ctx.syn, label, assigned_value == k);
        slot.onehot[k] = ctx.syn.lc(b);
        sum += ctx.syn.lc(b);
        Lc scaled = ctx.syn.lc_scaled(b, f.from_u64(k));
        slot.value += scaled;
    }
    ctx.syn.cs().enforce_linear(sum, ctx.syn.lc_const(1));
    return slot;
}

/// Zero-aware float view of an answer value (choice 0 is the zero float).
FloatVarsZ answer_float(Ctx& ctx, const AnswerSlot& slot) {
    const Field& f = ctx.f();
    FloatVarsZ out;
    out.s = Lc(f);
    out.e = Lc(f);
    out.z = slot.onehot[0];
    Lc e128 = slot.onehot[0];
    e128.scale(f.from_u64(kExpShift));
    out.e += e128;
    for (std::uint32_t k = 1; k < slot.onehot.size(); ++k) {
        Float enc = Float::encode_int(k, ctx.w());
        Lc sk = slot.onehot[k];
        sk.scale(f.from_u128(enc.s));
        out.s += sk;
        Lc ek = slot.onehot[k];
        ek.scale(f.from_u64(static_cast<std::uint64_t>(enc.e + kExpShift)));
        out.e += ek;
    }
    return out;
}

/// Converts a small nonnegative integer combination into a zero-aware float
/// under floor semantics: s * 2^b + rem = x * 2^a with rem < 2^b.
FloatVarsZ int_to_float(Ctx& ctx, const Lc& x, std::uint64_t max_value, const std::string& label) {
    const Field& f = ctx.f();
    Synth& syn = ctx.syn;
    const unsigned w = ctx.w();

    Float native;
    std::uint64_t a_val = 0, b_val = 0, rem_val = 0;
    if (syn.assigning()) {
        FieldElement xv = syn.value(x);
        std::uint64_t xi = xv.v[0];
        native = Float::from_int_floor(xi, w);
        if (!native.is_zero) {
            if (native.e >= 0) {
                b_val = static_cast<std::uint64_t>(native.e);
                rem_val = xi - static_cast<std::uint64_t>(native.s << native.e);
            } else {
                a_val = static_cast<std::uint64_t>(-native.e);
            }
        }
    }

    VarId z = is_zero_gadget(syn, x);
    VarId s = syn.alloc(label + ".s", [&] { return f.from_u128(native.s); });
    VarId a = syn.alloc(label + ".a", [&] { return f.from_u64(a_val); });
    VarId mid_a = syn.alloc(label + ".mid_a", [&] { return f.pow2(static_cast<unsigned>(a_val)); });
    exponential_check(syn, syn.lc(a), syn.lc(mid_a), exp_check_bits(w));
    VarId t1 = syn.alloc(label + ".t1", [&] { return f.mul(syn.value(x), syn.value(syn.lc(mid_a))); });
    syn.cs().enforce(x, syn.lc(mid_a), syn.lc(t1));

    const unsigned max_bits = int_bit_width(max_value);
    const unsigned b_max = max_bits > (w - 1) ? max_bits - (w - 1) : 0;
    Lc e_lc = Lc::constant_u64(f, kExpShift) - syn.lc(a);
    if (b_max == 0) {
        // the value always fits w-1 bits; s = x * 2^a exactly
        syn.cs().enforce_linear(syn.lc(t1), syn.lc(s));
    } else {
        VarId b = syn.alloc(label + ".b", [&] { return f.from_u64(b_val); });
        VarId mid_b = syn.alloc(label + ".mid_b", [&] { return f.pow2(static_cast<unsigned>(b_val)); });
        exponential_check(syn, syn.lc(b), syn.lc(mid_b), exp_check_bits(b_max));
        VarId rem = syn.alloc(label + ".rem", [&] { return f.from_u64(rem_val); });
        bit_decompose(syn, syn.lc(rem), b_max);
        VarId ok = compare_leq(syn, syn.lc(rem) + syn.lc_const(1), syn.lc(mid_b), b_max + 1);
        syn.cs().enforce_linear(syn.lc(ok), syn.lc_const(1));
        // s * 2^b = x * 2^a - rem
        syn.cs().enforce(syn.lc(s), syn.lc(mid_b), syn.lc(t1) - syn.lc(rem));
        e_lc += syn.lc(b);
    }

    BitVector sbits = bit_decompose(syn, syn.lc(s), w);
    // normalized unless the value is zero
    syn.cs().enforce_linear(syn.lc(sbits.bits[w - 1]), Lc::constant_u64(f, 1) - syn.lc(z));

    FloatVarsZ out;
    out.s = syn.lc(s);
    out.z = syn.lc(z);
    // canonical zero keeps E at 128 (a = b = 0 in that assignment)
    out.e = e_lc;
    return out;
}

struct PublicVars {
    std::vector<VarId> commitments;  // m + 1
    std::vector<VarId> q_out;        // 2m or empty
    VarId q0_s, q0_e, smooth_s, smooth_e;
    VarId chal_r, chal_z;
};

PublicVars alloc_publics(Synth& syn, const PublicParams& pp, const CircuitLayout& lay,
                         const ProverInputs* assign, const Challenges& rz) {
    const Field& f = syn.f();
    const unsigned w = pp.precision.w;
    PublicVars pub;
    const std::uint32_t m = lay.m;
    for (std::uint32_t j = 0; j <= m; ++j) {
        FieldElement val{};
        if (assign) val = j < m ? assign->commitments->workers[j].digest : assign->commitments->truth.digest;
        pub.commitments.push_back(syn.alloc_public(j < m ? "com_worker" : "com_truth", val));
    }
    if (lay.q_out_count > 0) {
        for (std::uint32_t j = 0; j < m; ++j) {
            Float qv;
            if (assign) {
                qv = lay.alg == Algorithm::crh ? assign->quality->ratio[j] : assign->quality->weight[j];
            }
            FieldElement sv = qv.is_zero ? FieldElement{} : f.from_u128(qv.s);
            FieldElement ev = qv.is_zero ? f.from_u64(kExpShift)
                                         : f.from_u64(static_cast<std::uint64_t>(qv.e + kExpShift));
            pub.q_out.push_back(syn.alloc_public("q_out.s", sv));
            pub.q_out.push_back(syn.alloc_public("q_out.e", ev));
        }
    }
    Float q0 = pp.prior.q0_float(w);
    Float smooth = pp.prior.smooth_float(w);
    pub.q0_s = syn.alloc_public("eta.q0_s", f.from_u128(q0.s));
    pub.q0_e = syn.alloc_public("eta.q0_e", f.from_u64(static_cast<std::uint64_t>(q0.e + kExpShift)));
    pub.smooth_s = syn.alloc_public("eta.smooth_s", f.from_u128(smooth.s));
    pub.smooth_e =
        syn.alloc_public("eta.smooth_e", f.from_u64(static_cast<std::uint64_t>(smooth.e + kExpShift)));
    pub.chal_r = syn.alloc_public("challenge.r", rz.r);
    pub.chal_z = syn.alloc_public("challenge.z", rz.z);
    return pub;
}

}  // namespace

SynthesisResult synth_iteration(const PublicParams& pp, Algorithm alg, std::uint32_t n, std::uint32_t m,
                                std::uint32_t l, const Challenges& rz, const ProverInputs* assign,
                                Witness* witness_out) {
    if (n == 0 || m == 0 || l < 2) throw std::invalid_argument("bad circuit dimensions");
    if (assign && !witness_out) throw std::invalid_argument("assignment requires a witness sink");

    const Field& f = *pp.field;
    const unsigned w = pp.precision.w;
    CircuitLayout lay = CircuitLayout::plan(alg, n, m, l, w);

    auto cs = std::make_shared<ConstraintSystem>(pp.field);
    Synth syn(*cs, assign ? witness_out : nullptr);
    PublicVars pub = alloc_publics(syn, pp, lay, assign, rz);
    FloatOps ops(syn, pp.precision, syn.lc(pub.chal_r), syn.lc(pub.chal_z));
    Ctx c{pp, syn, ops, lay, assign};

    // ---- region: inputs (answer one-hots and truth labels) ----
    cs->begin_region("inputs");
    std::vector<std::vector<AnswerSlot>> answers(n);  // [task][worker-dense]
    for (std::uint32_t i = 0; i < n; ++i) {
        answers[i].reserve(m);
        for (std::uint32_t j = 0; j < m; ++j) {
            std::uint32_t val = 0;
            if (assign) val = assign->answers->of_task(i)[j].second;
            answers[i].push_back(make_onehot(c, l, val, "ans"));
        }
    }
    std::vector<AnswerSlot> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t val = 0;
        if (assign) val = assign->truth->labels[i];
        labels[i] = make_onehot(c, l, val, "label");
    }

    // ---- region: openings ----
    cs->begin_region("openings");
    {
        std::vector<VarId> rand_vars;
        for (std::uint32_t j = 0; j <= m; ++j) {
            FieldElement rv{};
            if (assign)
                rv = j < m ? assign->commitments->worker_randomness[j] : assign->commitments->truth_randomness;
            rand_vars.push_back(syn.alloc("opening_rand", [&] { return rv; }));
        }
        for (std::uint32_t j = 0; j < m; ++j) {
            std::vector<Lc> msg;
            msg.reserve(2 * n);
            for (std::uint32_t i = 0; i < n; ++i) {
                msg.push_back(Lc::constant_u64(f, i));
                msg.push_back(answers[i][j].value);
            }
            synth_open(syn, *pp.sponge, syn.lc(pub.commitments[j]), msg, syn.lc(rand_vars[j]));
        }
        std::vector<Lc> tmsg;
        tmsg.reserve(2 * n);
        for (std::uint32_t i = 0; i < n; ++i) {
            tmsg.push_back(Lc::constant_u64(f, i));
            tmsg.push_back(labels[i].value);
        }
        synth_open(syn, *pp.sponge, syn.lc(pub.commitments[m]), tmsg, syn.lc(rand_vars[m]));
    }

    // ---- region: update_truth ----
    cs->begin_region("update_truth");
    FloatVarsZ q0f{syn.lc(pub.q0_s), syn.lc(pub.q0_e), Lc(f)};
    std::vector<std::vector<FloatVars>> posteriors;  // zc only, [task][choice]
    std::vector<FloatVars> complements;              // zc only, per worker

    if (alg == Algorithm::mv) {
        const unsigned cw = int_bit_width(m);
        for (std::uint32_t i = 0; i < n; ++i) {
            std::vector<Lc> tally(l, Lc(f));
            for (std::uint32_t j = 0; j < m; ++j)
                for (std::uint32_t k = 0; k < l; ++k) tally[k] += answers[i][j].onehot[k];
            if (l == 2) {
                VarId le = compare_leq(syn, tally[1], tally[0], cw);
                syn.cs().enforce_linear(labels[i].value, Lc::constant_u64(f, 1) - syn.lc(le));
            } else {
                Lc best_val = tally[0];
                Lc best_idx(f);
                for (std::uint32_t k = 1; k < l; ++k) {
                    VarId le = compare_leq(syn, tally[k], best_val, cw);
                    Lc gt = Lc::constant_u64(f, 1) - syn.lc(le);
                    best_val = select(syn, gt, tally[k], best_val);
                    best_idx = select(syn, gt, Lc::constant_u64(f, k), best_idx);
                }
                syn.cs().enforce_linear(labels[i].value, best_idx);
            }
        }
    } else if (alg == Algorithm::crh) {
        for (std::uint32_t i = 0; i < n; ++i) {
            FloatVarsZ num, den;
            for (std::uint32_t j = 0; j < m; ++j) {
                FloatVarsZ term = c.ops.mul_z(q0f, answer_float(c, answers[i][j]));
                if (j == 0) {
                    num = term;
                    den = q0f;
                } else {
                    num = c.ops.add_z(num, term);
                    den = c.ops.add_z(den, q0f);
                }
            }
            FloatVarsZ soft = c.ops.div_z(num, den);
            // label = number of half-integer thresholds strictly below soft
            Lc count(f);
            for (std::uint32_t k = 0; k + 1 < l; ++k) {
                FloatVarsZ thr = c.ops.constant_z(Float::encode(2 * k + 1, 2, w));
                count += Lc::constant_u64(f, 1) - c.ops.leq_z(soft, thr);
            }
            syn.cs().enforce_linear(labels[i].value, count);
        }
    } else {
        // zc: representable complements checked against 1.0, then per-choice
        // product chains, normalization and argmax
        FloatVars q0core{syn.lc(pub.q0_s), syn.lc(pub.q0_e)};
        Float one_f = Float::from_parts(Precision(w).sig_min(), -static_cast<int>(w - 1), w);
        FloatVars one_c = c.ops.constant(one_f);
        Float q0_val = pp.prior.q0_float(w);
        Float compl_val = complement_float(q0_val, w);
        for (std::uint32_t j = 0; j < m; ++j) {
            FloatVars cj = c.ops.alloc_checked("compl", compl_val);
            FloatVars sum = c.ops.add(q0core, cj);
            c.ops.enforce_equal(sum, one_c);
            complements.push_back(cj);
        }
        posteriors.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            std::vector<FloatVars> prod(l);
            for (std::uint32_t k = 0; k < l; ++k) {
                bool first = true;
                FloatVars acc;
                for (std::uint32_t j = 0; j < m; ++j) {
                    const Lc& indicator = answers[i][j].onehot[k];
                    Lc t1s = select(syn, indicator, q0core.s, one_c.s);
                    Lc t1e = select(syn, indicator, q0core.e, one_c.e);
                    Lc t2s = select(syn, indicator, one_c.s, complements[j].s);
                    Lc t2e = select(syn, indicator, one_c.e, complements[j].e);
                    FloatVars factor = c.ops.mul(FloatVars{t1s, t1e}, FloatVars{t2s, t2e});
                    acc = first ? factor : c.ops.mul(acc, factor);
                    first = false;
                }
                prod[k] = acc;
            }
            FloatVars norm = prod[0];
            for (std::uint32_t k = 1; k < l; ++k) norm = c.ops.add(norm, prod[k]);
            posteriors[i].resize(l);
            for (std::uint32_t k = 0; k < l; ++k) posteriors[i][k] = c.ops.div(prod[k], norm);
            if (l == 2) {
                Lc le = c.ops.leq(posteriors[i][1], posteriors[i][0]);
                syn.cs().enforce_linear(labels[i].value, Lc::constant_u64(f, 1) - le);
            } else {
                FloatVars best = posteriors[i][0];
                Lc best_idx(f);
                for (std::uint32_t k = 1; k < l; ++k) {
                    Lc gt = Lc::constant_u64(f, 1) - c.ops.leq(posteriors[i][k], best);
                    best = FloatVars{select(syn, gt, posteriors[i][k].s, best.s),
                                     select(syn, gt, posteriors[i][k].e, best.e)};
                    best_idx = select(syn, gt, Lc::constant_u64(f, k), best_idx);
                }
                syn.cs().enforce_linear(labels[i].value, best_idx);
            }
        }
    }

    // ---- region: update_quality ----
    cs->begin_region("update_quality");
    if (alg == Algorithm::crh) {
        FloatVarsZ smooth{syn.lc(pub.smooth_s), syn.lc(pub.smooth_e), Lc(f)};
        std::vector<Lc> dist(m, Lc(f));
        Lc total(f);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t j = 0; j < m; ++j) {
                Lc agree(f);
                if (l == 2) {
                    VarId t = syn.alloc("agree", [&] {
                        return f.mul(syn.value(answers[i][j].value), syn.value(labels[i].value));
                    });
                    syn.cs().enforce(answers[i][j].value, labels[i].value, syn.lc(t));
                    // d = b + lab - 2*b*lab
                    Lc d = answers[i][j].value + labels[i].value;
                    Lc t2 = syn.lc_scaled(t, f.from_u64(2));
                    d -= t2;
                    dist[j] += d;
                    total += d;
                    continue;
                }
                for (std::uint32_t k = 0; k < l; ++k) {
                    VarId t = syn.alloc("agree", [&] {
                        return f.mul(syn.value(answers[i][j].onehot[k]), syn.value(labels[i].onehot[k]));
                    });
                    syn.cs().enforce(answers[i][j].onehot[k], labels[i].onehot[k], syn.lc(t));
                    agree += syn.lc(t);
                }
                Lc d = Lc::constant_u64(f, 1) - agree;
                dist[j] += d;
                total += d;
            }
        }
        FloatVarsZ total_f = int_to_float(c, total, static_cast<std::uint64_t>(n) * m, "dist_total");
        for (std::uint32_t j = 0; j < m; ++j) {
            FloatVarsZ dj = int_to_float(c, dist[j], n, "dist");
            // smoothing: zero distance uses the public epsilon instead
            Lc s_eff = select(syn, dj.z, smooth.s, dj.s);
            Lc e_eff = select(syn, dj.z, smooth.e, dj.e);
            FloatVarsZ ratio = c.ops.div_z(total_f, FloatVarsZ{s_eff, e_eff, Lc(f)});
            syn.cs().enforce_linear(ratio.s, syn.lc(pub.q_out[2 * j]));
            syn.cs().enforce_linear(ratio.e, syn.lc(pub.q_out[2 * j + 1]));
        }
    } else if (alg == Algorithm::zc) {
        Float count_val = Float::from_int_floor(n, pp.precision.w);
        FloatVars count_f = c.ops.constant(count_val);
        FloatVars lo = c.ops.constant(zc_quality_floor(w));
        FloatVars hi = c.ops.constant(zc_quality_ceil(w));
        for (std::uint32_t j = 0; j < m; ++j) {
            bool first = true;
            FloatVars acc;
            for (std::uint32_t i = 0; i < n; ++i) {
                // posterior mass at the worker's own answer
                FloatVars p = posteriors[i][0];
                for (std::uint32_t k = 1; k < l; ++k) {
                    const Lc& indicator = answers[i][j].onehot[k];
                    p = FloatVars{select(syn, indicator, posteriors[i][k].s, p.s),
                                  select(syn, indicator, posteriors[i][k].e, p.e)};
                }
                acc = first ? p : c.ops.add(acc, p);
                first = false;
            }
            FloatVars q = c.ops.div(acc, count_f);
            Lc below = c.ops.leq(q, lo);
            q = FloatVars{select(syn, below, lo.s, q.s), select(syn, below, lo.e, q.e)};
            Lc above = c.ops.leq(hi, q);
            q = FloatVars{select(syn, above, hi.s, q.s), select(syn, above, hi.e, q.e)};
            syn.cs().enforce_linear(q.s, syn.lc(pub.q_out[2 * j]));
            syn.cs().enforce_linear(q.e, syn.lc(pub.q_out[2 * j + 1]));
        }
    }

    return SynthesisResult{cs, lay};
}

ProofBundle prove(const PublicParams& pp, Algorithm alg, const AnswerMatrix& v,
                  std::uint64_t randomness_seed) {
    if (!v.dense())
        throw std::invalid_argument("the iteration circuit requires a dense answer matrix");
    const unsigned w = pp.precision.w;

    // one native iteration from the priors; this run is the witness oracle
    TruthState truth;
    QualityState quality;
    if (alg == Algorithm::mv) {
        truth = mv_infer(v);
    } else if (alg == Algorithm::crh) {
        std::vector<Float> weights(v.workers(), pp.prior.q0_float(w));
        truth = crh_update_truth(v, weights, w);
        quality = crh_update_quality(v, truth.labels, pp.prior, w);
    } else {
        std::vector<Float> q(v.workers(), pp.prior.q0_float(w));
        truth = zc_update_truth(v, q, w);
        quality = zc_update_quality(v, truth, w);
    }

    CommitmentSet coms = commit_all(pp, v, truth.labels, randomness_seed);
    CircuitLayout lay = CircuitLayout::plan(alg, v.tasks(), v.workers(), v.choices(), w);
    Challenges rz = derive_challenges(pp, lay, coms);

    ProverInputs inputs{&v, &coms, &truth, &quality};
    Witness witness;
    SynthesisResult sr = synth_iteration(pp, alg, v.tasks(), v.workers(), v.choices(), rz, &inputs, &witness);

    ProofBundle bundle;
    bundle.alg = alg;
    bundle.n = v.tasks();
    bundle.m = v.workers();
    bundle.l = v.choices();
    bundle.w = w;
    bundle.layout_digest = lay.digest(*pp.sponge);
    bundle.cs = sr.cs;
    bundle.public_inputs.assign(witness.assignment.begin() + 1,
                                witness.assignment.begin() + 1 + lay.total_public);
    bundle.witness = std::move(witness);

    SatResult sat = bundle.cs->is_satisfied(bundle.public_inputs, *bundle.witness);
    if (!sat.ok)
        throw std::logic_error("internal: honest witness fails its own circuit at " + sat.context);
    return bundle;
}

const char* verify_status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::accept: return "accept";
        case VerifyStatus::malformed: return "malformed";
        case VerifyStatus::layout_mismatch: return "layout-mismatch";
        case VerifyStatus::challenge_mismatch: return "challenge-mismatch";
        case VerifyStatus::circuit_mismatch: return "circuit-mismatch";
        case VerifyStatus::witness_required: return "witness-required";
        case VerifyStatus::unsatisfied: return "unsatisfied";
    }
    return "?";
}

std::vector<Commitment> bundle_commitments(const ProofBundle& bundle) {
    CircuitLayout lay = bundle.layout();
    std::vector<Commitment> out;
    for (std::uint32_t j = 0; j <= bundle.m; ++j)
        out.push_back(Commitment{bundle.public_inputs[lay.commitments_offset + j]});
    return out;
}

Challenges bundle_challenges(const ProofBundle& bundle) {
    CircuitLayout lay = bundle.layout();
    return Challenges{bundle.public_inputs[lay.challenge_offset],
                      bundle.public_inputs[lay.challenge_offset + 1]};
}

VerifyResult verify(const PublicParams& pp, const ProofBundle& bundle) {
    const Field& f = *pp.field;
    if (!bundle.cs || bundle.n == 0 || bundle.m == 0 || bundle.l < 2)
        return {VerifyStatus::malformed, "incomplete bundle"};
    if (bundle.w != pp.precision.w)
        return {VerifyStatus::malformed, "precision disagrees with the public parameters"};
    CircuitLayout lay = bundle.layout();
    if (bundle.public_inputs.size() != lay.total_public)
        return {VerifyStatus::malformed, "public input count disagrees with the layout"};

    if (!(bundle.layout_digest == lay.digest(*pp.sponge)))
        return {VerifyStatus::layout_mismatch, "layout digest mismatch"};

    // eta slots must carry the agreed prior factors
    Float q0 = pp.prior.q0_float(bundle.w);
    Float sm = pp.prior.smooth_float(bundle.w);
    const FieldElement* eta = bundle.public_inputs.data() + lay.eta_offset;
    if (!(eta[0] == f.from_u128(q0.s)) ||
        !(eta[1] == f.from_u64(static_cast<std::uint64_t>(q0.e + kExpShift))) ||
        !(eta[2] == f.from_u128(sm.s)) ||
        !(eta[3] == f.from_u64(static_cast<std::uint64_t>(sm.e + kExpShift))))
        return {VerifyStatus::malformed, "prior factors disagree with the public parameters"};

    // challenges must re-derive from the committed transcript
    CommitmentSet coms;
    auto cs_list = bundle_commitments(bundle);
    coms.workers.assign(cs_list.begin(), cs_list.end() - 1);
    coms.truth = cs_list.back();
    Challenges expect = derive_challenges(pp, lay, coms);
    Challenges got = bundle_challenges(bundle);
    if (!(expect.r == got.r) || !(expect.z == got.z))
        return {VerifyStatus::challenge_mismatch, "challenges not bound to the transcript"};

    if (pp.backend == "external-export") return {};  // proof checked elsewhere

    if (!bundle.witness.has_value())
        return {VerifyStatus::witness_required, "mock backend needs the witness section"};

    // the constraint system must be exactly the canonical one for the header
    SynthesisResult expected = synth_iteration(pp, bundle.alg, bundle.n, bundle.m, bundle.l, got);
    if (!bundle.cs->same_shape(*expected.cs))
        return {VerifyStatus::circuit_mismatch, "constraint system is not the canonical circuit"};

    SatResult sat = bundle.cs->is_satisfied(bundle.public_inputs, *bundle.witness);
    if (!sat.ok) return {VerifyStatus::unsatisfied, sat.context};
    return {};
}

}  // namespace zkti
