// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#include "zkti/truth_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace zkti {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::mv: return "mv";
        case Algorithm::crh: return "crh";
        case Algorithm::zc: return "zc";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    if (name == "mv") return Algorithm::mv;
    if (name == "crh") return Algorithm::crh;
    if (name == "zc") return Algorithm::zc;
    return std::nullopt;
}

AnswerMatrix::AnswerMatrix(std::uint32_t n, std::uint32_t m, std::uint32_t l, std::vector<Entry> entries)
    : n_(n), m_(m), l_(l) {
    if (l < 2) throw std::invalid_argument("choice cardinality must be at least 2");
    if (n == 0 || m == 0) throw std::invalid_argument("empty task or worker set");
    by_task_.resize(n);
    by_worker_.resize(m);
    for (const Entry& e : entries) {
        if (e.task >= n || e.worker >= m) throw std::invalid_argument("answer entry out of range");
        if (e.answer >= l) throw std::invalid_argument("answer value exceeds choice cardinality");
        by_task_[e.task].emplace_back(e.worker, e.answer);
        by_worker_[e.worker].emplace_back(e.task, e.answer);
    }
    for (auto& v : by_task_) std::sort(v.begin(), v.end());
    for (auto& v : by_worker_) std::sort(v.begin(), v.end());
    for (std::uint32_t j = 0; j < m; ++j) {
        if (by_worker_[j].empty())
            throw std::invalid_argument("worker " + std::to_string(j) + " has no answers");
        for (std::size_t k = 1; k < by_worker_[j].size(); ++k)
            if (by_worker_[j][k].first == by_worker_[j][k - 1].first)
                throw std::invalid_argument("duplicate answer for task/worker pair");
    }
    entry_count_ = entries.size();
}

TruthState mv_infer(const AnswerMatrix& v) {
    TruthState out;
    out.labels.resize(v.tasks());
    for (std::uint32_t i = 0; i < v.tasks(); ++i) {
        const auto& row = v.of_task(i);
        if (row.empty()) throw std::domain_error("task " + std::to_string(i) + " has no answers");
        std::vector<std::uint32_t> tally(v.choices(), 0);
        for (auto [worker, answer] : row) ++tally[answer];
        std::uint32_t best = 0;
        for (std::uint32_t k = 1; k < v.choices(); ++k)
            if (tally[k] > tally[best]) best = k;
        out.labels[i] = best;
    }
    return out;
}

namespace {

Float add_acc(const Float& acc, const Float& term) { return float_add_native(acc, term).first; }

std::uint32_t label_from_soft(const Float& soft, std::uint32_t l, unsigned w) {
    // nearest choice, ties downward: count thresholds k + 1/2 strictly below soft
    std::uint32_t label = 0;
    for (std::uint32_t k = 0; k + 1 < l; ++k) {
        Float threshold = Float::encode(2 * k + 1, 2, w);
        if (float_lt(threshold, soft)) ++label;
    }
    return label;
}

}  // namespace

TruthState crh_update_truth(const AnswerMatrix& v, const std::vector<Float>& weights, unsigned w) {
    if (weights.size() != v.workers()) throw std::invalid_argument("weight count mismatch");
    TruthState out;
    out.soft.resize(v.tasks());
    out.labels.resize(v.tasks());
    for (std::uint32_t i = 0; i < v.tasks(); ++i) {
        const auto& row = v.of_task(i);
        if (row.empty()) throw std::domain_error("task " + std::to_string(i) + " has no answers");
        Float num = Float::zero(w);
        Float den = Float::zero(w);
        bool first = true;
        for (auto [worker, answer] : row) {
            Float answer_float = answer == 0 ? Float::zero(w) : Float::encode_int(answer, w);
            Float term = float_mul_native(weights[worker], answer_float).first;
            if (first) {
                num = term;
                den = weights[worker];
                first = false;
            } else {
                num = add_acc(num, term);
                den = add_acc(den, weights[worker]);
            }
        }
        if (den.is_zero)
            throw std::domain_error("all worker weights are zero for task " + std::to_string(i));
        out.soft[i] = float_div_native(num, den).first;
        out.labels[i] = label_from_soft(out.soft[i], v.choices(), w);
    }
    return out;
}

QualityState crh_update_quality(const AnswerMatrix& v, const std::vector<std::uint32_t>& labels,
                                const PriorFactors& prior, unsigned w) {
    if (labels.size() != v.tasks()) throw std::invalid_argument("label count mismatch");
    std::vector<std::uint64_t> dist(v.workers(), 0);
    std::uint64_t total = 0;
    for (std::uint32_t j = 0; j < v.workers(); ++j) {
        for (auto [task, answer] : v.of_worker(j))
            if (answer != labels[task]) ++dist[j];
        total += dist[j];
    }
    QualityState out;
    out.weight.resize(v.workers());
    out.ratio.resize(v.workers());
    out.q_log.resize(v.workers());
    Float total_float = Float::from_int_floor(total, w);
    Float smooth = prior.smooth_float(w);
    for (std::uint32_t j = 0; j < v.workers(); ++j) {
        Float denom = dist[j] == 0 ? smooth : Float::from_int_floor(dist[j], w);
        out.ratio[j] = total_float.is_zero ? Float::zero(w) : float_div_native(total_float, denom).first;
        out.q_log[j] = out.ratio[j].is_zero ? -std::numeric_limits<double>::infinity()
                                            : std::log(static_cast<double>(out.ratio[j].decode()));
        out.weight[j] = out.ratio[j].is_zero ? Float::zero(w) : Float::encode_double(out.q_log[j], w);
    }
    return out;
}

Float complement_float(const Float& q, unsigned w) {
    if (q.is_zero) throw std::domain_error("complement of zero is not used");
    Float one = Float::from_parts(Precision(w).sig_min(), -static_cast<int>(w - 1), w);
    if (!float_lt(q, one)) throw std::domain_error("complement requires q < 1");
    // exact 1 - q as a rational with a power-of-two denominator
    u128 den = u128{1} << static_cast<unsigned>(-q.e);
    u128 num = den - q.s;
    Float base = Float::encode(num, den, w);
    // the adder floors, so search the neighbouring representable values for
    // the one that lands exactly on 1.0
    for (int off : {0, 1, -1, 2, -2, 3}) {
        Float cand = base;
        if (off < 0 && base.s < Precision(w).sig_min() + static_cast<unsigned>(-off)) continue;
        u128 s = base.s + static_cast<u128>(static_cast<long long>(off));
        if (s < Precision(w).sig_min() || s >= Precision(w).sig_max()) continue;
        cand.s = s;
        if (float_add_native(q, cand).first == one) return cand;
    }
    throw std::logic_error("no representable complement found");
}

Float zc_quality_floor(unsigned w) {
    // 4 * delta = 2^(3-w), exactly representable
    return Float::from_parts(Precision(w).sig_min(), 4 - 2 * static_cast<int>(w), w);
}

Float zc_quality_ceil(unsigned w) { return complement_float(zc_quality_floor(w), w); }

TruthState zc_update_truth(const AnswerMatrix& v, const std::vector<Float>& q, unsigned w) {
    if (q.size() != v.workers()) throw std::invalid_argument("quality count mismatch");
    std::vector<Float> compl_q(v.workers());
    for (std::uint32_t j = 0; j < v.workers(); ++j) {
        if (q[j].is_zero) throw std::domain_error("zc quality must be strictly inside (0,1)");
        compl_q[j] = complement_float(q[j], w);
    }
    TruthState out;
    out.dist.resize(v.tasks());
    out.labels.resize(v.tasks());
    for (std::uint32_t i = 0; i < v.tasks(); ++i) {
        const auto& row = v.of_task(i);
        if (row.empty()) throw std::domain_error("task " + std::to_string(i) + " has no answers");
        std::vector<Float> prod(v.choices());
        for (std::uint32_t k = 0; k < v.choices(); ++k) {
            Float acc;
            bool first = true;
            for (auto [worker, answer] : row) {
                const Float& factor = answer == k ? q[worker] : compl_q[worker];
                if (first) {
                    acc = factor;
                    first = false;
                } else {
                    acc = float_mul_native(acc, factor).first;
                }
            }
            prod[k] = acc;
        }
        Float norm = prod[0];
        for (std::uint32_t k = 1; k < v.choices(); ++k) norm = add_acc(norm, prod[k]);
        out.dist[i].resize(v.choices());
        for (std::uint32_t k = 0; k < v.choices(); ++k)
            out.dist[i][k] = float_div_native(prod[k], norm).first;
        std::uint32_t best = 0;
        for (std::uint32_t k = 1; k < v.choices(); ++k)
            if (float_lt(out.dist[i][best], out.dist[i][k])) best = k;
        out.labels[i] = best;
    }
    return out;
}

QualityState zc_update_quality(const AnswerMatrix& v, const TruthState& truth, unsigned w) {
    QualityState out;
    out.weight.resize(v.workers());
    Float lo = zc_quality_floor(w), hi = zc_quality_ceil(w);
    for (std::uint32_t j = 0; j < v.workers(); ++j) {
        const auto& row = v.of_worker(j);
        Float acc;
        bool first = true;
        for (auto [task, answer] : row) {
            const Float& p = truth.dist[task][answer];
            if (first) {
                acc = p;
                first = false;
            } else {
                acc = add_acc(acc, p);
            }
        }
        Float count = Float::from_int_floor(row.size(), w);
        Float qj = acc.is_zero ? Float::zero(w) : float_div_native(acc, count).first;
        if (float_leq(qj, lo)) qj = lo;
        if (float_leq(hi, qj)) qj = hi;
        out.weight[j] = qj;
    }
    return out;
}

InferenceResult run_inference(Algorithm alg, const AnswerMatrix& v, const PriorFactors& prior, unsigned w) {
    InferenceResult res;
    if (alg == Algorithm::mv) {
        res.truth = mv_infer(v);
        res.iterations = 1;
        res.converged = true;
        res.trace.push_back({res.truth, {}});
        return res;
    }

    std::vector<Float> q(v.workers(), prior.q0_float(w));
    std::vector<double> q_prev(v.workers(), static_cast<double>(prior.q0_float(w).decode()));
    for (unsigned it = 1; it <= prior.max_iter; ++it) {
        TruthState truth;
        QualityState quality;
        std::vector<double> q_now(v.workers());
        if (alg == Algorithm::crh) {
            truth = crh_update_truth(v, q, w);
            quality = crh_update_quality(v, truth.labels, prior, w);
            q_now = quality.q_log;
        } else {
            truth = zc_update_truth(v, q, w);
            quality = zc_update_quality(v, truth, w);
            for (std::uint32_t j = 0; j < v.workers(); ++j)
                q_now[j] = static_cast<double>(quality.weight[j].decode());
        }
        q = quality.weight;
        res.truth = std::move(truth);
        res.quality = std::move(quality);
        res.trace.push_back({res.truth, res.quality});
        res.iterations = it;

        bool all_zero = true;
        for (const Float& wq : q)
            if (!wq.is_zero) all_zero = false;
        if (all_zero) {
            // full consensus: every distance is zero and the ratios
            // degenerate; a further truth update has no weights to use
            res.converged = true;
            break;
        }

        double delta = 0;
        for (std::uint32_t j = 0; j < v.workers(); ++j)
            delta = std::max(delta, std::abs(q_now[j] - q_prev[j]));
        q_prev = std::move(q_now);
        if (delta < prior.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double accuracy(const std::vector<std::uint32_t>& labels, const std::vector<std::uint32_t>& ground_truth) {
    if (labels.size() != ground_truth.size()) throw std::invalid_argument("label vector length mismatch");
    if (labels.empty()) throw std::invalid_argument("empty label vectors");
    std::size_t hit = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == ground_truth[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(labels.size());
}

}  // namespace zkti
