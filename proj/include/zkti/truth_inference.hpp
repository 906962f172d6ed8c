// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Native truth inference: majority vote, CRH weighted averaging and the
// ZenCrowd EM update, all computed in Float arithmetic so that a run is
// byte-reproducible as the witness of the corresponding circuit.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zkti/float_num.hpp"

namespace zkti {

enum class Algorithm : std::uint8_t { mv = 0, crh = 1, zc = 2 };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

/// Sparse task x worker answer table with choice cardinality l.
class AnswerMatrix {
public:
    struct Entry {
        std::uint32_t task, worker, answer;
    };

    AnswerMatrix(std::uint32_t n, std::uint32_t m, std::uint32_t l, std::vector<Entry> entries);

    std::uint32_t tasks() const { return n_; }
    std::uint32_t workers() const { return m_; }
    std::uint32_t choices() const { return l_; }
    std::size_t answer_count() const { return entry_count_; }

    /// (worker, answer) pairs of one task, worker-ascending.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& of_task(std::uint32_t i) const {
        return by_task_[i];
    }
    /// (task, answer) pairs of one worker, task-ascending.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& of_worker(std::uint32_t j) const {
        return by_worker_[j];
    }

    /// True when every worker answered every task.
    bool dense() const { return entry_count_ == static_cast<std::size_t>(n_) * m_; }

private:
    std::uint32_t n_, m_, l_;
    std::size_t entry_count_ = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_task_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_worker_;
};

struct TruthState {
    std::vector<Float> soft;                  // CRH: per-task weighted average
    std::vector<std::vector<Float>> dist;     // ZC: per-task normalized posterior
    std::vector<std::uint32_t> labels;
};

struct QualityState {
    std::vector<Float> weight;   // CRH: ln(ratio) re-encoded; ZC: q_j itself
    std::vector<Float> ratio;    // CRH only: pre-log ratio (the circuit-visible value)
    std::vector<double> q_log;   // CRH only: ln(ratio), the published quality
};

struct PriorFactors {
    std::uint64_t q0_num = 1, q0_den = 2;          // initial quality, default 0.5
    std::uint64_t smooth_num = 1, smooth_den = 2;  // epsilon for zero CRH distances
    unsigned max_iter = 10;
    double tolerance = 1e-4;

    Float q0_float(unsigned w) const { return Float::encode(q0_num, q0_den, w); }
    Float smooth_float(unsigned w) const { return Float::encode(smooth_num, smooth_den, w); }

    /// Exactly 0.5 is a fixed point of the ZenCrowd update (uniform
    /// posteriors reproduce it), so ZC defaults to an asymmetric prior.
    static PriorFactors defaults_for(Algorithm alg) {
        PriorFactors p;
        if (alg == Algorithm::zc) {
            p.q0_num = 3;
            p.q0_den = 5;
        }
        return p;
    }
};

struct IterationSnapshot {
    TruthState truth;
    QualityState quality;
};

struct InferenceResult {
    TruthState truth;
    QualityState quality;
    std::vector<IterationSnapshot> trace;
    unsigned iterations = 0;
    bool converged = false;
};

/// Majority voting; ties resolve to the lowest choice index.
TruthState mv_infer(const AnswerMatrix& v);

/// One CRH truth update: per-task weighted average of answer values over the
/// answering workers, labels by nearest choice (ties downward).
TruthState crh_update_truth(const AnswerMatrix& v, const std::vector<Float>& weights, unsigned w);

/// One CRH quality update from labels: indicator distances, smoothed ratio
/// sum(d) / max(d_j, eps), quality = ln(ratio).
QualityState crh_update_quality(const AnswerMatrix& v, const std::vector<std::uint32_t>& labels,
                                const PriorFactors& prior, unsigned w);

/// One ZenCrowd truth update: per-choice products of q_j / (1-q_j) factors,
/// normalized; labels by argmax (ties to the lowest index).
TruthState zc_update_truth(const AnswerMatrix& v, const std::vector<Float>& q, unsigned w);

/// ZenCrowd EM quality update: mean posterior mass of the worker's own
/// answers, clamped to [4*delta, 1 - 4*delta].
QualityState zc_update_quality(const AnswerMatrix& v, const TruthState& truth, unsigned w);

/// The iterative framework: update truth, update qualities, stop on
/// convergence of max |delta q| or at max_iter. MV is a single pass.
InferenceResult run_inference(Algorithm alg, const AnswerMatrix& v, const PriorFactors& prior, unsigned w);

/// Fraction of matching labels.
double accuracy(const std::vector<std::uint32_t>& labels, const std::vector<std::uint32_t>& ground_truth);

/// The representable complement: a float c with add(q, c) exactly 1.0 under
/// the float adder (used for the 1-q factors of ZC, in- and out-of-circuit).
Float complement_float(const Float& q, unsigned w);

/// Clamp bounds for ZC qualities.
Float zc_quality_floor(unsigned w);
Float zc_quality_ceil(unsigned w);

}  // namespace zkti
