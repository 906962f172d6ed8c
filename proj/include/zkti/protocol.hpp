// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// The end-to-end protocol: commitments over worker answers and inferred
// truths, synthesis of one full algorithm iteration (openings, truth update,
// quality update) as a constraint system, Fiat-Shamir challenge derivation,
// and prove/verify over the mock satisfiability backend (external provers
// consume the exported bundle instead).

#pragma once

#include <optional>

#include "zkti/float_circuits.hpp"
#include "zkti/poseidon.hpp"
#include "zkti/truth_inference.hpp"

namespace zkti {

struct SetupConfig {
    unsigned w = 23;
    PriorFactors prior{};
    std::string backend = "mock";
};

struct PublicParams {
    std::shared_ptr<const Field> field;
    Precision precision{23};
    const SpongeParams* sponge = nullptr;
    PriorFactors prior;
    std::string backend;
};

/// Validates the configuration; the field prime must clear the 2^(3w+1)
/// intermediate bound.
PublicParams setup(const SetupConfig& cfg = {});

struct CommitmentSet {
    std::vector<Commitment> workers;
    Commitment truth;
    std::vector<FieldElement> worker_randomness;  // held by the prover
    FieldElement truth_randomness;
};

/// Canonical committed message of one worker: randomness-prefixed
/// (task_index, answer) pairs, task-ascending. Binds positions, so sparse
/// answer sets stay well-defined.
std::vector<FieldElement> worker_message(const Field& f, const AnswerMatrix& v, std::uint32_t worker);
std::vector<FieldElement> truth_message(const Field& f, const std::vector<std::uint32_t>& labels);

Commitment commit_answers(const PublicParams& pp, const AnswerMatrix& v, std::uint32_t worker,
                          const FieldElement& randomness);
Commitment commit_truth(const PublicParams& pp, const std::vector<std::uint32_t>& labels,
                        const FieldElement& randomness);
CommitmentSet commit_all(const PublicParams& pp, const AnswerMatrix& v,
                         const std::vector<std::uint32_t>& labels, std::uint64_t randomness_seed);

/// Public-input layout of one iteration circuit. Slot indices are 0-based
/// into the public vector; the layout (and its digest) depends only on
/// (alg, n, m, l, w).
struct CircuitLayout {
    Algorithm alg{};
    std::uint32_t n = 0, m = 0, l = 0;
    unsigned w = 0;

    std::uint32_t commitments_offset = 0;  // m worker slots then the truth slot
    std::uint32_t q_out_offset = 0;        // per worker (s, e) pairs; absent for mv
    std::uint32_t q_out_count = 0;
    std::uint32_t eta_offset = 0;  // q0 (s, e), smoothing (s, e)
    std::uint32_t challenge_offset = 0;
    std::uint32_t total_public = 0;

    static CircuitLayout plan(Algorithm alg, std::uint32_t n, std::uint32_t m, std::uint32_t l, unsigned w);
    FieldElement digest(const SpongeParams& sponge) const;
};

struct Challenges {
    FieldElement r, z;
};

/// Fiat-Shamir challenges bound to the commitments and the layout digest.
Challenges derive_challenges(const PublicParams& pp, const CircuitLayout& layout,
                             const CommitmentSet& coms);

struct ProofBundle {
    Algorithm alg{};
    std::uint32_t n = 0, m = 0, l = 0;
    unsigned w = 0;
    std::uint32_t iteration = 0;
    FieldElement layout_digest;
    std::vector<FieldElement> public_inputs;
    std::shared_ptr<ConstraintSystem> cs;
    std::optional<Witness> witness;

    CircuitLayout layout() const { return CircuitLayout::plan(alg, n, m, l, w); }
};

/// Emits one iteration circuit. With `assign`, also fills in witness values
/// from the native inference; the constraint shape is identical without it.
struct SynthesisResult {
    std::shared_ptr<ConstraintSystem> cs;
    CircuitLayout layout;
};

struct ProverInputs {
    const AnswerMatrix* answers = nullptr;
    const CommitmentSet* commitments = nullptr;
    const TruthState* truth = nullptr;
    const QualityState* quality = nullptr;
};

SynthesisResult synth_iteration(const PublicParams& pp, Algorithm alg, std::uint32_t n, std::uint32_t m,
                                std::uint32_t l, const Challenges& rz, const ProverInputs* assign = nullptr,
                                Witness* witness_out = nullptr);

/// Runs one native iteration from the priors, commits, derives challenges,
/// synthesizes and self-checks the witness before packaging.
ProofBundle prove(const PublicParams& pp, Algorithm alg, const AnswerMatrix& v,
                  std::uint64_t randomness_seed);

enum class VerifyStatus : std::uint8_t {
    accept = 0,
    malformed = 1,
    layout_mismatch = 2,
    challenge_mismatch = 3,
    circuit_mismatch = 4,
    witness_required = 5,
    unsatisfied = 6,
};

const char* verify_status_name(VerifyStatus s);

struct VerifyResult {
    VerifyStatus status = VerifyStatus::accept;
    std::string detail;

    bool accepted() const { return status == VerifyStatus::accept; }
};

/// Mock backend: recomputes the layout and challenges from public data,
/// re-synthesizes the circuit shape, and checks witness satisfiability.
/// The external backend only validates bundle structure.
VerifyResult verify(const PublicParams& pp, const ProofBundle& bundle);

/// Convenience accessors into the public vector.
std::vector<Commitment> bundle_commitments(const ProofBundle& bundle);
Challenges bundle_challenges(const ProofBundle& bundle);

}  // namespace zkti
