// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Poseidon sponge hash over the scalar field: x^5 S-box, arity-4 (t = 5,
// rate 4, capacity 1). Parameters come from the standard Grain-LFSR
// derivation and ship as a checksummed parameter file; the permutation is
// available natively and as constraints.

#pragma once

#include <span>
#include <vector>

#include "zkti/r1cs.hpp"

namespace zkti {

struct SpongeParams {
    std::shared_ptr<const Field> field;
    unsigned t = 0;
    unsigned full_rounds = 0;
    unsigned partial_rounds = 0;
    std::vector<FieldElement> round_constants;        // (full+partial)*t, round-major
    std::vector<std::vector<FieldElement>> mds;       // t x t, M[i][j] = 1/(x_i + y_j)

    // Montgomery-form copies for the native permutation hot path; derived
    // from the canonical constants, not serialized.
    std::vector<FieldElement> mont_round_constants;
    std::vector<std::vector<FieldElement>> mont_mds;
    void build_mont_cache();

    unsigned rate() const { return t - 1; }
    std::uint64_t checksum() const;

    /// Grain-LFSR derivation for GF(p) and the x^alpha S-box.
    static SpongeParams derive(std::shared_ptr<const Field> field, unsigned t, unsigned full_rounds,
                               unsigned partial_rounds);

    /// The project default: BN254 scalar field, t=5, 8 full / 60 partial
    /// rounds (128-bit security). Cached.
    static const SpongeParams& bn254_t5();
    /// t=3 instance (8 full / 57 partial), used for cross-checking the
    /// derivation against published digests.
    static const SpongeParams& bn254_t3();

    void save(const std::string& path) const;
    static SpongeParams load(const std::string& path, std::shared_ptr<const Field> field);
};

struct Commitment {
    FieldElement digest;

    friend bool operator==(const Commitment&, const Commitment&) = default;
};

/// One Poseidon permutation (ark -> sbox -> mix per round).
void poseidon_permute(const SpongeParams& p, std::vector<FieldElement>& state);

/// Hash in the fixed-input convention used by common implementations:
/// state = [0, in...], one permutation, output state[0]. Inputs must fit a
/// single permutation (|in| <= t-1).
FieldElement poseidon_hash_fixed(const SpongeParams& p, std::span<const FieldElement> inputs);

/// Sponge over arbitrary-length messages: capacity lane seeded with the
/// message length (domain separation), rate-sized chunks zero-padded.
FieldElement sponge_hash(const SpongeParams& p, std::span<const FieldElement> message);

/// Multi-element squeeze of the same sponge (used for challenge derivation).
std::vector<FieldElement> sponge_hash_many(const SpongeParams& p, std::span<const FieldElement> message,
                                           unsigned count);

/// com = sponge(randomness || message).
Commitment commit(const SpongeParams& p, std::span<const FieldElement> message, const FieldElement& randomness);

/// In-circuit permutation over linear combinations. 15 gates per full round,
/// 4 per partial round (the partial S-box input is materialized to keep
/// combinations short).
std::vector<Lc> synth_poseidon_permute(Synth& syn, const SpongeParams& p, std::vector<Lc> state);

/// In-circuit sponge with the same padding/domain separation as sponge_hash.
Lc synth_sponge_hash(Synth& syn, const SpongeParams& p, std::span<const Lc> message);

/// Constrains `commitment` (a public input) to open to message/randomness.
void synth_open(Synth& syn, const SpongeParams& p, const Lc& commitment, std::span<const Lc> message,
                const Lc& randomness);

/// Deterministic stream of field elements from a seed (counter-mode sponge);
/// used for commitment randomness.
class SpongePrg {
public:
    SpongePrg(const SpongeParams& p, std::uint64_t seed) : p_(p), seed_(seed) {}
    FieldElement next();

private:
    const SpongeParams& p_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace zkti
