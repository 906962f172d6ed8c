// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#include "zkti/poseidon.hpp"

#include <fstream>

#include <json.hpp>

namespace zkti {

namespace {

/// Grain LFSR from the standard Poseidon parameter derivation:
/// b_{i+80} = b_{i+62} ^ b_{i+51} ^ b_{i+38} ^ b_{i+23} ^ b_{i+13} ^ b_i,
/// seeded with the instance descriptor, 160 bits discarded, then output
/// through the self-shrinking rule (of each bit pair, keep the second bit
/// when the first is 1).
class GrainLfsr {
public:
    GrainLfsr(unsigned field_tag, unsigned sbox_tag, unsigned field_bits, unsigned t, unsigned full_rounds,
              unsigned partial_rounds) {
        append_bits(field_tag, 2);
        append_bits(sbox_tag, 4);
        append_bits(field_bits, 12);
        append_bits(t, 12);
        append_bits(full_rounds, 10);
        append_bits(partial_rounds, 10);
        append_bits(0x3fffffff, 30);
        for (int i = 0; i < 160; ++i) raw_bit();
    }

    bool next_bit() {
        for (;;) {
            bool b1 = raw_bit();
            bool b2 = raw_bit();
            if (b1) return b2;
        }
    }

    U256 random_bits(unsigned n) {
        U256 out{};
        for (unsigned i = 0; i < n; ++i) {
            out = limb::shl(out, 1);
            if (next_bit()) out[0] |= 1;
        }
        return out;
    }

private:
    void append_bits(unsigned value, unsigned width) {
        for (unsigned i = width; i-- > 0;) state_.push_back((value >> i) & 1);
    }

    bool raw_bit() {
        bool nb = state_[pos_ + 62] ^ state_[pos_ + 51] ^ state_[pos_ + 38] ^ state_[pos_ + 23] ^
                  state_[pos_ + 13] ^ state_[pos_];
        state_.push_back(nb);
        ++pos_;
        return nb;
    }

    std::vector<bool> state_;
    std::size_t pos_ = 0;
};

FieldElement sbox5(const Field& f, const FieldElement& x) {
    FieldElement x2 = f.square(x);
    return f.mul(f.square(x2), x);
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::uint64_t SpongeParams::checksum() const {
    std::uint64_t h = 14695981039346656037ULL;
    h = fnv1a(h, limb::to_hex(field->prime()));
    h = fnv1a(h, std::to_string(t) + "/" + std::to_string(full_rounds) + "/" + std::to_string(partial_rounds));
    for (const auto& c : round_constants) h = fnv1a(h, limb::to_hex(c.v));
    for (const auto& row : mds)
        for (const auto& c : row) h = fnv1a(h, limb::to_hex(c.v));
    return h;
}

SpongeParams SpongeParams::derive(std::shared_ptr<const Field> field, unsigned t, unsigned full_rounds,
                                  unsigned partial_rounds) {
    SpongeParams p;
    p.field = field;
    p.t = t;
    p.full_rounds = full_rounds;
    p.partial_rounds = partial_rounds;

    const unsigned n = field->prime_bits();
    GrainLfsr grain(/*GF(p)*/ 1, /*x^alpha*/ 0, n, t, full_rounds, partial_rounds);

    const unsigned num_constants = (full_rounds + partial_rounds) * t;
    p.round_constants.reserve(num_constants);
    for (unsigned i = 0; i < num_constants; ++i) {
        // rejection sampling keeps the distribution uniform in [0, p)
        for (;;) {
            U256 raw = grain.random_bits(n);
            if (limb::cmp(raw, field->prime()) < 0) {
                p.round_constants.push_back(FieldElement{raw});
                break;
            }
        }
    }

    // Cauchy matrix over 2t distinct sampled points.
    std::vector<FieldElement> xs(t), ys(t);
    for (;;) {
        for (unsigned i = 0; i < t; ++i) xs[i] = field->reduce_u256(grain.random_bits(n));
        for (unsigned i = 0; i < t; ++i) ys[i] = field->reduce_u256(grain.random_bits(n));
        bool distinct = true;
        std::vector<FieldElement> all;
        all.insert(all.end(), xs.begin(), xs.end());
        all.insert(all.end(), ys.begin(), ys.end());
        for (std::size_t i = 0; i < all.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                if (all[i] == all[j]) {
                    distinct = false;
                    break;
                }
        if (distinct) break;
    }
    p.mds.assign(t, std::vector<FieldElement>(t));
    for (unsigned i = 0; i < t; ++i)
        for (unsigned j = 0; j < t; ++j) p.mds[i][j] = field->inv(field->add(xs[i], ys[j]));
    return p;
}

const SpongeParams& SpongeParams::bn254_t5() {
    static const SpongeParams p = derive(Field::default_field_shared(), 5, 8, 60);
    return p;
}

const SpongeParams& SpongeParams::bn254_t3() {
    static const SpongeParams p = derive(Field::default_field_shared(), 3, 8, 57);
    return p;
}

void SpongeParams::save(const std::string& path) const {
    nlohmann::json j;
    j["version"] = 1;
    j["prime"] = limb::to_hex(field->prime());
    j["t"] = t;
    j["full_rounds"] = full_rounds;
    j["partial_rounds"] = partial_rounds;
    j["alpha"] = 5;
    std::vector<std::string> cs;
    for (const auto& c : round_constants) cs.push_back(limb::to_hex(c.v));
    j["round_constants"] = cs;
    std::vector<std::vector<std::string>> m;
    for (const auto& row : mds) {
        std::vector<std::string> r;
        for (const auto& c : row) r.push_back(limb::to_hex(c.v));
        m.push_back(r);
    }
    j["mds"] = m;
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(checksum()));
    j["checksum"] = buf;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write parameter file " + path);
    out << j.dump(1) << "\n";
}

SpongeParams SpongeParams::load(const std::string& path, std::shared_ptr<const Field> field) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file " + path);
    nlohmann::json j;
    in >> j;
    if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported parameter file version");
    SpongeParams p;
    p.field = field;
    if (limb::from_hex<4>(j.at("prime").get<std::string>()) != field->prime())
        throw std::runtime_error("parameter file prime does not match the field");
    p.t = j.at("t").get<unsigned>();
    p.full_rounds = j.at("full_rounds").get<unsigned>();
    p.partial_rounds = j.at("partial_rounds").get<unsigned>();
    for (const auto& c : j.at("round_constants"))
        p.round_constants.push_back(FieldElement{limb::from_hex<4>(c.get<std::string>())});
    for (const auto& row : j.at("mds")) {
        std::vector<FieldElement> r;
        for (const auto& c : row) r.push_back(FieldElement{limb::from_hex<4>(c.get<std::string>())});
        p.mds.push_back(std::move(r));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(p.checksum()));
    if (j.at("checksum").get<std::string>() != buf) throw std::runtime_error("parameter file checksum mismatch");
    return p;
}

void poseidon_permute(const SpongeParams& p, std::vector<FieldElement>& state) {
    const Field& f = *p.field;
    const unsigned half = p.full_rounds / 2;
    const unsigned total = p.full_rounds + p.partial_rounds;
    std::vector<FieldElement> mixed(p.t);
    for (unsigned r = 0; r < total; ++r) {
        for (unsigned i = 0; i < p.t; ++i) state[i] = f.add(state[i], p.round_constants[r * p.t + i]);
        const bool full = r < half || r >= half + p.partial_rounds;
        if (full) {
            for (unsigned i = 0; i < p.t; ++i) state[i] = sbox5(f, state[i]);
        } else {
            state[0] = sbox5(f, state[0]);
        }
        for (unsigned i = 0; i < p.t; ++i) {
            FieldElement acc{};
            for (unsigned j = 0; j < p.t; ++j) acc = f.add(acc, f.mul(p.mds[i][j], state[j]));
            mixed[i] = acc;
        }
        std::swap(state, mixed);
    }
}

FieldElement poseidon_hash_fixed(const SpongeParams& p, std::span<const FieldElement> inputs) {
    if (inputs.size() > p.t - 1) throw std::invalid_argument("too many inputs for a fixed poseidon hash");
    std::vector<FieldElement> state(p.t);
    for (std::size_t i = 0; i < inputs.size(); ++i) state[1 + i] = inputs[i];
    poseidon_permute(p, state);
    return state[0];
}

std::vector<FieldElement> sponge_hash_many(const SpongeParams& p, std::span<const FieldElement> message,
                                           unsigned count) {
    const Field& f = *p.field;
    const unsigned rate = p.rate();
    std::vector<FieldElement> state(p.t);
    state[0] = f.from_u64(message.size());
    const std::size_t chunks = std::max<std::size_t>(1, (message.size() + rate - 1) / rate);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (unsigned i = 0; i < rate; ++i) {
            std::size_t idx = c * rate + i;
            if (idx < message.size()) state[1 + i] = f.add(state[1 + i], message[idx]);
        }
        poseidon_permute(p, state);
    }
    std::vector<FieldElement> out;
    out.reserve(count);
    for (;;) {
        for (unsigned i = 0; i < rate && out.size() < count; ++i) out.push_back(state[1 + i]);
        if (out.size() >= count) return out;
        poseidon_permute(p, state);
    }
}

FieldElement sponge_hash(const SpongeParams& p, std::span<const FieldElement> message) {
    return sponge_hash_many(p, message, 1)[0];
}

Commitment commit(const SpongeParams& p, std::span<const FieldElement> message, const FieldElement& randomness) {
    std::vector<FieldElement> buf;
    buf.reserve(message.size() + 1);
    buf.push_back(randomness);
    buf.insert(buf.end(), message.begin(), message.end());
    return Commitment{sponge_hash(p, buf)};
}

namespace {

Lc synth_sbox5(Synth& syn, const Lc& x) {
    const Field& f = syn.f();
    VarId x2 = syn.alloc("pose.x2", [&] { return f.square(syn.value(x)); });
    syn.cs().enforce(x, x, syn.lc(x2));
    VarId x4 = syn.alloc("pose.x4", [&] { return f.square(syn.value(syn.lc(x2))); });
    syn.cs().enforce(syn.lc(x2), syn.lc(x2), syn.lc(x4));
    VarId x5 = syn.alloc("pose.x5", [&] { return f.mul(syn.value(syn.lc(x4)), syn.value(x)); });
    syn.cs().enforce(syn.lc(x4), x, syn.lc(x5));
    return syn.lc(x5);
}

}  // namespace

std::vector<Lc> synth_poseidon_permute(Synth& syn, const SpongeParams& p, std::vector<Lc> state) {
    const Field& f = syn.f();
    const unsigned half = p.full_rounds / 2;
    const unsigned total = p.full_rounds + p.partial_rounds;
    for (unsigned r = 0; r < total; ++r) {
        for (unsigned i = 0; i < p.t; ++i) state[i] += Lc::constant(f, p.round_constants[r * p.t + i]);
        const bool full = r < half || r >= half + p.partial_rounds;
        if (full) {
            for (unsigned i = 0; i < p.t; ++i) state[i] = synth_sbox5(syn, state[i]);
        } else {
            // materialize the S-box input so combinations stay short across
            // the long partial-round stretch
            VarId in = syn.alloc("pose.pin", [&] { return syn.value(state[0]); });
            syn.cs().enforce_linear(state[0], syn.lc(in));
            state[0] = synth_sbox5(syn, syn.lc(in));
        }
        std::vector<Lc> mixed(p.t);
        for (unsigned i = 0; i < p.t; ++i) {
            std::vector<std::pair<const Lc*, FieldElement>> parts;
            parts.reserve(p.t);
            for (unsigned j = 0; j < p.t; ++j) parts.emplace_back(&state[j], p.mds[i][j]);
            mixed[i] = Lc::weighted_sum(f, parts);
        }
        state = std::move(mixed);
    }
    return state;
}

Lc synth_sponge_hash(Synth& syn, const SpongeParams& p, std::span<const Lc> message) {
    const Field& f = syn.f();
    const unsigned rate = p.rate();
    std::vector<Lc> state(p.t, Lc(f));
    state[0] = Lc::constant_u64(f, message.size());
    const std::size_t chunks = std::max<std::size_t>(1, (message.size() + rate - 1) / rate);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (unsigned i = 0; i < rate; ++i) {
            std::size_t idx = c * rate + i;
            if (idx < message.size()) state[1 + i] += message[idx];
        }
        state = synth_poseidon_permute(syn, p, std::move(state));
    }
    return state[1];
}

void synth_open(Synth& syn, const SpongeParams& p, const Lc& commitment, std::span<const Lc> message,
                const Lc& randomness) {
    std::vector<Lc> buf;
    buf.reserve(message.size() + 1);
    buf.push_back(randomness);
    buf.insert(buf.end(), message.begin(), message.end());
    Lc digest = synth_sponge_hash(syn, p, buf);
    syn.cs().enforce_linear(digest, commitment);
}

FieldElement SpongePrg::next() {
    const Field& f = *p_.field;
    std::array<FieldElement, 2> msg{f.from_u64(seed_), f.from_u64(counter_++)};
    return sponge_hash(p_, msg);
}

}  // namespace zkti
