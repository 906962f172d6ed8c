// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#include "zkti/serialize.hpp"

#include <cstring>
#include <fstream>

namespace zkti {

namespace {

constexpr char kMagic[4] = {'z', 'k', 'b', '1'};
constexpr std::uint16_t kVersion = 1;

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_fe(std::vector<std::uint8_t>& out, const FieldElement& fe) {
    // 32 bytes big-endian
    for (std::size_t limb = 4; limb-- > 0;)
        for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(fe.v[limb] >> (8 * b)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        auto b = take(4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    FieldElement fe() {
        auto b = take(32);
        FieldElement out{};
        for (std::size_t limb = 4; limb-- > 0;)
            for (int i = 0; i < 8; ++i) out.v[limb] = (out.v[limb] << 8) | b[(3 - limb) * 8 + i];
        return out;
    }
    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw BundleFormatError("truncated", "bundle ends mid-section");
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

FieldElement checksum_of(const SpongeParams& sponge, std::span<const std::uint8_t> bytes) {
    // absorb as 31-byte little-endian chunks, always below the modulus
    std::vector<FieldElement> msg;
    msg.reserve(bytes.size() / 31 + 1);
    for (std::size_t off = 0; off < bytes.size(); off += 31) {
        U256 v{};
        std::size_t len = std::min<std::size_t>(31, bytes.size() - off);
        for (std::size_t i = 0; i < len; ++i) v[i / 8] |= static_cast<std::uint64_t>(bytes[off + i]) << (8 * (i % 8));
        msg.push_back(FieldElement{v});
    }
    return sponge_hash(sponge, msg);
}

void put_lc(std::vector<std::uint8_t>& out, std::span<const Term> terms) {
    put_u32(out, static_cast<std::uint32_t>(terms.size()));
    for (const Term& t : terms) {
        put_u32(out, t.var);
        put_fe(out, t.coeff);
    }
}

}  // namespace

std::vector<std::uint8_t> export_bundle(const ProofBundle& bundle, bool include_witness) {
    if (!bundle.cs) throw BundleFormatError("empty", "bundle has no constraint system");
    const Field& f = bundle.cs->field();
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, kVersion);
    put_fe(out, FieldElement{f.prime()});
    put_u8(out, static_cast<std::uint8_t>(bundle.w));
    put_u8(out, static_cast<std::uint8_t>(bundle.alg));
    put_u32(out, bundle.n);
    put_u32(out, bundle.m);
    put_u32(out, bundle.l);
    put_u32(out, bundle.iteration);

    put_u32(out, static_cast<std::uint32_t>(bundle.public_inputs.size()));
    for (const FieldElement& fe : bundle.public_inputs) put_fe(out, fe);

    put_u32(out, bundle.cs->num_constraints());
    put_u32(out, bundle.cs->num_witness());
    for (std::uint32_t r = 0; r < bundle.cs->num_constraints(); ++r)
        for (int part = 0; part < 3; ++part) put_lc(out, bundle.cs->lc_span(r, part));

    bool with_witness = include_witness && bundle.witness.has_value();
    put_u8(out, with_witness ? 1 : 0);
    if (with_witness) {
        put_u32(out, static_cast<std::uint32_t>(bundle.witness->assignment.size()));
        for (const FieldElement& fe : bundle.witness->assignment) put_fe(out, fe);
    }

    put_fe(out, checksum_of(SpongeParams::bn254_t5(), out));
    return out;
}

ProofBundle import_bundle(std::span<const std::uint8_t> bytes, const PublicParams& pp) {
    if (bytes.size() < 4 + 2 + 32 + 2 + 16 + 32)
        throw BundleFormatError("truncated", "bundle shorter than the fixed sections");
    // checksum first: everything else assumes intact bytes
    FieldElement stored{};
    {
        Reader tail(bytes.subspan(bytes.size() - 32));
        stored = tail.fe();
    }
    FieldElement computed = checksum_of(*pp.sponge, bytes.first(bytes.size() - 32));
    if (!(stored == computed)) throw BundleFormatError("checksum", "bundle checksum mismatch");

    Reader rd(bytes.first(bytes.size() - 32));
    char magic[4];
    for (char& c : magic) c = static_cast<char>(rd.u8());
    if (std::memcmp(magic, kMagic, 4) != 0) throw BundleFormatError("magic", "not a zkb1 container");
    if (rd.u16() != kVersion) throw BundleFormatError("version", "unsupported container version");
    FieldElement prime = rd.fe();
    if (!(prime.v == pp.field->prime())) throw BundleFormatError("prime", "bundle field disagrees");

    ProofBundle bundle;
    bundle.w = rd.u8();
    bundle.alg = static_cast<Algorithm>(rd.u8());
    if (bundle.alg != Algorithm::mv && bundle.alg != Algorithm::crh && bundle.alg != Algorithm::zc)
        throw BundleFormatError("alg", "unknown algorithm tag");
    bundle.n = rd.u32();
    bundle.m = rd.u32();
    bundle.l = rd.u32();
    bundle.iteration = rd.u32();

    std::uint32_t npub = rd.u32();
    bundle.public_inputs.reserve(npub);
    for (std::uint32_t i = 0; i < npub; ++i) bundle.public_inputs.push_back(rd.fe());

    std::uint32_t nconstraints = rd.u32();
    std::uint32_t nwitness = rd.u32();
    auto cs = std::make_shared<ConstraintSystem>(pp.field);
    for (std::uint32_t i = 0; i < npub; ++i) cs->alloc_public();
    for (std::uint32_t i = 0; i < nwitness; ++i) cs->alloc_witness();
    const Field& f = *pp.field;
    for (std::uint32_t r = 0; r < nconstraints; ++r) {
        Lc parts[3] = {Lc(f), Lc(f), Lc(f)};
        for (auto& lc : parts) {
            std::uint32_t nterms = rd.u32();
            std::uint32_t prev_var = 0;
            bool first = true;
            for (std::uint32_t t = 0; t < nterms; ++t) {
                std::uint32_t var = rd.u32();
                FieldElement coeff = rd.fe();
                if (!first && var <= prev_var)
                    throw BundleFormatError("lc-order", "linear combination terms not strictly sorted");
                if (f.is_zero(coeff)) throw BundleFormatError("lc-zero", "zero coefficient in container");
                lc.add_term(var, coeff);
                prev_var = var;
                first = false;
            }
        }
        cs->enforce(parts[0], parts[1], parts[2]);
    }
    bundle.cs = cs;

    if (rd.u8() == 1) {
        std::uint32_t count = rd.u32();
        Witness w;
        w.assignment.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) w.assignment.push_back(rd.fe());
        bundle.witness = std::move(w);
    }
    if (rd.remaining() != 0) throw BundleFormatError("trailing", "unexpected bytes after the witness section");

    bundle.layout_digest = bundle.layout().digest(*pp.sponge);
    return bundle;
}

void write_bundle_file(const std::string& path, const ProofBundle& bundle, bool include_witness) {
    std::vector<std::uint8_t> bytes = export_bundle(bundle, include_witness);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bundle file " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ProofBundle read_bundle_file(const std::string& path, const PublicParams& pp) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open bundle file " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return import_bundle(bytes, pp);
}

}  // namespace zkti
