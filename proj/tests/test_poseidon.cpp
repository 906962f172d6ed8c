// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <set>

#include "support/oracle.hpp"
#include "zkti/poseidon.hpp"

using namespace zkti;
using zkti::testing::Rng;

#ifndef ZKTI_PARAMS_DIR
#define ZKTI_PARAMS_DIR "params"
#endif

namespace {

std::shared_ptr<const Field> F() { return Field::default_field_shared(); }

std::vector<FieldElement> random_message(Rng& rng, const Field& f, std::size_t len) {
    std::vector<FieldElement> msg(len);
    for (auto& m : msg) m = rng.field_element(f);
    return msg;
}

}  // namespace

TEST_CASE("published test vectors of the derived parameter sets") {
    auto f = F();
    // Reference permutation vector for the 254-bit x^5 t=3 instance,
    // state (0, 1, 2).
    std::vector<FieldElement> st{f->zero(), f->from_u64(1), f->from_u64(2)};
    poseidon_permute(SpongeParams::bn254_t3(), st);
    CHECK(limb::to_hex(st[0].v) == "0x115cc0f5e7d690413df64c6b9662e9cf2a3617f2743245519e19607a4417189a");

    // Widely published fixed-input digests (circomlib-compatible).
    std::vector<FieldElement> in3{f->from_u64(1), f->from_u64(2)};
    CHECK(f->to_decimal(poseidon_hash_fixed(SpongeParams::bn254_t3(), in3)) ==
          "7853200120776062878684798364095072458815029376092732009249414926327459813530");
    std::vector<FieldElement> in5{f->from_u64(1), f->from_u64(2), f->from_u64(3), f->from_u64(4)};
    CHECK(f->to_decimal(poseidon_hash_fixed(SpongeParams::bn254_t5(), in5)) ==
          "18821383157269793795438455681495246036402687001665670618754263018637548127333");
}

TEST_CASE("first derived round constants match the published instance") {
    const auto& p3 = SpongeParams::bn254_t3();
    CHECK(limb::to_hex(p3.round_constants[0].v) ==
          "0xee9a592ba9a9518d05986d656f40c2114c4993c11bb29938d21d47304cd8e6e");
    CHECK(limb::to_hex(p3.round_constants[1].v) ==
          "0xf1445235f2148c5986587169fc1bcd887b08d4d00868df5696fff40956e864");
}

TEST_CASE("sponge: determinism and length domain separation") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(61);
    auto msg = random_message(rng, *f, 7);
    CHECK(sponge_hash(p, msg) == sponge_hash(p, msg));

    auto padded = msg;
    padded.push_back(f->zero());
    CHECK_FALSE(sponge_hash(p, msg) == sponge_hash(p, padded));
}

TEST_CASE("commit: deterministic in (m, r), sensitive to r") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(67);
    auto msg = random_message(rng, *f, 10);
    FieldElement r1 = rng.field_element(*f), r2 = rng.field_element(*f);
    CHECK(commit(p, msg, r1) == commit(p, msg, r1));
    CHECK_FALSE(commit(p, msg, r1) == commit(p, msg, r2));
}

TEST_CASE("parameter file: bundled copy equals the derivation, checksum guards edits") {
    auto f = F();
    const auto& derived = SpongeParams::bn254_t5();
    SpongeParams loaded = SpongeParams::load(std::string(ZKTI_PARAMS_DIR) + "/poseidon_bn254_t5.json", f);
    CHECK(loaded.checksum() == derived.checksum());
    CHECK(loaded.round_constants == derived.round_constants);
    CHECK(loaded.mds == derived.mds);

    // round-trip through a temp file, then corrupt one constant
    std::string tmp = "/tmp/zkti_params_test.json";
    derived.save(tmp);
    CHECK(SpongeParams::load(tmp, f).checksum() == derived.checksum());
    SpongeParams bad = derived;
    bad.round_constants[3] = f->from_u64(42);
    bad.save(tmp);
    SpongeParams reloaded = SpongeParams::load(tmp, f);  // file is self-consistent
    CHECK(reloaded.checksum() != derived.checksum());
    std::remove(tmp.c_str());
}

TEST_CASE("native and in-circuit permutation agree on random states") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(71);
    for (int i = 0; i < 50; ++i) {
        std::vector<FieldElement> st = random_message(rng, *f, p.t);
        ConstraintSystem cs(f);
        Witness w{{f->one()}};
        Synth syn(cs, &w);
        std::vector<Lc> lcs;
        for (const auto& v : st) {
            VarId x = syn.alloc("in", [&] { return v; });
            lcs.push_back(syn.lc(x));
        }
        std::vector<Lc> out = synth_poseidon_permute(syn, p, lcs);
        REQUIRE(cs.is_satisfied({}, w).ok);
        std::vector<FieldElement> native = st;
        poseidon_permute(p, native);
        for (unsigned j = 0; j < p.t; ++j) CHECK(syn.value(out[j]) == native[j]);
    }
}

TEST_CASE("in-circuit sponge equals the native digest, 1e3 random messages") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(73);
    for (int i = 0; i < 1000; ++i) {
        auto msg = random_message(rng, *f, 1 + rng.below(6));
        ConstraintSystem cs(f);
        Witness w{{f->one()}};
        Synth syn(cs, &w);
        std::vector<Lc> lcs;
        for (const auto& v : msg) {
            VarId x = syn.alloc("m", [&] { return v; });
            lcs.push_back(syn.lc(x));
        }
        Lc digest = synth_sponge_hash(syn, p, lcs);
        REQUIRE(cs.is_satisfied({}, w).ok);
        CHECK(syn.value(digest) == sponge_hash(p, msg));
    }
}

TEST_CASE("synth_open: honest opening satisfies, any flipped element rejects") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(79);
    auto msg = random_message(rng, *f, 9);
    FieldElement r = rng.field_element(*f);
    Commitment com = commit(p, msg, r);

    auto build = [&](bool flip) {
        ConstraintSystem cs(f);
        Witness w{{f->one()}};
        Synth syn(cs, &w);
        VarId compub = syn.alloc_public("com", com.digest);
        std::vector<Lc> lcs;
        for (std::size_t i = 0; i < msg.size(); ++i) {
            FieldElement v = msg[i];
            if (flip && i == 4) v = f->add(v, f->one());
            VarId x = syn.alloc("m", [&] { return v; });
            lcs.push_back(syn.lc(x));
        }
        VarId rv = syn.alloc("r", [&] { return r; });
        synth_open(syn, p, syn.lc(compub), lcs, syn.lc(rv));
        return cs.is_satisfied({com.digest}, w).ok;
    };
    CHECK(build(false));
    CHECK_FALSE(build(true));
}

TEST_CASE("gate budget: opening a 100-element message") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(83);
    auto msg = random_message(rng, *f, 100);
    FieldElement r = rng.field_element(*f);
    Commitment com = commit(p, msg, r);
    ConstraintSystem cs(f);
    Witness w{{f->one()}};
    Synth syn(cs, &w);
    VarId compub = syn.alloc_public("com", com.digest);
    std::vector<Lc> lcs;
    for (const auto& v : msg) {
        VarId x = syn.alloc("m", [&] { return v; });
        lcs.push_back(syn.lc(x));
    }
    VarId rv = syn.alloc("r", [&] { return r; });
    synth_open(syn, p, syn.lc(compub), lcs, syn.lc(rv));
    CHECK(cs.is_satisfied({com.digest}, w).ok);
    CHECK(cs.num_constraints() <= 25000);
    // 26 permutations at 360 gates each, plus the digest pin
    CHECK(cs.num_constraints() == 26 * 360 + 1);
}

TEST_CASE("binding at test level: no collisions over random message pairs") {
    auto f = F();
    const auto& p = SpongeParams::bn254_t5();
    Rng rng(89);
    std::set<std::string> seen;
    int n = 20000;  // the acceptance suite runs the full 1e5 sweep
    for (int i = 0; i < n; ++i) {
        auto msg = random_message(rng, *f, 4);
        auto [it, fresh] = seen.insert(limb::to_hex(sponge_hash(p, msg).v));
        CHECK(fresh);
    }
}

TEST_CASE("seeded randomness stream is deterministic and non-repeating") {
    const auto& p = SpongeParams::bn254_t5();
    SpongePrg a(p, 12345), b(p, 12345), c(p, 54321);
    FieldElement a1 = a.next(), a2 = a.next();
    CHECK(b.next() == a1);
    CHECK(b.next() == a2);
    CHECK_FALSE(a1 == a2);
    CHECK_FALSE(c.next() == a1);
}
