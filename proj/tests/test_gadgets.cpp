// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracle.hpp"
#include "zkti/gadgets.hpp"

using namespace zkti;
using zkti::testing::Rng;

namespace {

struct Harness {
    std::shared_ptr<const Field> field = Field::default_field_shared();
    ConstraintSystem cs{field};
    Witness w{{field->one()}};
    Synth syn{cs, &w};

    VarId input(std::uint64_t v, const std::string& label = "in") {
        return syn.alloc(label, [&] { return field->from_u64(v); });
    }
    SatResult check() { return cs.is_satisfied({}, w); }
};

}  // namespace

TEST_CASE("bit_decompose: examples and gate count") {
    Harness h;
    VarId v = h.input(13);
    BitVector bits = bit_decompose(h.syn, h.syn.lc(v), 4);
    CHECK(h.cs.num_constraints() == 5);  // w+1
    CHECK(h.check().ok);
    std::vector<std::uint64_t> got;
    for (VarId b : bits.bits) got.push_back(h.w[b.index].v[0]);
    CHECK(got == std::vector<std::uint64_t>{1, 0, 1, 1});

    Harness hz;
    VarId z = hz.input(0);
    BitVector zbits = bit_decompose(hz.syn, hz.syn.lc(z), 4);
    CHECK(hz.check().ok);
    for (VarId b : zbits.bits) CHECK(hz.w[b.index] == hz.field->zero());
}

TEST_CASE("bit_decompose: w=23 costs 24 gates") {
    Harness h;
    VarId v = h.input(12345);
    bit_decompose(h.syn, h.syn.lc(v), 23);
    CHECK(h.cs.num_constraints() == 24);
}

TEST_CASE("bit_decompose: oversized value is a witness-generation error") {
    Harness h;
    VarId v = h.input(16);
    CHECK_THROWS_AS(bit_decompose(h.syn, h.syn.lc(v), 4), std::range_error);
}

TEST_CASE("bit_decompose: lenient mode rejects via is_satisfied instead") {
    Harness h;
    h.syn.set_lenient(true);
    VarId v = h.input(16);
    bit_decompose(h.syn, h.syn.lc(v), 4);
    CHECK_FALSE(h.check().ok);
}

TEST_CASE("bit_decompose: any flipped bit violates a constraint (exhaustive w<=6)") {
    for (unsigned w = 1; w <= 6; ++w) {
        for (std::uint64_t v = 0; v < (1ull << w); ++v) {
            Harness h;
            VarId in = h.input(v);
            BitVector bits = bit_decompose(h.syn, h.syn.lc(in), w);
            REQUIRE(h.check().ok);
            for (unsigned i = 0; i < w; ++i) {
                Witness tampered = h.w;
                auto& slot = tampered[bits.bits[i].index];
                slot = h.field->sub(h.field->one(), slot);
                CHECK_FALSE(h.cs.is_satisfied({}, tampered).ok);
            }
        }
    }
}

TEST_CASE("compare: hand examples at w=8") {
    auto result = [](std::uint64_t a, std::uint64_t b) {
        Harness h;
        VarId va = h.input(a), vb = h.input(b);
        VarId bit = compare_leq(h.syn, h.syn.lc(va), h.syn.lc(vb), 8);
        REQUIRE(h.check().ok);
        return h.w[bit.index].v[0];
    };
    CHECK(result(3, 5) == 1);   // m = 258, MSB set
    CHECK(result(5, 3) == 0);   // m = 254
    CHECK(result(7, 7) == 1);   // m = 2^8, inclusive boundary
    CHECK(result(0, 255) == 1);
    CHECK(result(255, 0) == 0);
}

TEST_CASE("compare: gate count is width+2") {
    Harness h;
    VarId a = h.input(1), b = h.input(2);
    compare_leq(h.syn, h.syn.lc(a), h.syn.lc(b), 8);
    CHECK(h.cs.num_constraints() == 10);
}

TEST_CASE("compare: exhaustive at width 4") {
    for (std::uint64_t a = 0; a < 16; ++a) {
        for (std::uint64_t b = 0; b < 16; ++b) {
            Harness h;
            VarId va = h.input(a), vb = h.input(b);
            VarId bit = compare_leq(h.syn, h.syn.lc(va), h.syn.lc(vb), 4);
            REQUIRE(h.check().ok);
            CHECK(h.w[bit.index].v[0] == (a <= b ? 1u : 0u));
        }
    }
}

TEST_CASE("exponential_check: chain example a=5 -> 32") {
    Harness h;
    VarId a = h.input(5), b = h.input(32);
    exponential_check(h.syn, h.syn.lc(a), h.syn.lc(b), 3);
    CHECK(h.cs.num_constraints() == 8);  // 2K+2, within the 3K+2 budget
    CHECK(h.check().ok);
}

TEST_CASE("exponential_check: a=0 -> 1 and a negative case") {
    {
        Harness h;
        VarId a = h.input(0), b = h.input(1);
        exponential_check(h.syn, h.syn.lc(a), h.syn.lc(b), 6);
        CHECK(h.check().ok);
    }
    {
        Harness h;
        VarId a = h.input(5), b = h.input(31);
        exponential_check(h.syn, h.syn.lc(a), h.syn.lc(b), 6);
        CHECK_FALSE(h.check().ok);
    }
}

TEST_CASE("exponential_check: exhaustive a < 32") {
    for (std::uint64_t a = 0; a < 32; ++a) {
        Harness h;
        VarId va = h.input(a), vb = h.input(1ull << a);
        exponential_check(h.syn, h.syn.lc(va), h.syn.lc(vb), 5);
        CHECK(h.check().ok);
        // wrong claims reject
        for (std::int64_t off : {-1, +1}) {
            Harness bad;
            std::uint64_t claim = (1ull << a) + static_cast<std::uint64_t>(off);
            VarId wa = bad.input(a), wb = bad.input(claim);
            exponential_check(bad.syn, bad.syn.lc(wa), bad.syn.lc(wb), 5);
            CHECK_FALSE(bad.check().ok);
        }
    }
}

namespace {

SatResult run_permutation(const std::array<std::array<std::uint64_t, 2>, 2>& in,
                          const std::array<std::array<std::uint64_t, 2>, 2>& claimed, Rng& rng,
                          std::uint32_t* gates = nullptr) {
    Harness h;
    auto mk = [&](std::uint64_t a, std::uint64_t b) {
        return std::pair{h.syn.lc(h.input(a)), h.syn.lc(h.input(b))};
    };
    std::array<std::pair<Lc, Lc>, 2> input_pairs{mk(in[0][0], in[0][1]), mk(in[1][0], in[1][1])};
    std::array<std::pair<Lc, Lc>, 2> claimed_pairs{mk(claimed[0][0], claimed[0][1]),
                                                   mk(claimed[1][0], claimed[1][1])};
    Lc r = Lc::constant(*h.field, rng.field_element(*h.field));
    Lc z = Lc::constant(*h.field, rng.field_element(*h.field));
    std::uint32_t before = h.cs.num_constraints();
    permutation_check(h.syn, input_pairs, claimed_pairs, r, z);
    if (gates) *gates = h.cs.num_constraints() - before;
    return h.check();
}

}  // namespace

TEST_CASE("permutation_check: identity, transposition, and a mismatch") {
    Rng rng(23);
    std::uint32_t gates = 0;
    CHECK(run_permutation({{{1, 2}, {3, 4}}}, {{{1, 2}, {3, 4}}}, rng, &gates).ok);
    CHECK(gates == 6);
    CHECK(run_permutation({{{1, 2}, {3, 4}}}, {{{3, 4}, {1, 2}}}, rng).ok);
    CHECK_FALSE(run_permutation({{{1, 2}, {3, 4}}}, {{{1, 2}, {3, 5}}}, rng).ok);
}

TEST_CASE("permutation_check: 1e3 random non-permutations all reject") {
    Rng rng(29);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        std::array<std::array<std::uint64_t, 2>, 2> in{
            {{rng.below(1000), rng.below(1000)}, {rng.below(1000), rng.below(1000)}}};
        auto claimed = in;
        // perturb one slot so it is no longer a pair permutation
        claimed[rng.below(2)][rng.below(2)] += 1 + rng.below(50);
        if (run_permutation(in, claimed, rng).ok) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("is_zero and select") {
    Harness h;
    VarId x = h.input(0), y = h.input(9);
    VarId zx = is_zero_gadget(h.syn, h.syn.lc(x));
    VarId zy = is_zero_gadget(h.syn, h.syn.lc(y));
    Lc sel = select(h.syn, h.syn.lc(zx), h.syn.lc(y), h.syn.lc(x));
    REQUIRE(h.check().ok);
    CHECK(h.w[zx.index] == h.field->one());
    CHECK(h.w[zy.index] == h.field->zero());
    CHECK(h.syn.value(sel) == h.field->from_u64(9));
}
