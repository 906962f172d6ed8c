// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/ti_oracle.hpp"

using namespace zkti;
using zkti::testing::accumulated_bound;
using zkti::testing::BigRat;
using zkti::testing::exact_value;
using zkti::testing::Rng;
using zkti::testing::within_bound;

namespace {

constexpr unsigned W = 23;

AnswerMatrix from_rows(const std::vector<std::vector<std::uint32_t>>& worker_rows, std::uint32_t l) {
    std::vector<AnswerMatrix::Entry> entries;
    std::uint32_t m = static_cast<std::uint32_t>(worker_rows.size());
    std::uint32_t n = static_cast<std::uint32_t>(worker_rows[0].size());
    for (std::uint32_t j = 0; j < m; ++j)
        for (std::uint32_t i = 0; i < n; ++i) entries.push_back({i, j, worker_rows[j][i]});
    return AnswerMatrix(n, m, l, std::move(entries));
}

AnswerMatrix random_matrix(Rng& rng, std::uint32_t n, std::uint32_t m, std::uint32_t l) {
    std::vector<AnswerMatrix::Entry> entries;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < m; ++j)
            entries.push_back({i, j, static_cast<std::uint32_t>(rng.below(l))});
    return AnswerMatrix(n, m, l, std::move(entries));
}

}  // namespace

TEST_CASE("answer matrix validation") {
    CHECK_THROWS(AnswerMatrix(2, 2, 1, {}));
    CHECK_THROWS(AnswerMatrix(2, 2, 2, {{0, 0, 0}}));                        // worker 1 silent
    CHECK_THROWS(AnswerMatrix(2, 2, 2, {{0, 0, 3}, {0, 1, 0}}));             // answer out of range
    CHECK_THROWS(AnswerMatrix(2, 2, 2, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}));  // duplicate pair
    AnswerMatrix ok(2, 2, 2, {{0, 0, 0}, {1, 1, 1}});
    CHECK_FALSE(ok.dense());
}

TEST_CASE("mv: spec examples") {
    CHECK(mv_infer(from_rows({{1}, {1}, {0}}, 2)).labels == std::vector<std::uint32_t>{1});
    CHECK(mv_infer(from_rows({{1}, {0}}, 2)).labels == std::vector<std::uint32_t>{0});  // tie -> lowest
    CHECK(mv_infer(from_rows({{2}, {2}, {0}, {1}}, 3)).labels == std::vector<std::uint32_t>{2});
}

TEST_CASE("mv: empty task errors") {
    AnswerMatrix sparse(2, 2, 2, {{0, 0, 1}, {0, 1, 1}});
    CHECK_THROWS_AS(mv_infer(sparse), std::domain_error);
}

TEST_CASE("crh update_truth: three equal workers") {
    AnswerMatrix v = from_rows({{1}, {1}, {0}}, 2);
    std::vector<Float> q(3, Float::encode(1, 2, W));
    TruthState t = crh_update_truth(v, q, W);
    CHECK(within_bound(exact_value(t.soft[0]), BigRat(2) / 3, accumulated_bound(W, 8)));
    CHECK(t.labels[0] == 1);
}

TEST_CASE("crh update_truth: single worker reproduces the answer") {
    AnswerMatrix v = from_rows({{1, 0, 1}}, 2);
    std::vector<Float> q{Float::encode(7, 10, W)};
    TruthState t = crh_update_truth(v, q, W);
    CHECK(t.labels == std::vector<std::uint32_t>{1, 0, 1});
    CHECK(exact_value(t.soft[0]) == 1);
    CHECK(t.soft[1].is_zero);
}

TEST_CASE("crh update_truth: all-zero weights error") {
    AnswerMatrix v = from_rows({{1}, {0}}, 2);
    std::vector<Float> q(2, Float::zero(W));
    CHECK_THROWS_AS(crh_update_truth(v, q, W), std::domain_error);
}

TEST_CASE("crh with uniform weights reproduces mv labels exactly") {
    Rng rng(97);
    for (int trial = 0; trial < 40; ++trial) {
        std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(10));
        std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.below(8));
        std::uint32_t l = 2 + static_cast<std::uint32_t>(rng.below(2));
        AnswerMatrix v = random_matrix(rng, n, m, l);
        std::vector<Float> q(m, Float::encode(1, 2, W));
        TruthState crh = crh_update_truth(v, q, W);
        TruthState mv = mv_infer(v);
        if (l == 2) {
            CHECK(crh.labels == mv.labels);
        } else {
            // for l > 2 the weighted average is not a plurality vote;
            // only the binary case carries the equivalence
        }
    }
}

TEST_CASE("crh update_quality: worked 3x3 example") {
    AnswerMatrix v = from_rows({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}}, 2);
    std::vector<Float> q(3, Float::encode(1, 2, W));
    TruthState t = crh_update_truth(v, q, W);
    CHECK(t.labels == std::vector<std::uint32_t>{1, 1, 1});
    QualityState qs = crh_update_quality(v, t.labels, PriorFactors{}, W);
    for (int j = 0; j < 3; ++j) {
        CHECK(exact_value(qs.ratio[j]) == 3);
        CHECK(qs.q_log[j] == doctest::Approx(std::log(3.0)).epsilon(1e-6));
    }
}

TEST_CASE("crh update_quality: smoothing and the ratio-1 edge") {
    // worker 0 perfect, worker 1 wrong everywhere on 2 tasks
    AnswerMatrix v = from_rows({{1, 1}, {0, 0}}, 2);
    std::vector<std::uint32_t> labels{1, 1};
    QualityState qs = crh_update_quality(v, labels, PriorFactors{}, W);
    CHECK(exact_value(qs.ratio[0]) == 4);  // sum d = 2 over the smoothed 0.5
    CHECK(exact_value(qs.ratio[1]) == 1);  // 2/2, q = 0
    CHECK(qs.q_log[1] == doctest::Approx(0.0));
    CHECK(qs.weight[1].is_zero);
}

TEST_CASE("zc update_truth: two-worker example") {
    AnswerMatrix v = from_rows({{1}, {0}}, 2);
    std::vector<Float> q{Float::encode(8, 10, W), Float::encode(6, 10, W)};
    TruthState t = zc_update_truth(v, q, W);
    CHECK(t.labels[0] == 1);
    CHECK(within_bound(exact_value(t.dist[0][1]), BigRat(8) / 11, accumulated_bound(W, 24)));
    CHECK(within_bound(exact_value(t.dist[0][0]), BigRat(3) / 11, accumulated_bound(W, 24)));
}

TEST_CASE("zc update_truth: single worker posterior equals q") {
    AnswerMatrix v = from_rows({{1}}, 2);
    std::vector<Float> q{Float::encode(8, 10, W)};
    TruthState t = zc_update_truth(v, q, W);
    CHECK(within_bound(exact_value(t.dist[0][1]), BigRat(8) / 10, accumulated_bound(W, 16)));
}

TEST_CASE("zc update_truth: uninformative qualities give a uniform posterior, lowest label") {
    AnswerMatrix v = from_rows({{1}, {0}, {1}}, 2);
    std::vector<Float> q(3, Float::encode(1, 2, W));
    TruthState t = zc_update_truth(v, q, W);
    CHECK(t.labels[0] == 0);
    CHECK(within_bound(exact_value(t.dist[0][0]), BigRat(1) / 2, accumulated_bound(W, 40)));
}

TEST_CASE("zc posterior normalization invariant") {
    Rng rng(101);
    BigRat bound = BigRat(4) * accumulated_bound(W, 60);
    for (int trial = 0; trial < 25; ++trial) {
        std::uint32_t l = 2 + static_cast<std::uint32_t>(rng.below(3));
        AnswerMatrix v = random_matrix(rng, 6, 5, l);
        std::vector<Float> q;
        for (std::uint32_t j = 0; j < 5; ++j) q.push_back(Float::encode(30 + rng.below(60), 100, W));
        TruthState t = zc_update_truth(v, q, W);
        for (std::uint32_t i = 0; i < v.tasks(); ++i) {
            BigRat total = 0;
            for (std::uint32_t k = 0; k < l; ++k) total += exact_value(t.dist[i][k]);
            CHECK(within_bound(total, BigRat(1), bound));
        }
    }
}

TEST_CASE("zc update_quality: posterior mean and clamping") {
    AnswerMatrix v = from_rows({{1}, {0}}, 2);
    std::vector<Float> q{Float::encode(8, 10, W), Float::encode(6, 10, W)};
    TruthState t = zc_update_truth(v, q, W);
    QualityState qs = zc_update_quality(v, t, W);
    CHECK(within_bound(exact_value(qs.weight[0]), BigRat(8) / 11, accumulated_bound(W, 30)));
    CHECK(within_bound(exact_value(qs.weight[1]), BigRat(3) / 11, accumulated_bound(W, 30)));

    // perfectly confident posterior clamps below 1
    TruthState certain;
    certain.dist = {{Float::zero(W), Float::encode(1, 1, W)}};
    certain.labels = {1};
    AnswerMatrix v1 = from_rows({{1}}, 2);
    QualityState clamped = zc_update_quality(v1, certain, W);
    CHECK(clamped.weight[0] == zc_quality_ceil(W));
    CHECK(float_lt(clamped.weight[0], Float::encode(1, 1, W)));
}

TEST_CASE("complement floats add back to exactly one") {
    Rng rng(103);
    Float one = Float::encode(1, 1, W);
    for (int i = 0; i < 2000; ++i) {
        Float q = Float::encode(1 + rng.below(999), 1000, W);
        if (!float_lt(q, one)) continue;
        Float c = complement_float(q, W);
        CHECK(float_add_native(q, c).first == one);
        CHECK(within_bound(exact_value(c), 1 - exact_value(q), BigRat(8) * accumulated_bound(W, 1)));
    }
    CHECK(float_add_native(zc_quality_floor(W), zc_quality_ceil(W)).first == one);
}

TEST_CASE("run_inference: mv is a single pass without qualities") {
    AnswerMatrix v = from_rows({{1, 0}, {1, 1}}, 2);
    InferenceResult r = run_inference(Algorithm::mv, v, PriorFactors{}, W);
    CHECK(r.iterations == 1);
    CHECK(r.quality.weight.empty());
    CHECK(r.truth.labels == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("run_inference: crh on the 3x3 example stabilizes at all-ones") {
    AnswerMatrix v = from_rows({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}}, 2);
    InferenceResult r = run_inference(Algorithm::crh, v, PriorFactors{}, W);
    CHECK(r.truth.labels == std::vector<std::uint32_t>{1, 1, 1});
    CHECK(r.converged);
    CHECK(r.iterations <= PriorFactors{}.max_iter);
    CHECK(r.trace.size() == r.iterations);
}

TEST_CASE("run_inference: zc follows a planted dominant worker") {
    // worker 0 answers the planted truth on every task; the others are noise
    Rng rng(107);
    const int n = 40, m = 6;
    std::vector<std::uint32_t> planted(n);
    for (auto& t : planted) t = static_cast<std::uint32_t>(rng.below(2));
    std::vector<std::vector<std::uint32_t>> rows(m, std::vector<std::uint32_t>(n));
    rows[0] = planted;
    for (int j = 1; j < m; ++j)
        for (int i = 0; i < n; ++i)
            rows[j][i] = rng.below(4) < 3 ? planted[i] : 1 - planted[i];
    InferenceResult r = run_inference(Algorithm::zc, from_rows(rows, 2), PriorFactors::defaults_for(Algorithm::zc), W);
    CHECK(accuracy(r.truth.labels, planted) >= 0.9);
    // the dominant worker ends with the highest quality
    for (int j = 1; j < m; ++j) CHECK(float_leq(r.quality.weight[j], r.quality.weight[0]));
}

TEST_CASE("run_inference: zc at exactly 0.5 sits on the symmetric fixed point") {
    AnswerMatrix v = from_rows({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}}, 2);
    PriorFactors half;  // q0 = 1/2
    InferenceResult r = run_inference(Algorithm::zc, v, half, W);
    CHECK(r.converged);
    for (const Float& q : r.quality.weight)
        CHECK(exact_value(q) == BigRat(1) / 2);
    // the per-algorithm default escapes it
    InferenceResult r2 = run_inference(Algorithm::zc, v, PriorFactors::defaults_for(Algorithm::zc), W);
    bool moved = false;
    for (const Float& q : r2.quality.weight)
        if (exact_value(q) != BigRat(3) / 5) moved = true;
    CHECK(moved);
}

TEST_CASE("run_inference: full consensus stops instead of degenerating") {
    AnswerMatrix v = from_rows({{1, 0, 1}, {1, 0, 1}}, 2);
    InferenceResult r = run_inference(Algorithm::crh, v, PriorFactors{}, W);
    CHECK(r.converged);
    CHECK(r.truth.labels == std::vector<std::uint32_t>{1, 0, 1});
    for (const Float& ratio : r.quality.ratio) CHECK(ratio.is_zero);
}

TEST_CASE("accuracy: examples and errors") {
    CHECK(accuracy({1, 0, 1}, {1, 0, 1}) == 1.0);
    CHECK(accuracy({1, 0, 1}, {1, 1, 1}) == doctest::Approx(2.0 / 3));
    CHECK_THROWS_AS(accuracy({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("float pipeline tracks the exact-rational oracle within accumulated bounds") {
    Rng rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        AnswerMatrix v = random_matrix(rng, 10, 6, 2);
        std::vector<Float> q;
        for (int j = 0; j < 6; ++j) q.push_back(Float::encode(30 + rng.below(55), 100, W));

        TruthState t = crh_update_truth(v, q, W);
        auto oracle = zkti::testing::crh_truth_oracle(v, q);
        for (std::uint32_t i = 0; i < v.tasks(); ++i) {
            CHECK(within_bound(exact_value(t.soft[i]), oracle.soft[i], accumulated_bound(W, oracle.ops[i])));
            CHECK(t.labels[i] == oracle.labels[i]);
        }

        TruthState tz = zc_update_truth(v, q, W);
        auto zoracle = zkti::testing::zc_truth_oracle(v, q);
        for (std::uint32_t i = 0; i < v.tasks(); ++i) {
            CHECK(tz.labels[i] == zoracle.labels[i]);
            for (std::uint32_t k = 0; k < 2; ++k)
                CHECK(within_bound(exact_value(tz.dist[i][k]), zoracle.dist[i][k],
                                   accumulated_bound(W, zoracle.ops[i])));
        }
    }
}
