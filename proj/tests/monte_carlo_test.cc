// Copyright 2026 qecplan Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qecplan/monte_carlo.h"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "gtest/gtest.h"
#include "qecplan/errors.h"
#include "qecplan/philox.h"
#include "test_util.h"

using namespace qecplan;
using qecplan::fixtures::overlap_parity;
using qecplan::fixtures::syndrome_mask;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const QecError &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a QecError";
    return ErrorCode::Unsupported;
}

// Bounds on the d=3 failure probability that hold for any minimum-weight
// decoder, whatever its tie-breaking. For each syndrome, the lightest pattern
// in each logical class is found by enumeration; an error fails for sure when
// the opposite class is strictly lighter and may fail when both tie.
struct ExactBounds {
    double low = 0.0;
    double high = 0.0;
};

ExactBounds d3_failure_bounds(double p) {
    auto layout = build_layout(3);
    const auto &row = layout.logical_z_support();
    std::map<std::uint32_t, std::array<int, 2>> lightest;
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        auto &w = lightest.try_emplace(syndrome_mask(layout, bits), std::array<int, 2>{100, 100}).first->second;
        int cls = overlap_parity(row, bits);
        w[cls] = std::min(w[cls], __builtin_popcount(bits));
    }
    ExactBounds out;
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        const auto &w = lightest.at(syndrome_mask(layout, bits));
        int cls = overlap_parity(row, bits);
        int k = __builtin_popcount(bits);
        double prob = std::pow(p, k) * std::pow(1 - p, 9 - k);
        if (w[1 - cls] < w[cls]) {
            out.low += prob;
            out.high += prob;
        } else if (w[1 - cls] == w[cls]) {
            out.high += prob;
        }
    }
    return out;
}

}  // namespace

TEST(philox, known_answer_vectors) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
              (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(philox, streams_are_reproducible_and_distinct) {
    ShotStream a(11, 3);
    ShotStream b(11, 3);
    ShotStream c(11, 4);
    ShotStream e(12, 3);
    int same_c = 0;
    int same_e = 0;
    for (int k = 0; k < 64; ++k) {
        auto va = a.next_u64();
        ASSERT_EQ(va, b.next_u64());
        same_c += va == c.next_u64();
        same_e += va == e.next_u64();
    }
    EXPECT_EQ(same_c, 0);
    EXPECT_EQ(same_e, 0);
    EXPECT_NE(derive_seed(1, 3, 0), derive_seed(1, 3, 1));
    EXPECT_NE(derive_seed(1, 3, 0), derive_seed(1, 5, 0));
}

TEST(wilson, matches_closed_form) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        std::uint64_t n = 1 + rng() % 100000;
        std::uint64_t k = rng() % (n + 1);
        auto ci = wilson_interval(k, n);
        double ph = static_cast<double>(k) / n;
        double z = 1.959963984540054;
        double c = (ph + z * z / (2.0 * n)) / (1 + z * z / n);
        double h = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4.0 * n * n));
        EXPECT_NEAR(ci.low, std::max(0.0, c - h), 1e-12);
        EXPECT_NEAR(ci.high, std::min(1.0, c + h), 1e-12);
        EXPECT_LE(ci.low, ph);
        EXPECT_GE(ci.high, ph);
        // Mirror symmetry.
        auto mirror = wilson_interval(n - k, n);
        EXPECT_NEAR(ci.low, 1 - mirror.high, 1e-12);
    }
    EXPECT_EQ(wilson_interval(0, 100).low, 0.0);
    EXPECT_EQ(wilson_interval(100, 100).high, 1.0);
    auto wide = wilson_interval(10, 100);
    auto narrow = wilson_interval(1000, 10000);
    EXPECT_LT(narrow.high - narrow.low, wide.high - wide.low);
}

TEST(exact_d3, values_and_bounds) {
    EXPECT_EQ(exact_logical_error_rate_d3(0.0), 0.0);
    EXPECT_NEAR(exact_logical_error_rate_d3(0.5), 0.5, 1e-15);
    EXPECT_NEAR(exact_logical_error_rate_d3(0.05), 0.036864431937500067, 1e-15);
    for (double p : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
        auto b = d3_failure_bounds(p);
        double exact = exact_logical_error_rate_d3(p);
        EXPECT_GE(exact, b.low - 1e-15) << p;
        EXPECT_LE(exact, b.high + 1e-15) << p;
    }
    // Every single flip is corrected, so the rate is O(p^2).
    EXPECT_LT(exact_logical_error_rate_d3(1e-4), 1e-6);
    EXPECT_GT(exact_logical_error_rate_d3(1e-4), 1e-8);
}

TEST(sampler, noiseless_and_saturated_ends) {
    for (int d : {3, 5, 7, 9, 11, 13}) {
        auto est = sample_logical_error_rate(d, 0.0, 2000, 1);
        EXPECT_EQ(est.failures, 0u);
        EXPECT_EQ(est.point_estimate, 0.0);
        EXPECT_EQ(est.ci_low, 0.0);
        EXPECT_GT(est.ci_high, 0.0);
    }
    auto half = sample_logical_error_rate(3, 0.5, 20000, 9);
    EXPECT_NEAR(half.point_estimate, 0.5, 0.02);
}

TEST(sampler, agrees_with_exact_d3) {
    for (double p : {0.02, 0.05, 0.1}) {
        auto est = sample_logical_error_rate(3, p, 100000, 17);
        auto ci = wilson_interval(est.failures, est.shots, 3.5);
        double exact = exact_logical_error_rate_d3(p);
        EXPECT_LE(ci.low, exact) << p;
        EXPECT_GE(ci.high, exact) << p;
    }
}

TEST(sampler, thread_count_does_not_change_counts) {
    for (int d : {3, 5, 7}) {
        auto one = sample_logical_error_rate(d, 0.06, 20000, 42, 1);
        auto four = sample_logical_error_rate(d, 0.06, 20000, 42, 4);
        auto many = sample_logical_error_rate(d, 0.06, 20000, 42, 7);
        EXPECT_EQ(one, four);
        EXPECT_EQ(one, many);
        EXPECT_EQ(one.seed, 42u);
    }
    auto other = sample_logical_error_rate(5, 0.06, 20000, 43, 1);
    EXPECT_NE(other.failures, sample_logical_error_rate(5, 0.06, 20000, 42, 1).failures);
}

TEST(sampler, distance_suppression_below_threshold) {
    auto d3 = sample_logical_error_rate(3, 0.02, 100000, 5);
    auto d5 = sample_logical_error_rate(5, 0.02, 100000, 5);
    EXPECT_LT(d5.point_estimate, d3.point_estimate);
    EXPECT_LT(d5.ci_high, d3.ci_low);
}

TEST(sampler, saturated_shots_counted_as_failures) {
    auto est = sample_logical_error_rate(13, 0.3, 500, 1);
    EXPECT_GT(est.saturated, 0u);
    EXPECT_GE(est.failures, est.saturated);
    EXPECT_LE(est.failures, est.shots);
}

TEST(sampler, argument_errors) {
    EXPECT_EQ(code_of([] { sample_logical_error_rate(4, 0.01, 10, 1); }), ErrorCode::InvalidDistance);
    EXPECT_EQ(code_of([] { sample_logical_error_rate(15, 0.01, 10, 1); }), ErrorCode::InvalidDistance);
    EXPECT_EQ(code_of([] { sample_logical_error_rate(1, 0.01, 10, 1); }), ErrorCode::InvalidDistance);
    EXPECT_EQ(code_of([] { sample_logical_error_rate(3, -0.01, 10, 1); }), ErrorCode::InvalidProbability);
    EXPECT_EQ(code_of([] { sample_logical_error_rate(3, 0.51, 10, 1); }), ErrorCode::InvalidProbability);
    EXPECT_EQ(code_of([] { sample_logical_error_rate(3, std::nan(""), 10, 1); }), ErrorCode::InvalidProbability);
    EXPECT_THROW(sample_logical_error_rate(3, 0.01, 0, 1), std::invalid_argument);
}

TEST(sweep, dedup_order_and_seeds) {
    auto table = sweep({5, 3, 5}, {0.05, 0.0, 0.05, 0.02}, 3000, 7, 2);
    ASSERT_EQ(table.rows.size(), 6u);
    std::vector<std::pair<int, double>> cells;
    for (const auto &r : table.rows) {
        cells.emplace_back(r.distance, r.p);
        EXPECT_EQ(r.estimate.shots, 3000u);
    }
    EXPECT_EQ(cells, (std::vector<std::pair<int, double>>{{5, 0.05}, {5, 0.0}, {5, 0.02}, {3, 0.05}, {3, 0.0}, {3, 0.02}}));
    EXPECT_EQ(table.rows[1].estimate.failures, 0u);
    EXPECT_EQ(table.rows[0].estimate.seed, derive_seed(7, 5, 0));
    EXPECT_EQ(table.rows[5].estimate.seed, derive_seed(7, 3, 2));
    EXPECT_EQ(table.rows[0].estimate, sample_logical_error_rate(5, 0.05, 3000, derive_seed(7, 5, 0), 1));
    EXPECT_EQ(table, sweep({5, 3}, {0.05, 0.0, 0.02}, 3000, 7, 1));
}

TEST(sweep, csv_round_trip) {
    auto table = sweep({3, 5}, {0.0, 0.013, 0.07}, 2000, 3, 1);
    auto csv = sweep_to_csv(table);
    EXPECT_EQ(csv.rfind("#schema=qecplan.sweep/1\n", 0), 0u);
    auto back = sweep_from_csv(csv);
    for (auto &r : table.rows) {
        r.estimate.seed = 0;
    }
    EXPECT_EQ(back, table);
    EXPECT_EQ(sweep_to_csv(back), csv);
}

TEST(sweep, csv_errors_name_the_line) {
    try {
        sweep_from_csv("#schema=qecplan.sweep/1\nd,p,shots,failures,p_l,ci_low,ci_high,saturated\n3,0.1,10,x,0,0,1,0\n");
        FAIL();
    } catch (const QecError &e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedRow);
        EXPECT_EQ(e.row(), 3u);
    }
}
