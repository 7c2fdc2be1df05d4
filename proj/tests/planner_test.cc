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

#include "qecplan/planner.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "gtest/gtest.h"
#include "json.hpp"
#include "qecplan/errors.h"
#include "test_util.h"

using namespace qecplan;
using qecplan::fixtures::split_fleet;

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

CalibrationSnapshot snapshot_of(const std::vector<std::pair<std::size_t, double>> &qubits,
                                const std::string &date = "2024-05-01") {
    CalibrationSnapshot s;
    s.device_name = "dev";
    s.date = parse_date(date);
    for (auto [q, p] : qubits) {
        s.qubits.push_back({q, p});
    }
    std::sort(s.qubits.begin(), s.qubits.end(),
              [](const QubitRecord &a, const QubitRecord &b) { return a.qubit_index < b.qubit_index; });
    return s;
}

std::vector<std::pair<std::size_t, double>> uniform_fleet(double p, std::size_t n = 127) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t q = 0; q < n; ++q) {
        out.emplace_back(q, p);
    }
    return out;
}

const ThresholdTable &reference() {
    static const ThresholdTable table = ThresholdTable::reference_circuit_level();
    return table;
}

AssignmentPolicy policy(int d_max) {
    AssignmentPolicy p;
    p.d_max = d_max;
    return p;
}

}  // namespace

TEST(plan_day, uniform_fleet_all_distance_seven) {
    auto plan = plan_day(snapshot_of(uniform_fleet(5e-4)), policy(9), reference());
    EXPECT_EQ(plan.usable_count, 127u);
    EXPECT_EQ(plan.total_count, 127u);
    EXPECT_EQ(plan.usable_fraction(), 1.0);
    EXPECT_EQ(plan.total_physical_qubits, 127 * 49);
    EXPECT_EQ(plan.per_distance_histogram, (std::map<int, std::size_t>{{7, 127}}));
    for (const auto &[q, a] : plan.assignments) {
        EXPECT_EQ(a.decision, DistanceDecision::assign(7));
        EXPECT_EQ(a.cost, 49);
    }
}

TEST(plan_day, usable_count_matches_fixture) {
    auto fleet = split_fleet(108, 1e-3, 2e-2, 11);
    std::size_t recount = 0;
    for (auto [q, p] : fleet) {
        recount += p <= 1e-3;
    }
    ASSERT_EQ(recount, 108u);
    auto plan = plan_day(snapshot_of(fleet), policy(9), reference());
    EXPECT_EQ(plan.usable_count, 108u);
    EXPECT_NEAR(plan.usable_fraction(), 0.85, 0.005);
}

TEST(plan_day, empty_snapshot) {
    EXPECT_EQ(code_of([] { plan_day(snapshot_of({}), policy(9), reference()); }), ErrorCode::EmptySnapshot);
}

TEST(plan_day, ordering_and_reasons) {
    auto plan = plan_day(snapshot_of({{0, 1.5e-3}, {1, 0.0}, {2, 9e-3}, {3, 8e-4}, {4, 8e-4}}), policy(9), reference());
    EXPECT_EQ(plan.order_by_error, (std::vector<std::size_t>{1, 3, 4, 0, 2}));
    EXPECT_EQ(plan.assignments.at(1).p_used, kMinPhysicalError);
    EXPECT_EQ(plan.assignments.at(1).decision, DistanceDecision::assign(7));
    EXPECT_EQ(plan.assignments.at(0).decision, DistanceDecision::exclude(ExclusionReason::ExceedsMaxDistance));
    EXPECT_EQ(plan.assignments.at(2).decision, DistanceDecision::exclude(ExclusionReason::AboveCutoff));
    EXPECT_EQ(plan.assignments.at(0).cost, 0);
    EXPECT_EQ(plan.per_distance_histogram, (std::map<int, std::size_t>{{7, 1}, {9, 2}}));
}

TEST(plan_day, invariants_on_random_fleets) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> log_p(std::log(1e-5), std::log(0.3));
    for (int t = 0; t < 200; ++t) {
        std::vector<std::pair<std::size_t, double>> fleet;
        std::size_t n = 1 + rng() % 150;
        for (std::size_t q = 0; q < n; ++q) {
            fleet.emplace_back(q, rng() % 20 == 0 ? 0.0 : std::exp(log_p(rng)));
        }
        auto snap = snapshot_of(fleet);
        AssignmentPolicy pol = policy(3 + 2 * static_cast<int>(rng() % 6));
        pol.accounting = t % 2 ? CostAccounting::DataOnly : CostAccounting::WithAncilla;
        ThresholdSource src;
        if (t % 3 == 0) {
            src = LogicalErrorModel{0.05, 0.03};
        } else {
            src = reference();
        }
        if (t % 3 != 0 && pol.d_max < 7) {
            EXPECT_EQ(code_of([&] { plan_day(snap, pol, src); }), ErrorCode::EmptyTable);
            continue;
        }
        auto plan = plan_day(snap, pol, src);
        ASSERT_EQ(plan, plan_day(snap, pol, src));

        std::size_t assigned = 0;
        long cost = 0;
        std::size_t hist_total = 0;
        long hist_cost = 0;
        for (const auto &[q, a] : plan.assignments) {
            auto expect = required_distance(src, a.p, pol.target_logical_error, pol.d_max);
            ASSERT_EQ(a.decision, expect);
            if (a.decision.assigned) {
                ++assigned;
                ASSERT_EQ(a.decision.distance % 2, 1);
                ASSERT_LE(a.decision.distance, pol.d_max);
                cost += physical_qubit_cost(a.decision.distance, LayoutKind::Rotated, pol.accounting);
            }
        }
        for (auto [d, count] : plan.per_distance_histogram) {
            hist_total += count;
            long per = pol.accounting == CostAccounting::DataOnly ? d * d : 2 * d * d - 1;
            hist_cost += per * static_cast<long>(count);
        }
        ASSERT_EQ(plan.usable_count, assigned);
        ASSERT_EQ(hist_total, assigned);
        ASSERT_EQ(plan.total_physical_qubits, cost);
        ASSERT_EQ(plan.total_physical_qubits, hist_cost);
        ASSERT_EQ(plan.total_count, n);
        ASSERT_EQ(plan.order_by_error.size(), n);
    }
}

TEST(usable_fraction, edges_and_fixture) {
    EXPECT_EQ(usable_fraction(snapshot_of(uniform_fleet(0.0)), 9, reference()), 1.0);
    EXPECT_EQ(usable_fraction(snapshot_of(uniform_fleet(0.5)), 9, reference()), 0.0);
    auto fleet = split_fleet(98, 1e-3, 5e-3, 12);
    std::size_t recount = 0;
    for (auto [q, p] : fleet) {
        recount += p <= 1e-3;
    }
    ASSERT_EQ(recount, 98u);
    EXPECT_DOUBLE_EQ(usable_fraction(snapshot_of(fleet), 9, reference()), 98.0 / 127.0);
    EXPECT_EQ(code_of([&] { usable_fraction(snapshot_of(fleet), 5, reference()); }), ErrorCode::MissingDistance);
}

TEST(usable_fraction, monotone_in_distance) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> log_p(std::log(1e-4), std::log(2e-2));
    for (int t = 0; t < 100; ++t) {
        std::vector<std::pair<std::size_t, double>> fleet;
        for (std::size_t q = 0; q < 127; ++q) {
            fleet.emplace_back(q, std::exp(log_p(rng)));
        }
        auto snap = snapshot_of(fleet);
        double prev = -1;
        for (auto [d, pm] : reference().entries()) {
            double f = usable_fraction(snap, d, reference());
            EXPECT_GE(f, prev);
            prev = f;
        }
    }
}

TEST(baseline_distance, examples) {
    auto day1 = snapshot_of({{0, 5e-4}, {1, 8e-4}, {2, 6e-3}, {3, 0.02}}, "2024-05-01");
    auto day2 = snapshot_of({{0, 5e-4}, {1, 1.5e-3}, {2, 0.03}, {3, 0.02}}, "2024-05-02");
    auto series = CalibrationSeries::from_snapshots({day1, day2});
    EXPECT_EQ(baseline_distance(series, policy(13), reference()), 13);
    EXPECT_EQ(baseline_distance(series, policy(11), reference()), 11);
    EXPECT_EQ(baseline_distance(series, policy(9), reference()), 9);

    auto easy = CalibrationSeries::from_snapshots({snapshot_of(uniform_fleet(1e-5, 5))});
    EXPECT_EQ(baseline_distance(easy, policy(13), LogicalErrorModel{0.1, 0.01}), 3);

    auto hopeless = CalibrationSeries::from_snapshots({snapshot_of(uniform_fleet(0.05, 5))});
    EXPECT_EQ(code_of([&] { baseline_distance(hopeless, policy(13), reference()); }), ErrorCode::NoUsableQubits);
}

TEST(compare_overhead, savings_examples) {
    auto nine = plan_day(snapshot_of(uniform_fleet(9e-4)), policy(9), reference());
    auto r9 = compare_overhead({nine, nine}, 13, CostAccounting::DataOnly);
    EXPECT_EQ(r9.baseline_cost_per_logical, 169);
    EXPECT_DOUBLE_EQ(r9.adaptive_mean_cost_per_logical, 81.0);
    EXPECT_NEAR(r9.savings_fraction, 1 - 81.0 / 169.0, 1e-12);
    EXPECT_NEAR(r9.savings_fraction, 0.5207, 1e-4);

    auto seven = plan_day(snapshot_of(uniform_fleet(5e-4)), policy(9), reference());
    auto r7 = compare_overhead({seven}, 13, CostAccounting::DataOnly);
    EXPECT_NEAR(r7.savings_fraction, 0.710, 1e-3);

    auto thirteen = plan_day(snapshot_of(uniform_fleet(5e-3)), policy(13), reference());
    EXPECT_EQ(compare_overhead({thirteen}, 13, CostAccounting::DataOnly).savings_fraction, 0.0);

    auto with_anc = compare_overhead({nine}, 13, CostAccounting::WithAncilla);
    EXPECT_EQ(with_anc.baseline_cost_per_logical, 337);
}

TEST(compare_overhead, errors) {
    auto none = plan_day(snapshot_of(uniform_fleet(0.05)), policy(9), reference());
    EXPECT_EQ(code_of([&] { compare_overhead({none}, 13, CostAccounting::DataOnly); }), ErrorCode::NoUsableQubits);
    EXPECT_EQ(code_of([&] { compare_overhead({}, 13, CostAccounting::DataOnly); }), ErrorCode::NoUsableQubits);
}

TEST(compare_overhead, arithmetic_matches_raw_sums) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> log_p(std::log(1e-4), std::log(1e-2));
    for (int t = 0; t < 50; ++t) {
        std::vector<FleetPlan> plans;
        long cost = 0;
        std::size_t logical = 0;
        for (int day = 0; day < 5; ++day) {
            std::vector<std::pair<std::size_t, double>> fleet;
            for (std::size_t q = 0; q < 127; ++q) {
                fleet.emplace_back(q, std::exp(log_p(rng)));
            }
            auto plan = plan_day(snapshot_of(fleet, "2024-05-0" + std::to_string(day + 1)), policy(13), reference());
            for (const auto &[q, a] : plan.assignments) {
                if (a.decision.assigned) {
                    cost += static_cast<long>(a.decision.distance) * a.decision.distance;
                    ++logical;
                }
            }
            plans.push_back(plan);
        }
        auto r = compare_overhead(plans, 13, CostAccounting::DataOnly);
        EXPECT_EQ(r.adaptive_physical_qubits, cost);
        EXPECT_EQ(r.adaptive_logical_qubits, logical);
        EXPECT_NEAR(r.savings_fraction, 1.0 - (static_cast<double>(cost) / logical) / 169.0, 1e-12);
        ASSERT_EQ(r.per_day_usability.size(), 5u);
        EXPECT_EQ(r.per_day_usability[2].first, parse_date("2024-05-03"));
        EXPECT_DOUBLE_EQ(r.per_day_usability[2].second, plans[2].usable_fraction());
    }
}

TEST(serialization, plan_outputs) {
    auto plan = plan_day(snapshot_of({{0, 1.5e-3}, {1, 0.0}, {2, 9e-3}}), policy(9), reference());
    auto j = nlohmann::json::parse(plan_to_json(plan));
    EXPECT_EQ(j["date"], "2024-05-01");
    EXPECT_EQ(j["usable_count"], 1);
    EXPECT_EQ(j["total_count"], 3);
    auto csv = plan_to_csv(plan);
    EXPECT_EQ(csv.rfind("#schema=qecplan.plan/1\nqubit,p,decision,distance,cost\n1,", 0), 0u) << csv;
    EXPECT_NE(csv.find("exceeds_d_max"), std::string::npos);
    EXPECT_NE(csv.find("above_cutoff"), std::string::npos);
    auto s = nlohmann::json::parse(savings_to_json(compare_overhead({plan}, 13, CostAccounting::DataOnly)));
    EXPECT_EQ(s["baseline_distance"], 13);
    EXPECT_EQ(s["baseline_cost_per_logical"], 169);
}
