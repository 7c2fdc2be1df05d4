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

#ifndef QECPLAN_PLANNER_H
#define QECPLAN_PLANNER_H

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qecplan/calibration.h"
#include "qecplan/logical_model.h"

namespace qecplan {

struct AssignmentPolicy {
    double target_logical_error = kDefaultTargetLogicalError;
    int d_max = 9;
    CostAccounting accounting = CostAccounting::DataOnly;
};

struct QubitAssignment {
    std::size_t qubit = 0;
    double p = 0.0;  // as reported
    double p_used = 0.0;  // after clamping to kMinPhysicalError
    DistanceDecision decision;
    long cost = 0;  // physical qubits; 0 when excluded

    bool operator==(const QubitAssignment &) const = default;
};

/// Per-day distance assignment for every reported qubit.
struct FleetPlan {
    Date date;
    std::map<std::size_t, QubitAssignment> assignments;
    /// Qubit indices by ascending error (ties by index). Reporting order only.
    std::vector<std::size_t> order_by_error;
    std::size_t usable_count = 0;
    std::size_t total_count = 0;
    long total_physical_qubits = 0;
    std::map<int, std::size_t> per_distance_histogram;

    double usable_fraction() const {
        return total_count ? static_cast<double>(usable_count) / static_cast<double>(total_count) : 0.0;
    }
    bool operator==(const FleetPlan &) const = default;
};

/// Assigns every qubit of the snapshot its smallest sufficient distance, or
/// excludes it, using required_distance on the clamped Pauli-X error.
/// Throws QecError(EmptySnapshot) when the snapshot has no qubits.
FleetPlan plan_day(const CalibrationSnapshot &snapshot, const AssignmentPolicy &policy, const ThresholdSource &source);

/// Fraction of qubits whose clamped error is at or below the table's p_max(d).
/// Throws QecError(MissingDistance) if d is not tabulated.
double usable_fraction(const CalibrationSnapshot &snapshot, int d, const ThresholdTable &table);

/// Largest distance required by any non-excluded qubit on any day under
/// `policy`. Throws QecError(NoUsableQubits) if every qubit is excluded on
/// every day.
int baseline_distance(const CalibrationSeries &series, const AssignmentPolicy &policy, const ThresholdSource &source);

struct SavingsReport {
    int baseline_distance = 0;
    long baseline_cost_per_logical = 0;
    double adaptive_mean_cost_per_logical = 0.0;
    double savings_fraction = 0.0;
    long adaptive_physical_qubits = 0;  // sum over plans
    std::size_t adaptive_logical_qubits = 0;  // sum of usable counts over plans
    std::vector<std::pair<Date, double>> per_day_usability;
};

/// Mean adaptive cost per assigned logical qubit across all plans versus the
/// rotated-layout cost at `baseline_d`. Throws QecError(NoUsableQubits) when
/// no plan assigns anything.
SavingsReport compare_overhead(const std::vector<FleetPlan> &plans, int baseline_d, CostAccounting accounting);

inline constexpr std::string_view kPlanSchema = "#schema=qecplan.plan/1";

std::string plan_to_json(const FleetPlan &plan);
/// `qubit,p,decision,distance,cost`, rows in ascending-error order.
std::string plan_to_csv(const FleetPlan &plan);
std::string savings_to_json(const SavingsReport &report);

}  // namespace qecplan

#endif
