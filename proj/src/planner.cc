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

#include "json.hpp"
#include "qecplan/errors.h"
#include "qecplan/text_util.h"

namespace qecplan {

FleetPlan plan_day(const CalibrationSnapshot &snapshot, const AssignmentPolicy &policy, const ThresholdSource &source) {
    if (snapshot.qubits.empty()) {
        throw QecError(ErrorCode::EmptySnapshot, "snapshot for " + format_date(snapshot.date) + " has no qubits");
    }
    FleetPlan plan;
    plan.date = snapshot.date;

    std::vector<QubitRecord> sorted = snapshot.qubits;
    std::stable_sort(sorted.begin(), sorted.end(), [](const QubitRecord &a, const QubitRecord &b) {
        return a.pauli_x_error < b.pauli_x_error;
    });

    for (const auto &q : sorted) {
        QubitAssignment a;
        a.qubit = q.qubit_index;
        a.p = q.pauli_x_error;
        a.p_used = clamp_physical_error(q.pauli_x_error);
        a.decision = required_distance(source, q.pauli_x_error, policy.target_logical_error, policy.d_max);
        if (a.decision.assigned) {
            a.cost = physical_qubit_cost(a.decision.distance, LayoutKind::Rotated, policy.accounting);
            ++plan.usable_count;
            plan.total_physical_qubits += a.cost;
            ++plan.per_distance_histogram[a.decision.distance];
        }
        plan.order_by_error.push_back(q.qubit_index);
        plan.assignments.emplace(q.qubit_index, a);
    }
    plan.total_count = sorted.size();
    return plan;
}

double usable_fraction(const CalibrationSnapshot &snapshot, int d, const ThresholdTable &table) {
    const double p_max = table.p_max(d);
    if (snapshot.qubits.empty()) {
        throw QecError(ErrorCode::EmptySnapshot, "snapshot for " + format_date(snapshot.date) + " has no qubits");
    }
    std::size_t usable = 0;
    for (const auto &q : snapshot.qubits) {
        usable += clamp_physical_error(q.pauli_x_error) <= p_max ? 1 : 0;
    }
    return static_cast<double>(usable) / static_cast<double>(snapshot.qubits.size());
}

int baseline_distance(const CalibrationSeries &series, const AssignmentPolicy &policy, const ThresholdSource &source) {
    int worst = 0;
    for (const auto &snapshot : series.snapshots()) {
        for (const auto &q : snapshot.qubits) {
            auto decision = required_distance(source, q.pauli_x_error, policy.target_logical_error, policy.d_max);
            if (decision.assigned) {
                worst = std::max(worst, decision.distance);
            }
        }
    }
    if (worst == 0) {
        throw QecError(ErrorCode::NoUsableQubits, "every qubit is excluded on every day");
    }
    return worst;
}

SavingsReport compare_overhead(const std::vector<FleetPlan> &plans, int baseline_d, CostAccounting accounting) {
    SavingsReport report;
    report.baseline_distance = baseline_d;
    report.baseline_cost_per_logical = physical_qubit_cost(baseline_d, LayoutKind::Rotated, accounting);
    for (const auto &plan : plans) {
        report.adaptive_physical_qubits += plan.total_physical_qubits;
        report.adaptive_logical_qubits += plan.usable_count;
        report.per_day_usability.emplace_back(plan.date, plan.usable_fraction());
    }
    if (report.adaptive_logical_qubits == 0) {
        throw QecError(ErrorCode::NoUsableQubits, "no plan assigns a distance to any qubit");
    }
    report.adaptive_mean_cost_per_logical = static_cast<double>(report.adaptive_physical_qubits) /
                                            static_cast<double>(report.adaptive_logical_qubits);
    report.savings_fraction =
        1.0 - report.adaptive_mean_cost_per_logical / static_cast<double>(report.baseline_cost_per_logical);
    return report;
}

std::string plan_to_json(const FleetPlan &plan) {
    nlohmann::ordered_json qubits = nlohmann::ordered_json::array();
    for (auto index : plan.order_by_error) {
        const auto &a = plan.assignments.at(index);
        nlohmann::ordered_json q;
        q["qubit"] = a.qubit;
        q["p"] = a.p;
        q["p_used"] = a.p_used;
        if (a.decision.assigned) {
            q["decision"] = "assigned";
            q["distance"] = a.decision.distance;
            q["cost"] = a.cost;
        } else {
            q["decision"] = "excluded";
            q["reason"] = exclusion_reason_name(a.decision.reason);
        }
        qubits.push_back(std::move(q));
    }
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (auto [d, n] : plan.per_distance_histogram) {
        histogram[std::to_string(d)] = n;
    }
    nlohmann::ordered_json j;
    j["schema"] = "qecplan.plan/1";
    j["date"] = format_date(plan.date);
    j["total_count"] = plan.total_count;
    j["usable_count"] = plan.usable_count;
    j["total_physical_qubits"] = plan.total_physical_qubits;
    j["per_distance_histogram"] = histogram;
    j["qubits"] = qubits;
    return j.dump(2) + "\n";
}

std::string plan_to_csv(const FleetPlan &plan) {
    std::string out(kPlanSchema);
    out += "\nqubit,p,decision,distance,cost\n";
    for (auto index : plan.order_by_error) {
        const auto &a = plan.assignments.at(index);
        out += std::to_string(a.qubit) + "," + format_double(a.p) + ",";
        if (a.decision.assigned) {
            out += "assigned," + std::to_string(a.decision.distance) + "," + std::to_string(a.cost);
        } else {
            out += std::string(exclusion_reason_name(a.decision.reason)) + ",,0";
        }
        out += "\n";
    }
    return out;
}

std::string savings_to_json(const SavingsReport &report) {
    nlohmann::ordered_json days = nlohmann::ordered_json::array();
    for (const auto &[date, fraction] : report.per_day_usability) {
        days.push_back({{"date", format_date(date)}, {"usable_fraction", fraction}});
    }
    nlohmann::ordered_json j;
    j["schema"] = "qecplan.savings/1";
    j["baseline_distance"] = report.baseline_distance;
    j["baseline_cost_per_logical"] = report.baseline_cost_per_logical;
    j["adaptive_mean_cost_per_logical"] = report.adaptive_mean_cost_per_logical;
    j["savings_fraction"] = report.savings_fraction;
    j["adaptive_physical_qubits"] = report.adaptive_physical_qubits;
    j["adaptive_logical_qubits"] = report.adaptive_logical_qubits;
    j["per_day_usability"] = days;
    return j.dump(2) + "\n";
}

}  // namespace qecplan
