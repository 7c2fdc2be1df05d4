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

#ifndef QECPLAN_LOGICAL_MODEL_H
#define QECPLAN_LOGICAL_MODEL_H

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "qecplan/monte_carlo.h"

namespace qecplan {

inline constexpr double kDefaultTargetLogicalError = 1e-6;

/// Physical error rates below this are raised to it before distance
/// selection; a reported rate of zero is a calibration artifact.
inline constexpr double kMinPhysicalError = 1e-6;

inline constexpr int kMaxPlanDistance = 13;

/// p_L = min(1, alpha * (p / p_threshold)^((d+1)/2)).
struct LogicalErrorModel {
    double alpha = 0.1;
    double p_threshold = 0.01;

    /// Throws std::invalid_argument unless alpha > 0 and 0 < p_threshold < 1.
    void validate() const;
};

/// Throws QecError(NonPositiveP) for p <= 0, InvalidProbability for p > 1 and
/// InvalidDistance for d not odd >= 3.
double logical_error_rate(const LogicalErrorModel &model, double p, int d);

/// Largest p with logical_error_rate(model, p, d) <= target, i.e.
/// p_threshold * (target / alpha)^(2/(d+1)).
double physical_threshold(const LogicalErrorModel &model, int d, double target);

struct FitReport {
    LogicalErrorModel model;
    std::size_t used_rows = 0;
    std::size_t dropped_rows = 0;  // rows without failures
    double residual_rms = 0.0;  // in the log-linearized coordinates
};

/// Least-squares fit of the model on sweep rows.
///
/// With x = (d+1)/2 and y = ln(p_L) - x ln(p), the model is the line
/// y = ln(alpha) - x ln(p_threshold). Zero-failure rows are dropped. Throws
/// QecError(InsufficientData) when fewer than two distinct rates survive or
/// fewer than two rows remain, DegenerateDesign when every surviving row has
/// the same distance.
FitReport fit_model(const SweepTable &sweep);

/// Maximum tolerable physical error per distance for one logical target.
class ThresholdTable {
   public:
    ThresholdTable() = default;
    /// Throws std::invalid_argument unless distances are odd >= 3, values lie
    /// in (0, 1) and p_max strictly increases with d.
    ThresholdTable(std::map<int, double> entries, double target_logical_error);

    /// The per-distance thresholds read off the reference circuit-level curves
    /// at a 1e-6 logical target (distances 7, 9, 11, 13).
    static ThresholdTable reference_circuit_level();

    /// Inverts `model` at every odd d in [3, d_max].
    static ThresholdTable from_model(const LogicalErrorModel &model, double target, int d_max = kMaxPlanDistance);

    const std::map<int, double> &entries() const {
        return entries_;
    }
    double target_logical_error() const {
        return target_;
    }
    bool contains(int d) const {
        return entries_.count(d) != 0;
    }
    /// Throws QecError(MissingDistance) when absent.
    double p_max(int d) const;

   private:
    std::map<int, double> entries_;
    double target_ = kDefaultTargetLogicalError;
};

using ThresholdSource = std::variant<LogicalErrorModel, ThresholdTable>;

enum class ExclusionReason {
    ExceedsMaxDistance,  // some larger distance would work but is not allowed
    AboveCutoff,  // no distance available to the source works
};

std::string_view exclusion_reason_name(ExclusionReason reason);

struct DistanceDecision {
    bool assigned = false;
    int distance = 0;  // meaningful when assigned
    ExclusionReason reason = ExclusionReason::AboveCutoff;  // meaningful when excluded

    static DistanceDecision assign(int d) {
        return {true, d, ExclusionReason::AboveCutoff};
    }
    static DistanceDecision exclude(ExclusionReason reason) {
        return {false, 0, reason};
    }
    bool operator==(const DistanceDecision &) const = default;
};

double clamp_physical_error(double p);

/// Smallest odd d in [3, d_max] meeting the target.
///
/// Model mode: p <= physical_threshold(model, d, target). Table mode: the
/// table's own target applies (`target` is ignored) and only tabulated
/// distances are considered, with p <= p_max(d) counting as usable. p is first
/// clamped to kMinPhysicalError. Throws QecError(InvalidDistance) for a bad
/// d_max and EmptyTable when no tabulated distance is <= d_max.
DistanceDecision required_distance(const ThresholdSource &source, double p, double target, int d_max);

enum class LayoutKind { Rotated, Unrotated };
enum class CostAccounting { DataOnly, WithAncilla };

/// Rotated: d^2 data, 2d^2 - 1 with ancillas. Unrotated: 2d^2 - 1 data;
/// unrotated with ancillas throws QecError(Unsupported).
long physical_qubit_cost(int d, LayoutKind layout, CostAccounting accounting);

inline constexpr std::string_view kThresholdTableSchema = "#schema=qecplan.thresholds/1";

/// `d,p_max` CSV with schema and `#target=` comment lines.
std::string threshold_table_to_csv(const ThresholdTable &table);
ThresholdTable threshold_table_from_csv(std::string_view text);

std::string fit_report_to_json(const FitReport &report);
/// Accepts fit_report_to_json output or any object with alpha and p_threshold.
LogicalErrorModel model_from_json(std::string_view text);

}  // namespace qecplan

#endif
