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

#include "qecplan/logical_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "qecplan/errors.h"
#include "qecplan/text_util.h"

namespace qecplan {

namespace {

void check_odd_distance(int d) {
    if (d < 3 || d % 2 == 0) {
        throw QecError(ErrorCode::InvalidDistance, "distance must be odd and >= 3, got " + std::to_string(d));
    }
}

void check_target(double target) {
    if (!(target > 0.0 && target < 1.0)) {
        throw QecError(ErrorCode::InvalidProbability, "target logical error must lie in (0, 1), got " +
                                                          format_double(target));
    }
}

double exponent_for(int d) {
    return (d + 1) / 2.0;
}

}  // namespace

void LogicalErrorModel::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be positive, got " + format_double(alpha));
    }
    if (!(p_threshold > 0.0 && p_threshold < 1.0)) {
        throw std::invalid_argument("p_threshold must lie in (0, 1), got " + format_double(p_threshold));
    }
}

double logical_error_rate(const LogicalErrorModel &model, double p, int d) {
    model.validate();
    check_odd_distance(d);
    if (!(p > 0.0)) {
        throw QecError(ErrorCode::NonPositiveP, "physical error rate must be positive, got " + format_double(p));
    }
    if (p > 1.0) {
        throw QecError(ErrorCode::InvalidProbability, "physical error rate above 1: " + format_double(p));
    }
    return std::min(1.0, model.alpha * std::pow(p / model.p_threshold, exponent_for(d)));
}

double physical_threshold(const LogicalErrorModel &model, int d, double target) {
    model.validate();
    check_odd_distance(d);
    check_target(target);
    return model.p_threshold * std::pow(target / model.alpha, 1.0 / exponent_for(d));
}

FitReport fit_model(const SweepTable &sweep) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::set<double> rates;
    FitReport report;
    for (const auto &row : sweep.rows) {
        const auto &e = row.estimate;
        if (e.failures == 0 || !(e.point_estimate > 0.0) || !(row.p > 0.0)) {
            ++report.dropped_rows;
            continue;
        }
        double x = exponent_for(row.distance);
        xs.push_back(x);
        ys.push_back(std::log(e.point_estimate) - x * std::log(row.p));
        rates.insert(row.p);
    }
    report.used_rows = xs.size();
    if (xs.size() < 2) {
        throw QecError(ErrorCode::InsufficientData,
                       "need at least two sweep rows with failures, have " + std::to_string(xs.size()));
    }
    if (std::set<double>(xs.begin(), xs.end()).size() < 2) {
        throw QecError(ErrorCode::DegenerateDesign, "all usable rows share one distance");
    }
    if (rates.size() < 2) {
        throw QecError(ErrorCode::InsufficientData, "need at least two distinct physical error rates");
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0;
    double my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    double ss = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double r = ys[k] - (intercept + slope * xs[k]);
        ss += r * r;
    }
    report.residual_rms = std::sqrt(ss / n);
    report.model = {std::exp(intercept), std::exp(-slope)};
    if (!(report.model.p_threshold > 0.0 && report.model.p_threshold < 1.0)) {
        throw QecError(ErrorCode::InsufficientData,
                       "fitted p_threshold " + format_double(report.model.p_threshold) + " is not a probability");
    }
    return report;
}

ThresholdTable::ThresholdTable(std::map<int, double> entries, double target_logical_error)
    : entries_(std::move(entries)), target_(target_logical_error) {
    check_target(target_);
    double previous = 0.0;
    for (auto [d, p] : entries_) {
        if (d < 3 || d % 2 == 0) {
            throw std::invalid_argument("threshold table distance must be odd and >= 3, got " + std::to_string(d));
        }
        if (!(p > 0.0 && p < 1.0)) {
            throw std::invalid_argument("threshold for d=" + std::to_string(d) + " must lie in (0, 1)");
        }
        if (!(p > previous)) {
            throw std::invalid_argument("thresholds must strictly increase with distance (d=" + std::to_string(d) + ")");
        }
        previous = p;
    }
}

ThresholdTable ThresholdTable::reference_circuit_level() {
    return ThresholdTable({{7, 7e-4}, {9, 1e-3}, {11, 2e-3}, {13, 7e-3}}, 1e-6);
}

ThresholdTable ThresholdTable::from_model(const LogicalErrorModel &model, double target, int d_max) {
    std::map<int, double> entries;
    for (int d = 3; d <= d_max; d += 2) {
        entries[d] = physical_threshold(model, d, target);
    }
    return ThresholdTable(std::move(entries), target);
}

double ThresholdTable::p_max(int d) const {
    auto it = entries_.find(d);
    if (it == entries_.end()) {
        throw QecError(ErrorCode::MissingDistance, "threshold table has no entry for d=" + std::to_string(d));
    }
    return it->second;
}

std::string_view exclusion_reason_name(ExclusionReason reason) {
    switch (reason) {
        case ExclusionReason::ExceedsMaxDistance:
            return "exceeds_d_max";
        case ExclusionReason::AboveCutoff:
            return "above_cutoff";
    }
    return "unknown";
}

double clamp_physical_error(double p) {
    return std::max(p, kMinPhysicalError);
}

DistanceDecision required_distance(const ThresholdSource &source, double p, double target, int d_max) {
    if (d_max < 3 || d_max > kMaxPlanDistance || d_max % 2 == 0) {
        throw QecError(ErrorCode::InvalidDistance, "d_max must be odd and in [3, 13], got " + std::to_string(d_max));
    }
    if (!(p <= 1.0)) {
        throw QecError(ErrorCode::InvalidProbability, "physical error rate above 1: " + format_double(p));
    }
    const double p_eff = clamp_physical_error(p);

    if (const auto *model = std::get_if<LogicalErrorModel>(&source)) {
        for (int d = 3; d <= d_max; d += 2) {
            if (p_eff <= physical_threshold(*model, d, target)) {
                return DistanceDecision::assign(d);
            }
        }
        // For target < alpha the per-distance thresholds rise toward p_threshold.
        bool larger_d_helps = p_eff < model->p_threshold && target < model->alpha;
        return DistanceDecision::exclude(larger_d_helps ? ExclusionReason::ExceedsMaxDistance
                                                        : ExclusionReason::AboveCutoff);
    }

    const auto &table = std::get<ThresholdTable>(source);
    bool any = false;
    for (auto [d, p_max] : table.entries()) {
        if (d > d_max) {
            break;
        }
        any = true;
        if (p_eff <= p_max) {
            return DistanceDecision::assign(d);
        }
    }
    if (!any) {
        throw QecError(ErrorCode::EmptyTable, "threshold table has no distance <= " + std::to_string(d_max));
    }
    bool larger_d_helps = !table.entries().empty() && p_eff <= table.entries().rbegin()->second;
    return DistanceDecision::exclude(larger_d_helps ? ExclusionReason::ExceedsMaxDistance
                                                    : ExclusionReason::AboveCutoff);
}

long physical_qubit_cost(int d, LayoutKind layout, CostAccounting accounting) {
    check_odd_distance(d);
    const long dd = static_cast<long>(d) * d;
    if (layout == LayoutKind::Rotated) {
        return accounting == CostAccounting::DataOnly ? dd : 2 * dd - 1;
    }
    if (accounting == CostAccounting::DataOnly) {
        return 2 * dd - 1;
    }
    throw QecError(ErrorCode::Unsupported, "unrotated layout cost with ancillas is not modelled");
}

std::string threshold_table_to_csv(const ThresholdTable &table) {
    std::string out(kThresholdTableSchema);
    out += "\n#target=" + format_double(table.target_logical_error()) + "\nd,p_max\n";
    for (auto [d, p] : table.entries()) {
        out += std::to_string(d) + "," + format_double(p) + "\n";
    }
    return out;
}

ThresholdTable threshold_table_from_csv(std::string_view text) {
    double target = kDefaultTargetLogicalError;
    std::map<int, double> entries;
    bool header = false;
    std::size_t line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.starts_with("#target=")) {
            auto v = parse_double(t.substr(8));
            if (!v) {
                throw QecError(ErrorCode::MalformedRow, "unreadable target comment", line_no);
            }
            target = *v;
            continue;
        }
        if (t.starts_with('#')) {
            continue;
        }
        auto cells = split(t, ',');
        if (!header) {
            header = true;
            if (cells.size() < 2 || trim(cells[0]) != "d" || trim(cells[1]) != "p_max") {
                throw QecError(ErrorCode::MissingColumn, "expected header d,p_max", line_no);
            }
            continue;
        }
        auto d = cells.size() >= 2 ? parse_index(cells[0]) : std::nullopt;
        auto p = cells.size() >= 2 ? parse_double(cells[1]) : std::nullopt;
        if (!d || !p) {
            throw QecError(ErrorCode::MalformedRow, "expected d,p_max values", line_no);
        }
        if (!entries.emplace(static_cast<int>(*d), *p).second) {
            throw QecError(ErrorCode::MalformedRow, "distance listed twice", line_no);
        }
    }
    return ThresholdTable(std::move(entries), target);
}

std::string fit_report_to_json(const FitReport &report) {
    nlohmann::ordered_json j;
    j["schema"] = "qecplan.model/1";
    j["alpha"] = report.model.alpha;
    j["p_threshold"] = report.model.p_threshold;
    j["diagnostics"] = {
        {"residual_rms", report.residual_rms},
        {"used_rows", report.used_rows},
        {"dropped_rows", report.dropped_rows},
    };
    return j.dump(2) + "\n";
}

LogicalErrorModel model_from_json(std::string_view text) {
    auto j = nlohmann::json::parse(text);
    LogicalErrorModel model{j.at("alpha").get<double>(), j.at("p_threshold").get<double>()};
    model.validate();
    return model;
}

}  // namespace qecplan
