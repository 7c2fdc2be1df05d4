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

#ifndef QECPLAN_MONTE_CARLO_H
#define QECPLAN_MONTE_CARLO_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qecplan {

/// Largest distance the sampler accepts.
inline constexpr int kMaxSampleDistance = 13;

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct MonteCarloEstimate {
    std::uint64_t shots = 0;
    std::uint64_t failures = 0;  // includes saturated shots
    std::uint64_t saturated = 0;  // shots with more than kMaxDefects defects
    double point_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const MonteCarloEstimate &) const = default;
};

/// Logical error rate of the distance-d rotated code under i.i.d. bit flips
/// with probability p and perfect syndrome extraction, decoded by exact MWPM.
///
/// Shot i draws its flips from a Philox stream keyed by `seed` at counter i,
/// so the result depends only on (d, p, shots, seed) and not on `threads`
/// (0 selects the hardware concurrency). Shots whose syndrome is too large to
/// match exactly are counted as failures and reported in `saturated`.
///
/// Throws QecError(InvalidDistance) for d outside odd {3..13} and
/// QecError(InvalidProbability) for p outside [0, 0.5].
MonteCarloEstimate sample_logical_error_rate(int d, double p, std::uint64_t shots, std::uint64_t seed,
                                             unsigned threads = 0);

/// Exact decoder failure probability at d=3, by enumeration of all 2^9 error
/// patterns through the same decoder.
double exact_logical_error_rate_d3(double p);

struct SweepRow {
    int distance = 0;
    double p = 0.0;
    MonteCarloEstimate estimate;

    bool operator==(const SweepRow &) const = default;
};

struct SweepTable {
    std::vector<SweepRow> rows;

    bool operator==(const SweepTable &) const = default;
};

/// Samples every (d, p) pair. Repeated distances or rates are dropped (first
/// occurrence kept); rows come out distance-major in request order. Cell
/// seeds derive from (seed, d, index of p in the de-duplicated rate list).
SweepTable sweep(const std::vector<int> &distances, const std::vector<double> &error_rates, std::uint64_t shots,
                 std::uint64_t seed, unsigned threads = 0);

inline constexpr std::string_view kSweepSchema = "#schema=qecplan.sweep/1";

/// CSV with a schema comment line and columns
/// `d,p,shots,failures,p_l,ci_low,ci_high,saturated`.
std::string sweep_to_csv(const SweepTable &table);

/// Reads sweep_to_csv output; lines starting with '#' are ignored. The seed
/// column is not stored, so parsed estimates carry seed 0. Throws
/// QecError(MalformedRow) with the offending line number.
SweepTable sweep_from_csv(std::string_view text);

}  // namespace qecplan

#endif
