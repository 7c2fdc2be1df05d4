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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qecplan/errors.h"
#include "qecplan/matching.h"
#include "qecplan/philox.h"
#include "qecplan/surface_layout.h"
#include "qecplan/text_util.h"

namespace qecplan {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
    Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    // Rounding can push a bound past the point estimate when it sits on 0 or 1.
    out.low = std::min(out.low, phat);
    out.high = std::max(out.high, phat);
    return out;
}

namespace {

void check_sample_args(int d, double p) {
    if (d < kMinDistance || d > kMaxSampleDistance || d % 2 == 0) {
        throw QecError(ErrorCode::InvalidDistance, "sampling needs an odd distance in [3, 13], got " + std::to_string(d));
    }
    if (!(p >= 0.0 && p <= 0.5)) {
        throw QecError(ErrorCode::InvalidProbability, "physical error rate must lie in [0, 0.5], got " + format_double(p));
    }
}

struct ShotCounts {
    std::uint64_t failures = 0;
    std::uint64_t saturated = 0;
};

class ShotRunner {
   public:
    ShotRunner(const RotatedSurfaceLayout &layout, const MatchingGraph &graph)
        : layout_(layout),
          decoder_(graph),
          errors_(layout.num_data_qubits()),
          parity_(layout.z_stabilizers().size()) {
    }

    ShotCounts run(double p, std::uint64_t seed, std::uint64_t first, std::uint64_t last) {
        ShotCounts counts;
        // Flip iff a uniform 64-bit draw falls below p * 2^64.
        const std::uint64_t cutoff = static_cast<std::uint64_t>(std::ldexp(p, 64));
        const std::size_t n = layout_.num_data_qubits();
        for (std::uint64_t shot = first; shot < last; ++shot) {
            ShotStream stream(seed, shot);
            bool any = false;
            for (std::size_t q = 0; q < n; ++q) {
                errors_[q] = stream.next_u64() < cutoff;
                any |= errors_[q] != 0;
            }
            if (!any) {
                continue;
            }
            std::fill(parity_.begin(), parity_.end(), 0);
            for (std::size_t q = 0; q < n; ++q) {
                if (errors_[q]) {
                    for (auto s : layout_.z_stabilizers_of(q)) {
                        parity_[s] ^= 1;
                    }
                }
            }
            defects_.clear();
            for (std::size_t s = 0; s < parity_.size(); ++s) {
                if (parity_[s]) {
                    defects_.push_back(s);
                }
            }
            if (defects_.size() > kMaxDefects) {
                ++counts.failures;
                ++counts.saturated;
                continue;
            }
            decoder_.decode_into(defects_, errors_);
            int overlap = 0;
            for (auto q : layout_.logical_z_support()) {
                overlap ^= errors_[q];
            }
            counts.failures += static_cast<std::uint64_t>(overlap);
        }
        return counts;
    }

   private:
    const RotatedSurfaceLayout &layout_;
    MwpmDecoder decoder_;
    std::vector<char> errors_;
    std::vector<char> parity_;
    std::vector<std::size_t> defects_;
};

}  // namespace

MonteCarloEstimate sample_logical_error_rate(int d, double p, std::uint64_t shots, std::uint64_t seed,
                                             unsigned threads) {
    check_sample_args(d, p);
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    const RotatedSurfaceLayout layout(d);
    const MatchingGraph graph(layout);

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::uint64_t workers = std::min<std::uint64_t>(threads, shots);
    std::vector<ShotCounts> partial(workers);
    auto range = [&](std::uint64_t w) {
        return std::pair(shots * w / workers, shots * (w + 1) / workers);
    };
    if (workers == 1 || p == 0.0) {
        ShotRunner runner(layout, graph);
        partial.assign(1, runner.run(p, seed, 0, shots));
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                ShotRunner runner(layout, graph);
                auto [first, last] = range(w);
                partial[w] = runner.run(p, seed, first, last);
            });
        }
    }

    MonteCarloEstimate est;
    est.shots = shots;
    est.seed = seed;
    for (const auto &c : partial) {
        est.failures += c.failures;
        est.saturated += c.saturated;
    }
    est.point_estimate = static_cast<double>(est.failures) / static_cast<double>(shots);
    auto ci = wilson_interval(est.failures, shots);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

double exact_logical_error_rate_d3(double p) {
    if (!(p >= 0.0 && p <= 0.5)) {
        throw QecError(ErrorCode::InvalidProbability, "physical error rate must lie in [0, 0.5], got " + format_double(p));
    }
    const RotatedSurfaceLayout layout(3);
    const MatchingGraph graph(layout);
    MwpmDecoder decoder(graph);
    const std::size_t n = layout.num_data_qubits();

    double total = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        ErrorPattern error;
        for (std::size_t q = 0; q < n; ++q) {
            if (bits >> q & 1u) {
                error.flipped.push_back(q);
            }
        }
        auto correction = decoder.decode(syndrome_of(layout, error)).correction;
        if (is_logical_flip(layout, symmetric_difference(error, correction))) {
            auto w = static_cast<int>(error.weight());
            total += std::pow(p, w) * std::pow(1.0 - p, static_cast<int>(n) - w);
        }
    }
    return total;
}

SweepTable sweep(const std::vector<int> &distances, const std::vector<double> &error_rates, std::uint64_t shots,
                 std::uint64_t seed, unsigned threads) {
    std::vector<int> ds;
    for (int d : distances) {
        if (std::find(ds.begin(), ds.end(), d) == ds.end()) {
            ds.push_back(d);
        }
    }
    std::vector<double> ps;
    for (double p : error_rates) {
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) {
            ps.push_back(p);
        }
    }
    for (int d : ds) {
        for (double p : ps) {
            check_sample_args(d, p);
        }
    }
    SweepTable table;
    for (int d : ds) {
        for (std::size_t k = 0; k < ps.size(); ++k) {
            auto cell_seed = derive_seed(seed, static_cast<std::uint64_t>(d), k);
            table.rows.push_back({d, ps[k], sample_logical_error_rate(d, ps[k], shots, cell_seed, threads)});
        }
    }
    return table;
}

std::string sweep_to_csv(const SweepTable &table) {
    std::string out(kSweepSchema);
    out += "\nd,p,shots,failures,p_l,ci_low,ci_high,saturated\n";
    for (const auto &row : table.rows) {
        const auto &e = row.estimate;
        out += std::to_string(row.distance) + "," + format_double(row.p) + "," + std::to_string(e.shots) + "," +
               std::to_string(e.failures) + "," + format_double(e.point_estimate) + "," + format_double(e.ci_low) +
               "," + format_double(e.ci_high) + "," + std::to_string(e.saturated) + "\n";
    }
    return out;
}

SweepTable sweep_from_csv(std::string_view text) {
    SweepTable table;
    bool header = false;
    std::size_t line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty() || line.starts_with('#')) {
            continue;
        }
        auto cells = split(line, ',');
        if (!header) {
            header = true;
            if (cells.size() < 8 || trim(cells[0]) != "d") {
                throw QecError(ErrorCode::MissingColumn, "expected sweep header d,p,shots,failures,...", line_no);
            }
            continue;
        }
        if (cells.size() < 8) {
            throw QecError(ErrorCode::MalformedRow, "expected 8 columns", line_no);
        }
        auto d = parse_index(cells[0]);
        auto p = parse_double(cells[1]);
        auto shots = parse_index(cells[2]);
        auto failures = parse_index(cells[3]);
        auto pl = parse_double(cells[4]);
        auto lo = parse_double(cells[5]);
        auto hi = parse_double(cells[6]);
        auto sat = parse_index(cells[7]);
        if (!d || !p || !shots || !failures || !pl || !lo || !hi || !sat) {
            throw QecError(ErrorCode::MalformedRow, "non-numeric sweep cell", line_no);
        }
        MonteCarloEstimate e{*shots, *failures, *sat, *pl, *lo, *hi, 0};
        table.rows.push_back({static_cast<int>(*d), *p, e});
    }
    return table;
}

}  // namespace qecplan
