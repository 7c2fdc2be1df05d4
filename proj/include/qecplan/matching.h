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

#ifndef QECPLAN_MATCHING_H
#define QECPLAN_MATCHING_H

#include <cstddef>
#include <utility>
#include <vector>

#include "qecplan/surface_layout.h"

namespace qecplan {

/// Largest defect count the exact pairing search accepts.
inline constexpr std::size_t kMaxDefects = 20;

/// Defect graph for X errors: one node per Z stabilizer plus a single virtual
/// boundary node (index `boundary_node()`). Every data qubit is an edge between
/// the Z checks it touches, or between its only Z check and the boundary.
///
/// `weight(a, b)` is the length of the shortest data-qubit chain whose syndrome
/// is exactly {a, b} (boundary excluded), and `chain(a, b)` is one such chain,
/// found by breadth-first search that expands neighbors in ascending qubit
/// order.
class MatchingGraph {
   public:
    explicit MatchingGraph(const RotatedSurfaceLayout &layout);

    std::size_t num_stabilizers() const {
        return num_stabilizers_;
    }
    std::size_t num_nodes() const {
        return num_stabilizers_ + 1;
    }
    std::size_t boundary_node() const {
        return num_stabilizers_;
    }
    std::size_t num_data_qubits() const {
        return num_data_qubits_;
    }
    int weight(std::size_t a, std::size_t b) const {
        return weights_[a * num_nodes() + b];
    }
    const std::vector<std::size_t> &chain(std::size_t a, std::size_t b) const {
        return chains_[a * num_nodes() + b];
    }

   private:
    std::size_t num_stabilizers_;
    std::size_t num_data_qubits_;
    std::vector<int> weights_;
    std::vector<std::vector<std::size_t>> chains_;
};

struct MatchingResult {
    /// Matched (defect, partner) pairs with defect < partner; partner may be the
    /// boundary node. Sorted.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    int total_weight = 0;
    ErrorPattern correction;
};

/// Exact minimum-weight perfect matching by dynamic programming over defect
/// subsets. Reusable scratch space makes repeated decoding allocation free.
class MwpmDecoder {
   public:
    explicit MwpmDecoder(const MatchingGraph &graph);

    /// Throws QecError(TooManyDefects) above kMaxDefects and
    /// QecError(IndexOutOfRange) for defects that are not Z-stabilizer indices.
    MatchingResult decode(const Syndrome &syndrome);

    /// Hot-loop variant: `defects` ascending; XORs the correction into `flips`
    /// (one byte per data qubit). Same matching and tie-breaking as decode().
    void decode_into(const std::vector<std::size_t> &defects, std::vector<char> &flips);

   private:
    void solve(const std::vector<std::size_t> &defects);
    void reconstruct(const std::vector<std::size_t> &defects, std::vector<std::pair<std::size_t, std::size_t>> &out);

    const MatchingGraph *graph_;
    std::vector<int> cost_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Correction realizing a minimum-weight matching of the syndrome's defects.
/// Among equal-weight matchings the lexicographically smallest sorted pair
/// list wins, with the boundary ordered after every stabilizer.
ErrorPattern decode_mwpm(const MatchingGraph &graph, const Syndrome &syndrome);

}  // namespace qecplan

#endif
