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

#include "qecplan/matching.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "qecplan/errors.h"

namespace qecplan {

MatchingGraph::MatchingGraph(const RotatedSurfaceLayout &layout)
    : num_stabilizers_(layout.z_stabilizers().size()), num_data_qubits_(layout.num_data_qubits()) {
    const std::size_t n = num_nodes();
    const std::size_t boundary = boundary_node();

    // adjacency[node] = (qubit, neighbor), ascending by qubit.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(n);
    for (std::size_t q = 0; q < num_data_qubits_; ++q) {
        auto checks = layout.z_stabilizers_of(q);
        std::size_t a = checks[0];
        std::size_t b = checks.size() == 2 ? checks[1] : boundary;
        adjacency[a].emplace_back(q, b);
        adjacency[b].emplace_back(q, a);
    }

    weights_.assign(n * n, 0);
    chains_.assign(n * n, {});
    std::vector<int> dist(n);
    std::vector<std::pair<std::size_t, std::size_t>> parent(n);  // (previous node, qubit)
    for (std::size_t src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        std::deque<std::size_t> queue{src};
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto [q, v] : adjacency[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = {u, q};
                    queue.push_back(v);
                }
            }
        }
        for (std::size_t dst = 0; dst < n; ++dst) {
            weights_[src * n + dst] = dist[dst];
            auto &chain = chains_[src * n + dst];
            for (auto v = dst; v != src; v = parent[v].first) {
                chain.push_back(parent[v].second);
            }
            std::sort(chain.begin(), chain.end());
        }
    }
}

MwpmDecoder::MwpmDecoder(const MatchingGraph &graph) : graph_(&graph) {
}

void MwpmDecoder::solve(const std::vector<std::size_t> &defects) {
    const std::size_t k = defects.size();
    const std::size_t boundary = graph_->boundary_node();
    const std::size_t full = std::size_t{1} << k;
    cost_.resize(full);
    cost_[0] = 0;
    for (std::size_t mask = 1; mask < full; ++mask) {
        std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mask));
        std::size_t rest = mask & (mask - 1);
        int best = graph_->weight(defects[i], boundary) + cost_[rest];
        for (std::size_t m = rest; m; m &= m - 1) {
            std::size_t j = static_cast<std::size_t>(__builtin_ctzll(m));
            int c = graph_->weight(defects[i], defects[j]) + cost_[rest & ~(std::size_t{1} << j)];
            best = std::min(best, c);
        }
        cost_[mask] = best;
    }
}

void MwpmDecoder::reconstruct(const std::vector<std::size_t> &defects,
                              std::vector<std::pair<std::size_t, std::size_t>> &out) {
    const std::size_t boundary = graph_->boundary_node();
    out.clear();
    std::size_t mask = (std::size_t{1} << defects.size()) - 1;
    while (mask) {
        std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mask));
        std::size_t rest = mask & (mask - 1);
        bool matched = false;
        for (std::size_t m = rest; m; m &= m - 1) {
            std::size_t j = static_cast<std::size_t>(__builtin_ctzll(m));
            std::size_t remaining = rest & ~(std::size_t{1} << j);
            if (graph_->weight(defects[i], defects[j]) + cost_[remaining] == cost_[mask]) {
                out.emplace_back(defects[i], defects[j]);
                mask = remaining;
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.emplace_back(defects[i], boundary);
            mask = rest;
        }
    }
}

void MwpmDecoder::decode_into(const std::vector<std::size_t> &defects, std::vector<char> &flips) {
    if (defects.empty()) {
        return;
    }
    if (defects.size() > kMaxDefects) {
        throw QecError(ErrorCode::TooManyDefects,
                       std::to_string(defects.size()) + " defects exceed the exact-matching bound of " +
                           std::to_string(kMaxDefects));
    }
    solve(defects);
    reconstruct(defects, pairs_);
    for (auto [a, b] : pairs_) {
        for (auto q : graph_->chain(a, b)) {
            flips[q] ^= 1;
        }
    }
}

MatchingResult MwpmDecoder::decode(const Syndrome &syndrome) {
    std::vector<std::size_t> defects = syndrome.defects;
    std::sort(defects.begin(), defects.end());
    defects.erase(std::unique(defects.begin(), defects.end()), defects.end());
    for (auto s : defects) {
        if (s >= graph_->num_stabilizers()) {
            throw QecError(ErrorCode::IndexOutOfRange, "defect " + std::to_string(s) + " is not a Z stabilizer");
        }
    }
    std::vector<char> flips(graph_->num_data_qubits(), 0);
    decode_into(defects, flips);

    MatchingResult result;
    if (!defects.empty()) {
        result.pairs = pairs_;
        result.total_weight = cost_[(std::size_t{1} << defects.size()) - 1];
    }
    for (std::size_t q = 0; q < flips.size(); ++q) {
        if (flips[q]) {
            result.correction.flipped.push_back(q);
        }
    }
    return result;
}

ErrorPattern decode_mwpm(const MatchingGraph &graph, const Syndrome &syndrome) {
    MwpmDecoder decoder(graph);
    return decoder.decode(syndrome).correction;
}

}  // namespace qecplan
