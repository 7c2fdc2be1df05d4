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

#include "qecplan/surface_layout.h"

#include <algorithm>
#include <iterator>

#include "json.hpp"
#include "qecplan/errors.h"

namespace qecplan {

ErrorPattern ErrorPattern::from_indices(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return ErrorPattern{std::move(indices)};
}

namespace {

std::vector<std::size_t> sorted_xor(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    std::vector<std::size_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

ErrorPattern symmetric_difference(const ErrorPattern &a, const ErrorPattern &b) {
    return ErrorPattern{sorted_xor(a.flipped, b.flipped)};
}

Syndrome symmetric_difference(const Syndrome &a, const Syndrome &b) {
    return Syndrome{sorted_xor(a.defects, b.defects)};
}

RotatedSurfaceLayout::RotatedSurfaceLayout(int distance) : distance_(distance) {
    if (distance < kMinDistance || distance > kMaxLayoutDistance || distance % 2 == 0) {
        throw QecError(ErrorCode::InvalidDistance,
                       "distance must be odd and in [3, 25], got " + std::to_string(distance));
    }
    const int d = distance;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            data_qubits_.push_back({2 * c + 1, 2 * r + 1});
        }
    }
    auto data_index = [d](int x, int y) -> long {
        if (x < 1 || y < 1 || x > 2 * d - 1 || y > 2 * d - 1) {
            return -1;
        }
        return static_cast<long>((y - 1) / 2) * d + (x - 1) / 2;
    };

    for (int y = 0; y <= 2 * d; y += 2) {
        for (int x = 0; x <= 2 * d; x += 2) {
            Stabilizer s{{x, y}, {}};
            for (int dy : {-1, 1}) {
                for (int dx : {-1, 1}) {
                    auto k = data_index(x + dx, y + dy);
                    if (k >= 0) {
                        s.data.push_back(static_cast<std::size_t>(k));
                    }
                }
            }
            std::sort(s.data.begin(), s.data.end());
            bool z_type = ((x / 2 + y / 2) % 2) == 0;
            bool interior = x > 0 && x < 2 * d && y > 0 && y < 2 * d;
            bool side = x == 0 || x == 2 * d;
            bool cap = y == 0 || y == 2 * d;
            if (interior) {
                (z_type ? z_stabilizers_ : x_stabilizers_).push_back(std::move(s));
            } else if (s.data.size() == 2 && side && z_type) {
                z_stabilizers_.push_back(std::move(s));
            } else if (s.data.size() == 2 && cap && !z_type) {
                x_stabilizers_.push_back(std::move(s));
            }
        }
    }

    z_of_qubit_.resize(data_qubits_.size());
    x_of_qubit_.resize(data_qubits_.size());
    for (std::size_t k = 0; k < z_stabilizers_.size(); ++k) {
        for (auto q : z_stabilizers_[k].data) {
            z_of_qubit_[q].push_back(k);
        }
    }
    for (std::size_t k = 0; k < x_stabilizers_.size(); ++k) {
        for (auto q : x_stabilizers_[k].data) {
            x_of_qubit_[q].push_back(k);
        }
    }

    const int mid = (d - 1) / 2;
    for (int c = 0; c < d; ++c) {
        logical_z_support_.push_back(static_cast<std::size_t>(mid * d + c));
    }
    for (int r = 0; r < d; ++r) {
        logical_x_support_.push_back(static_cast<std::size_t>(r * d + mid));
    }
}

std::span<const std::size_t> RotatedSurfaceLayout::z_stabilizers_of(std::size_t qubit) const {
    return z_of_qubit_.at(qubit);
}

std::span<const std::size_t> RotatedSurfaceLayout::x_stabilizers_of(std::size_t qubit) const {
    return x_of_qubit_.at(qubit);
}

RotatedSurfaceLayout build_layout(int d) {
    return RotatedSurfaceLayout(d);
}

Syndrome syndrome_of(const RotatedSurfaceLayout &layout, const ErrorPattern &pattern) {
    std::vector<char> parity(layout.z_stabilizers().size(), 0);
    for (auto q : pattern.flipped) {
        if (q >= layout.num_data_qubits()) {
            throw QecError(ErrorCode::IndexOutOfRange, "data qubit " + std::to_string(q) + " does not exist at d=" +
                                                           std::to_string(layout.distance()));
        }
        for (auto s : layout.z_stabilizers_of(q)) {
            parity[s] ^= 1;
        }
    }
    Syndrome out;
    for (std::size_t s = 0; s < parity.size(); ++s) {
        if (parity[s]) {
            out.defects.push_back(s);
        }
    }
    return out;
}

bool is_logical_flip(const RotatedSurfaceLayout &layout, const ErrorPattern &residual) {
    if (!syndrome_of(layout, residual).empty()) {
        throw QecError(ErrorCode::NonTrivialSyndrome, "residual error is detectable; it is not a logical operator");
    }
    const auto &support = layout.logical_z_support();
    std::size_t overlap = 0;
    for (auto q : residual.flipped) {
        overlap += std::binary_search(support.begin(), support.end(), q) ? 1 : 0;
    }
    return overlap % 2 == 1;
}

std::string layout_to_json(const RotatedSurfaceLayout &layout) {
    using nlohmann::json;
    auto stabilizers = [](const std::vector<Stabilizer> &list) {
        json out = json::array();
        for (const auto &s : list) {
            out.push_back({{"ancilla", {s.ancilla.x, s.ancilla.y}}, {"data", s.data}});
        }
        return out;
    };
    json data = json::array();
    for (const auto &c : layout.data_qubits()) {
        data.push_back({c.x, c.y});
    }
    json j = {
        {"distance", layout.distance()},
        {"data_qubits", data},
        {"z_stabilizers", stabilizers(layout.z_stabilizers())},
        {"x_stabilizers", stabilizers(layout.x_stabilizers())},
        {"logical_z_support", layout.logical_z_support()},
        {"logical_x_support", layout.logical_x_support()},
    };
    return j.dump(2) + "\n";
}

}  // namespace qecplan
