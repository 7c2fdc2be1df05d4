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

#ifndef QECPLAN_SURFACE_LAYOUT_H
#define QECPLAN_SURFACE_LAYOUT_H

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qecplan {

inline constexpr int kMinDistance = 3;
inline constexpr int kMaxLayoutDistance = 25;

/// Position on the doubled integer lattice. Data qubits sit on odd/odd sites,
/// ancillas on even/even sites.
struct Coord {
    int x = 0;
    int y = 0;

    bool operator==(const Coord &) const = default;
};

struct Stabilizer {
    Coord ancilla;
    std::vector<std::size_t> data;  // ascending data-qubit indices, 2 or 4 entries
};

/// Set of data qubits carrying an X error. Kept sorted and duplicate free.
struct ErrorPattern {
    std::vector<std::size_t> flipped;

    static ErrorPattern from_indices(std::vector<std::size_t> indices);
    std::size_t weight() const {
        return flipped.size();
    }
    bool operator==(const ErrorPattern &) const = default;
};

/// Set of Z-stabilizer indices with odd parity, ascending.
struct Syndrome {
    std::vector<std::size_t> defects;

    bool empty() const {
        return defects.empty();
    }
    bool operator==(const Syndrome &) const = default;
};

ErrorPattern symmetric_difference(const ErrorPattern &a, const ErrorPattern &b);
Syndrome symmetric_difference(const Syndrome &a, const Syndrome &b);

/// Distance-d rotated surface code.
///
/// Data qubit (row r, column c) has index r*d + c and coordinate (2c+1, 2r+1).
/// Ancillas live on the even sublattice; a bulk ancilla at (x, y) is Z-type
/// when x/2 + y/2 is even. Weight-2 Z checks sit on the left and right edges,
/// weight-2 X checks on the top and bottom edges. Stabilizers are listed in
/// row-major order of their ancilla coordinate.
///
/// Two logical representatives are exposed. `logical_z_support()` is the
/// middle row (a Z string joining the left and right Z boundaries); an X error
/// flips the logical state iff it overlaps this row an odd number of times.
/// `logical_x_support()` is the middle column, the minimum-weight X error that
/// leaves no Z syndrome and flips the logical.
class RotatedSurfaceLayout {
   public:
    explicit RotatedSurfaceLayout(int distance);

    int distance() const {
        return distance_;
    }
    std::size_t num_data_qubits() const {
        return data_qubits_.size();
    }
    const std::vector<Coord> &data_qubits() const {
        return data_qubits_;
    }
    const std::vector<Stabilizer> &z_stabilizers() const {
        return z_stabilizers_;
    }
    const std::vector<Stabilizer> &x_stabilizers() const {
        return x_stabilizers_;
    }
    std::size_t num_ancillas() const {
        return z_stabilizers_.size() + x_stabilizers_.size();
    }
    const std::vector<std::size_t> &logical_z_support() const {
        return logical_z_support_;
    }
    const std::vector<std::size_t> &logical_x_support() const {
        return logical_x_support_;
    }
    /// Z stabilizers touching a data qubit (one or two entries).
    std::span<const std::size_t> z_stabilizers_of(std::size_t qubit) const;
    std::span<const std::size_t> x_stabilizers_of(std::size_t qubit) const;

   private:
    int distance_;
    std::vector<Coord> data_qubits_;
    std::vector<Stabilizer> z_stabilizers_;
    std::vector<Stabilizer> x_stabilizers_;
    std::vector<std::size_t> logical_z_support_;
    std::vector<std::size_t> logical_x_support_;
    std::vector<std::vector<std::size_t>> z_of_qubit_;
    std::vector<std::vector<std::size_t>> x_of_qubit_;
};

/// Throws QecError(InvalidDistance) unless d is odd and 3 <= d <= 25.
RotatedSurfaceLayout build_layout(int d);

/// Z-stabilizers adjacent to an odd number of flipped qubits.
Syndrome syndrome_of(const RotatedSurfaceLayout &layout, const ErrorPattern &pattern);

/// Whether a zero-syndrome X residual applies the logical operator. Throws
/// NonTrivialSyndrome if the residual is detectable.
bool is_logical_flip(const RotatedSurfaceLayout &layout, const ErrorPattern &residual);

/// Debug/golden dump: distance, data coordinates and stabilizer memberships.
std::string layout_to_json(const RotatedSurfaceLayout &layout);

}  // namespace qecplan

#endif
