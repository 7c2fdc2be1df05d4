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

#ifndef QECPLAN_CALIBRATION_H
#define QECPLAN_CALIBRATION_H

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qecplan {

using Date = std::chrono::year_month_day;

/// Parses an ISO `YYYY-MM-DD` date. Throws std::invalid_argument on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date date);

/// Extracts the date from a calibration file name of the form `*_YYYY-MM-DD.csv`.
std::optional<Date> date_from_filename(std::string_view filename);

struct QubitRecord {
    std::size_t qubit_index = 0;
    double pauli_x_error = 0.0;

    bool operator==(const QubitRecord &) const = default;
};

/// A two-qubit gate link. Endpoints are always stored with qubit_a < qubit_b.
struct CnotLinkRecord {
    std::size_t qubit_a = 0;
    std::size_t qubit_b = 0;
    double cnot_error = 0.0;

    std::string label() const;
    bool operator==(const CnotLinkRecord &) const = default;
};

/// One day of calibration data for one device.
///
/// Qubits are kept sorted by index and links sorted lexicographically by their
/// normalized endpoints, so two snapshots with the same content compare equal
/// regardless of the row order of the file they came from. `warnings` collects
/// non-fatal ingest diagnostics and does not take part in equality.
struct CalibrationSnapshot {
    std::string device_name;
    Date date;
    std::vector<QubitRecord> qubits;
    std::vector<CnotLinkRecord> links;
    std::vector<std::string> warnings;

    const QubitRecord *find_qubit(std::size_t qubit_index) const;
    const CnotLinkRecord *find_link(std::size_t a, std::size_t b) const;

    bool operator==(const CalibrationSnapshot &other) const;
};

/// Parses one calibration export.
///
/// The header is matched after trimming and case-folding; "Qubit" and
/// "Pauli-X error" are required, "CNOT error" is optional and every other
/// column is ignored. CNOT cells hold `a_b:value` entries separated by ';'.
/// A link that appears more than once (in either orientation) keeps its first
/// value and adds a warning.
///
/// Throws QecError with MissingColumn, MalformedRow (carrying the 1-based line
/// number) or DuplicateQubit.
CalibrationSnapshot parse_snapshot(std::string_view raw, const std::string &device, Date date);

/// Writes the canonical three-column CSV form. Parsing the result yields an
/// equal snapshot.
std::string to_canonical_csv(const CalibrationSnapshot &snapshot);

/// Date-ordered, single-device sequence of snapshots. Immutable once built.
class CalibrationSeries {
   public:
    /// Sorts by date. Throws EmptySeries, DuplicateDate, or std::invalid_argument
    /// when device names disagree.
    static CalibrationSeries from_snapshots(std::vector<CalibrationSnapshot> snapshots);

    const std::string &device_name() const {
        return device_name_;
    }
    const std::vector<CalibrationSnapshot> &snapshots() const {
        return snapshots_;
    }
    std::size_t size() const {
        return snapshots_.size();
    }

    /// Union of qubit indices over all days, ascending.
    std::vector<std::size_t> qubit_indices() const;
    /// Union of normalized links over all days, lexicographic.
    std::vector<std::pair<std::size_t, std::size_t>> link_endpoints() const;

   private:
    CalibrationSeries() = default;

    std::string device_name_;
    std::vector<CalibrationSnapshot> snapshots_;
};

struct SnapshotInput {
    std::string raw;
    Date date;
};

CalibrationSeries load_series(const std::vector<SnapshotInput> &inputs, const std::string &device);

struct TimePoint {
    Date date;
    std::optional<double> value;

    bool operator==(const TimePoint &) const = default;
};

/// One entry per snapshot; `value` is empty on days the qubit is not reported.
std::vector<TimePoint> pauli_x_timeseries(const CalibrationSeries &series, std::size_t qubit);
std::vector<TimePoint> cnot_timeseries(const CalibrationSeries &series, std::size_t a, std::size_t b);

struct DriftSummary {
    std::size_t qubit = 0;
    std::size_t days_present = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for fewer than two days
    bool crosses_reference = false;
};

inline constexpr double kDriftReferenceLine = 1e-3;

/// Summary of a qubit's Pauli-X error across the days it is present.
/// `crosses_reference` is set when some day lies strictly below and another
/// strictly above `reference`.
DriftSummary summarize_drift(const CalibrationSeries &series, std::size_t qubit,
                             double reference = kDriftReferenceLine);

/// Canonical JSON form of a series (device, dates, qubits, links, warnings).
std::string series_to_json(const CalibrationSeries &series);
/// Inverse of series_to_json; re-validates every record. Throws QecError
/// (MalformedRow for out-of-range values) or nlohmann::json exceptions.
CalibrationSeries series_from_json(std::string_view text);

}  // namespace qecplan

#endif
