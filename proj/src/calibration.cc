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

#include "qecplan/calibration.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include <boost/tokenizer.hpp>

#include "json.hpp"

#include "qecplan/errors.h"
#include "qecplan/text_util.h"

namespace qecplan {

namespace {

std::string fold_header(std::string_view s) {
    std::string out(trim(s));
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::vector<std::string> split_csv_line(const std::string &line, std::size_t row) {
    using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
    if (std::count(line.begin(), line.end(), '"') % 2 != 0) {
        throw QecError(ErrorCode::MalformedRow, "unterminated quoted field", row);
    }
    std::vector<std::string> cells;
    try {
        Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
        for (const auto &cell : tok) {
            cells.push_back(cell);
        }
    } catch (const boost::escaped_list_error &e) {
        throw QecError(ErrorCode::MalformedRow, std::string("unreadable CSV line: ") + e.what(), row);
    }
    return cells;
}

bool is_probability(double v) {
    return v >= 0.0 && v <= 1.0;
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    std::string s(text);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw std::invalid_argument("expected a YYYY-MM-DD date, got '" + s + "'");
    }
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw std::invalid_argument("not a calendar date: '" + s + "'");
    }
    return date;
}

std::string format_date(Date date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::optional<Date> date_from_filename(std::string_view filename) {
    auto slash = filename.find_last_of("/\\");
    if (slash != std::string_view::npos) {
        filename.remove_prefix(slash + 1);
    }
    constexpr std::string_view ext = ".csv";
    if (filename.size() < ext.size() + 11 || filename.substr(filename.size() - ext.size()) != ext) {
        return std::nullopt;
    }
    auto stem = filename.substr(0, filename.size() - ext.size());
    if (stem[stem.size() - 11] != '_') {
        return std::nullopt;
    }
    try {
        return parse_date(stem.substr(stem.size() - 10));
    } catch (const std::invalid_argument &) {
        return std::nullopt;
    }
}

std::string CnotLinkRecord::label() const {
    return std::to_string(qubit_a) + "_" + std::to_string(qubit_b);
}

const QubitRecord *CalibrationSnapshot::find_qubit(std::size_t qubit_index) const {
    auto it = std::lower_bound(qubits.begin(), qubits.end(), qubit_index, [](const QubitRecord &q, std::size_t k) {
        return q.qubit_index < k;
    });
    if (it == qubits.end() || it->qubit_index != qubit_index) {
        return nullptr;
    }
    return &*it;
}

const CnotLinkRecord *CalibrationSnapshot::find_link(std::size_t a, std::size_t b) const {
    auto key = std::minmax(a, b);
    auto it = std::lower_bound(links.begin(), links.end(), key, [](const CnotLinkRecord &l, const auto &k) {
        return std::pair(l.qubit_a, l.qubit_b) < std::pair(k.first, k.second);
    });
    if (it == links.end() || it->qubit_a != key.first || it->qubit_b != key.second) {
        return nullptr;
    }
    return &*it;
}

bool CalibrationSnapshot::operator==(const CalibrationSnapshot &other) const {
    return device_name == other.device_name && date == other.date && qubits == other.qubits && links == other.links;
}

CalibrationSnapshot parse_snapshot(std::string_view raw, const std::string &device, Date date) {
    CalibrationSnapshot snap;
    snap.device_name = device;
    snap.date = date;

    if (raw.starts_with("\xEF\xBB\xBF")) {
        raw.remove_prefix(3);
    }

    std::optional<std::size_t> qubit_col;
    std::optional<std::size_t> pauli_col;
    std::optional<std::size_t> cnot_col;
    bool have_header = false;
    std::set<std::size_t> seen_qubits;
    std::map<std::pair<std::size_t, std::size_t>, double> links;

    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        auto nl = raw.find('\n', pos);
        auto line_view = raw.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? raw.size() + 1 : nl + 1;
        ++row;
        if (trim(line_view).empty()) {
            continue;
        }
        std::string line(line_view);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto cells = split_csv_line(line, row);

        if (!have_header) {
            have_header = true;
            for (std::size_t k = 0; k < cells.size(); ++k) {
                auto name = fold_header(cells[k]);
                if (name == "qubit" && !qubit_col) {
                    qubit_col = k;
                } else if (name == "pauli-x error" && !pauli_col) {
                    pauli_col = k;
                } else if (name == "cnot error" && !cnot_col) {
                    cnot_col = k;
                }
            }
            if (!qubit_col) {
                throw QecError(ErrorCode::MissingColumn, "header has no 'Qubit' column", row);
            }
            if (!pauli_col) {
                throw QecError(ErrorCode::MissingColumn, "header has no 'Pauli-X error' column", row);
            }
            continue;
        }

        auto needed = std::max(*qubit_col, *pauli_col);
        if (cells.size() <= needed) {
            throw QecError(ErrorCode::MalformedRow,
                           "expected at least " + std::to_string(needed + 1) + " cells, got " +
                               std::to_string(cells.size()),
                           row);
        }
        auto qubit = parse_index(cells[*qubit_col]);
        if (!qubit) {
            throw QecError(ErrorCode::MalformedRow, "qubit index '" + cells[*qubit_col] + "' is not a non-negative integer",
                           row);
        }
        auto p = parse_double(cells[*pauli_col]);
        if (!p) {
            throw QecError(ErrorCode::MalformedRow, "Pauli-X error '" + cells[*pauli_col] + "' is not a number", row);
        }
        if (!is_probability(*p)) {
            throw QecError(ErrorCode::MalformedRow, "Pauli-X error " + cells[*pauli_col] + " is outside [0, 1]", row);
        }
        if (!seen_qubits.insert(*qubit).second) {
            throw QecError(ErrorCode::DuplicateQubit, "qubit " + std::to_string(*qubit) + " listed twice", row);
        }
        snap.qubits.push_back({*qubit, *p});

        if (!cnot_col || *cnot_col >= cells.size()) {
            continue;
        }
        std::string_view cell = trim(cells[*cnot_col]);
        while (!cell.empty()) {
            auto semi = cell.find(';');
            auto entry = trim(cell.substr(0, semi));
            cell = semi == std::string_view::npos ? std::string_view{} : cell.substr(semi + 1);
            auto under = entry.find('_');
            auto colon = entry.find(':');
            std::optional<std::size_t> a;
            std::optional<std::size_t> b;
            std::optional<double> v;
            if (under != std::string_view::npos && colon != std::string_view::npos && under < colon) {
                a = parse_index(entry.substr(0, under));
                b = parse_index(entry.substr(under + 1, colon - under - 1));
                v = parse_double(entry.substr(colon + 1));
            }
            if (!a || !b || !v || *a == *b) {
                throw QecError(ErrorCode::MalformedRow, "unparsable CNOT entry '" + std::string(entry) + "'", row);
            }
            if (!is_probability(*v)) {
                throw QecError(ErrorCode::MalformedRow, "CNOT error in '" + std::string(entry) + "' is outside [0, 1]",
                               row);
            }
            auto key = std::minmax(*a, *b);
            if (!links.emplace(key, *v).second) {
                snap.warnings.push_back("link " + std::to_string(key.first) + "_" + std::to_string(key.second) +
                                        " repeated on line " + std::to_string(row) + "; keeping the first value");
            }
        }
    }
    if (!have_header) {
        throw QecError(ErrorCode::MissingColumn, "input has no header row");
    }

    std::sort(snap.qubits.begin(), snap.qubits.end(), [](const QubitRecord &x, const QubitRecord &y) {
        return x.qubit_index < y.qubit_index;
    });
    for (const auto &[key, v] : links) {
        snap.links.push_back({key.first, key.second, v});
    }
    return snap;
}

std::string to_canonical_csv(const CalibrationSnapshot &snapshot) {
    // Each link is written on the row of its lower endpoint, or the higher one
    // if the lower qubit has no row, or the first row as a last resort.
    std::map<std::size_t, std::vector<const CnotLinkRecord *>> by_row;
    for (const auto &link : snapshot.links) {
        std::size_t owner = snapshot.qubits.empty() ? 0 : snapshot.qubits.front().qubit_index;
        if (snapshot.find_qubit(link.qubit_a)) {
            owner = link.qubit_a;
        } else if (snapshot.find_qubit(link.qubit_b)) {
            owner = link.qubit_b;
        }
        by_row[owner].push_back(&link);
    }

    std::string out = "Qubit,Pauli-X error,CNOT error\n";
    for (const auto &q : snapshot.qubits) {
        out += std::to_string(q.qubit_index);
        out += ',';
        out += format_double(q.pauli_x_error);
        out += ',';
        auto it = by_row.find(q.qubit_index);
        if (it != by_row.end()) {
            out += '"';
            for (std::size_t k = 0; k < it->second.size(); ++k) {
                if (k) {
                    out += ';';
                }
                out += it->second[k]->label() + ":" + format_double(it->second[k]->cnot_error);
            }
            out += '"';
        }
        out += '\n';
    }
    return out;
}

CalibrationSeries CalibrationSeries::from_snapshots(std::vector<CalibrationSnapshot> snapshots) {
    if (snapshots.empty()) {
        throw QecError(ErrorCode::EmptySeries, "a calibration series needs at least one snapshot");
    }
    std::stable_sort(snapshots.begin(), snapshots.end(), [](const auto &x, const auto &y) {
        return x.date < y.date;
    });
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        if (snapshots[k].date == snapshots[k - 1].date) {
            throw QecError(ErrorCode::DuplicateDate, "two snapshots dated " + format_date(snapshots[k].date));
        }
    }
    for (const auto &s : snapshots) {
        if (s.device_name != snapshots.front().device_name) {
            throw std::invalid_argument("series mixes devices '" + snapshots.front().device_name + "' and '" +
                                        s.device_name + "'");
        }
    }
    CalibrationSeries series;
    series.device_name_ = snapshots.front().device_name;
    series.snapshots_ = std::move(snapshots);
    return series;
}

std::vector<std::size_t> CalibrationSeries::qubit_indices() const {
    std::set<std::size_t> all;
    for (const auto &s : snapshots_) {
        for (const auto &q : s.qubits) {
            all.insert(q.qubit_index);
        }
    }
    return {all.begin(), all.end()};
}

std::vector<std::pair<std::size_t, std::size_t>> CalibrationSeries::link_endpoints() const {
    std::set<std::pair<std::size_t, std::size_t>> all;
    for (const auto &s : snapshots_) {
        for (const auto &l : s.links) {
            all.emplace(l.qubit_a, l.qubit_b);
        }
    }
    return {all.begin(), all.end()};
}

CalibrationSeries load_series(const std::vector<SnapshotInput> &inputs, const std::string &device) {
    if (inputs.empty()) {
        throw QecError(ErrorCode::EmptySeries, "no calibration inputs given");
    }
    std::vector<CalibrationSnapshot> snapshots;
    snapshots.reserve(inputs.size());
    for (const auto &in : inputs) {
        snapshots.push_back(parse_snapshot(in.raw, device, in.date));
    }
    return CalibrationSeries::from_snapshots(std::move(snapshots));
}

std::vector<TimePoint> pauli_x_timeseries(const CalibrationSeries &series, std::size_t qubit) {
    std::vector<TimePoint> out;
    out.reserve(series.size());
    for (const auto &s : series.snapshots()) {
        const auto *q = s.find_qubit(qubit);
        out.push_back({s.date, q ? std::optional(q->pauli_x_error) : std::nullopt});
    }
    return out;
}

std::vector<TimePoint> cnot_timeseries(const CalibrationSeries &series, std::size_t a, std::size_t b) {
    std::vector<TimePoint> out;
    out.reserve(series.size());
    for (const auto &s : series.snapshots()) {
        const auto *l = s.find_link(a, b);
        out.push_back({s.date, l ? std::optional(l->cnot_error) : std::nullopt});
    }
    return out;
}

DriftSummary summarize_drift(const CalibrationSeries &series, std::size_t qubit, double reference) {
    DriftSummary out;
    out.qubit = qubit;
    std::vector<double> values;
    for (const auto &point : pauli_x_timeseries(series, qubit)) {
        if (point.value) {
            values.push_back(*point.value);
        }
    }
    out.days_present = values.size();
    if (values.empty()) {
        return out;
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out.min = *lo;
    out.max = *hi;
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.crosses_reference = out.min < reference && out.max > reference;
    return out;
}

std::string series_to_json(const CalibrationSeries &series) {
    nlohmann::ordered_json snapshots = nlohmann::ordered_json::array();
    for (const auto &s : series.snapshots()) {
        nlohmann::ordered_json qubits = nlohmann::ordered_json::array();
        for (const auto &q : s.qubits) {
            qubits.push_back({{"qubit", q.qubit_index}, {"pauli_x_error", q.pauli_x_error}});
        }
        nlohmann::ordered_json links = nlohmann::ordered_json::array();
        for (const auto &l : s.links) {
            links.push_back({{"a", l.qubit_a}, {"b", l.qubit_b}, {"cnot_error", l.cnot_error}});
        }
        nlohmann::ordered_json snap;
        snap["date"] = format_date(s.date);
        snap["qubits"] = qubits;
        snap["links"] = links;
        snap["warnings"] = s.warnings;
        snapshots.push_back(std::move(snap));
    }
    nlohmann::ordered_json j;
    j["schema"] = "qecplan.series/1";
    j["device"] = series.device_name();
    j["snapshots"] = snapshots;
    return j.dump(2) + "\n";
}

CalibrationSeries series_from_json(std::string_view text) {
    auto j = nlohmann::json::parse(text);
    const auto device = j.at("device").get<std::string>();
    std::vector<CalibrationSnapshot> snapshots;
    for (const auto &js : j.at("snapshots")) {
        CalibrationSnapshot s;
        s.device_name = device;
        s.date = parse_date(js.at("date").get<std::string>());
        std::set<std::size_t> seen;
        for (const auto &jq : js.at("qubits")) {
            QubitRecord q{jq.at("qubit").get<std::size_t>(), jq.at("pauli_x_error").get<double>()};
            if (!is_probability(q.pauli_x_error)) {
                throw QecError(ErrorCode::MalformedRow, "Pauli-X error outside [0, 1] for qubit " +
                                                            std::to_string(q.qubit_index));
            }
            if (!seen.insert(q.qubit_index).second) {
                throw QecError(ErrorCode::DuplicateQubit, "qubit " + std::to_string(q.qubit_index) + " listed twice");
            }
            s.qubits.push_back(q);
        }
        std::map<std::pair<std::size_t, std::size_t>, double> links;
        for (const auto &jl : js.at("links")) {
            auto a = jl.at("a").get<std::size_t>();
            auto b = jl.at("b").get<std::size_t>();
            auto v = jl.at("cnot_error").get<double>();
            if (a == b || !is_probability(v)) {
                throw QecError(ErrorCode::MalformedRow, "invalid link record");
            }
            links.emplace(std::minmax(a, b), v);
        }
        for (const auto &[key, v] : links) {
            s.links.push_back({key.first, key.second, v});
        }
        if (js.contains("warnings")) {
            s.warnings = js.at("warnings").get<std::vector<std::string>>();
        }
        std::sort(s.qubits.begin(), s.qubits.end(), [](const QubitRecord &x, const QubitRecord &y) {
            return x.qubit_index < y.qubit_index;
        });
        snapshots.push_back(std::move(s));
    }
    return CalibrationSeries::from_snapshots(std::move(snapshots));
}

}  // namespace qecplan
