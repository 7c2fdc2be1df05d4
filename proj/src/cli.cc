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

#include "qecplan/cli.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "qecplan/calibration.h"
#include "qecplan/errors.h"
#include "qecplan/logical_model.h"
#include "qecplan/monte_carlo.h"
#include "qecplan/planner.h"
#include "qecplan/text_util.h"

namespace qecplan {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

/// Bad input the user can fix: exit code 2.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class OutputDir {
   public:
    explicit OutputDir(const std::string &dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
        }
    }

    void write(const std::string &name, std::string_view content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw UsageError("cannot write '" + (dir_ / name).string() + "'");
        }
        out << content;
        written_.push_back(name);
    }

    void write_manifest(const std::string &command, const ojson &parameters) {
        ojson m;
        m["schema"] = "qecplan.manifest/1";
        m["tool"] = "qecplan";
        m["version"] = kVersion;
        m["command"] = command;
        m["parameters"] = parameters;
        auto outputs = written_;
        outputs.push_back("run_manifest.json");
        std::sort(outputs.begin(), outputs.end());
        m["outputs"] = outputs;
        write("run_manifest.json", m.dump(2) + "\n");
    }

   private:
    fs::path dir_;
    std::vector<std::string> written_;
};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

/// Fills parameters the user did not pass explicitly from a manifest.
class ManifestOverlay {
   public:
    ManifestOverlay(const std::string &path, const std::string &command) {
        if (path.empty()) {
            return;
        }
        auto j = nlohmann::json::parse(read_file(path));
        if (j.value("command", "") != command) {
            throw UsageError("manifest '" + path + "' was written by '" + j.value("command", "?") + "', not '" +
                             command + "'");
        }
        params_ = j.at("parameters");
        active_ = true;
    }

    template <typename T>
    void apply(const CLI::Option *opt, const char *key, T &field) const {
        if (active_ && opt->count() == 0 && params_.contains(key)) {
            field = params_.at(key).get<T>();
        }
    }

   private:
    nlohmann::json params_;
    bool active_ = false;
};

std::string default_device_name(const fs::path &file) {
    auto stem = file.filename().string();
    if (date_from_filename(stem) && stem.size() > 15) {
        return stem.substr(0, stem.size() - 15);
    }
    return "device";
}

/// Loads either one series.json or calibration CSVs (files or directories).
/// CSV dates come from `dates` (paired with files in order) or file names.
CalibrationSeries load_inputs(const std::vector<std::string> &inputs, const std::vector<std::string> &dates,
                              std::string device) {
    if (inputs.empty()) {
        throw UsageError("no --input given");
    }
    if (inputs.size() == 1 && fs::path(inputs[0]).extension() == ".json") {
        return series_from_json(read_file(inputs[0]));
    }
    std::vector<fs::path> files;
    for (const auto &in : inputs) {
        fs::path path(in);
        std::error_code ec;
        if (fs::is_directory(path, ec)) {
            std::vector<fs::path> found;
            for (const auto &entry : fs::directory_iterator(path)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(path, ec)) {
            files.push_back(path);
        } else {
            throw UsageError("input path '" + in + "' does not exist");
        }
    }
    if (files.empty()) {
        throw QecError(ErrorCode::EmptySeries, "no calibration CSV files found");
    }
    if (!dates.empty() && dates.size() != files.size()) {
        throw UsageError(std::to_string(dates.size()) + " --date values for " + std::to_string(files.size()) +
                         " input files");
    }
    if (device.empty()) {
        device = default_device_name(files.front());
    }
    std::vector<CalibrationSnapshot> snapshots;
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::optional<Date> date;
        if (!dates.empty()) {
            try {
                date = parse_date(dates[k]);
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
        } else {
            date = date_from_filename(files[k].string());
        }
        if (!date) {
            throw UsageError("cannot tell the date of '" + files[k].string() +
                             "'; name it *_YYYY-MM-DD.csv or pass --date");
        }
        try {
            snapshots.push_back(parse_snapshot(read_file(files[k]), device, *date));
        } catch (const QecError &e) {
            throw UsageError(files[k].string() + ": " + e.what());
        }
    }
    return CalibrationSeries::from_snapshots(std::move(snapshots));
}

// ---------------------------------------------------------------- ingest

struct IngestParams {
    std::vector<std::string> inputs;
    std::vector<std::string> dates;
    std::string device;
    double reference = kDriftReferenceLine;
};

int cmd_ingest(const IngestParams &params, const std::string &out_dir, std::ostream &out) {
    auto series = load_inputs(params.inputs, params.dates, params.device);
    OutputDir dir(out_dir);
    dir.write("series.json", series_to_json(series));

    const auto qubits = series.qubit_indices();
    std::string px = "#schema=qecplan.pauli_x_timeseries/1\ndate,qubit,p\n";
    for (auto q : qubits) {
        for (const auto &point : pauli_x_timeseries(series, q)) {
            px += format_date(point.date) + "," + std::to_string(q) + "," +
                  (point.value ? format_double(*point.value) : "") + "\n";
        }
    }
    dir.write("pauli_x_timeseries.csv", px);

    std::string cx = "#schema=qecplan.cnot_timeseries/1\ndate,link,p\n";
    for (auto [a, b] : series.link_endpoints()) {
        auto label = std::to_string(a) + "_" + std::to_string(b);
        for (const auto &point : cnot_timeseries(series, a, b)) {
            cx += format_date(point.date) + "," + label + "," + (point.value ? format_double(*point.value) : "") + "\n";
        }
    }
    dir.write("cnot_timeseries.csv", cx);

    std::string summary = "#schema=qecplan.drift_summary/1\nqubit,days_present,min,max,mean,std,crosses_reference\n";
    std::vector<std::size_t> crossing;
    for (auto q : qubits) {
        auto s = summarize_drift(series, q, params.reference);
        summary += std::to_string(q) + "," + std::to_string(s.days_present) + "," + format_double(s.min) + "," +
                   format_double(s.max) + "," + format_double(s.mean) + "," + format_double(s.stddev) + "," +
                   (s.crosses_reference ? "1" : "0") + "\n";
        if (s.crosses_reference) {
            crossing.push_back(q);
        }
    }
    dir.write("qubit_drift_summary.csv", summary);

    ojson warnings = ojson::array();
    for (const auto &s : series.snapshots()) {
        for (const auto &w : s.warnings) {
            warnings.push_back(format_date(s.date) + ": " + w);
        }
    }
    ojson report;
    report["schema"] = "qecplan.drift_report/1";
    report["device"] = series.device_name();
    report["days"] = series.size();
    report["qubits"] = qubits.size();
    report["links"] = series.link_endpoints().size();
    report["reference"] = params.reference;
    report["crossing_qubits"] = crossing;
    report["warnings"] = warnings;
    dir.write("drift_report.json", report.dump(2) + "\n");

    ojson p;
    p["inputs"] = params.inputs;
    p["dates"] = params.dates;
    p["device"] = params.device;
    p["reference"] = params.reference;
    dir.write_manifest("ingest", p);

    out << "device " << series.device_name() << ": " << series.size() << " days, " << qubits.size() << " qubits, "
        << series.link_endpoints().size() << " CNOT links\n";
    out << crossing.size() << " qubits cross the " << sci(params.reference) << " reference line:";
    for (auto q : crossing) {
        out << " " << q;
    }
    out << "\n";
    if (!warnings.empty()) {
        out << warnings.size() << " ingest warnings (see drift_report.json)\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepParams {
    std::vector<int> distances{3, 5, 7};
    std::vector<double> p_grid;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
};

int cmd_sweep(const SweepParams &params, unsigned threads, const std::string &out_dir, std::ostream &out) {
    if (params.distances.empty() || params.p_grid.empty()) {
        throw UsageError("--distances and --p-grid must both be non-empty");
    }
    if (params.shots == 0) {
        throw UsageError("--shots must be positive");
    }
    auto table = sweep(params.distances, params.p_grid, params.shots, params.seed, threads);

    OutputDir dir(out_dir);
    dir.write("sweep.csv", sweep_to_csv(table));
    SweepTable plottable;
    for (const auto &row : table.rows) {
        if (row.p > 0 && row.estimate.failures > 0) {
            plottable.rows.push_back(row);
        }
    }
    auto loglog = sweep_to_csv(plottable);
    loglog.replace(0, kSweepSchema.size(), "#schema=qecplan.sweep_loglog/1");
    dir.write("sweep_loglog.csv", loglog);

    ojson p;
    p["distances"] = params.distances;
    p["p_grid"] = params.p_grid;
    p["shots"] = params.shots;
    p["seed"] = params.seed;
    dir.write_manifest("sweep", p);

    out << "d      p          failures/shots      p_L        95% CI\n";
    for (const auto &row : table.rows) {
        const auto &e = row.estimate;
        out << row.distance << "  " << sci(row.p) << "  " << e.failures << "/" << e.shots << "  "
            << sci(e.point_estimate) << "  [" << sci(e.ci_low) << ", " << sci(e.ci_high) << "]";
        if (e.saturated) {
            out << "  (" << e.saturated << " saturated)";
        }
        out << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitParams {
    std::string input;
    double target = kDefaultTargetLogicalError;
    int d_max = kMaxPlanDistance;
};

int cmd_fit(const FitParams &params, const std::string &out_dir, std::ostream &out) {
    auto report = fit_model(sweep_from_csv(read_file(params.input)));
    auto table = ThresholdTable::from_model(report.model, params.target, params.d_max);

    OutputDir dir(out_dir);
    dir.write("model.json", fit_report_to_json(report));
    dir.write("threshold_table.csv", threshold_table_to_csv(table));
    ojson p;
    p["input"] = params.input;
    p["target"] = params.target;
    p["d_max"] = params.d_max;
    dir.write_manifest("fit", p);

    out << "alpha = " << sci(report.model.alpha) << ", p_th = " << sci(report.model.p_threshold) << " ("
        << report.used_rows << " rows used, " << report.dropped_rows << " dropped, residual rms "
        << fixed(report.residual_rms, 4) << ")\n";
    out << "implied thresholds for target " << sci(params.target) << ":\n";
    for (auto [d, p_max] : table.entries()) {
        out << "  d=" << d << "  p_max=" << sci(p_max) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- plan

struct PlanParams {
    std::vector<std::string> inputs;
    std::vector<std::string> dates;
    std::string device;
    std::string thresholds = "reference";
    double target = kDefaultTargetLogicalError;
    int d_max = 9;
    int baseline_d_max = kMaxPlanDistance;
    std::string accounting = "data";
};

ThresholdSource load_threshold_source(const std::string &choice) {
    if (choice == "reference") {
        return ThresholdTable::reference_circuit_level();
    }
    auto text = read_file(choice);
    try {
        if (fs::path(choice).extension() == ".json") {
            return model_from_json(text);
        }
        return threshold_table_from_csv(text);
    } catch (const std::exception &e) {
        throw UsageError(choice + ": " + e.what());
    }
}

CostAccounting parse_accounting(const std::string &name) {
    if (name == "data") {
        return CostAccounting::DataOnly;
    }
    if (name == "total") {
        return CostAccounting::WithAncilla;
    }
    throw UsageError("--accounting must be 'data' or 'total', got '" + name + "'");
}

void check_plan_invariants(const FleetPlan &plan, CostAccounting accounting) {
    std::size_t assigned = 0;
    long cost = 0;
    std::size_t histogram_total = 0;
    for (const auto &[q, a] : plan.assignments) {
        if (a.decision.assigned) {
            ++assigned;
            cost += physical_qubit_cost(a.decision.distance, LayoutKind::Rotated, accounting);
        }
    }
    for (auto [d, n] : plan.per_distance_histogram) {
        histogram_total += n;
    }
    if (assigned != plan.usable_count || cost != plan.total_physical_qubits || histogram_total != plan.usable_count) {
        throw std::logic_error("fleet plan totals are inconsistent for " + format_date(plan.date));
    }
}

int cmd_plan(const PlanParams &params, const std::string &out_dir, std::ostream &out) {
    auto series = load_inputs(params.inputs, params.dates, params.device);
    auto source = load_threshold_source(params.thresholds);
    AssignmentPolicy policy{params.target, params.d_max, parse_accounting(params.accounting)};
    AssignmentPolicy baseline_policy = policy;
    baseline_policy.d_max = params.baseline_d_max;

    // Usability grid: the table itself, or the model inverted at the target.
    ThresholdTable grid_table = std::holds_alternative<ThresholdTable>(source)
                                    ? std::get<ThresholdTable>(source)
                                    : ThresholdTable::from_model(std::get<LogicalErrorModel>(source), params.target);

    OutputDir dir(out_dir);
    std::vector<FleetPlan> plans;
    std::string grid = "#schema=qecplan.usability_by_distance/1\ndate";
    for (auto [d, p_max] : grid_table.entries()) {
        grid += ",d" + std::to_string(d);
    }
    grid += "\n";
    for (const auto &snapshot : series.snapshots()) {
        auto plan = plan_day(snapshot, policy, source);
        check_plan_invariants(plan, policy.accounting);
        auto stem = "plan_" + format_date(plan.date);
        dir.write(stem + ".json", plan_to_json(plan));
        dir.write(stem + ".csv", plan_to_csv(plan));
        grid += format_date(snapshot.date);
        for (auto [d, p_max] : grid_table.entries()) {
            grid += "," + format_double(usable_fraction(snapshot, d, grid_table));
        }
        grid += "\n";
        plans.push_back(std::move(plan));
    }
    dir.write("usability_by_distance.csv", grid);

    int baseline = baseline_distance(series, baseline_policy, source);
    auto savings = compare_overhead(plans, baseline, policy.accounting);
    dir.write("savings.json", savings_to_json(savings));

    ojson p;
    p["inputs"] = params.inputs;
    p["dates"] = params.dates;
    p["device"] = params.device;
    p["thresholds"] = params.thresholds;
    p["target"] = params.target;
    p["d_max"] = params.d_max;
    p["baseline_d_max"] = params.baseline_d_max;
    p["accounting"] = params.accounting;
    dir.write_manifest("plan", p);

    double mean_usable = 0;
    for (const auto &[date, f] : savings.per_day_usability) {
        mean_usable += f;
    }
    mean_usable /= static_cast<double>(savings.per_day_usability.size());
    out << "device " << series.device_name() << ", " << series.size() << " days, d_max " << params.d_max << "\n";
    out << "baseline distance " << savings.baseline_distance << ": " << savings.baseline_cost_per_logical
        << " physical qubits per logical qubit\n";
    out << "adaptive mean cost: " << fixed(savings.adaptive_mean_cost_per_logical, 2)
        << " physical qubits per logical qubit\n";
    out << "savings: " << fixed(100 * savings.savings_fraction, 2) << "%\n";
    out << "mean usable qubits: " << fixed(100 * mean_usable, 2) << "%\n";
    return kExitOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string &input_dir, const std::string &out_dir, std::ostream &out) {
    fs::path dir(input_dir);
    auto savings = nlohmann::json::parse(read_file(dir / "savings.json"));
    std::ostringstream text;
    text << "baseline distance " << savings.at("baseline_distance").get<int>() << ": "
         << savings.at("baseline_cost_per_logical").get<long>() << " physical qubits per logical qubit\n";
    text << "adaptive mean cost: " << fixed(savings.at("adaptive_mean_cost_per_logical").get<double>(), 2)
         << " physical qubits per logical qubit\n";
    text << "savings: " << fixed(100 * savings.at("savings_fraction").get<double>(), 2) << "%\n";
    text << "usable fraction by day:\n";
    for (const auto &day : savings.at("per_day_usability")) {
        text << "  " << day.at("date").get<std::string>() << "  "
             << fixed(100 * day.at("usable_fraction").get<double>(), 2) << "%\n";
    }

    auto grid_path = dir / "usability_by_distance.csv";
    if (fs::exists(grid_path)) {
        auto grid_text = read_file(grid_path);
        std::vector<std::string> columns;
        std::vector<double> sums;
        std::size_t days = 0;
        for (auto line : split_lines(grid_text)) {
            if (line.starts_with('#') || trim(line).empty()) {
                continue;
            }
            auto cells = split(line, ',');
            if (columns.empty()) {
                for (std::size_t k = 1; k < cells.size(); ++k) {
                    columns.emplace_back(cells[k]);
                }
                sums.assign(columns.size(), 0.0);
                continue;
            }
            ++days;
            for (std::size_t k = 1; k < cells.size() && k <= sums.size(); ++k) {
                sums[k - 1] += parse_double(cells[k]).value_or(0.0);
            }
        }
        if (days) {
            text << "mean usability by distance:\n";
            for (std::size_t k = 0; k < columns.size(); ++k) {
                text << "  " << columns[k] << "  " << fixed(100 * sums[k] / static_cast<double>(days), 2) << "%\n";
            }
        }
    }
    out << text.str();
    if (!out_dir.empty()) {
        OutputDir o(out_dir);
        o.write("report.txt", text.str());
        ojson p;
        p["input"] = input_dir;
        o.write_manifest("report", p);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Adaptive surface-code distance planning from device calibration data", "qecplan"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string out_dir;
    std::string manifest;

    IngestParams ingest;
    auto *ingest_cmd = app.add_subcommand("ingest", "Parse calibration CSVs into a series and drift report");
    auto *i_input = ingest_cmd->add_option("--input", ingest.inputs, "Calibration CSV files or directories");
    auto *i_date = ingest_cmd->add_option("--date", ingest.dates, "Snapshot date per input file (YYYY-MM-DD)");
    auto *i_device = ingest_cmd->add_option("--device", ingest.device, "Device name (default: from file names)");
    auto *i_ref = ingest_cmd->add_option("--reference", ingest.reference, "Reference error rate for drift flags");
    ingest_cmd->add_option("--out", out_dir, "Output directory")->required();
    ingest_cmd->add_option("--manifest", manifest, "Re-run with parameters from a run_manifest.json");

    SweepParams sweep_params;
    unsigned threads = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "Monte Carlo logical error rate over a (d, p) grid");
    auto *s_d = sweep_cmd->add_option("--distances", sweep_params.distances, "Odd code distances")->delimiter(',');
    auto *s_p = sweep_cmd->add_option("--p-grid", sweep_params.p_grid, "Physical error rates")->delimiter(',');
    auto *s_shots = sweep_cmd->add_option("--shots", sweep_params.shots, "Shots per grid cell");
    auto *s_seed = sweep_cmd->add_option("--seed", sweep_params.seed, "Base seed");
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
    sweep_cmd->add_option("--manifest", manifest, "Re-run with parameters from a run_manifest.json");

    FitParams fit_params;
    auto *fit_cmd = app.add_subcommand("fit", "Fit the logical error model to a sweep");
    auto *f_input = fit_cmd->add_option("--input", fit_params.input, "sweep.csv");
    auto *f_target = fit_cmd->add_option("--target", fit_params.target, "Target logical error rate");
    auto *f_dmax = fit_cmd->add_option("--d-max", fit_params.d_max, "Largest distance in the implied table");
    fit_cmd->add_option("--out", out_dir, "Output directory")->required();
    fit_cmd->add_option("--manifest", manifest, "Re-run with parameters from a run_manifest.json");

    PlanParams plan_params;
    auto *plan_cmd = app.add_subcommand("plan", "Assign per-qubit distances for every calibration day");
    auto *p_input = plan_cmd->add_option("--input", plan_params.inputs, "series.json, or calibration CSVs/directories");
    auto *p_date = plan_cmd->add_option("--date", plan_params.dates, "Snapshot date per input CSV");
    auto *p_device = plan_cmd->add_option("--device", plan_params.device, "Device name for CSV inputs");
    auto *p_thr = plan_cmd->add_option("--thresholds", plan_params.thresholds,
                                       "threshold table .csv, fitted model .json, or 'reference'");
    auto *p_target = plan_cmd->add_option("--target", plan_params.target, "Target logical error rate (model mode)");
    auto *p_dmax = plan_cmd->add_option("--d-max", plan_params.d_max, "Largest distance the adaptive plan may use");
    auto *p_bdmax =
        plan_cmd->add_option("--baseline-d-max", plan_params.baseline_d_max, "Largest distance for the baseline");
    auto *p_acc = plan_cmd->add_option("--accounting", plan_params.accounting, "data | total");
    plan_cmd->add_option("--out", out_dir, "Output directory")->required();
    plan_cmd->add_option("--manifest", manifest, "Re-run with parameters from a run_manifest.json");

    std::string report_input;
    auto *report_cmd = app.add_subcommand("report", "Summarize the outputs of a plan run");
    report_cmd->add_option("--input", report_input, "Output directory of a plan run")->required();
    report_cmd->add_option("--out", out_dir, "Optional directory for report.txt");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o;
        std::ostringstream e2;
        int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitDataError;
    }

    try {
        if (*ingest_cmd) {
            ManifestOverlay m(manifest, "ingest");
            m.apply(i_input, "inputs", ingest.inputs);
            m.apply(i_date, "dates", ingest.dates);
            m.apply(i_device, "device", ingest.device);
            m.apply(i_ref, "reference", ingest.reference);
            return cmd_ingest(ingest, out_dir, out);
        }
        if (*sweep_cmd) {
            ManifestOverlay m(manifest, "sweep");
            m.apply(s_d, "distances", sweep_params.distances);
            m.apply(s_p, "p_grid", sweep_params.p_grid);
            m.apply(s_shots, "shots", sweep_params.shots);
            m.apply(s_seed, "seed", sweep_params.seed);
            return cmd_sweep(sweep_params, threads, out_dir, out);
        }
        if (*fit_cmd) {
            ManifestOverlay m(manifest, "fit");
            m.apply(f_input, "input", fit_params.input);
            m.apply(f_target, "target", fit_params.target);
            m.apply(f_dmax, "d_max", fit_params.d_max);
            if (fit_params.input.empty()) {
                throw UsageError("fit needs --input <sweep.csv>");
            }
            return cmd_fit(fit_params, out_dir, out);
        }
        if (*plan_cmd) {
            ManifestOverlay m(manifest, "plan");
            m.apply(p_input, "inputs", plan_params.inputs);
            m.apply(p_date, "dates", plan_params.dates);
            m.apply(p_device, "device", plan_params.device);
            m.apply(p_thr, "thresholds", plan_params.thresholds);
            m.apply(p_target, "target", plan_params.target);
            m.apply(p_dmax, "d_max", plan_params.d_max);
            m.apply(p_bdmax, "baseline_d_max", plan_params.baseline_d_max);
            m.apply(p_acc, "accounting", plan_params.accounting);
            return cmd_plan(plan_params, out_dir, out);
        }
        if (*report_cmd) {
            return cmd_report(report_input, out_dir, out);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const QecError &e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitDataError;
}

}  // namespace qecplan
