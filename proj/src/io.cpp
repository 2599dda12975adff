#include "qhd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qhd {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_run_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "k,t,expected_f,gap\n";
    for (const IterationRecord& rec : trace.records) {
        out << rec.k << ',' << format_double(rec.t) << ','
            << format_double(rec.expected_f) << ','
            << format_double(rec.best_so_far_gap) << '\n';
    }
}

namespace {

void write_coord_header(std::ostream& out, int dim) {
    static const char* names[3] = {"x1", "x2", "x3"};
    for (int a = 0; a < dim; ++a) out << names[a] << ',';
}

void write_coords(std::ostream& out, const GridSpec& grid, std::int64_t flat) {
    int idx[3];
    grid.unravel(flat, idx);
    for (int a = 0; a < grid.dim; ++a) {
        out << format_double(grid.coord(idx[a])) << ',';
    }
}

}  // namespace

void write_field_csv(std::ostream& out, const ProbabilityField& field) {
    write_coord_header(out, field.grid.dim);
    out << "mass\n";
    for (std::int64_t j = 0; j < field.grid.size(); ++j) {
        write_coords(out, field.grid, j);
        out << format_double(field.mass[size_t(j)]) << '\n';
    }
}

void write_wavefunction_csv(std::ostream& out, const WaveFunction& psi) {
    write_coord_header(out, psi.grid.dim);
    out << "re,im\n";
    for (std::int64_t j = 0; j < psi.grid.size(); ++j) {
        write_coords(out, psi.grid, j);
        out << format_double(psi.amplitudes[size_t(j)].real()) << ','
            << format_double(psi.amplitudes[size_t(j)].imag()) << '\n';
    }
}

void write_lyapunov_csv(std::ostream& out, const LyapunovTrace& trace) {
    out << "t,E\n";
    for (const auto& [t, e] : trace.points) {
        out << format_double(t) << ',' << format_double(e) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<std::pair<Point, double>>& trajectory) {
    if (trajectory.empty()) {
        out << "k,f\n";
        return;
    }
    out << "k,";
    write_coord_header(out, int(trajectory.front().first.size()));
    out << "f\n";
    for (size_t k = 0; k < trajectory.size(); ++k) {
        out << k << ',';
        for (double x : trajectory[k].first) out << format_double(x) << ',';
        out << format_double(trajectory[k].second) << '\n';
    }
}

void write_report_csv(std::ostream& out, const BestOfKReport& report) {
    out << "function,algorithm,k,gap,stderr,parameter,parameter_value,"
           "resolution_floor\n";
    for (const BestOfKRow& row : report.rows) {
        out << row.function << ',' << row.algorithm << ',' << row.k << ','
            << format_double(row.gap) << ',' << format_double(row.stderr_) << ','
            << row.parameter_name << ',' << format_double(row.tuned_parameter)
            << ',' << format_double(row.resolution_floor) << '\n';
    }
}

json report_to_json(const BestOfKReport& report) {
    json rows = json::array();
    for (const BestOfKRow& row : report.rows) {
        json trace = json::array();
        for (const auto& [p, g] : row.tuning_trace) trace.push_back({p, g});
        rows.push_back({{"function", row.function},
                        {"algorithm", row.algorithm},
                        {"k", row.k},
                        {"gap", row.gap},
                        {"stderr", row.stderr_},
                        {"parameter", row.parameter_name},
                        {"parameter_value", row.tuned_parameter},
                        {"resolution_floor", row.resolution_floor},
                        {"tuning_trace", trace}});
    }
    return json{{"rows", rows}};
}

json run_trace_to_json(const RunTrace& trace) {
    json records = json::array();
    for (const IterationRecord& rec : trace.records) {
        records.push_back({{"k", rec.k},
                           {"t", rec.t},
                           {"expected_f", rec.expected_f},
                           {"gap", rec.best_so_far_gap}});
    }
    return json{{"records", records},
                {"initial_expected_f", trace.initial_expected_f},
                {"resolution_floor", trace.resolution_floor}};
}

json fit_to_json(const FitResult& fit) {
    return json{{"slope", fit.slope},       {"intercept", fit.intercept},
                {"t_lo", fit.t_lo},         {"t_hi", fit.t_hi},
                {"residual", fit.residual}, {"points", fit.points}};
}

namespace {

Schedule schedule_from_json(const json& doc, const Schedule& fallback) {
    if (!doc.contains("schedule")) return fallback;
    const json& s = doc.at("schedule");
    std::string kind = s.at("kind").get<std::string>();
    if (kind == "SC") return Schedule::sc(s.value("mu", 1.0));
    if (kind == "C") return Schedule::c();
    if (kind == "NC") return Schedule::nc(s.value("alpha", 1.0));
    throw ConfigError("unknown schedule kind: " + kind);
}

}  // namespace

QHDConfig qhd_config_from_json(const json& doc, const QHDConfig& defaults) {
    QHDConfig config = defaults;
    config.schedule = schedule_from_json(doc, defaults.schedule);
    if (doc.contains("t_start")) {
        config.t_start = doc.at("t_start").get<double>();
    } else if (doc.contains("schedule") && config.schedule.requires_positive_start() &&
               !(config.t_start > 0.0)) {
        config.t_start = 0.1;
    }
    config.step_size = doc.value("h", config.step_size);
    config.rng_seed = doc.value("seed", config.rng_seed);
    if (doc.contains("initial_state")) {
        std::string st = doc.at("initial_state").get<std::string>();
        if (st == "uniform") config.initial_state = InitialState::Uniform;
        else if (st == "cos_product") config.initial_state = InitialState::CosProduct;
        else throw ConfigError("unknown initial_state: " + st);
    }
    if (doc.contains("function")) {
        std::string name = doc.at("function").get<std::string>();
        ObjectiveSpec spec = lookup(name);
        config.grid.dim = spec.dim;
        config.grid.half_width = doc.value("L", config.grid.half_width);
        config.grid.points_per_axis =
            doc.value("N", default_grid_points(spec.dim));
        config.objective =
            wrap_barrier(rescale_to_hypercube(spec, config.grid.half_width));
    } else {
        config.grid.half_width = doc.value("L", config.grid.half_width);
        config.grid.points_per_axis = doc.value("N", config.grid.points_per_axis);
    }
    if (doc.contains("K")) {
        config.iterations = doc.at("K").get<int>();
    } else if (doc.contains("T")) {
        double T = doc.at("T").get<double>();
        config.iterations = std::max(
            1, int(std::llround((T - config.t_start) / config.step_size)));
    }
    return config;
}

SuitePlan plan_from_json(const json& doc) {
    SuitePlan plan;
    plan.seed = doc.value("seed", std::uint64_t(0));
    plan.workers = doc.value("workers", 0);
    for (const json& e : doc.at("entries")) {
        PlanEntry entry;
        entry.function = e.at("function").get<std::string>();
        entry.algorithm = e.at("algorithm").get<std::string>();
        if (e.contains("k_values")) {
            entry.k_values = e.at("k_values").get<std::vector<int>>();
        }
        entry.grid_points = e.value("N", entry.grid_points);
        entry.step_size = e.value("h", entry.step_size);
        entry.total_time = e.value("T", entry.total_time);
        entry.t_start = e.value("t_start", entry.t_start);
        entry.budget = e.value("budget", entry.budget);
        entry.final_runs = e.value("final_runs", entry.final_runs);
        entry.tuning_runs = e.value("tuning_runs", entry.tuning_runs);
        entry.resamples = e.value("resamples", entry.resamples);
        entry.tuner_budget = e.value("tuner_budget", entry.tuner_budget);
        plan.entries.push_back(std::move(entry));
    }
    return plan;
}

}  // namespace qhd
