#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhd/harness.hpp"
#include "qhd/io.hpp"
#include "qhd/observables.hpp"

namespace fs = std::filesystem;
using namespace qhd;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        const char* env = std::getenv("QHD_OUTPUT_DIR");
        dir = env ? env : ".";
    }
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    body(out);
}

Schedule schedule_from_flags(const std::string& kind, double mu, double alpha) {
    if (kind == "SC") return Schedule::sc(mu);
    if (kind == "C") return Schedule::c();
    if (kind == "NC") return Schedule::nc(alpha);
    throw UsageError("unknown schedule: " + kind);
}

struct QhdFlags {
    std::string function = "ABS";
    double h = 1e-3;
    double T = 10.0;
    int K = 0;  // 0 = derive from T
    std::string schedule = "C";
    double mu = 1.0;
    double alpha = 1.0;
    int N = 0;  // 0 = desk-scale default
    double L = 1.0;
    double t_start = -1.0;  // <0 = schedule default
    std::string initial_state = "uniform";
    std::uint64_t seed = 0;
    std::string config_path;
};

QHDConfig build_qhd_config(const QhdFlags& f) {
    ObjectiveSpec spec = lookup(f.function);
    QHDConfig config;
    config.grid.dim = spec.dim;
    config.grid.points_per_axis = f.N > 0 ? f.N : default_grid_points(spec.dim);
    config.grid.half_width = f.L;
    config.schedule = schedule_from_flags(f.schedule, f.mu, f.alpha);
    config.t_start =
        f.t_start >= 0.0 ? f.t_start
                         : (config.schedule.requires_positive_start() ? 0.1 : 0.0);
    config.step_size = f.h;
    config.iterations =
        f.K > 0 ? f.K
                : std::max(1, int(std::llround((f.T - config.t_start) / f.h)));
    config.initial_state = f.initial_state == "cos_product"
                               ? InitialState::CosProduct
                               : InitialState::Uniform;
    config.rng_seed = f.seed;
    config.objective = wrap_barrier(rescale_to_hypercube(spec, f.L));
    // A config document takes precedence over command-line flags.
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw Error("cannot read config file " + f.config_path);
        json doc = json::parse(in);
        config = qhd_config_from_json(doc, config);
    }
    config.validate();
    return config;
}

void add_qhd_flags(CLI::App* cmd, QhdFlags& f) {
    // Long-only help so --h stays available for the step size.
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--function", f.function, "corpus function name");
    cmd->add_option("--h", f.h, "step size")->check(CLI::PositiveNumber);
    cmd->add_option("--T", f.T, "total evolution time")->check(CLI::PositiveNumber);
    cmd->add_option("--K", f.K, "iteration count (overrides --T)");
    cmd->add_option("--schedule", f.schedule, "schedule kind")
        ->check(CLI::IsMember({"SC", "C", "NC"}));
    cmd->add_option("--mu", f.mu, "strong convexity modulus for SC");
    cmd->add_option("--alpha", f.alpha, "NC schedule coefficient");
    cmd->add_option("--N", f.N, "grid points per axis");
    cmd->add_option("--L", f.L, "grid half width")->check(CLI::PositiveNumber);
    cmd->add_option("--t-start", f.t_start, "schedule start time");
    cmd->add_option("--initial-state", f.initial_state, "initial wavefunction")
        ->check(CLI::IsMember({"uniform", "cos_product"}));
    cmd->add_option("--seed", f.seed, "rng seed");
    cmd->add_option("--config", f.config_path, "JSON config file (overrides flags)");
}

int run_qhd_verb(const QhdFlags& flags, const std::string& out_flag,
                 const std::string& format) {
    QHDConfig config = build_qhd_config(flags);
    RunTrace trace = evolve(config);
    fs::path dir = resolve_out_dir(out_flag);
    if (format == "json") {
        write_file(dir / "trace.json",
                   [&](std::ostream& o) { o << run_trace_to_json(trace).dump(2) << '\n'; });
    } else {
        write_file(dir / "trace.csv",
                   [&](std::ostream& o) { write_run_trace_csv(o, trace); });
    }
    write_file(dir / "field.csv",
               [&](std::ostream& o) { write_field_csv(o, trace.final_field); });
    std::cout << "final_gap=" << format_double(trace.records.back().best_so_far_gap)
              << " resolution_floor=" << format_double(trace.resolution_floor)
              << '\n';
    return 0;
}

int run_baseline_verb(const std::string& algo, const std::string& function,
                      int budget, const std::string& step_schedule, double step,
                      double eta, double mu, double sigma, double beta,
                      std::uint64_t seed, std::vector<double> x0,
                      bool best_iterate, const std::string& out_flag) {
    ObjectiveSpec spec = lookup(function);
    if (x0.empty()) {
        for (const Interval& iv : spec.domain) x0.push_back(0.5 * (iv.lo + iv.hi));
    }
    if (int(x0.size()) != spec.dim) throw UsageError("--x0 has wrong dimension");

    BaselineResult result;
    if (algo == "subgrad") {
        SubgradConfig cfg;
        if (step_schedule == "constant") cfg.schedule = SubgradConfig::StepSchedule::Constant;
        else if (step_schedule == "sqrt") cfg.schedule = SubgradConfig::StepSchedule::SqrtDecay;
        else cfg.schedule = SubgradConfig::StepSchedule::StronglyConvex;
        cfg.constant_step = step;
        cfg.eta = eta;
        cfg.mu = mu;
        cfg.budget = budget;
        cfg.x0 = x0;
        cfg.return_mode = best_iterate ? SubgradConfig::ReturnMode::BestIterate
                                       : SubgradConfig::ReturnMode::FinalIterate;
        cfg.record_trajectory = true;
        result = subgrad_run(spec, cfg);
    } else {
        LFMSGDConfig cfg;
        cfg.beta = beta;
        cfg.sigma = sigma;
        cfg.budget = budget;
        cfg.x0 = x0;
        cfg.rng_seed = seed;
        cfg.record_trajectory = true;
        result = lfmsgd_run(spec, cfg);
    }

    fs::path dir = resolve_out_dir(out_flag);
    write_file(dir / "trajectory.csv",
               [&](std::ostream& o) { write_trajectory_csv(o, result.trajectory); });
    json summary{{"algorithm", algo},
                 {"function", function},
                 {"f_solution", result.f_solution},
                 {"gap", result.f_solution - spec.known_min_value},
                 {"solution", result.solution},
                 {"subgradient_queries", result.subgradient_queries},
                 {"value_queries", result.value_queries}};
    std::cout << summary.dump() << '\n';
    return 0;
}

int lyapunov_verb(QhdFlags flags, int stride, double slack,
                  const std::string& out_flag) {
    ObjectiveSpec spec = centered(lookup(flags.function));
    // The analysis functions extend naturally past their box; widening the
    // domain to the grid keeps the potential equal to f itself everywhere.
    spec.domain.assign(size_t(spec.dim), Interval{-flags.L, flags.L});
    const bool strongly = spec.convexity == Convexity::StronglyConvex;
    if (flags.schedule == "C" && strongly) flags.schedule = "SC";
    if (strongly) flags.mu = spec.mu;

    QHDConfig config;
    config.grid.dim = spec.dim;
    config.grid.points_per_axis =
        flags.N > 0 ? flags.N : default_grid_points(spec.dim);
    config.grid.half_width = flags.L;
    config.schedule = schedule_from_flags(flags.schedule, flags.mu, flags.alpha);
    config.t_start =
        flags.t_start >= 0.0
            ? flags.t_start
            : (config.schedule.requires_positive_start() ? 0.1 : 0.0);
    config.step_size = flags.h;
    config.iterations =
        flags.K > 0 ? flags.K
                    : std::max(1, int(std::llround((flags.T - config.t_start) / flags.h)));
    config.initial_state = flags.initial_state == "cos_product"
                               ? InitialState::CosProduct
                               : InitialState::Uniform;
    config.objective = wrap_barrier(spec);
    config.validate();

    auto objective_fn = [&spec](const Point& p) { return spec.eval_fn(p); };
    LyapunovTrace trace;
    const double mu = spec.mu;
    evolve(config, [&](int k, double t, const WaveFunction& psi) {
        if (k % stride != 0) return;
        double e = strongly ? lyapunov_strongly_convex(psi, objective_fn, t, mu)
                            : lyapunov_convex(psi, objective_fn, t);
        trace.points.emplace_back(t, e);
    });
    if (slack < 0.0) slack = flags.h;
    MonotonicityReport report = monotonicity_report(trace, slack);

    fs::path dir = resolve_out_dir(out_flag);
    write_file(dir / "lyapunov.csv",
               [&](std::ostream& o) { write_lyapunov_csv(o, trace); });
    json doc{{"variant", strongly ? "strongly_convex" : "convex"},
             {"slack", slack},
             {"violations", report.violations},
             {"pass", report.pass()}};
    write_file(dir / "monotonicity.json",
               [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    std::cout << "violations=" << report.violations.size()
              << (report.pass() ? " pass" : " fail") << '\n';
    return report.pass() ? 0 : 10;
}

int study_verb(QhdFlags flags, std::vector<double> h_values,
               const std::string& out_flag) {
    if (h_values.empty()) h_values = {0.2, 0.1, 0.05, 0.025};
    json per_h = json::array();
    std::vector<std::pair<double, double>> terminal;
    for (double h : h_values) {
        QhdFlags f = flags;
        f.h = h;
        f.K = 0;
        QHDConfig config = build_qhd_config(f);
        RunTrace trace = evolve(config);
        double gap = trace.records.back().best_so_far_gap;
        terminal.emplace_back(h, gap);
        json item{{"h", h}, {"terminal_gap", gap}};
        try {
            FitWindow window = pre_plateau_window(trace);
            item["power_law"] = fit_to_json(
                fit_convergence(trace, FitModel::PowerLaw, window));
            item["exponential"] = fit_to_json(
                fit_convergence(trace, FitModel::Exponential, window));
        } catch (const EmptyWindow&) {
            item["fit"] = "window too small";
        }
        per_h.push_back(item);
    }
    json doc{{"function", flags.function}, {"runs", per_h}};
    if (terminal.size() >= 3) {
        doc["plateau_vs_h"] = fit_to_json(fit_plateau_vs_h(terminal));
        std::cout << "plateau_slope="
                  << format_double(doc["plateau_vs_h"]["slope"].get<double>())
                  << '\n';
    }
    fs::path dir = resolve_out_dir(out_flag);
    write_file(dir / "study.json",
               [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    return 0;
}

int bench_verb(const std::string& plan_path, int workers,
               const std::string& out_flag) {
    std::ifstream in(plan_path);
    if (!in) throw Error("cannot read plan file " + plan_path);
    SuitePlan plan = plan_from_json(json::parse(in));
    if (workers > 0) plan.workers = workers;
    BestOfKReport report = run_suite(plan);
    fs::path dir = resolve_out_dir(out_flag);
    write_file(dir / "report.csv",
               [&](std::ostream& o) { write_report_csv(o, report); });
    write_file(dir / "report.json",
               [&](std::ostream& o) { o << report_to_json(report).dump(2) << '\n'; });
    std::cout << "rows=" << report.rows.size() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time QHD simulation and benchmarking"};
    app.require_subcommand(1);

    std::string out_dir;
    std::string format = "csv";
    app.add_option("--out", out_dir, "output directory (or QHD_OUTPUT_DIR)");
    app.add_option("--format", format, "report encoding")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* list_cmd = app.add_subcommand("list-functions", "list the corpus");

    QhdFlags qhd_flags;
    CLI::App* run_cmd = app.add_subcommand("run-qhd", "run one QHD evolution");
    add_qhd_flags(run_cmd, qhd_flags);

    std::string algo = "subgrad", bl_function = "ABS", step_schedule = "sqrt";
    int budget = 10000;
    double step = 0.1, eta = 1.0, bl_mu = 1.0, sigma = 0.1, beta = 0.9;
    std::uint64_t bl_seed = 0;
    std::vector<double> x0;
    bool best_iterate = false;
    CLI::App* bl_cmd = app.add_subcommand("run-baseline", "run a classical baseline");
    bl_cmd->add_option("--algo", algo)->check(CLI::IsMember({"subgrad", "lfmsgd"}));
    bl_cmd->add_option("--function", bl_function);
    bl_cmd->add_option("--budget", budget)->check(CLI::PositiveNumber);
    bl_cmd->add_option("--step-schedule", step_schedule)
        ->check(CLI::IsMember({"constant", "sqrt", "strongly-convex"}));
    bl_cmd->add_option("--step", step);
    bl_cmd->add_option("--eta", eta);
    bl_cmd->add_option("--mu", bl_mu);
    bl_cmd->add_option("--sigma", sigma);
    bl_cmd->add_option("--beta", beta);
    bl_cmd->add_option("--seed", bl_seed);
    bl_cmd->add_option("--x0", x0)->delimiter(',');
    bl_cmd->add_flag("--best-iterate", best_iterate);

    QhdFlags ly_flags;
    int stride = 10;
    double slack = -1.0;
    CLI::App* ly_cmd = app.add_subcommand("lyapunov", "Lyapunov trace + monotonicity");
    add_qhd_flags(ly_cmd, ly_flags);
    ly_cmd->add_option("--stride", stride)->check(CLI::PositiveNumber);
    ly_cmd->add_option("--slack", slack);

    QhdFlags st_flags;
    std::vector<double> h_values;
    CLI::App* st_cmd = app.add_subcommand("study", "step-size sweep with rate fits");
    add_qhd_flags(st_cmd, st_flags);
    st_cmd->add_option("--h-values", h_values)->delimiter(',');

    std::string plan_path;
    int workers = 0;
    CLI::App* bench_cmd = app.add_subcommand("bench", "best-of-k benchmark suite");
    bench_cmd->add_option("--plan", plan_path)->required();
    bench_cmd->add_option("--workers", workers);

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const std::string& name : corpus_names()) {
                ObjectiveSpec spec = lookup(name);
                json box = json::array();
                for (const Interval& iv : spec.domain) box.push_back({iv.lo, iv.hi});
                json line{{"name", spec.name},
                          {"dim", spec.dim},
                          {"domain", box},
                          {"known_min_value", spec.known_min_value},
                          {"known_min_points", spec.known_min_points}};
                std::cout << line.dump() << '\n';
            }
            return 0;
        }
        if (run_cmd->parsed()) return run_qhd_verb(qhd_flags, out_dir, format);
        if (bl_cmd->parsed()) {
            return run_baseline_verb(algo, bl_function, budget, step_schedule,
                                     step, eta, bl_mu, sigma, beta, bl_seed, x0,
                                     best_iterate, out_dir);
        }
        if (ly_cmd->parsed()) return lyapunov_verb(ly_flags, stride, slack, out_dir);
        if (st_cmd->parsed()) return study_verb(st_flags, h_values, out_dir);
        if (bench_cmd->parsed()) return bench_verb(plan_path, workers, out_dir);
    } catch (const UnknownFunction& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const DomainViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const SizeLimit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 6;
    } catch (const InsufficientRuns& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 7;
    } catch (const EmptyWindow& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 8;
    } catch (const TooFewPoints& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 8;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 9;
    }
    return 2;
}
