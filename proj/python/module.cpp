#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhd/harness.hpp"
#include "qhd/observables.hpp"

namespace py = pybind11;
using namespace qhd;

namespace {

QHDConfig make_config(const std::string& function, int N, double L, double h,
                      double T, const std::string& schedule, double mu,
                      double alpha, double t_start,
                      const std::string& initial_state, std::uint64_t seed) {
    ObjectiveSpec spec = lookup(function);
    QHDConfig config;
    config.grid.dim = spec.dim;
    config.grid.points_per_axis = N > 0 ? N : default_grid_points(spec.dim);
    config.grid.half_width = L;
    if (schedule == "SC") config.schedule = Schedule::sc(mu);
    else if (schedule == "C") config.schedule = Schedule::c();
    else if (schedule == "NC") config.schedule = Schedule::nc(alpha);
    else throw ConfigError("unknown schedule: " + schedule);
    config.t_start = t_start >= 0.0
                         ? t_start
                         : (config.schedule.requires_positive_start() ? 0.1 : 0.0);
    config.step_size = h;
    config.iterations =
        std::max(1, int(std::llround((T - config.t_start) / h)));
    config.initial_state = initial_state == "cos_product"
                               ? InitialState::CosProduct
                               : InitialState::Uniform;
    config.rng_seed = seed;
    config.objective = wrap_barrier(rescale_to_hypercube(spec, L));
    config.validate();
    return config;
}

}  // namespace

PYBIND11_MODULE(_qhdsim, m) {
    m.doc() = "discrete-time QHD simulation toolkit";

    m.def("list_functions", [] {
        py::list out;
        for (const std::string& name : corpus_names()) {
            ObjectiveSpec spec = lookup(name);
            py::dict d;
            d["name"] = spec.name;
            d["dim"] = spec.dim;
            py::list box;
            for (const Interval& iv : spec.domain) {
                box.append(py::make_tuple(iv.lo, iv.hi));
            }
            d["domain"] = box;
            d["known_min_value"] = spec.known_min_value;
            d["known_min_points"] = spec.known_min_points;
            out.append(d);
        }
        return out;
    });

    m.def("evaluate", [](const std::string& function, const Point& p) {
        ObjectiveSpec spec = lookup(function);
        return evaluate(spec, p);
    });

    m.def("subgradient", [](const std::string& function, const Point& p) {
        ObjectiveSpec spec = lookup(function);
        return clarke_subgradient(spec, p);
    });

    m.def(
        "run_qhd",
        [](const std::string& function, int N, double L, double h, double T,
           const std::string& schedule, double mu, double alpha, double t_start,
           const std::string& initial_state, std::uint64_t seed) {
            QHDConfig config = make_config(function, N, L, h, T, schedule, mu,
                                           alpha, t_start, initial_state, seed);
            RunTrace trace = evolve(config);
            py::dict out;
            py::list ks, ts, fs, gaps;
            for (const IterationRecord& rec : trace.records) {
                ks.append(rec.k);
                ts.append(rec.t);
                fs.append(rec.expected_f);
                gaps.append(rec.best_so_far_gap);
            }
            out["k"] = ks;
            out["t"] = ts;
            out["expected_f"] = fs;
            out["gap"] = gaps;
            out["resolution_floor"] = trace.resolution_floor;
            out["final_mass"] = trace.final_field.mass;
            return out;
        },
        py::arg("function"), py::arg("N") = 0, py::arg("L") = 1.0,
        py::arg("h") = 1e-3, py::arg("T") = 10.0, py::arg("schedule") = "C",
        py::arg("mu") = 1.0, py::arg("alpha") = 1.0, py::arg("t_start") = -1.0,
        py::arg("initial_state") = "uniform", py::arg("seed") = 0);

    m.def(
        "run_subgrad",
        [](const std::string& function, const Point& x0, int budget,
           const std::string& schedule, double step, double eta, double mu,
           bool best_iterate) {
            ObjectiveSpec spec = lookup(function);
            SubgradConfig cfg;
            if (schedule == "constant") cfg.schedule = SubgradConfig::StepSchedule::Constant;
            else if (schedule == "sqrt") cfg.schedule = SubgradConfig::StepSchedule::SqrtDecay;
            else if (schedule == "strongly_convex") cfg.schedule = SubgradConfig::StepSchedule::StronglyConvex;
            else throw ConfigError("unknown step schedule: " + schedule);
            cfg.constant_step = step;
            cfg.eta = eta;
            cfg.mu = mu;
            cfg.budget = budget;
            cfg.x0 = x0;
            cfg.return_mode = best_iterate ? SubgradConfig::ReturnMode::BestIterate
                                           : SubgradConfig::ReturnMode::FinalIterate;
            BaselineResult res = subgrad_run(spec, cfg);
            py::dict out;
            out["solution"] = res.solution;
            out["f_solution"] = res.f_solution;
            out["gap"] = res.f_solution - spec.known_min_value;
            out["subgradient_queries"] = res.subgradient_queries;
            out["value_queries"] = res.value_queries;
            return out;
        },
        py::arg("function"), py::arg("x0"), py::arg("budget") = 10000,
        py::arg("schedule") = "sqrt", py::arg("step") = 0.1,
        py::arg("eta") = 1.0, py::arg("mu") = 1.0,
        py::arg("best_iterate") = false);

    m.def(
        "run_lfmsgd",
        [](const std::string& function, const Point& x0, int budget,
           double sigma, double beta, std::uint64_t seed) {
            ObjectiveSpec spec = lookup(function);
            LFMSGDConfig cfg;
            cfg.sigma = sigma;
            cfg.beta = beta;
            cfg.budget = budget;
            cfg.x0 = x0;
            cfg.rng_seed = seed;
            BaselineResult res = lfmsgd_run(spec, cfg);
            py::dict out;
            out["solution"] = res.solution;
            out["f_solution"] = res.f_solution;
            out["gap"] = res.f_solution - spec.known_min_value;
            out["subgradient_queries"] = res.subgradient_queries;
            return out;
        },
        py::arg("function"), py::arg("x0"), py::arg("budget") = 10000,
        py::arg("sigma") = 0.1, py::arg("beta") = 0.9, py::arg("seed") = 0);

    m.def(
        "best_of_k",
        [](const std::vector<double>& values, const std::vector<double>& masses,
           double f_min, std::int64_t k) {
            return best_of_k_exact(values, masses, f_min, k);
        },
        py::arg("values"), py::arg("masses"), py::arg("f_min"), py::arg("k"));
}
