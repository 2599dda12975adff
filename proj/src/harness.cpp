#include "qhd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "qhd/observables.hpp"
#include "qhd/rng.hpp"

namespace qhd {

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LinearFit fit;
    double denom = double(n) * sxx - sx * sx;
    fit.slope = (double(n) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / double(n);
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / double(n));
    return fit;
}

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double best_of_k_exact(const std::vector<double>& values,
                       const std::vector<double>& masses, double f_min,
                       std::int64_t k) {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (values.size() != masses.size() || values.empty()) {
        throw ConfigError("values and masses must be nonempty and aligned");
    }
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });

    // Survival function S_j = P(draw >= j-th smallest value); the min of k
    // draws lands on slot j with probability S_j^k - S_{j+1}^k.
    double total = 0.0;
    for (double m : masses) total += m;
    double expect = 0.0;
    double survival = total;
    for (size_t j = 0; j < n; ++j) {
        double next_survival = survival - masses[order[j]];
        if (next_survival < 0.0) next_survival = 0.0;
        expect += values[order[j]] *
                  (std::pow(survival / total, double(k)) -
                   std::pow(next_survival / total, double(k)));
        survival = next_survival;
    }
    return expect - f_min;
}

double best_of_k_exact(const ProbabilityField& field, const PointFunction& objective,
                       double f_min, std::int64_t k) {
    std::vector<double> values(field.mass.size());
    for (std::int64_t j = 0; j < field.grid.size(); ++j) {
        values[size_t(j)] = objective(field.grid.point_at(j));
    }
    return best_of_k_exact(values, field.mass, f_min, k);
}

MCEstimate best_of_k_mc(const std::vector<double>& run_values, double f_min,
                        int k, int resamples, std::uint64_t rng_seed) {
    const int n = int(run_values.size());
    if (k < 1 || n < k) throw InsufficientRuns("need at least k run values");
    if (resamples < 1) throw ConfigError("resamples must be >= 1");

    std::vector<double> gaps(run_values.size());
    for (size_t i = 0; i < run_values.size(); ++i) gaps[i] = run_values[i] - f_min;

    Rng rng(rng_seed);
    std::vector<int> deck(static_cast<size_t>(n));
    std::iota(deck.begin(), deck.end(), 0);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < resamples; ++r) {
        // Partial Fisher-Yates: the first k slots form a uniform k-subset.
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i) {
            int j = i + int(rng.below(std::uint64_t(n - i)));
            std::swap(deck[size_t(i)], deck[size_t(j)]);
            best = std::min(best, gaps[size_t(deck[size_t(i)])]);
        }
        sum += best;
        sum_sq += best * best;
    }
    MCEstimate est;
    est.estimate = sum / resamples;
    if (resamples > 1) {
        double var = (sum_sq - sum * sum / resamples) / (resamples - 1);
        est.stderr_ = std::sqrt(std::max(0.0, var) / resamples);
    }
    return est;
}

MCEstimate best_of_k_mc(const std::vector<Point>& run_solutions,
                        const PointFunction& objective, double f_min, int k,
                        int resamples, std::uint64_t rng_seed) {
    std::vector<double> values(run_solutions.size());
    for (size_t i = 0; i < run_solutions.size(); ++i) values[i] = objective(run_solutions[i]);
    return best_of_k_mc(values, f_min, k, resamples, rng_seed);
}

TuneResult tune_parameter(const std::function<double(double)>& gap_fn,
                          const SearchRange& range, int budget,
                          std::uint64_t rng_seed, int workers) {
    if (budget < 1) throw ConfigError("tuner budget must be >= 1");
    if (!(range.hi > range.lo)) throw ConfigError("empty search range");
    if (range.log_scale && !(range.lo > 0.0)) {
        throw ConfigError("log-scale range needs positive endpoints");
    }

    auto encode = [&](double p) { return range.log_scale ? std::log(p) : p; };
    auto decode = [&](double u) { return range.log_scale ? std::exp(u) : u; };
    const double u_lo = encode(range.lo);
    const double u_hi = encode(range.hi);

    Rng rng(rng_seed);
    TuneResult result;
    result.best_gap = std::numeric_limits<double>::infinity();

    auto probe_batch = [&](const std::vector<double>& params) {
        std::vector<double> gaps(params.size());
        parallel_for(int(params.size()), workers,
                     [&](int i) { gaps[size_t(i)] = gap_fn(params[size_t(i)]); });
        for (size_t i = 0; i < params.size(); ++i) {
            result.trace.emplace_back(params[i], gaps[i]);
            if (gaps[i] < result.best_gap) {
                result.best_gap = gaps[i];
                result.best_parameter = params[i];
            }
        }
    };

    // Global phase: uniform random probes over the (possibly log) range.
    int global_count = std::max(1, (budget * 3) / 5);
    global_count = std::min(global_count, budget);
    std::vector<double> batch;
    for (int i = 0; i < global_count; ++i) {
        batch.push_back(decode(rng.uniform_in(u_lo, u_hi)));
    }
    probe_batch(batch);

    // Local phase: rounds of probes in an interval shrinking around the
    // incumbent.
    int remaining = budget - global_count;
    double width = (u_hi - u_lo) / 8.0;
    while (remaining > 0) {
        int round = std::min(remaining, 8);
        double center = encode(result.best_parameter);
        batch.clear();
        for (int i = 0; i < round; ++i) {
            double u = rng.uniform_in(std::max(u_lo, center - width),
                                      std::min(u_hi, center + width));
            batch.push_back(decode(u));
        }
        probe_batch(batch);
        remaining -= round;
        width *= 0.6;
    }
    return result;
}

FitResult fit_convergence(const RunTrace& trace, FitModel model,
                          const FitWindow& window) {
    std::vector<double> xs, ys;
    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = -std::numeric_limits<double>::infinity();
    for (const IterationRecord& rec : trace.records) {
        if (rec.k < 1) continue;
        double kh = rec.t;  // caller's window is in evolution time
        if (kh < window.t_lo || kh > window.t_hi) continue;
        if (!(rec.best_so_far_gap > 0.0)) continue;
        xs.push_back(model == FitModel::PowerLaw ? std::log(kh) : kh);
        ys.push_back(std::log(rec.best_so_far_gap));
        t_lo = std::min(t_lo, kh);
        t_hi = std::max(t_hi, kh);
    }
    if (xs.size() < 5) throw EmptyWindow("fewer than 5 positive-gap points in window");
    LinearFit fit = least_squares(xs, ys);
    FitResult out;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.residual = fit.rms;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.points = int(xs.size());
    return out;
}

FitWindow pre_plateau_window(const RunTrace& trace) {
    double g0 = 0.0, gf = 0.0;
    double t_first = 0.0, t_last = 0.0;
    bool seen = false;
    for (const IterationRecord& rec : trace.records) {
        if (rec.k < 1 || !(rec.best_so_far_gap > 0.0)) continue;
        if (!seen) {
            g0 = rec.best_so_far_gap;
            t_first = rec.t;
            seen = true;
        }
        gf = rec.best_so_far_gap;
        t_last = rec.t;
    }
    if (!seen) throw EmptyWindow("trace has no positive gaps");
    double hi_gap = 0.5 * g0;
    double lo_gap = 10.0 * gf;
    if (!(lo_gap < hi_gap)) return FitWindow{t_first, t_last};
    FitWindow window{t_last, t_first};
    for (const IterationRecord& rec : trace.records) {
        if (rec.k < 1 || !(rec.best_so_far_gap > 0.0)) continue;
        if (rec.best_so_far_gap <= hi_gap && rec.best_so_far_gap >= lo_gap) {
            window.t_lo = std::min(window.t_lo, rec.t);
            window.t_hi = std::max(window.t_hi, rec.t);
        }
    }
    if (!(window.t_lo < window.t_hi)) return FitWindow{t_first, t_last};
    return window;
}

FitResult fit_plateau_vs_h(const std::vector<std::pair<double, double>>& terminal_gaps) {
    std::vector<double> xs, ys;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [h, gap] : terminal_gaps) {
        if (!(h > 0.0) || !(gap > 0.0)) continue;
        xs.push_back(std::log(h));
        ys.push_back(std::log(gap));
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    if (xs.size() < 3) throw TooFewPoints("need at least 3 (h, gap) points");
    LinearFit fit = least_squares(xs, ys);
    FitResult out;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.residual = fit.rms;
    out.t_lo = lo;
    out.t_hi = hi;
    out.points = int(xs.size());
    return out;
}

int default_grid_points(int dim) {
    switch (dim) {
        case 1: return 512;
        case 2: return 128;
        case 3: return 64;
    }
    throw ConfigError("dim must be 1, 2, or 3");
}

namespace {

struct QhdOutcome {
    ProbabilityField field;
    double resolution_floor = 0.0;
    std::vector<double> grid_f;  // objective per grid point, matching field
};

QhdOutcome run_qhd_once(const PlanEntry& entry, const ObjectiveSpec& spec,
                        double half_width) {
    QHDConfig config;
    config.grid.dim = spec.dim;
    config.grid.points_per_axis =
        entry.grid_points > 0 ? entry.grid_points : default_grid_points(spec.dim);
    config.grid.half_width = half_width;
    config.schedule = Schedule::c();
    config.step_size = entry.step_size;
    config.t_start = entry.t_start;
    config.iterations =
        std::max(1, int(std::llround((entry.total_time - entry.t_start) / entry.step_size)));
    config.initial_state = InitialState::Uniform;
    config.objective = wrap_barrier(rescale_to_hypercube(spec, half_width));

    RunTrace trace = evolve(config);
    QhdOutcome out{std::move(trace.final_field), trace.resolution_floor, {}};
    out.grid_f.resize(size_t(out.field.grid.size()));
    const ObjectiveSpec& obj = config.objective.inner;
    for (std::int64_t j = 0; j < out.field.grid.size(); ++j) {
        out.grid_f[size_t(j)] = obj.eval_fn(out.field.grid.point_at(j));
    }
    return out;
}

int reference_k(const std::vector<int>& ks) {
    if (ks.empty()) throw ConfigError("plan entry has no k values");
    for (int k : ks) {
        if (k == 10) return 10;
    }
    return ks[ks.size() / 2];
}

std::vector<double> baseline_values(const PlanEntry& entry, const ObjectiveSpec& spec,
                                    double parameter, int runs,
                                    std::uint64_t entry_seed, int workers) {
    const bool lfm = entry.algorithm == "LFMSGD";
    std::vector<double> values(static_cast<size_t>(runs));
    parallel_for(runs, workers, [&](int r) {
        Rng init(mix_seed(entry_seed, 0x5eed, std::uint64_t(r)));
        Point x0(size_t(spec.dim));
        for (int i = 0; i < spec.dim; ++i) {
            x0[size_t(i)] = init.uniform_in(spec.domain[size_t(i)].lo,
                                            spec.domain[size_t(i)].hi);
        }
        if (lfm) {
            LFMSGDConfig cfg;
            cfg.sigma = parameter;
            cfg.budget = entry.budget;
            cfg.x0 = x0;
            cfg.rng_seed = mix_seed(entry_seed, 0x10f3, std::uint64_t(r));
            values[size_t(r)] = lfmsgd_run(spec, cfg).f_solution;
        } else {
            SubgradConfig cfg;
            cfg.schedule = SubgradConfig::StepSchedule::SqrtDecay;
            cfg.eta = parameter;
            cfg.budget = entry.budget;
            cfg.x0 = x0;
            values[size_t(r)] = subgrad_run(spec, cfg).f_solution;
        }
    });
    return values;
}

}  // namespace

BestOfKReport run_suite(const SuitePlan& plan) {
    int workers = plan.workers > 0 ? plan.workers
                                   : int(std::thread::hardware_concurrency());
    workers = std::max(1, workers);

    BestOfKReport report;
    for (size_t e = 0; e < plan.entries.size(); ++e) {
        const PlanEntry& entry = plan.entries[e];
        const ObjectiveSpec spec = lookup(entry.function);
        const std::uint64_t entry_seed = mix_seed(plan.seed, e);
        const int ref_k = reference_k(entry.k_values);

        if (entry.algorithm == "QHD") {
            SearchRange range{0.5, 20.0, false};
            auto gap_at = [&](double L) {
                QhdOutcome out = run_qhd_once(entry, spec, L);
                return best_of_k_exact(out.grid_f, out.field.mass,
                                       spec.known_min_value, ref_k);
            };
            TuneResult tuned;
            if (entry.tuner_budget > 0) {
                tuned = tune_parameter(gap_at, range, entry.tuner_budget,
                                       entry_seed, workers);
            } else {
                tuned.best_parameter = 1.0;
            }
            QhdOutcome out = run_qhd_once(entry, spec, tuned.best_parameter);
            for (int k : entry.k_values) {
                BestOfKRow row;
                row.function = entry.function;
                row.algorithm = "QHD";
                row.k = k;
                row.gap = best_of_k_exact(out.grid_f, out.field.mass,
                                          spec.known_min_value, k);
                row.parameter_name = "L";
                row.tuned_parameter = tuned.best_parameter;
                row.resolution_floor = out.resolution_floor;
                row.tuning_trace = tuned.trace;
                report.rows.push_back(std::move(row));
            }
        } else if (entry.algorithm == "Subgrad" || entry.algorithm == "LFMSGD") {
            const bool lfm = entry.algorithm == "LFMSGD";
            SearchRange range = lfm ? SearchRange{1e-3, 1e1, true}
                                    : SearchRange{1e-3, 1e2, true};
            auto gap_at = [&](double p) {
                std::vector<double> vals = baseline_values(
                    entry, spec, p, entry.tuning_runs, entry_seed, 1);
                int k = std::min(ref_k, int(vals.size()));
                return best_of_k_mc(vals, spec.known_min_value, k,
                                    entry.resamples,
                                    mix_seed(entry_seed, 0xabcd))
                    .estimate;
            };
            TuneResult tuned;
            if (entry.tuner_budget > 0) {
                tuned = tune_parameter(gap_at, range, entry.tuner_budget,
                                       entry_seed, workers);
            } else {
                tuned.best_parameter = lfm ? 0.1 : 1.0;
            }
            std::vector<double> vals = baseline_values(
                entry, spec, tuned.best_parameter, entry.final_runs,
                mix_seed(entry_seed, 0xf17a), workers);
            for (int k : entry.k_values) {
                MCEstimate est = best_of_k_mc(vals, spec.known_min_value, k,
                                              entry.resamples,
                                              mix_seed(entry_seed, std::uint64_t(k)));
                BestOfKRow row;
                row.function = entry.function;
                row.algorithm = entry.algorithm;
                row.k = k;
                row.gap = est.estimate;
                row.stderr_ = est.stderr_;
                row.parameter_name = lfm ? "sigma" : "eta";
                row.tuned_parameter = tuned.best_parameter;
                row.tuning_trace = tuned.trace;
                report.rows.push_back(std::move(row));
            }
        } else {
            throw ConfigError("unknown algorithm: " + entry.algorithm);
        }
    }
    return report;
}

}  // namespace qhd
