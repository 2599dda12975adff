#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qhd/baselines.hpp"
#include "qhd/engine.hpp"
#include "qhd/observables.hpp"

namespace qhd {

/// Expected best-of-k gap, exact order-statistics formula over a discrete
/// distribution: E[min of k iid draws] - f_min.
double best_of_k_exact(const ProbabilityField& field, const PointFunction& objective,
                       double f_min, std::int64_t k);
double best_of_k_exact(const std::vector<double>& values,
                       const std::vector<double>& masses, double f_min,
                       std::int64_t k);

struct MCEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo best-of-k over solution gaps: average min over `resamples`
/// random k-subsets (drawn without replacement within a resample).
MCEstimate best_of_k_mc(const std::vector<double>& run_values, double f_min,
                        int k, int resamples, std::uint64_t rng_seed);
MCEstimate best_of_k_mc(const std::vector<Point>& run_solutions,
                        const PointFunction& objective, double f_min, int k,
                        int resamples, std::uint64_t rng_seed);

struct TuneResult {
    double best_parameter = 0.0;
    double best_gap = 0.0;
    std::vector<std::pair<double, double>> trace;  // (parameter, gap)
};

struct SearchRange {
    double lo = 0.0;
    double hi = 1.0;
    bool log_scale = false;
};

/// Budgeted scalar tuner: 60 uniform probes over the range, then 40 probes
/// in an interval that shrinks around the incumbent.
TuneResult tune_parameter(const std::function<double(double)>& gap_fn,
                          const SearchRange& range, int budget,
                          std::uint64_t rng_seed, int workers = 1);

enum class FitModel { PowerLaw, Exponential };

struct FitResult {
    double slope = 0.0;      // log-log slope (PowerLaw) or semi-log rate (Exponential)
    double intercept = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual = 0.0;   // RMS residual of the linear fit
    int points = 0;
};

struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 1e300;
};

/// Least-squares fit of log G(k) against log(kh) (PowerLaw) or kh
/// (Exponential) inside the window.
FitResult fit_convergence(const RunTrace& trace, FitModel model,
                          const FitWindow& window);

/// Time window where the gap sits between 10x the terminal plateau and half
/// the initial gap; falls back to the full positive-gap range when the trace
/// has no clear plateau separation.
FitWindow pre_plateau_window(const RunTrace& trace);

/// Log-log slope of terminal gap versus step size.
FitResult fit_plateau_vs_h(const std::vector<std::pair<double, double>>& terminal_gaps);

struct PlanEntry {
    std::string function;
    std::string algorithm;  // QHD | Subgrad | LFMSGD
    std::vector<int> k_values{1, 3, 10, 30, 100};
    // QHD overrides
    int grid_points = 0;      // 0 = desk-scale default per dim
    double step_size = 1e-3;
    double total_time = 10.0;
    double t_start = 0.1;
    // Baseline overrides
    int budget = 10000;
    int final_runs = 10000;
    int tuning_runs = 100;
    int resamples = 10000;
    int tuner_budget = 100;
};

struct SuitePlan {
    std::vector<PlanEntry> entries;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency
};

struct BestOfKRow {
    std::string function;
    std::string algorithm;
    int k = 0;
    double gap = 0.0;
    double stderr_ = 0.0;  // 0 for exact (QHD) evaluation
    std::string parameter_name;
    double tuned_parameter = 0.0;
    double resolution_floor = 0.0;  // QHD only
    std::vector<std::pair<double, double>> tuning_trace;
};

struct BestOfKReport {
    std::vector<BestOfKRow> rows;
};

/// Desk-scale grid default: 512 (1D), 128 (2D), 64 (3D).
int default_grid_points(int dim);

BestOfKReport run_suite(const SuitePlan& plan);

/// Run tasks 0..count-1 on a worker pool; results must be written to
/// pre-sized slots so output does not depend on scheduling.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace qhd
