#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhd/corpus.hpp"
#include "qhd/grid.hpp"

namespace qhd {

/// Time-dependent coefficient lambda(t) trading kinetic against potential
/// energy. SC: e^{2 sqrt(mu) t}; C: t^3; NC: alpha t^{1/3}.
struct Schedule {
    enum class Kind { SC, C, NC, Custom };
    Kind kind = Kind::C;
    double mu = 1.0;
    double alpha = 1.0;
    std::function<double(double)> custom_fn;

    static Schedule sc(double mu);
    static Schedule c();
    static Schedule nc(double alpha);
    static Schedule custom(std::function<double(double)> fn);
    /// Piecewise-linear interpolation through (t, lambda) pairs.
    static Schedule table(std::vector<std::pair<double, double>> pts);

    double lambda(double t) const;
    bool requires_positive_start() const {
        return kind == Kind::C || kind == Kind::NC;
    }
    std::string kind_name() const;
};

enum class InitialState { Uniform, CosProduct };

struct QHDConfig {
    GridSpec grid;
    Schedule schedule;
    double step_size = 1e-3;
    int iterations = 10000;
    double t_start = 0.0;
    InitialState initial_state = InitialState::Uniform;
    BarrierWrappedObjective objective;
    std::uint64_t rng_seed = 0;

    double total_time() const { return t_start + iterations * step_size; }
    void validate() const;
};

struct IterationRecord {
    int k = 0;
    double t = 0.0;
    double expected_f = 0.0;
    double best_so_far_gap = 0.0;
};

struct RunTrace {
    std::vector<IterationRecord> records;
    ProbabilityField final_field;
    double initial_expected_f = 0.0;
    /// Smallest on-grid optimality gap representable at this resolution.
    double resolution_floor = 0.0;
};

/// psi_j <- psi_j * exp(-i h lambda f(x_j)); f given per grid point.
void potential_phase_step(WaveFunction& psi, const std::vector<double>& f_values,
                          double lambda, double h);
void potential_phase_step(WaveFunction& psi, const BarrierWrappedObjective& objective,
                          double lambda, double h);

/// Momentum bin m picks up exp(-i h |kappa_m|^2 / (2 lambda)).
void kinetic_step(WaveFunction& psi, double lambda, double h,
                  const SpectralTransform& fft);
void kinetic_step(WaveFunction& psi, double lambda, double h);

/// One first-order product-formula step: kinetic after potential,
/// both frozen at lambda(t_k).
void trotter_step(WaveFunction& psi, const std::vector<double>& f_values,
                  double t_k, double h, const Schedule& schedule,
                  const SpectralTransform& fft);

std::vector<double> grid_values(const GridSpec& grid,
                                const BarrierWrappedObjective& objective);

using StepObserver = std::function<void(int k, double t, const WaveFunction&)>;

RunTrace evolve(const QHDConfig& config, const StepObserver& observer = nullptr);

/// Exact per-step propagator exp(-i h H(t)) with lambda frozen at the step
/// midpoint; dense linear algebra, test oracle only. Grids above 4096 total
/// points are rejected.
WaveFunction dense_propagator_reference(const QHDConfig& config);

}  // namespace qhd
