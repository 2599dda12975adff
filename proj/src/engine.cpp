#include "qhd/engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhd {

Schedule Schedule::sc(double mu) {
    if (!(mu > 0.0)) throw ConfigError("SC schedule requires mu > 0");
    Schedule s;
    s.kind = Kind::SC;
    s.mu = mu;
    return s;
}

Schedule Schedule::c() {
    Schedule s;
    s.kind = Kind::C;
    return s;
}

Schedule Schedule::nc(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("NC schedule requires alpha > 0");
    Schedule s;
    s.kind = Kind::NC;
    s.alpha = alpha;
    return s;
}

Schedule Schedule::custom(std::function<double(double)> fn) {
    Schedule s;
    s.kind = Kind::Custom;
    s.custom_fn = std::move(fn);
    return s;
}

Schedule Schedule::table(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw ConfigError("schedule table needs >= 2 points");
    std::sort(pts.begin(), pts.end());
    return custom([pts](double t) {
        if (t < pts.front().first || t > pts.back().first) {
            throw ConfigError("schedule table evaluated outside its range");
        }
        auto it = std::lower_bound(
            pts.begin(), pts.end(), t,
            [](const std::pair<double, double>& a, double v) { return a.first < v; });
        if (it == pts.begin()) return it->second;
        auto prev = it - 1;
        if (it == pts.end() || it->first == prev->first) return prev->second;
        double w = (t - prev->first) / (it->first - prev->first);
        return prev->second + w * (it->second - prev->second);
    });
}

double Schedule::lambda(double t) const {
    switch (kind) {
        case Kind::SC: return std::exp(2.0 * std::sqrt(mu) * t);
        case Kind::C: return t * t * t;
        case Kind::NC: return alpha * std::cbrt(t);
        case Kind::Custom: return custom_fn(t);
    }
    throw ConfigError("invalid schedule kind");
}

std::string Schedule::kind_name() const {
    switch (kind) {
        case Kind::SC: return "SC";
        case Kind::C: return "C";
        case Kind::NC: return "NC";
        case Kind::Custom: return "custom";
    }
    return "?";
}

void QHDConfig::validate() const {
    grid.validate();
    if (!(step_size > 0.0)) throw ConfigError("step_size must be positive");
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (t_start < 0.0) throw ConfigError("t_start must be >= 0");
    if (schedule.requires_positive_start() && t_start == 0.0) {
        throw ConfigError("schedule " + schedule.kind_name() +
                          " requires t_start > 0");
    }
    if (grid.dim != objective.inner.dim) {
        throw ConfigError("grid dim does not match objective dim");
    }
}

void potential_phase_step(WaveFunction& psi, const std::vector<double>& f_values,
                          double lambda, double h) {
    const double c = h * lambda;
    for (size_t i = 0; i < psi.amplitudes.size(); ++i) {
        double phase = -c * f_values[i];
        psi.amplitudes[i] *= Complex(std::cos(phase), std::sin(phase));
    }
}

void potential_phase_step(WaveFunction& psi, const BarrierWrappedObjective& objective,
                          double lambda, double h) {
    potential_phase_step(psi, grid_values(psi.grid, objective), lambda, h);
}

namespace {

// exp(-i h kappa^2 / (2 lambda)) per momentum bin, applied in FFT order.
void apply_kinetic_phases(const GridSpec& grid, std::vector<Complex>& data,
                          double lambda, double h) {
    const int n = grid.points_per_axis;
    std::vector<double> k2(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double k = grid.frequency(i);
        k2[size_t(i)] = k * k;
    }
    const double c = h / (2.0 * lambda);
    int idx[3];
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        grid.unravel(j, idx);
        double ksq = 0.0;
        for (int a = 0; a < grid.dim; ++a) ksq += k2[size_t(idx[a])];
        double phase = -c * ksq;
        data[size_t(j)] *= Complex(std::cos(phase), std::sin(phase));
    }
}

}  // namespace

void kinetic_step(WaveFunction& psi, double lambda, double h,
                  const SpectralTransform& fft) {
    fft.forward(psi.amplitudes);
    apply_kinetic_phases(psi.grid, psi.amplitudes, lambda, h);
    fft.backward(psi.amplitudes);
}

void kinetic_step(WaveFunction& psi, double lambda, double h) {
    SpectralTransform fft(psi.grid);
    kinetic_step(psi, lambda, h, fft);
}

void trotter_step(WaveFunction& psi, const std::vector<double>& f_values,
                  double t_k, double h, const Schedule& schedule,
                  const SpectralTransform& fft) {
    const double lam = schedule.lambda(t_k);
    potential_phase_step(psi, f_values, lam, h);
    kinetic_step(psi, lam, h, fft);
}

std::vector<double> grid_values(const GridSpec& grid,
                                const BarrierWrappedObjective& objective) {
    std::vector<double> v(size_t(grid.size()));
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        v[size_t(j)] = objective.value(grid.point_at(j));
    }
    return v;
}

RunTrace evolve(const QHDConfig& config, const StepObserver& observer) {
    config.validate();

    WaveFunction psi = config.initial_state == InitialState::Uniform
                           ? uniform_state(config.grid)
                           : cos_product_state(config.grid);
    SpectralTransform fft(config.grid);
    const std::vector<double> f_values = grid_values(config.grid, config.objective);
    const double f_min = config.objective.inner.known_min_value;
    const double vol = config.grid.cell_volume();

    auto expected_f = [&]() {
        double s = 0.0;
        for (size_t i = 0; i < psi.amplitudes.size(); ++i) {
            s += std::norm(psi.amplitudes[i]) * f_values[i];
        }
        return s * vol;
    };

    RunTrace trace;
    trace.initial_expected_f = expected_f();
    trace.resolution_floor =
        *std::min_element(f_values.begin(), f_values.end()) - f_min;
    trace.records.reserve(size_t(config.iterations));
    if (observer) observer(0, config.t_start, psi);

    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= config.iterations; ++k) {
        const double t_k = config.t_start + k * config.step_size;
        trotter_step(psi, f_values, t_k, config.step_size, config.schedule, fft);
        const double ef = expected_f();
        best = std::min(best, ef - f_min);
        trace.records.push_back({k, t_k, ef, best});
        if (observer) observer(k, t_k, psi);
    }
    trace.final_field = probability_field(psi);
    return trace;
}

WaveFunction dense_propagator_reference(const QHDConfig& config) {
    config.validate();
    const std::int64_t n = config.grid.size();
    if (n > 4096) throw SizeLimit("dense propagator limited to 4096 grid points");

    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;

    // Kinetic operator in position basis, column by column via the DFT pair.
    SpectralTransform fft(config.grid);
    Mat kinetic = Mat::Zero(n, n);
    std::vector<Complex> col(static_cast<size_t>(n));
    for (std::int64_t c = 0; c < n; ++c) {
        std::fill(col.begin(), col.end(), Complex(0.0, 0.0));
        col[size_t(c)] = Complex(1.0, 0.0);
        fft.forward(col);
        int idx[3];
        for (std::int64_t j = 0; j < n; ++j) {
            config.grid.unravel(j, idx);
            double ksq = 0.0;
            for (int a = 0; a < config.grid.dim; ++a) {
                double k = config.grid.frequency(idx[a]);
                ksq += k * k;
            }
            col[size_t(j)] *= 0.5 * ksq;
        }
        fft.backward(col);
        for (std::int64_t r = 0; r < n; ++r) kinetic(r, c) = col[size_t(r)];
    }

    const std::vector<double> f_values = grid_values(config.grid, config.objective);

    WaveFunction psi = config.initial_state == InitialState::Uniform
                           ? uniform_state(config.grid)
                           : cos_product_state(config.grid);
    Vec state(n);
    for (std::int64_t j = 0; j < n; ++j) state(j) = psi.amplitudes[size_t(j)];

    const double h = config.step_size;
    for (int k = 1; k <= config.iterations; ++k) {
        const double t_mid = config.t_start + (k - 0.5) * h;
        const double lam = config.schedule.lambda(t_mid);
        Mat hmat = kinetic / lam;
        for (std::int64_t j = 0; j < n; ++j) hmat(j, j) += lam * f_values[size_t(j)];
        Eigen::SelfAdjointEigenSolver<Mat> eig(hmat);
        Vec coeff = eig.eigenvectors().adjoint() * state;
        for (std::int64_t j = 0; j < n; ++j) {
            double phase = -h * eig.eigenvalues()(j);
            coeff(j) *= Complex(std::cos(phase), std::sin(phase));
        }
        state = eig.eigenvectors() * coeff;
    }

    for (std::int64_t j = 0; j < n; ++j) psi.amplitudes[size_t(j)] = state(j);
    return psi;
}

}  // namespace qhd
