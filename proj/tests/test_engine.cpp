#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qhd/engine.hpp"
#include "qhd/rng.hpp"

using namespace qhd;

namespace {

constexpr double kPi = 3.14159265358979323846;

ObjectiveSpec quadratic_spec(double half_width) {
    ObjectiveSpec spec;
    spec.name = "QUAD";
    spec.dim = 1;
    spec.domain = {{-half_width, half_width}};
    spec.eval_fn = [](const Point& p) { return p[0] * p[0]; };
    spec.subgrad_fn = [](const Point& p) { return Point{2.0 * p[0]}; };
    spec.known_min_value = 0.0;
    spec.known_min_points = {{0.0}};
    spec.convexity = Convexity::Convex;
    return spec;
}

ObjectiveSpec zero_spec(double half_width) {
    ObjectiveSpec spec = quadratic_spec(half_width);
    spec.name = "ZERO";
    spec.eval_fn = [](const Point&) { return 0.0; };
    spec.subgrad_fn = [](const Point& p) { return Point(p.size(), 0.0); };
    return spec;
}

WaveFunction random_state(const GridSpec& grid, std::uint64_t seed) {
    WaveFunction psi{grid, std::vector<Complex>(size_t(grid.size()))};
    Rng rng(seed);
    for (auto& a : psi.amplitudes) a = Complex(rng.gaussian(), rng.gaussian());
    normalize(psi);
    return psi;
}

double max_diff(const WaveFunction& a, const WaveFunction& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i) {
        m = std::max(m, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    }
    return m;
}

// L2 distance modulo a global phase; physical states are rays.
double ray_distance(const WaveFunction& a, const WaveFunction& b) {
    Complex overlap(0.0, 0.0);
    for (size_t i = 0; i < a.amplitudes.size(); ++i) {
        overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    Complex phase = overlap / std::max(std::abs(overlap), 1e-300);
    double m = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i) {
        m = std::max(m, std::abs(a.amplitudes[i] * phase - b.amplitudes[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("schedule values and validation") {
    CHECK(Schedule::c().lambda(2.0) == doctest::Approx(8.0));
    CHECK(Schedule::sc(4.0).lambda(0.5) == doctest::Approx(std::exp(2.0)));
    CHECK(Schedule::nc(3.0).lambda(8.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(Schedule::sc(0.0), ConfigError);
    CHECK_THROWS_AS(Schedule::nc(-1.0), ConfigError);
    CHECK(Schedule::c().requires_positive_start());
    CHECK(Schedule::nc(1.0).requires_positive_start());
    CHECK_FALSE(Schedule::sc(1.0).requires_positive_start());
}

TEST_CASE("schedule table interpolates and guards its range") {
    Schedule s = Schedule::table({{0.0, 1.0}, {1.0, 3.0}, {2.0, 3.0}});
    CHECK(s.lambda(0.0) == doctest::Approx(1.0));
    CHECK(s.lambda(0.5) == doctest::Approx(2.0));
    CHECK(s.lambda(1.0) == doctest::Approx(3.0));
    CHECK(s.lambda(1.7) == doctest::Approx(3.0));
    CHECK(s.lambda(2.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(s.lambda(-0.1), ConfigError);
    CHECK_THROWS_AS(s.lambda(2.1), ConfigError);
    CHECK_THROWS_AS(Schedule::table({{0.0, 1.0}}), ConfigError);
}

TEST_CASE("potential phase multiplies by the analytic factor") {
    GridSpec grid{1, 16, 1.0};
    WaveFunction psi = random_state(grid, 3);
    WaveFunction before = psi;

    std::vector<double> f_values(16);
    Rng rng(17);
    for (double& v : f_values) v = rng.uniform_in(-2.0, 2.0);

    const double lambda = 1.7, h = 0.3;
    potential_phase_step(psi, f_values, lambda, h);
    for (size_t i = 0; i < psi.amplitudes.size(); ++i) {
        Complex expected = before.amplitudes[i] *
                           std::exp(Complex(0.0, -h * lambda * f_values[i]));
        CHECK(std::abs(psi.amplitudes[i] - expected) <= 1e-14);
        CHECK(std::abs(psi.amplitudes[i]) ==
              doctest::Approx(std::abs(before.amplitudes[i])).epsilon(1e-13));
    }
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kinetic step leaves the uniform state unchanged") {
    GridSpec grid{2, 16, 1.0};
    WaveFunction psi = uniform_state(grid);
    WaveFunction before = psi;
    kinetic_step(psi, 2.0, 0.7);
    CHECK(max_diff(psi, before) <= 1e-13);
}

TEST_CASE("plane waves are kinetic eigenstates") {
    // Each sampled plane wave e^{i pi m x / L} picks up exactly
    // exp(-i h (pi m / L)^2 / (2 lambda)); sweeping m covers every bin.
    GridSpec grid{1, 16, 1.5};
    const double lambda = 0.9, h = 0.21;
    SpectralTransform fft(grid);
    for (int m = -8; m < 8; ++m) {
        WaveFunction psi{grid, std::vector<Complex>(16)};
        for (int j = 0; j < 16; ++j) {
            psi.amplitudes[size_t(j)] =
                std::exp(Complex(0.0, kPi * m * grid.coord(j) / grid.half_width));
        }
        normalize(psi);
        WaveFunction before = psi;
        kinetic_step(psi, lambda, h, fft);
        double kappa = kPi * m / grid.half_width;
        Complex factor = std::exp(Complex(0.0, -h * kappa * kappa / (2.0 * lambda)));
        double err = 0.0;
        for (size_t i = 0; i < psi.amplitudes.size(); ++i) {
            err = std::max(err,
                           std::abs(psi.amplitudes[i] - factor * before.amplitudes[i]));
        }
        INFO("mode " << m);
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("trotter step preserves the norm and reduces to kinetic at f = 0") {
    GridSpec grid{1, 64, 1.0};
    SpectralTransform fft(grid);
    Schedule schedule = Schedule::c();

    WaveFunction psi = random_state(grid, 5);
    WaveFunction twin = psi;

    std::vector<double> zeros(64, 0.0);
    trotter_step(psi, zeros, 1.3, 0.02, schedule, fft);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    kinetic_step(twin, schedule.lambda(1.3), 0.02, fft);
    CHECK(max_diff(psi, twin) <= 1e-13);
}

TEST_CASE("single trotter step has second-order local error") {
    // Constant lambda makes the dense reference the exact propagator, so the
    // deviation is pure splitting error, which scales as h^2.
    GridSpec grid{1, 16, 1.0};
    BarrierWrappedObjective objective = wrap_barrier(quadratic_spec(1.0));
    const std::vector<double> f_values = grid_values(grid, objective);
    SpectralTransform fft(grid);
    Schedule schedule = Schedule::custom([](double) { return 1.0; });

    auto local_error = [&](double h) {
        QHDConfig config;
        config.grid = grid;
        config.schedule = schedule;
        config.step_size = h;
        config.iterations = 1;
        config.objective = objective;
        WaveFunction exact = dense_propagator_reference(config);
        WaveFunction psi = uniform_state(grid);
        trotter_step(psi, f_values, h, h, schedule, fft);
        return ray_distance(psi, exact);
    };

    double e1 = local_error(4e-4);
    double e2 = local_error(2e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("split evolution approaches the dense reference as h shrinks") {
    // Time-independent Hamiltonian: the dense result is h-independent, and the
    // split-step global error should drop by ~2x per halving of h.
    GridSpec grid{1, 16, 1.0};
    BarrierWrappedObjective objective = wrap_barrier(quadratic_spec(1.0));
    Schedule schedule = Schedule::custom([](double) { return 1.0; });
    const double total = 0.4;

    QHDConfig dense_config;
    dense_config.grid = grid;
    dense_config.schedule = schedule;
    dense_config.step_size = total;
    dense_config.iterations = 1;
    dense_config.objective = objective;
    WaveFunction exact = dense_propagator_reference(dense_config);

    auto global_error = [&](int steps) {
        QHDConfig config = dense_config;
        config.step_size = total / steps;
        config.iterations = steps;
        WaveFunction last{config.grid, {}};
        evolve(config, [&](int, double, const WaveFunction& psi) { last = psi; });
        return ray_distance(last, exact);
    };

    double e1 = global_error(8);
    double e2 = global_error(16);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("dense reference matches the split step exactly when f = 0") {
    GridSpec grid{1, 16, 1.0};
    QHDConfig config;
    config.grid = grid;
    config.schedule = Schedule::c();
    config.step_size = 0.01;
    config.iterations = 5;
    config.t_start = 0.5;
    config.objective = wrap_barrier(zero_spec(1.0));

    WaveFunction dense = dense_propagator_reference(config);
    // With f = 0 the potential phase is trivial, kinetic phases commute across
    // steps, and the only discrepancy is the lambda freezing point; pure
    // kinetic phases depend on it, so apply them at the same midpoints.
    WaveFunction psi = uniform_state(grid);
    SpectralTransform fft(grid);
    for (int k = 1; k <= config.iterations; ++k) {
        double t_mid = config.t_start + (k - 0.5) * config.step_size;
        kinetic_step(psi, config.schedule.lambda(t_mid), config.step_size, fft);
    }
    CHECK(max_diff(psi, dense) <= 1e-10);
}

TEST_CASE("dense reference rejects large grids") {
    QHDConfig config;
    config.grid = GridSpec{2, 128, 1.0};
    config.schedule = Schedule::sc(1.0);
    config.objective = wrap_barrier(zero_spec(1.0));
    config.objective.inner.dim = 2;
    config.objective.inner.domain = {{-1, 1}, {-1, 1}};
    CHECK_THROWS_AS(dense_propagator_reference(config), SizeLimit);
}

TEST_CASE("evolve bookkeeping") {
    QHDConfig config;
    config.grid = GridSpec{1, 64, 1.0};
    config.schedule = Schedule::c();
    config.step_size = 1e-3;
    config.iterations = 200;
    config.t_start = 0.1;
    config.objective = wrap_barrier(rescale_to_hypercube(lookup("ABS"), 1.0));

    int observed = 0;
    RunTrace trace = evolve(config, [&](int k, double t, const WaveFunction& psi) {
        CHECK(t == doctest::Approx(0.1 + k * 1e-3));
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-9));
        ++observed;
    });

    CHECK(observed == 201);
    CHECK(trace.records.size() == 200);
    CHECK(trace.records.front().k == 1);
    CHECK(trace.records.back().k == 200);
    CHECK(trace.records.back().t == doctest::Approx(0.3));
    // The 64-point grid lands on the minimizer x = 0 exactly.
    CHECK(trace.resolution_floor == doctest::Approx(0.0));
    CHECK(trace.final_field.total() == doctest::Approx(1.0).epsilon(1e-10));

    double best = trace.records.front().best_so_far_gap;
    for (const IterationRecord& rec : trace.records) {
        CHECK(rec.best_so_far_gap <= best + 1e-15);
        best = rec.best_so_far_gap;
        CHECK(rec.best_so_far_gap <= rec.expected_f - 0.0 + 1e-15);
    }
}

TEST_CASE("config validation") {
    QHDConfig config;
    config.grid = GridSpec{1, 64, 1.0};
    config.schedule = Schedule::c();
    config.objective = wrap_barrier(quadratic_spec(1.0));
    config.t_start = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);  // C needs t_start > 0
    config.schedule = Schedule::nc(1.0);
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.schedule = Schedule::sc(1.0);
    CHECK_NOTHROW(config.validate());
    config.step_size = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.step_size = 1e-3;
    config.grid.dim = 2;  // objective stays 1d
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("coarse steps fail to converge where fine steps do") {
    QHDConfig fine;
    fine.grid = GridSpec{1, 64, 1.0};
    fine.schedule = Schedule::c();
    fine.t_start = 0.5;
    fine.objective = wrap_barrier(quadratic_spec(1.0));
    fine.step_size = 1e-3;
    fine.iterations = 5000;

    QHDConfig coarse = fine;
    coarse.step_size = 1.0;
    coarse.iterations = 5;

    double fine_gap = evolve(fine).records.back().best_so_far_gap;
    double coarse_gap = evolve(coarse).records.back().best_so_far_gap;
    CHECK(fine_gap < 0.02);
    CHECK(coarse_gap > 10.0 * fine_gap);
}

TEST_CASE("domain rescaling is a discrete-time symmetry") {
    // Grid [-L, L] with lambda(t) reproduces grid [-1, 1] with
    // mu(tau) = L lambda(L tau), step h / L, start t0 / L, bin by bin.
    const double L = 2.0;
    const int steps = 100;

    ObjectiveSpec wide;
    wide.name = "WIDE";
    wide.dim = 1;
    wide.domain = {{-L, L}};
    wide.eval_fn = [](const Point& p) { return std::abs(p[0]) + 0.1 * p[0] * p[0]; };
    wide.subgrad_fn = [](const Point& p) {
        return Point{(p[0] > 0 ? 1.0 : p[0] < 0 ? -1.0 : 0.0) + 0.2 * p[0]};
    };
    wide.known_min_points = {{0.0}};

    ObjectiveSpec narrow = wide;
    narrow.domain = {{-1.0, 1.0}};
    narrow.eval_fn = [&wide, L](const Point& p) { return wide.eval_fn({L * p[0]}); };

    QHDConfig a;
    a.grid = GridSpec{1, 64, L};
    a.schedule = Schedule::c();
    a.step_size = 0.01;
    a.iterations = steps;
    a.t_start = 0.5;
    a.objective = wrap_barrier(wide);

    QHDConfig b;
    b.grid = GridSpec{1, 64, 1.0};
    b.schedule = Schedule::custom([L](double tau) {
        double t = L * tau;
        return L * t * t * t;
    });
    b.step_size = a.step_size / L;
    b.iterations = steps;
    b.t_start = a.t_start / L;
    b.objective = wrap_barrier(narrow);

    ProbabilityField fa = evolve(a).final_field;
    ProbabilityField fb = evolve(b).final_field;
    double err = 0.0;
    for (size_t i = 0; i < fa.mass.size(); ++i) {
        err = std::max(err, std::abs(fa.mass[i] - fb.mass[i]));
    }
    CHECK(err <= 1e-8);
}
