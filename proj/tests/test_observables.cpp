#include <doctest.h>

#include <cmath>
#include <vector>

#include "qhd/observables.hpp"
#include "qhd/rng.hpp"

using namespace qhd;

namespace {

constexpr double kPi = 3.14159265358979323846;

const PointFunction kSquare = [](const Point& p) {
    double s = 0.0;
    for (double x : p) s += x * x;
    return s;
};

WaveFunction random_state(const GridSpec& grid, std::uint64_t seed, bool real_only) {
    WaveFunction psi{grid, std::vector<Complex>(size_t(grid.size()))};
    Rng rng(seed);
    for (auto& a : psi.amplitudes) {
        a = Complex(rng.gaussian(), real_only ? 0.0 : rng.gaussian());
    }
    normalize(psi);
    return psi;
}

}  // namespace

TEST_CASE("moments of the uniform state") {
    GridSpec grid{1, 64, 1.0};
    MomentSet m = moments(uniform_state(grid), kSquare, 1.0);
    CHECK(m.expect_p2[0] <= 1e-20);
    CHECK(m.expect_xp_anticomm[0] == doctest::Approx(0.0).epsilon(1e-12));
    // Grid average of x^2 over x_j = -1 + j/32.
    double x2 = 0.0;
    for (int j = 0; j < 64; ++j) {
        double x = grid.coord(j);
        x2 += x * x / 64.0;
    }
    CHECK(m.expect_x2[0] == doctest::Approx(x2).epsilon(1e-12));
    CHECK(m.expect_f == doctest::Approx(x2).epsilon(1e-12));
}

TEST_CASE("plane wave momentum moment") {
    GridSpec grid{1, 32, 1.5};
    for (int mode : {1, -3, 7}) {
        WaveFunction psi{grid, std::vector<Complex>(32)};
        for (int j = 0; j < 32; ++j) {
            psi.amplitudes[size_t(j)] =
                std::exp(Complex(0.0, kPi * mode * grid.coord(j) / 1.5));
        }
        normalize(psi);
        MomentSet m = moments(psi, kSquare, 1.0);
        double kappa = kPi * mode / 1.5;
        INFO("mode " << mode);
        CHECK(m.expect_p2[0] == doctest::Approx(kappa * kappa).epsilon(1e-10));
    }
}

TEST_CASE("cosine ground-state moments") {
    GridSpec grid{1, 256, 1.0};
    MomentSet m = moments(cos_product_state(grid), kSquare, 1.0);
    // Quadrature values for cos^2(pi x / 2) on [-1, 1].
    CHECK(m.expect_x2[0] == doctest::Approx(1.0 / 3.0 - 2.0 / (kPi * kPi)).epsilon(1e-3));
    CHECK(m.expect_p2[0] == doctest::Approx(kPi * kPi / 4.0).epsilon(2e-2));
    CHECK(std::abs(m.expect_xp_anticomm[0]) <= 1e-10);
}

TEST_CASE("real states have a vanishing anticommutator") {
    // Band-limited so the unpaired Nyquist mode cannot spoil the spectral
    // derivative of a real profile.
    GridSpec grid{2, 16, 1.0};
    WaveFunction psi{grid, std::vector<Complex>(size_t(grid.size()))};
    Rng rng(9);
    double a1 = rng.gaussian(), a2 = rng.gaussian(), a3 = rng.gaussian();
    int idx[2];
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        grid.unravel(j, idx);
        double x = grid.coord(idx[0]), y = grid.coord(idx[1]);
        psi.amplitudes[size_t(j)] = 1.0 + a1 * std::cos(kPi * x + 0.4) +
                                    a2 * std::sin(2.0 * kPi * y) +
                                    a3 * std::cos(kPi * (x + y));
    }
    normalize(psi);
    MomentSet m = moments(psi, kSquare, 1.0);
    CHECK(std::abs(m.expect_xp_anticomm[0]) <= 1e-10);
    CHECK(std::abs(m.expect_xp_anticomm[1]) <= 1e-10);
    CHECK(m.anticomm_im_residual <= 1e-10);
}

TEST_CASE("boosting a real state shifts the anticommutator by 2 v <x>") {
    GridSpec grid{1, 128, 1.0};
    // Smooth, band-limited, asymmetric real profile.
    WaveFunction psi{grid, std::vector<Complex>(128)};
    for (int j = 0; j < 128; ++j) {
        double x = grid.coord(j);
        psi.amplitudes[size_t(j)] =
            std::cos(kPi * x / 2.0) * (1.0 + 0.3 * std::sin(kPi * x));
    }
    normalize(psi);

    double mean_x = 0.0;
    for (int j = 0; j < 128; ++j) {
        double x = grid.coord(j);
        mean_x += std::norm(psi.amplitudes[size_t(j)]) * grid.cell_volume() * x;
    }

    const double v = kPi;  // one momentum bin
    WaveFunction boosted = psi;
    for (int j = 0; j < 128; ++j) {
        boosted.amplitudes[size_t(j)] *=
            std::exp(Complex(0.0, v * grid.coord(j)));
    }
    MomentSet m = moments(boosted, kSquare, 1.0);
    CHECK(m.expect_xp_anticomm[0] == doctest::Approx(2.0 * v * mean_x).epsilon(1e-8));
}

TEST_CASE("anticommutator imaginary residue stays at rounding level") {
    GridSpec grid{2, 32, 1.2};
    for (std::uint64_t seed : {1, 2, 3}) {
        MomentSet m = moments(random_state(grid, seed, false), kSquare, 0.7);
        CHECK(m.anticomm_im_residual <= 1e-10);
    }
}

TEST_CASE("convex functional matches its formula and dominates t^2 <f>") {
    MomentSet m;
    m.t = 2.0;
    m.dim = 1;
    m.expect_f = 0.3;
    m.expect_p2[0] = 1.1;
    m.expect_x2[0] = 0.2;
    m.expect_xp_anticomm[0] = -0.4;
    double expected = 4.0 * 0.3 +
                      0.5 * (1.1 / 16.0 + 2.0 * (-0.4) / 4.0 + 4.0 * 0.2);
    CHECK(lyapunov_convex(m) == doctest::Approx(expected).epsilon(1e-14));

    // The kinetic-virial part is <(p / t^2 + 2 x)^2> / 2 >= 0 on states.
    GridSpec grid{1, 64, 1.0};
    for (std::uint64_t seed : {4, 5, 6}) {
        WaveFunction psi = random_state(grid, seed, false);
        MomentSet ms = moments(psi, kSquare, 1.3);
        CHECK(lyapunov_convex(ms) >= 1.3 * 1.3 * ms.expect_f - 1e-10);
    }
}

TEST_CASE("strongly convex functional matches its formula and dominates <f>") {
    MomentSet m;
    m.t = 0.5;
    m.dim = 1;
    m.expect_f = 0.7;
    m.expect_p2[0] = 0.9;
    m.expect_x2[0] = 0.25;
    m.expect_xp_anticomm[0] = 0.3;
    const double mu = 4.0;  // sqrt(mu) = 2
    double e2 = std::exp(-2.0);
    double e4 = e2 * e2;
    double j2 = e4 * 0.9 + 2.0 * 2.0 * e2 * 0.3 + 4.0 * 4.0 * 0.25;
    double expected = 0.7 + 0.25 * e4 * 0.9 + 0.25 * j2;
    CHECK(lyapunov_strongly_convex(m, mu) == doctest::Approx(expected).epsilon(1e-14));

    GridSpec grid{1, 64, 1.0};
    for (std::uint64_t seed : {7, 8, 9}) {
        WaveFunction psi = random_state(grid, seed, false);
        MomentSet ms = moments(psi, kSquare, 0.8);
        // <J^2> >= 0 and e^{-4 sqrt(mu) t} <p^2> >= 0.
        CHECK(lyapunov_strongly_convex(ms, 2.0) >= ms.expect_f - 1e-10);
    }
}

TEST_CASE("monotonicity report") {
    LyapunovTrace down;
    for (int i = 0; i < 10; ++i) down.points.push_back({0.1 * i, 1.0 - 0.05 * i});
    CHECK(monotonicity_report(down, 0.0).pass());

    LyapunovTrace spiked = down;
    spiked.points[4].second = 2.0;  // rise at index 3, drop after
    MonotonicityReport report = monotonicity_report(spiked, 0.0);
    CHECK_FALSE(report.pass());
    CHECK(report.violations == std::vector<int>{3});

    // A small rise within the slack band is tolerated.
    LyapunovTrace wiggle;
    wiggle.points = {{0.0, 1.0}, {0.1, 1.0005}, {0.2, 0.9}};
    CHECK(monotonicity_report(wiggle, 1e-3).pass());
    CHECK_FALSE(monotonicity_report(wiggle, 1e-5).pass());

    CHECK_THROWS_AS(monotonicity_report(LyapunovTrace{}, 0.0), EmptyWindow);
}
