#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qhd/grid.hpp"

namespace qhd {

using PointFunction = std::function<double(const Point&)>;

struct MomentSet {
    double t = 0.0;
    double expect_f = 0.0;
    std::array<double, 3> expect_p2{};        // per axis
    std::array<double, 3> expect_x2{};        // per axis
    std::array<double, 3> expect_xp_anticomm{};  // <{x_j, p_j}> per axis
    int dim = 1;
    /// Leftover imaginary part of the symmetrized anticommutator sum;
    /// should be at rounding level.
    double anticomm_im_residual = 0.0;
};

struct LyapunovTrace {
    std::vector<std::pair<double, double>> points;  // (t, E)
};

struct MonotonicityReport {
    std::vector<int> violations;  // indices k with E(t_{k+1}) > E(t_k)(1+slack)
    bool pass() const { return violations.empty(); }
};

MomentSet moments(const WaveFunction& psi, const PointFunction& objective, double t);

/// t^2 <f> + 1/2 sum_j (t^-4 <p_j^2> + 2 t^-2 <{x_j,p_j}> + 4 <x_j^2>);
/// the objective must be centered (f(0) = 0 at the minimizer).
double lyapunov_convex(const MomentSet& m);
double lyapunov_convex(const WaveFunction& psi, const PointFunction& objective,
                       double t);

/// <f> + 1/4 e^{-4 sqrt(mu) t} sum <p_j^2> + 1/4 sum <J_j^2> with
/// J_j = e^{-2 sqrt(mu) t} p_j + 2 sqrt(mu) x_j.
double lyapunov_strongly_convex(const MomentSet& m, double mu);
double lyapunov_strongly_convex(const WaveFunction& psi,
                                const PointFunction& objective, double t,
                                double mu);

MonotonicityReport monotonicity_report(const LyapunovTrace& trace, double slack);

}  // namespace qhd
