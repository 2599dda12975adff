#include "qhd/observables.hpp"

#include <cmath>

namespace qhd {

MomentSet moments(const WaveFunction& psi, const PointFunction& objective, double t) {
    const GridSpec& grid = psi.grid;
    MomentSet m;
    m.t = t;
    m.dim = grid.dim;
    const double vol = grid.cell_volume();

    int idx[3];
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        double mass = std::norm(psi.amplitudes[size_t(j)]) * vol;
        if (mass == 0.0) continue;
        grid.unravel(j, idx);
        Point p(grid.dim);
        for (int a = 0; a < grid.dim; ++a) {
            double x = grid.coord(idx[a]);
            p[a] = x;
            m.expect_x2[size_t(a)] += mass * x * x;
        }
        m.expect_f += mass * objective(p);
    }

    // Momentum moments from the momentum-space mass distribution.
    SpectralTransform fft(grid);
    std::vector<Complex> phi = psi.amplitudes;
    fft.forward(phi);
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        double mass = std::norm(phi[size_t(j)]) * vol;
        if (mass == 0.0) continue;
        grid.unravel(j, idx);
        for (int a = 0; a < grid.dim; ++a) {
            double k = grid.frequency(idx[a]);
            m.expect_p2[size_t(a)] += mass * k * k;
        }
    }

    // <{x_j, p_j}> = 2 Re <psi | x_j (p_j psi)> with p_j psi by spectral
    // derivative; accumulate z + conj(z) and keep the imaginary residue.
    for (int a = 0; a < grid.dim; ++a) {
        std::vector<Complex> dpsi = phi;
        for (std::int64_t j = 0; j < grid.size(); ++j) {
            grid.unravel(j, idx);
            dpsi[size_t(j)] *= grid.frequency(idx[a]);
        }
        fft.backward(dpsi);
        Complex acc(0.0, 0.0);
        for (std::int64_t j = 0; j < grid.size(); ++j) {
            grid.unravel(j, idx);
            acc += std::conj(psi.amplitudes[size_t(j)]) * grid.coord(idx[a]) *
                   dpsi[size_t(j)];
        }
        acc *= vol;
        Complex sym = acc + std::conj(acc);
        m.expect_xp_anticomm[size_t(a)] = sym.real();
        m.anticomm_im_residual = std::max(m.anticomm_im_residual,
                                          std::abs(sym.imag()));
    }
    return m;
}

double lyapunov_convex(const MomentSet& m) {
    const double t = m.t;
    double e = t * t * m.expect_f;
    for (int a = 0; a < m.dim; ++a) {
        e += 0.5 * (m.expect_p2[size_t(a)] / (t * t * t * t) +
                    2.0 * m.expect_xp_anticomm[size_t(a)] / (t * t) +
                    4.0 * m.expect_x2[size_t(a)]);
    }
    return e;
}

double lyapunov_convex(const WaveFunction& psi, const PointFunction& objective,
                       double t) {
    return lyapunov_convex(moments(psi, objective, t));
}

double lyapunov_strongly_convex(const MomentSet& m, double mu) {
    const double rt = std::sqrt(mu);
    const double e2 = std::exp(-2.0 * rt * m.t);
    const double e4 = e2 * e2;
    double e = m.expect_f;
    for (int a = 0; a < m.dim; ++a) {
        double j2 = e4 * m.expect_p2[size_t(a)] +
                    2.0 * rt * e2 * m.expect_xp_anticomm[size_t(a)] +
                    4.0 * mu * m.expect_x2[size_t(a)];
        e += 0.25 * e4 * m.expect_p2[size_t(a)] + 0.25 * j2;
    }
    return e;
}

double lyapunov_strongly_convex(const WaveFunction& psi,
                                const PointFunction& objective, double t,
                                double mu) {
    return lyapunov_strongly_convex(moments(psi, objective, t), mu);
}

MonotonicityReport monotonicity_report(const LyapunovTrace& trace, double slack) {
    if (trace.points.empty()) throw EmptyWindow("empty Lyapunov trace");
    MonotonicityReport report;
    for (size_t k = 0; k + 1 < trace.points.size(); ++k) {
        if (trace.points[k + 1].second > trace.points[k].second * (1.0 + slack)) {
            report.violations.push_back(int(k));
        }
    }
    return report;
}

}  // namespace qhd
