#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "qhd/corpus.hpp"
#include "qhd/errors.hpp"

namespace qhd {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L, L]^dim with N points per axis.
/// Coordinates x_j = -L + j * 2L/N; momentum frequencies kappa_m = pi m / L
/// with m in [-N/2, N/2). Momentum bins are stored in FFT order
/// (m = 0..N/2-1 followed by m = -N/2..-1 on each axis).
struct GridSpec {
    int dim = 1;
    int points_per_axis = 8;
    double half_width = 1.0;

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    std::int64_t size() const;
    double cell_volume() const;
    double coord(int j) const { return -half_width + j * spacing(); }
    /// Frequency kappa_m for FFT bin index on one axis.
    double frequency(int idx) const;
    int frequency_index(int idx) const;  // signed m for an FFT bin
    void unravel(std::int64_t flat, int* idx) const;
    Point point_at(std::int64_t flat) const;
    void validate() const;
};

struct WaveFunction {
    GridSpec grid;
    std::vector<Complex> amplitudes;

    double norm() const;  // discrete L2 norm: sqrt(sum |psi|^2 * dx^dim)
};

struct ProbabilityField {
    GridSpec grid;
    std::vector<double> mass;  // |psi_j|^2 * dx^dim, sums to 1

    double total() const;
};

/// Unitary DFT pair on a grid; owns FFTW plans and a scratch buffer.
/// One instance per evolution run; not thread-safe across runs.
class SpectralTransform {
  public:
    explicit SpectralTransform(const GridSpec& grid);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    /// In-place forward/backward FFT scaled by 1/sqrt(size); no basis phase.
    void forward(std::vector<Complex>& data) const;
    void backward(std::vector<Complex>& data) const;

    const GridSpec& grid() const { return grid_; }

  private:
    struct Impl;
    GridSpec grid_;
    std::unique_ptr<Impl> impl_;
};

WaveFunction uniform_state(const GridSpec& grid);
WaveFunction cos_product_state(const GridSpec& grid);
void normalize(WaveFunction& psi);

/// Momentum-space amplitudes against the plane-wave basis e^{i kappa_m x}.
WaveFunction to_momentum(const WaveFunction& psi);
WaveFunction to_position(const WaveFunction& phi);

ProbabilityField probability_field(const WaveFunction& psi);

std::vector<Point> sample(const ProbabilityField& field, std::uint64_t rng_seed,
                          int count);

}  // namespace qhd
