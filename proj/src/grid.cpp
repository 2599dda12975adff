#include "qhd/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>

namespace qhd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW planner calls are not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::int64_t GridSpec::size() const {
    std::int64_t s = 1;
    for (int i = 0; i < dim; ++i) s *= points_per_axis;
    return s;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= spacing();
    return v;
}

int GridSpec::frequency_index(int idx) const {
    return idx < points_per_axis / 2 ? idx : idx - points_per_axis;
}

double GridSpec::frequency(int idx) const {
    return kPi * frequency_index(idx) / half_width;
}

void GridSpec::unravel(std::int64_t flat, int* idx) const {
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = int(flat % points_per_axis);
        flat /= points_per_axis;
    }
}

Point GridSpec::point_at(std::int64_t flat) const {
    int idx[3];
    unravel(flat, idx);
    Point p(dim);
    for (int a = 0; a < dim; ++a) p[a] = coord(idx[a]);
    return p;
}

void GridSpec::validate() const {
    if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2, or 3");
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
        throw ConfigError("points_per_axis must be a power of two >= 8");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ConfigError("half_width must be finite and positive");
    }
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return std::sqrt(s * grid.cell_volume());
}

double ProbabilityField::total() const {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

struct SpectralTransform::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* buf = nullptr;
    std::int64_t n = 0;
};

SpectralTransform::SpectralTransform(const GridSpec& grid)
    : grid_(grid), impl_(std::make_unique<Impl>()) {
    grid_.validate();
    impl_->n = grid_.size();
    impl_->buf = fftw_alloc_complex(size_t(impl_->n));
    int dims[3] = {grid_.points_per_axis, grid_.points_per_axis, grid_.points_per_axis};
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->fwd = fftw_plan_dft(grid_.dim, dims, impl_->buf, impl_->buf,
                               FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(grid_.dim, dims, impl_->buf, impl_->buf,
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf) fftw_free(impl_->buf);
}

void SpectralTransform::forward(std::vector<Complex>& data) const {
    std::memcpy(impl_->buf, data.data(), sizeof(Complex) * data.size());
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / std::sqrt(double(impl_->n));
    auto* out = reinterpret_cast<Complex*>(impl_->buf);
    for (size_t i = 0; i < data.size(); ++i) data[i] = out[i] * scale;
}

void SpectralTransform::backward(std::vector<Complex>& data) const {
    std::memcpy(impl_->buf, data.data(), sizeof(Complex) * data.size());
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / std::sqrt(double(impl_->n));
    auto* out = reinterpret_cast<Complex*>(impl_->buf);
    for (size_t i = 0; i < data.size(); ++i) data[i] = out[i] * scale;
}

WaveFunction uniform_state(const GridSpec& grid) {
    grid.validate();
    WaveFunction psi{grid, std::vector<Complex>(size_t(grid.size()))};
    double amp = 1.0 / std::sqrt(double(grid.size()) * grid.cell_volume());
    std::fill(psi.amplitudes.begin(), psi.amplitudes.end(), Complex(amp, 0.0));
    return psi;
}

WaveFunction cos_product_state(const GridSpec& grid) {
    grid.validate();
    WaveFunction psi{grid, std::vector<Complex>(size_t(grid.size()))};
    int idx[3];
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        grid.unravel(j, idx);
        double v = 1.0;
        for (int a = 0; a < grid.dim; ++a) {
            v *= std::cos(kPi * grid.coord(idx[a]) / (2.0 * grid.half_width));
        }
        psi.amplitudes[size_t(j)] = Complex(v, 0.0);
    }
    normalize(psi);
    return psi;
}

void normalize(WaveFunction& psi) {
    double n = psi.norm();
    if (n == 0.0) throw ConfigError("cannot normalize the zero state");
    for (Complex& a : psi.amplitudes) a /= n;
}

namespace {

// to_momentum carries a per-axis basis phase (-1)^m relative to the raw FFT,
// so bins represent amplitudes against e^{i kappa_m x}. Since m and the FFT
// bin index differ by the (even) axis size, (-1)^m == (-1)^idx.
void apply_alternating_phase(const GridSpec& grid, std::vector<Complex>& data) {
    int idx[3];
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        grid.unravel(j, idx);
        int parity = 0;
        for (int a = 0; a < grid.dim; ++a) parity ^= (idx[a] & 1);
        if (parity) data[size_t(j)] = -data[size_t(j)];
    }
}

}  // namespace

WaveFunction to_momentum(const WaveFunction& psi) {
    SpectralTransform fft(psi.grid);
    WaveFunction phi = psi;
    fft.forward(phi.amplitudes);
    apply_alternating_phase(psi.grid, phi.amplitudes);
    return phi;
}

WaveFunction to_position(const WaveFunction& phi) {
    SpectralTransform fft(phi.grid);
    WaveFunction psi = phi;
    apply_alternating_phase(phi.grid, psi.amplitudes);
    fft.backward(psi.amplitudes);
    return psi;
}

ProbabilityField probability_field(const WaveFunction& psi) {
    ProbabilityField field{psi.grid, std::vector<double>(psi.amplitudes.size())};
    const double vol = psi.grid.cell_volume();
    for (size_t i = 0; i < psi.amplitudes.size(); ++i) {
        field.mass[i] = std::norm(psi.amplitudes[i]) * vol;
    }
    return field;
}

std::vector<Point> sample(const ProbabilityField& field, std::uint64_t rng_seed,
                          int count) {
    if (count < 1) throw ConfigError("sample count must be >= 1");
    std::vector<double> cdf(field.mass.size());
    std::partial_sum(field.mass.begin(), field.mass.end(), cdf.begin());
    const double total = cdf.back();

    // splitmix-style generator; platform-independent draws.
    std::uint64_t state = rng_seed;
    auto next_uniform = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return double(z >> 11) * 0x1.0p-53;
    };

    std::vector<Point> out;
    out.reserve(size_t(count));
    for (int i = 0; i < count; ++i) {
        double u = next_uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::int64_t j = std::min<std::int64_t>(it - cdf.begin(),
                                                std::int64_t(cdf.size()) - 1);
        out.push_back(field.grid.point_at(j));
    }
    return out;
}

}  // namespace qhd
