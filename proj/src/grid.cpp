#include "schartree/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "schartree/errors.hpp"

namespace schartree {

Grid::Grid(int n, double x_min, double x_max) : n_(n), x_min_(x_min), x_max_(x_max) {
  if (n % 2 != 0) throw ValidationError("n must be even");
  if (n < 8) throw ValidationError("n must be at least 8");
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ValidationError("x_max must exceed x_min");
  }
  dx_ = (x_max - x_min) / n;
  points_.resize(n);
  wavenumbers_.resize(n);
  for (int j = 0; j < n; ++j) {
    points_[j] = x_min + j * dx_;
    wavenumbers_[j] = fft_wavenumber(j, n, x_max - x_min);
  }
}

GridPtr make_grid(int n, double x_min, double x_max) {
  return std::make_shared<const Grid>(n, x_min, x_max);
}

double fft_wavenumber(int j, int n, double length) {
  const int m = j < n / 2 ? j : j - n;
  return 2.0 * std::numbers::pi * m / length;
}

Frame Frame::physical(double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  return Frame(true, epsilon);
}

WaveFunction::WaveFunction(GridPtr grid, std::vector<Complex> samples, Frame frame)
    : grid_(std::move(grid)), samples_(std::move(samples)), frame_(frame) {
  if (!grid_) throw ValidationError("wave function needs a grid");
  if (static_cast<int>(samples_.size()) != grid_->size()) {
    throw ValidationError("sample count does not match grid size");
  }
}

WaveFunction WaveFunction::from_function(GridPtr grid, Frame frame,
                                         const std::function<Complex(double)>& f) {
  std::vector<Complex> s(grid->size());
  for (int j = 0; j < grid->size(); ++j) s[j] = f(grid->x(j));
  return WaveFunction(std::move(grid), std::move(s), frame);
}

WaveFunction WaveFunction::scaled(Complex factor) const {
  std::vector<Complex> s(samples_);
  for (auto& v : s) v *= factor;
  return WaveFunction(grid_, std::move(s), frame_);
}

std::vector<double> WaveFunction::density() const {
  std::vector<double> rho(samples_.size());
  std::transform(samples_.begin(), samples_.end(), rho.begin(),
                 [](Complex z) { return std::norm(z); });
  return rho;
}

double l2_norm(std::span<const Complex> samples, double dx) {
  double sum = 0.0;
  for (auto z : samples) sum += std::norm(z);
  return std::sqrt(sum * dx);
}

double l2_norm(const WaveFunction& psi) { return l2_norm(psi.samples(), psi.grid().dx()); }

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("l2_distance: grid mismatch");
  if (!(a.frame() == b.frame())) throw ValidationError("l2_distance: frame mismatch");
  double sum = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t j = 0; j < sa.size(); ++j) sum += std::norm(sa[j] - sb[j]);
  return std::sqrt(sum * a.grid().dx());
}

double abs_moment(const WaveFunction& psi, int m) {
  if (m < 0 || m > 3) throw ValidationError("abs_moment: m must lie in [0, 3]");
  const auto& x = psi.grid().points();
  auto s = psi.samples();
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double x2 = x[j] * x[j];
    double w = 1.0;
    for (int i = 0; i < m; ++i) w *= x2;
    sum += w * std::norm(s[j]);
  }
  return sum * psi.grid().dx();
}

double first_moment(const WaveFunction& psi) {
  const auto& x = psi.grid().points();
  auto s = psi.samples();
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) sum += x[j] * std::norm(s[j]);
  return sum * psi.grid().dx();
}

std::vector<Complex> spectral_transform(const WaveFunction& psi) {
  const Grid& g = psi.grid();
  std::vector<Complex> out(psi.samples().begin(), psi.samples().end());
  detail::Fft::of_size(g.size())->forward(out);
  // The FFT sums from index 0; sample l sits at x_min + l dx.
  const double scale = g.dx() / std::sqrt(2.0 * std::numbers::pi);
  const auto& k = g.wavenumbers();
  for (int j = 0; j < g.size(); ++j) {
    out[j] *= scale * std::polar(1.0, -k[j] * g.x_min());
  }
  return out;
}

double fourier_first_moment(const WaveFunction& psi) {
  const auto spec = spectral_transform(psi);
  const auto& k = psi.grid().wavenumbers();
  double sum = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) sum += k[j] * std::norm(spec[j]);
  return sum * 2.0 * std::numbers::pi / psi.grid().length();
}

double boundary_mass_fraction(std::span<const Complex> samples, int cells) {
  const int n = static_cast<int>(samples.size());
  cells = std::min(cells, n / 2);
  double edge = 0.0;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = std::norm(samples[j]);
    total += w;
    if (j < cells || j >= n - cells) edge += w;
  }
  return total > 0.0 ? edge / total : 0.0;
}

RadialKernel::RadialKernel(GridPtr grid, const RadialFunction& kernel)
    : grid_(std::move(grid)), spectrum_(grid_->size()) {
  const int n = grid_->size();
  for (int j = 0; j < n; ++j) {
    const double r = std::min(j, n - j) * grid_->dx();
    const double v = kernel(r);
    if (!std::isfinite(v)) {
      throw ValidationError("radial kernel is not finite at r = " + std::to_string(r));
    }
    spectrum_[j] = v;
  }
  detail::Fft::of_size(n)->forward(spectrum_);
}

std::vector<double> RadialKernel::apply(std::span<const double> density) const {
  const int n = grid_->size();
  if (static_cast<int>(density.size()) != n) throw ValidationError("density size mismatch");
  std::vector<Complex> work(density.begin(), density.end());
  auto fft = detail::Fft::of_size(n);
  fft->forward(work);
  for (int j = 0; j < n; ++j) work[j] *= spectrum_[j];
  fft->backward(work);
  const double scale = grid_->dx() / n;
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = work[j].real() * scale;
  return out;
}

std::vector<double> radial_convolve(const RadialFunction& kernel,
                                    std::span<const double> density, const GridPtr& grid) {
  return RadialKernel(grid, kernel).apply(density);
}

}  // namespace schartree
