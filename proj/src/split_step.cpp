#include "split_step.hpp"

#include <cmath>
#include <sstream>

#include "schartree/errors.hpp"

namespace schartree::detail {

SplitStepper::SplitStepper(GridPtr grid, double kinetic_scale)
    : grid_(std::move(grid)), scale_(kinetic_scale), fft_(Fft::of_size(grid_->size())) {}

const std::vector<Complex>& SplitStepper::factors_for(double h) {
  for (const auto& f : cache_) {
    if (f.h == h) return f.phase;
  }
  if (cache_.size() >= 6) cache_.erase(cache_.begin());
  const auto& k = grid_->wavenumbers();
  const double inv_n = 1.0 / grid_->size();
  std::vector<Complex> phase(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    phase[j] = std::polar(inv_n, -h * scale_ * 0.5 * k[j] * k[j]);
  }
  cache_.push_back({h, std::move(phase)});
  return cache_.back().phase;
}

void SplitStepper::kinetic(std::vector<Complex>& u, double h) {
  const auto& phase = factors_for(h);
  fft_->forward(u);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= phase[j];
  fft_->backward(u);
}

void SplitStepper::potential(std::vector<Complex>& u, std::span<const double> v, double h) {
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -h * v[j]);
}

void check_state(std::span<const Complex> u, double t, const StepOptions& opts,
                 const std::string& what) {
  bool finite = true;
  for (auto z : u) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
  const double frac = boundary_mass_fraction(u, opts.boundary_cells);
  if (!finite || frac > opts.boundary_tolerance) {
    std::ostringstream os;
    os << what << ": " << (finite ? "wave mass reached the boundary" : "non-finite samples")
       << " at t = " << t << " (boundary mass fraction " << frac << ", limit "
       << opts.boundary_tolerance << ")";
    throw NumericalError(os.str(), t);
  }
}

double second_moment(std::span<const Complex> u, const Grid& grid) {
  const auto& x = grid.points();
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += x[j] * x[j] * std::norm(u[j]);
  return s * grid.dx();
}

}  // namespace schartree::detail
