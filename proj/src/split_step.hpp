#pragma once

#include <span>
#include <string>
#include <vector>

#include "fft.hpp"
#include "schartree/grid.hpp"
#include "schartree/stepping.hpp"

namespace schartree::detail {

/// Exact substeps for i u_t = -(scale/2) u_xx + v(x) u on a periodic grid.
class SplitStepper {
 public:
  SplitStepper(GridPtr grid, double kinetic_scale);

  /// u <- exp(i h scale/2 d_xx) u, spectrally.
  void kinetic(std::vector<Complex>& u, double h);
  /// u <- exp(-i h v) u, pointwise.
  static void potential(std::vector<Complex>& u, std::span<const double> v, double h);

  const Grid& grid() const { return *grid_; }

 private:
  struct Factors {
    double h;
    std::vector<Complex> phase;
  };
  const std::vector<Complex>& factors_for(double h);

  GridPtr grid_;
  double scale_;
  std::shared_ptr<const Fft> fft_;
  std::vector<Factors> cache_;
};

/// Throws NumericalError if `u` holds non-finite values or too much mass
/// near the periodic boundary.
void check_state(std::span<const Complex> u, double t, const StepOptions& opts,
                 const std::string& what);

/// True for the nodes a stepper with `record_every` keeps.
inline bool keep_node(std::size_t i, std::size_t last, int record_every) {
  return i == 0 || i == last || (record_every <= 1) || (i % record_every == 0);
}

/// Second moment sum x^2 |u|^2 dx on raw samples.
double second_moment(std::span<const Complex> u, const Grid& grid);

}  // namespace schartree::detail
