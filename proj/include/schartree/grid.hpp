#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace schartree {

using Complex = std::complex<double>;

/// Uniform periodic 1-D mesh on [x_min, x_max) with its FFT-ordered wavenumbers.
class Grid {
 public:
  Grid(int n, double x_min, double x_max);

  int size() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return dx_; }
  double x(int j) const { return x_min_ + j * dx_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
  }

 private:
  int n_;
  double x_min_;
  double x_max_;
  double dx_;
  std::vector<double> points_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws ValidationError unless n is even, n >= 8 and x_max > x_min.
GridPtr make_grid(int n, double x_min, double x_max);

/// Wavenumber k_j for index j in FFT order, for an n-point grid of length L.
double fft_wavenumber(int j, int n, double length);

/// Physical(eps) frames carry the semiclassical parameter; Rescaled frames
/// live on the moving mu = (x - q(t)) / sqrt(eps) coordinate.
class Frame {
 public:
  static Frame physical(double epsilon);
  static Frame rescaled() { return Frame(false, 0.0); }

  bool is_physical() const { return physical_; }
  double epsilon() const { return epsilon_; }
  bool operator==(const Frame&) const = default;

 private:
  Frame(bool physical, double epsilon) : physical_(physical), epsilon_(epsilon) {}
  bool physical_;
  double epsilon_;
};

class WaveFunction {
 public:
  WaveFunction(GridPtr grid, std::vector<Complex> samples, Frame frame);

  static WaveFunction from_function(GridPtr grid, Frame frame,
                                    const std::function<Complex(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Frame& frame() const { return frame_; }
  std::span<const Complex> samples() const { return samples_; }
  int size() const { return static_cast<int>(samples_.size()); }

  WaveFunction scaled(Complex factor) const;
  std::vector<double> density() const;

 private:
  GridPtr grid_;
  std::vector<Complex> samples_;
  Frame frame_;
};

/// Time-ordered states, t[i] paired with psi[i].
struct WaveSequence {
  std::vector<double> t;
  std::vector<WaveFunction> psi;

  std::size_t size() const { return psi.size(); }
  const WaveFunction& back() const { return psi.back(); }
};

double l2_norm(const WaveFunction& psi);
double l2_norm(std::span<const Complex> samples, double dx);

/// Throws ValidationError on grid or frame mismatch.
double l2_distance(const WaveFunction& a, const WaveFunction& b);

/// Integral of |x|^{2m} |psi|^2 dx, 0 <= m <= 3.
double abs_moment(const WaveFunction& psi, int m);

double first_moment(const WaveFunction& psi);

/// Unitary transform psi_hat(k_j) = dx / sqrt(2 pi) sum_l psi_l exp(-i k_j x_l),
/// in FFT order; sum |psi_hat|^2 dk equals sum |psi|^2 dx.
std::vector<Complex> spectral_transform(const WaveFunction& psi);

/// Integral of k |psi_hat(k)|^2 dk.
double fourier_first_moment(const WaveFunction& psi);

/// Fraction of the total mass held by the outermost `cells` samples on each side.
double boundary_mass_fraction(std::span<const Complex> samples, int cells);

using RadialFunction = std::function<double(double)>;

/// Periodic convolution with a radial kernel sampled at torus distance,
/// result_j = sum_l kernel(|x_j - x_l|) density_l dx. The kernel spectrum is
/// computed once, so repeated application costs two FFTs.
class RadialKernel {
 public:
  RadialKernel(GridPtr grid, const RadialFunction& kernel);

  std::vector<double> apply(std::span<const double> density) const;
  const Grid& grid() const { return *grid_; }

 private:
  GridPtr grid_;
  std::vector<Complex> spectrum_;
};

std::vector<double> radial_convolve(const RadialFunction& kernel,
                                    std::span<const double> density,
                                    const GridPtr& grid);

}  // namespace schartree
