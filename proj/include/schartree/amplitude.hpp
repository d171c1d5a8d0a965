#pragma once

#include <array>
#include <functional>
#include <vector>

#include "schartree/grid.hpp"
#include "schartree/stepping.hpp"

namespace schartree {

using TimeFunction = std::function<double(double)>;

/// Semiclassical profile beta_t on the mu-grid plus the accumulated
/// nonlinear phase gamma(t).
struct AmplitudeState {
  WaveFunction beta;
  double gamma = 0.0;
  double t = 0.0;
};

/// Normalization and centering diagnostics for an initial profile.
struct InitialAmplitudeReport {
  double norm_defect = 0.0;           ///< | ||a0|| - 1 |
  double first_moment = 0.0;          ///< | int x |a0|^2 |
  double fourier_first_moment = 0.0;  ///< | int k |a0_hat|^2 |
  std::array<double, 4> abs_moments{};  ///< int |x|^{2m} |a0|^2, m = 0..3
  bool pass = false;
};

inline constexpr double kInitialAmplitudeTolerance = 1e-6;

/// Requires a Rescaled-frame profile.
InitialAmplitudeReport validate_initial_amplitude(const WaveFunction& a0);

/// Evolve i d_t beta = (-1/2 d_xx + (kappa + hess(t)) x^2/2) beta by Strang
/// splitting, co-accumulating gamma with gamma_step. kappa is phi''(0) and
/// hess(t) is d^2U(q(t), t). States are returned at the recorded nodes.
std::vector<AmplitudeState> evolve_beta(const WaveFunction& a0, double kappa,
                                        const TimeFunction& hess, double T, double dt,
                                        const StepOptions& opts = {});

/// Trapezoidal update of gamma over one step:
/// previous - (kappa/2) * dt * (M(beta_start) + M(beta_end)) / 2,
/// with M the second absolute moment.
double gamma_step(const WaveFunction& beta_start, const WaveFunction& beta_end, double kappa,
                  double dt, double previous);

/// Direct integration of the self-consistent b-equation
///   (i d_t + 1/2 d_xx) b = (kappa/2) int |x - eta|^2 |b(eta)|^2 d eta b
///                          + hess(t) x^2/2 b,
/// whose solution is exp(i gamma) beta. The quadratic self-consistent field
/// is rebuilt from |b|^2 at every half step with a radial convolution.
WaveSequence evolve_b(const WaveFunction& a0, double kappa, const TimeFunction& hess, double T,
                      double dt, const StepOptions& opts = {});

}  // namespace schartree
