#pragma once

#include <vector>

#include "schartree/potentials.hpp"

namespace schartree {

/// Point on the classical trajectory with the accumulated Lagrangian action.
struct ClassicalState {
  double q = 0.0;
  double p = 0.0;
  double action = 0.0;
  double t = 0.0;
};

/// Densely stored trajectory of q' = p, p' = -dU/dx(q, t) together with
/// action' = p^2/2 - U(q, t) - phi(0). Off-node queries use cubic Hermite
/// interpolation with the exact node derivatives, so interpolation error is
/// fourth order like the integrator.
class Trajectory {
 public:
  Trajectory(std::vector<ClassicalState> states, ExternalPotential potential, double phi0);

  const std::vector<ClassicalState>& states() const { return states_; }
  const ClassicalState& front() const { return states_.front(); }
  const ClassicalState& back() const { return states_.back(); }
  double end_time() const { return states_.back().t; }
  const ExternalPotential& potential() const { return potential_; }
  double phi0() const { return phi0_; }

  /// Throws ValidationError outside [0, end_time()] (beyond a 1e-12 slack).
  ClassicalState at(double t) const;

  /// d^2U/dx^2 (q(t), t); the coefficient of the harmonic term in the
  /// amplitude equation.
  double hess_along(double t) const;

  double q_min() const;
  double q_max() const;
  double max_abs_p() const;

 private:
  std::vector<ClassicalState> states_;
  ExternalPotential potential_;
  double phi0_;
};

/// Classical RK4 for (q, p) with the action co-integrated by the same
/// stages (Simpson weights on the step nodes). The final step is shortened
/// so the last state sits exactly at T. Throws NumericalError naming the
/// time if the state becomes non-finite.
Trajectory integrate_flow(double q0, double p0, const ExternalPotential& U, double phi0, double T,
                          double dt);

/// Number of steps covering [0, T] with step dt, the last possibly short.
int step_count(double T, double dt);

/// Node times 0, dt, 2dt, ..., T produced by every stepper in the library.
std::vector<double> step_times(double T, double dt);

}  // namespace schartree
