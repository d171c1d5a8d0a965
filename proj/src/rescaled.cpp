#include "schartree/rescaled.hpp"

#include <cmath>

#include "schartree/errors.hpp"
#include "split_step.hpp"

namespace schartree {

RescaledRun evolve_rescaled(const WaveFunction& a0, double epsilon, const PairPotential& phi,
                            const ExternalPotential& U,
                            std::shared_ptr<const Trajectory> trajectory, double T, double dt,
                            const StepOptions& opts) {
  if (!(epsilon > 0.0)) throw ValidationError("evolve_rescaled: epsilon must be positive");
  if (a0.frame().is_physical()) throw ValidationError("evolve_rescaled: expects a Rescaled profile");
  if (!trajectory) throw ValidationError("evolve_rescaled: missing trajectory");
  if (trajectory->end_time() < T - 1e-12 * std::max(1.0, T)) {
    throw ValidationError("evolve_rescaled: trajectory does not cover [0, T]");
  }

  const auto times = step_times(T, dt);
  const Grid& g = a0.grid();
  const double se = std::sqrt(epsilon);
  const double phi0 = phi.value_at_0;
  const RadialKernel pair(a0.grid_ptr(),
                          [&phi, se, phi0](double r) { return phi.eval(se * r) - phi0; });
  detail::SplitStepper stepper(a0.grid_ptr(), 1.0);

  std::vector<Complex> u(a0.samples().begin(), a0.samples().end());
  std::vector<double> v(g.size());
  std::vector<double> rho(g.size());
  auto fill_potential = [&](double t) {
    const ClassicalState s = trajectory->at(t);
    const double u0 = U.eval(s.q, t);
    const double u1 = U.grad(s.q, t);
    for (int j = 0; j < g.size(); ++j) rho[j] = std::norm(u[j]);
    const auto field = pair.apply(rho);
    for (int j = 0; j < g.size(); ++j) {
      const double mu = g.x(j);
      v[j] = (field[j] + U.eval(s.q + se * mu, t) - u0 - se * u1 * mu) / epsilon;
    }
  };

  RescaledRun run;
  run.epsilon = epsilon;
  run.trajectory = trajectory;
  run.a.t.push_back(0.0);
  run.a.psi.push_back(a0);
  const std::size_t last = times.size() - 1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    fill_potential(times[i - 1]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    stepper.kinetic(u, h);
    fill_potential(times[i]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    detail::check_state(u, times[i], opts, "evolve_rescaled");
    if (detail::keep_node(i, last, opts.record_every)) {
      run.a.t.push_back(times[i]);
      run.a.psi.emplace_back(a0.grid_ptr(), u, a0.frame());
    }
  }
  return run;
}

double residual_norm(const WaveFunction& b, const WaveFunction& a) {
  if (b.frame().is_physical() || a.frame().is_physical()) {
    throw ValidationError("residual_norm: both profiles must be in the Rescaled frame");
  }
  return l2_distance(b, a);
}

}  // namespace schartree
