#include "schartree/amplitude.hpp"

#include <cmath>

#include "schartree/classical_flow.hpp"
#include "schartree/errors.hpp"
#include "split_step.hpp"

namespace schartree {

namespace {

double gamma_increment(double m_start, double m_end, double kappa, double dt) {
  return -0.5 * kappa * dt * 0.5 * (m_start + m_end);
}

void require_rescaled(const WaveFunction& a0, const char* what) {
  if (a0.frame().is_physical()) {
    throw ValidationError(std::string(what) + ": expects a Rescaled-frame profile");
  }
}

std::vector<double> half_square(const Grid& g) {
  std::vector<double> out(g.size());
  for (int j = 0; j < g.size(); ++j) out[j] = 0.5 * g.x(j) * g.x(j);
  return out;
}

}  // namespace

InitialAmplitudeReport validate_initial_amplitude(const WaveFunction& a0) {
  require_rescaled(a0, "validate_initial_amplitude");
  InitialAmplitudeReport r;
  r.norm_defect = std::abs(l2_norm(a0) - 1.0);
  r.first_moment = std::abs(first_moment(a0));
  r.fourier_first_moment = std::abs(fourier_first_moment(a0));
  for (int m = 0; m < 4; ++m) r.abs_moments[m] = abs_moment(a0, m);
  r.pass = r.norm_defect <= kInitialAmplitudeTolerance &&
           r.first_moment <= kInitialAmplitudeTolerance &&
           r.fourier_first_moment <= kInitialAmplitudeTolerance;
  return r;
}

double gamma_step(const WaveFunction& beta_start, const WaveFunction& beta_end, double kappa,
                  double dt, double previous) {
  return previous + gamma_increment(abs_moment(beta_start, 1), abs_moment(beta_end, 1), kappa, dt);
}

std::vector<AmplitudeState> evolve_beta(const WaveFunction& a0, double kappa,
                                        const TimeFunction& hess, double T, double dt,
                                        const StepOptions& opts) {
  require_rescaled(a0, "evolve_beta");
  const auto times = step_times(T, dt);
  const Grid& g = a0.grid();
  const auto x2h = half_square(g);
  detail::SplitStepper stepper(a0.grid_ptr(), 1.0);

  std::vector<Complex> u(a0.samples().begin(), a0.samples().end());
  std::vector<double> v(g.size());
  auto fill_potential = [&](double t) {
    const double c = kappa + hess(t);
    for (int j = 0; j < g.size(); ++j) v[j] = c * x2h[j];
  };

  std::vector<AmplitudeState> out;
  out.push_back({a0, 0.0, 0.0});
  double gamma = 0.0;
  double m_prev = detail::second_moment(u, g);
  const std::size_t last = times.size() - 1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    fill_potential(times[i - 1]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    stepper.kinetic(u, h);
    fill_potential(times[i]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    detail::check_state(u, times[i], opts, "evolve_beta");

    const double m = detail::second_moment(u, g);
    gamma += gamma_increment(m_prev, m, kappa, h);
    m_prev = m;
    if (detail::keep_node(i, last, opts.record_every)) {
      out.push_back({WaveFunction(a0.grid_ptr(), u, a0.frame()), gamma, times[i]});
    }
  }
  return out;
}

WaveSequence evolve_b(const WaveFunction& a0, double kappa, const TimeFunction& hess, double T,
                      double dt, const StepOptions& opts) {
  require_rescaled(a0, "evolve_b");
  const auto times = step_times(T, dt);
  const Grid& g = a0.grid();
  const auto x2h = half_square(g);
  detail::SplitStepper stepper(a0.grid_ptr(), 1.0);
  const RadialKernel square(a0.grid_ptr(), [](double r) { return r * r; });

  std::vector<Complex> u(a0.samples().begin(), a0.samples().end());
  std::vector<double> v(g.size());
  std::vector<double> rho(g.size());
  auto fill_potential = [&](double t) {
    const double c = hess(t);
    for (int j = 0; j < g.size(); ++j) v[j] = c * x2h[j];
    if (kappa == 0.0) return;
    for (int j = 0; j < g.size(); ++j) rho[j] = std::norm(u[j]);
    const auto field = square.apply(rho);
    for (int j = 0; j < g.size(); ++j) v[j] += 0.5 * kappa * field[j];
  };

  WaveSequence out;
  out.t.push_back(0.0);
  out.psi.push_back(a0);
  const std::size_t last = times.size() - 1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    fill_potential(times[i - 1]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    stepper.kinetic(u, h);
    fill_potential(times[i]);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    detail::check_state(u, times[i], opts, "evolve_b");
    if (detail::keep_node(i, last, opts.record_every)) {
      out.t.push_back(times[i]);
      out.psi.emplace_back(a0.grid_ptr(), u, a0.frame());
    }
  }
  return out;
}

}  // namespace schartree
