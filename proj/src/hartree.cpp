#include "schartree/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "schartree/errors.hpp"
#include "split_step.hpp"

namespace schartree {

namespace {

/// Trigonometric interpolant of periodic samples, evaluated off-grid.
class BandLimited {
 public:
  explicit BandLimited(const WaveFunction& f) : grid_(f.grid()), coeff_(f.samples().begin(), f.samples().end()) {
    detail::Fft::of_size(grid_.size())->forward(coeff_);
    for (auto& c : coeff_) c /= static_cast<double>(grid_.size());
  }

  Complex operator()(double x) const {
    if (x < grid_.x_min() || x >= grid_.x_max()) return 0.0;
    const int n = grid_.size();
    const double s = x - grid_.x_min();
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * s / grid_.length());
    Complex w = 1.0;
    Complex sum = coeff_[0];
    for (int m = 1; m < n / 2; ++m) {
      w *= z;
      sum += coeff_[m] * w + coeff_[n - m] * std::conj(w);
    }
    w *= z;
    sum += coeff_[n / 2] * w.real();
    return sum;
  }

 private:
  const Grid& grid_;
  std::vector<Complex> coeff_;
};

int smallest_power_of_two_n(double length, double max_dx) {
  int n = 8;
  while (length / n > max_dx) {
    if (n > (1 << 26)) throw ValidationError("physical grid would exceed 2^26 points");
    n *= 2;
  }
  return n;
}

}  // namespace

double max_physical_dx(double epsilon, double p) {
  return std::numbers::pi * epsilon / (4.0 * std::max(std::abs(p), 1.0));
}

double default_physical_dt(double epsilon) { return 2e-4 * std::min(1.0, epsilon / 0.02); }

WaveFunction build_coherent_state(const WaveFunction& a0, double q, double p, double epsilon,
                                  const GridPtr& grid) {
  if (!(epsilon > 0.0)) throw ValidationError("build_coherent_state: epsilon must be positive");
  if (a0.frame().is_physical()) {
    throw ValidationError("build_coherent_state: profile must be in the Rescaled frame");
  }
  const double limit = max_physical_dx(epsilon, p);
  if (grid->dx() > limit) {
    std::ostringstream os;
    os << "build_coherent_state: dx = " << grid->dx() << " does not resolve the carrier (need dx <= "
       << limit << "); required n >= " << smallest_power_of_two_n(grid->length(), limit);
    throw ValidationError(os.str());
  }
  const BandLimited profile(a0);
  const double se = std::sqrt(epsilon);
  const double amp = std::pow(epsilon, -0.25);
  std::vector<Complex> s(grid->size());
  for (int j = 0; j < grid->size(); ++j) {
    const double y = grid->x(j) - q;
    s[j] = amp * profile(y / se) * std::polar(1.0, p * y / epsilon);
  }
  return WaveFunction(grid, std::move(s), Frame::physical(epsilon));
}

HartreeRun hartree_evolve(const WaveFunction& psi0, double epsilon, const PairPotential& phi,
                          const ExternalPotential& U, double T, double dt,
                          const StepOptions& opts) {
  if (!psi0.frame().is_physical() || psi0.frame().epsilon() != epsilon) {
    throw ValidationError("hartree_evolve: initial state must be Physical with the same epsilon");
  }
  const auto times = step_times(T, dt);
  const GridPtr& grid = psi0.grid_ptr();
  const Grid& g = *grid;
  const RadialKernel pair(grid, phi.eval);
  detail::SplitStepper stepper(grid, epsilon);

  HartreeRun run;
  run.epsilon = epsilon;
  run.grid = grid;
  std::vector<Complex> u(psi0.samples().begin(), psi0.samples().end());
  std::vector<double> v(g.size());
  std::vector<double> rho(g.size());
  bool warned = false;
  auto fill_potential = [&](double t, double h) {
    for (int j = 0; j < g.size(); ++j) rho[j] = std::norm(u[j]);
    const auto field = pair.apply(rho);
    double vmax = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      v[j] = (field[j] + U.eval(g.x(j), t)) / epsilon;
      vmax = std::max(vmax, std::abs(v[j]));
    }
    const double phase = vmax * h;
    if (phase > std::numbers::pi) {
      std::ostringstream os;
      os << "hartree_evolve: potential phase per step " << phase << " exceeds pi at t = " << t;
      throw NumericalError(os.str(), t);
    }
    if (phase > 0.5 * std::numbers::pi && !warned) {
      std::ostringstream os;
      os << "potential phase per step " << phase << " exceeds pi/2 at t = " << t;
      run.warnings.push_back(os.str());
      warned = true;
    }
  };

  run.psi.t.push_back(0.0);
  run.psi.psi.push_back(psi0);
  const std::size_t last = times.size() - 1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    fill_potential(times[i - 1], h);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    stepper.kinetic(u, h);
    fill_potential(times[i], h);
    detail::SplitStepper::potential(u, v, 0.5 * h);
    detail::check_state(u, times[i], opts, "hartree_evolve");
    if (detail::keep_node(i, last, opts.record_every)) {
      run.psi.t.push_back(times[i]);
      run.psi.psi.emplace_back(grid, u, psi0.frame());
    }
  }
  return run;
}

WaveFunction assemble_approximation(const AmplitudeState& amp, const ClassicalState& cls,
                                    double epsilon, const GridPtr& grid) {
  if (std::abs(amp.t - cls.t) > 1e-12 * std::max(1.0, std::abs(cls.t))) {
    std::ostringstream os;
    os << "assemble_approximation: amplitude time " << amp.t << " differs from classical time "
       << cls.t;
    throw ValidationError(os.str());
  }
  const auto chs = build_coherent_state(amp.beta, cls.q, cls.p, epsilon, grid);
  return chs.scaled(std::polar(1.0, cls.action / epsilon + amp.gamma));
}

GridPtr physical_grid_for(const Trajectory& trajectory, double epsilon, double max_variance) {
  const double w = std::max(10.0 * std::sqrt(epsilon * max_variance), 4.0);
  const double lo = trajectory.q_min() - w;
  const double hi = trajectory.q_max() + w;
  const int n = smallest_power_of_two_n(hi - lo, max_physical_dx(epsilon, trajectory.max_abs_p()));
  return make_grid(n, lo, hi);
}

TheoremErrorResult theorem_error_run(double epsilon, const ProblemSetup& setup, int trace_every) {
  if (!(epsilon > 0.0)) throw ValidationError("theorem_error: epsilon must be positive");
  TheoremErrorResult out;
  out.dt = setup.dt.value_or(default_physical_dt(epsilon));

  auto trajectory = std::make_shared<const Trajectory>(
      integrate_flow(setup.q0, setup.p0, setup.U, setup.phi.value_at_0, setup.T, out.dt));
  StepOptions amp_opts = setup.step;
  amp_opts.record_every = 1;
  const auto beta = evolve_beta(
      setup.a0, setup.phi.second_deriv_at_0,
      [&trajectory](double t) { return trajectory->hess_along(t); }, setup.T, out.dt, amp_opts);

  double max_var = 0.0;
  for (const auto& s : beta) max_var = std::max(max_var, abs_moment(s.beta, 1));
  GridPtr grid = physical_grid_for(*trajectory, epsilon, max_var);
  if (setup.physical_n) grid = make_grid(*setup.physical_n, grid->x_min(), grid->x_max());
  out.physical_n = grid->size();

  const auto psi0 = build_coherent_state(setup.a0, setup.q0, setup.p0, epsilon, grid);
  StepOptions phys_opts = setup.step;
  phys_opts.record_every = trace_every > 0 ? trace_every : static_cast<int>(beta.size()) + 1;
  const auto run = hartree_evolve(psi0, epsilon, setup.phi, setup.U, setup.T, out.dt, phys_opts);
  out.warnings = run.warnings;

  // beta is recorded at every node; the physical run at a subset of the same nodes.
  const auto& states = trajectory->states();
  std::size_t k = 0;
  for (std::size_t i = 0; i < run.psi.size(); ++i) {
    const double t = run.psi.t[i];
    while (k < beta.size() && beta[k].t < t) ++k;
    const auto approx = assemble_approximation(beta.at(k), states.at(k), epsilon, grid);
    const double err = l2_distance(run.psi.psi[i], approx);
    if (trace_every > 0) out.trace.emplace_back(t, err);
    if (i + 1 == run.psi.size()) out.error = err;
  }
  return out;
}

double theorem_error(double epsilon, const ProblemSetup& setup) {
  return theorem_error_run(epsilon, setup).error;
}

}  // namespace schartree
