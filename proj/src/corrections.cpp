#include "schartree/corrections.hpp"

#include <cmath>
#include <sstream>

#include "schartree/errors.hpp"
#include "split_step.hpp"

namespace schartree {

namespace {

using Samples = std::vector<Complex>;

void require_nodes(const WaveSequence& seq, double T, double dt, const char* what) {
  const auto expected = step_times(T, dt);
  bool ok = seq.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = std::abs(seq.t[i] - expected[i]) <= 1e-12 * std::max(1.0, T);
  }
  if (!ok) {
    std::ostringstream os;
    os << what << ": node mismatch, expected " << expected.size() << " nodes on step " << dt
       << " up to T = " << T << ", got " << seq.size();
    throw ValidationError(os.str());
  }
}

/// Sequence value at t_n + theta (t_{n+1} - t_n); the midpoint is the mean of
/// the two nodes.
Samples sample_at(const WaveSequence& seq, std::size_t n, double theta) {
  const auto s0 = seq.psi[n].samples();
  if (theta == 0.0) return Samples(s0.begin(), s0.end());
  const auto s1 = seq.psi[n + 1].samples();
  if (theta == 1.0) return Samples(s1.begin(), s1.end());
  Samples out(s0.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (1.0 - theta) * s0[j] + theta * s1[j];
  return out;
}

double time_at(const WaveSequence& seq, std::size_t n, double theta) {
  if (theta == 0.0) return seq.t[n];
  return seq.t[n] + theta * (seq.t[n + 1] - seq.t[n]);
}

std::vector<double> real_overlap(const Samples& a0, const Samples& c) {
  std::vector<double> out(a0.size());
  for (std::size_t j = 0; j < a0.size(); ++j) out[j] = 2.0 * (std::conj(a0[j]) * c[j]).real();
  return out;
}

std::vector<double> density(const Samples& u) {
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = std::norm(u[j]);
  return out;
}

void axpy(Samples& y, Complex a, const Samples& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

}  // namespace

std::vector<double> distance_power_field(std::span<const double> f, const Grid& grid, int power) {
  if (power != 2 && power != 4) throw ValidationError("distance_power_field: power must be 2 or 4");
  double m[5] = {0, 0, 0, 0, 0};
  for (int j = 0; j < grid.size(); ++j) {
    double w = f[j] * grid.dx();
    for (int k = 0; k <= power; ++k) {
      m[k] += w;
      w *= grid.x(j);
    }
  }
  std::vector<double> out(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    if (power == 2) {
      out[j] = x * x * m[0] - 2.0 * x * m[1] + m[2];
    } else {
      const double x2 = x * x;
      out[j] = x2 * x2 * m[0] - 4.0 * x2 * x * m[1] + 6.0 * x2 * m[2] - 4.0 * x * m[3] + m[4];
    }
  }
  return out;
}

WaveSequence integrate_duhamel(const WaveSequence& background, double kappa,
                               const TimeFunction& hess, const SourceStream& source,
                               bool self_coupling, const StepOptions& opts) {
  if (background.size() == 0) throw ValidationError("integrate_duhamel: empty background");
  const GridPtr& gp = background.psi.front().grid_ptr();
  const Grid& g = *gp;
  const Frame frame = background.psi.front().frame();
  const int n = g.size();
  detail::SplitStepper stepper(gp, 1.0);
  const RadialKernel square(gp, [](double r) { return r * r; });

  // H0 potential from the background density at (step, theta).
  auto quadratic_potential = [&](std::size_t step, double theta) {
    std::vector<double> rho;
    if (theta == 0.0 || theta == 1.0) {
      rho = density(sample_at(background, step, theta));
    } else {
      const auto r0 = density(sample_at(background, step, 0.0));
      const auto r1 = density(sample_at(background, step, 1.0));
      rho.resize(r0.size());
      for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = (1.0 - theta) * r0[j] + theta * r1[j];
    }
    std::vector<double> v(n);
    const double c = hess(time_at(background, step, theta));
    for (int j = 0; j < n; ++j) v[j] = 0.5 * c * g.x(j) * g.x(j);
    if (kappa != 0.0) {
      const auto field = square.apply(rho);
      for (int j = 0; j < n; ++j) v[j] += 0.5 * kappa * field[j];
    }
    return v;
  };

  auto full_source = [&](std::size_t step, double theta, const Samples& c) {
    Samples s = source(step, theta);
    if (static_cast<int>(s.size()) != n) throw ValidationError("integrate_duhamel: source size mismatch");
    if (self_coupling && kappa != 0.0) {
      const auto a0 = sample_at(background, step, theta);
      const auto field = distance_power_field(real_overlap(a0, c), g, 2);
      for (int j = 0; j < n; ++j) s[j] += 0.5 * kappa * field[j] * a0[j];
    }
    return s;
  };

  // Strang propagation over h with the potential at the two ends.
  auto propagate = [&](Samples& u, const std::vector<double>& va, const std::vector<double>& vb,
                       double h) {
    detail::SplitStepper::potential(u, va, 0.5 * h);
    stepper.kinetic(u, h);
    detail::SplitStepper::potential(u, vb, 0.5 * h);
  };

  const Complex minus_i(0.0, -1.0);
  WaveSequence out;
  Samples c(n, Complex(0.0));
  out.t.push_back(background.t.front());
  out.psi.emplace_back(gp, c, frame);
  auto v_start = quadratic_potential(0, 0.0);
  for (std::size_t step = 0; step + 1 < background.size(); ++step) {
    const double h = background.t[step + 1] - background.t[step];
    const auto v_mid = quadratic_potential(step, 0.5);
    auto v_end = quadratic_potential(step, 1.0);

    Samples predicted = c;
    axpy(predicted, minus_i * (0.5 * h), full_source(step, 0.0, c));
    propagate(predicted, v_start, v_mid, 0.5 * h);

    Samples duhamel = full_source(step, 0.5, predicted);
    propagate(duhamel, v_mid, v_end, 0.5 * h);

    propagate(c, v_start, v_end, h);
    axpy(c, minus_i * h, duhamel);

    const double t = background.t[step + 1];
    detail::check_state(c, t, opts, "integrate_duhamel");
    out.t.push_back(t);
    out.psi.emplace_back(gp, c, frame);
    v_start = std::move(v_end);
  }
  return out;
}

WaveSequence evolve_correction_1(const WaveSequence& a0_seq, const PairPotential& phi,
                                 const ExternalPotential& U, const Trajectory& trajectory,
                                 double T, double dt, const StepOptions& opts) {
  require_nodes(a0_seq, T, dt, "evolve_correction_1");
  const Grid& g = a0_seq.psi.front().grid();
  std::vector<double> mu3(g.size());
  for (int j = 0; j < g.size(); ++j) mu3[j] = g.x(j) * g.x(j) * g.x(j);

  auto source = [&](std::size_t step, double theta) {
    const double t = time_at(a0_seq, step, theta);
    const double u3 = U.third(trajectory.at(t).q, t) / 6.0;
    Samples s = sample_at(a0_seq, step, theta);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= u3 * mu3[j];
    return s;
  };
  return integrate_duhamel(
      a0_seq, phi.second_deriv_at_0, [&trajectory](double t) { return trajectory.hess_along(t); },
      source, true, opts);
}

WaveSequence evolve_correction_2(const WaveSequence& a0_seq, const WaveSequence& a1_seq,
                                 const PairPotential& phi, const ExternalPotential& U,
                                 const Trajectory& trajectory, double T, double dt,
                                 const StepOptions& opts) {
  require_nodes(a0_seq, T, dt, "evolve_correction_2");
  require_nodes(a1_seq, T, dt, "evolve_correction_2 (first-order input)");
  const Grid& g = a0_seq.psi.front().grid();
  const double kappa = phi.second_deriv_at_0;
  const double phi4 = phi.fourth_deriv_at_0 / 24.0;

  auto source = [&](std::size_t step, double theta) {
    const double t = time_at(a0_seq, step, theta);
    const double q = trajectory.at(t).q;
    const double u3 = U.third(q, t) / 6.0;
    const double u4 = U.fourth(q, t) / 24.0;
    const Samples a0 = sample_at(a0_seq, step, theta);
    const Samples a1 = sample_at(a1_seq, step, theta);

    std::vector<double> quartic(g.size(), 0.0);
    if (phi4 != 0.0) quartic = distance_power_field(density(a0), g, 4);
    std::vector<double> q_a1(g.size(), 0.0);
    std::vector<double> q_cross(g.size(), 0.0);
    if (kappa != 0.0) {
      q_a1 = distance_power_field(density(a1), g, 2);
      q_cross = distance_power_field(real_overlap(a0, a1), g, 2);
    }
    Samples s(g.size());
    for (int j = 0; j < g.size(); ++j) {
      const double mu = g.x(j);
      const double mu3 = mu * mu * mu;
      const double on_a0 = u4 * mu3 * mu + phi4 * quartic[j] + 0.5 * kappa * q_a1[j];
      const double on_a1 = 0.5 * kappa * q_cross[j] + u3 * mu3;
      s[j] = on_a0 * a0[j] + on_a1 * a1[j];
    }
    return s;
  };
  return integrate_duhamel(
      a0_seq, kappa, [&trajectory](double t) { return trajectory.hess_along(t); }, source, true,
      opts);
}

CorrectionSet compute_corrections(const WaveFunction& a0, const PairPotential& phi,
                                  const ExternalPotential& U, const Trajectory& trajectory,
                                  double T, double dt, int K, const StepOptions& opts) {
  if (K < 0 || K > 2) throw ValidationError("corrections are available for K = 0, 1, 2");
  StepOptions every = opts;
  every.record_every = 1;
  CorrectionSet set;
  set.orders.push_back(evolve_b(
      a0, phi.second_deriv_at_0, [&trajectory](double t) { return trajectory.hess_along(t); }, T,
      dt, every));
  set.t = set.orders[0].t;
  if (K >= 1) set.orders.push_back(evolve_correction_1(set.orders[0], phi, U, trajectory, T, dt, every));
  if (K >= 2) {
    set.orders.push_back(
        evolve_correction_2(set.orders[0], set.orders[1], phi, U, trajectory, T, dt, every));
  }
  return set;
}

WaveFunction assemble_expansion(const CorrectionSet& set, int K, double epsilon,
                                std::size_t node) {
  if (K < 0 || K > 2) throw ValidationError("assemble_expansion: K must lie in [0, 2]");
  if (static_cast<int>(set.orders.size()) <= K) {
    std::ostringstream os;
    os << "assemble_expansion: order " << K << " requested but only " << set.orders.size()
       << " order(s) present";
    throw ValidationError(os.str());
  }
  const WaveFunction& base = set.orders[0].psi.at(node);
  if (K == 0) return base;
  Samples s(base.samples().begin(), base.samples().end());
  for (int k = 1; k <= K; ++k) {
    const double w = std::pow(epsilon, 0.5 * k);
    const auto ak = set.orders[k].psi.at(node).samples();
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += w * ak[j];
  }
  return WaveFunction(base.grid_ptr(), std::move(s), base.frame());
}

WaveFunction assemble_expansion(const CorrectionSet& set, int K, double epsilon) {
  if (set.orders.empty() || set.orders[0].size() == 0) {
    throw ValidationError("assemble_expansion: empty correction set");
  }
  return assemble_expansion(set, K, epsilon, set.orders[0].size() - 1);
}

}  // namespace schartree
