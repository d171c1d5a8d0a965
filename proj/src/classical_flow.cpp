#include "schartree/classical_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schartree/errors.hpp"

namespace schartree {

int step_count(double T, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(T >= 0.0)) throw ValidationError("T must be nonnegative");
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

std::vector<double> step_times(double T, double dt) {
  const int n = step_count(T, dt);
  std::vector<double> t(n + 1);
  for (int i = 0; i < n; ++i) t[i] = i * dt;
  t[n] = T;
  return t;
}

Trajectory::Trajectory(std::vector<ClassicalState> states, ExternalPotential potential, double phi0)
    : states_(std::move(states)), potential_(std::move(potential)), phi0_(phi0) {
  if (states_.empty()) throw ValidationError("trajectory needs at least one state");
}

ClassicalState Trajectory::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, end_time());
  if (t < -slack || t > end_time() + slack) {
    std::ostringstream os;
    os << "trajectory covers [0, " << end_time() << "], queried at t = " << t;
    throw ValidationError(os.str());
  }
  if (states_.size() == 1) return states_.front();
  auto it = std::upper_bound(states_.begin(), states_.end(), t,
                             [](double v, const ClassicalState& s) { return v < s.t; });
  std::size_t i1 = static_cast<std::size_t>(it - states_.begin());
  i1 = std::clamp<std::size_t>(i1, 1, states_.size() - 1);
  const ClassicalState& a = states_[i1 - 1];
  const ClassicalState& b = states_[i1];
  if (t == a.t) return a;
  if (t == b.t) return b;

  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  auto hermite = [&](double ya, double da, double yb, double db) {
    return h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
  };
  const auto& U = potential_;
  const double fa = -U.grad(a.q, a.t);
  const double fb = -U.grad(b.q, b.t);
  const double la = 0.5 * a.p * a.p - U.eval(a.q, a.t) - phi0_;
  const double lb = 0.5 * b.p * b.p - U.eval(b.q, b.t) - phi0_;
  ClassicalState out;
  out.t = t;
  out.q = hermite(a.q, a.p, b.q, b.p);
  out.p = hermite(a.p, fa, b.p, fb);
  out.action = hermite(a.action, la, b.action, lb);
  return out;
}

double Trajectory::hess_along(double t) const {
  const ClassicalState s = at(t);
  return potential_.hess(s.q, t);
}

double Trajectory::q_min() const {
  double v = states_.front().q;
  for (const auto& s : states_) v = std::min(v, s.q);
  return v;
}

double Trajectory::q_max() const {
  double v = states_.front().q;
  for (const auto& s : states_) v = std::max(v, s.q);
  return v;
}

double Trajectory::max_abs_p() const {
  double v = 0.0;
  for (const auto& s : states_) v = std::max(v, std::abs(s.p));
  return v;
}

Trajectory integrate_flow(double q0, double p0, const ExternalPotential& U, double phi0, double T,
                          double dt) {
  const auto times = step_times(T, dt);
  std::vector<ClassicalState> out;
  out.reserve(times.size());
  ClassicalState s{q0, p0, 0.0, 0.0};
  out.push_back(s);

  auto lagrangian = [&](double q, double p, double t) {
    return 0.5 * p * p - U.eval(q, t) - phi0;
  };
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t = times[i - 1];
    const double h = times[i] - t;
    const double th = t + 0.5 * h;

    const double k1q = s.p;
    const double k1p = -U.grad(s.q, t);
    const double l1 = lagrangian(s.q, s.p, t);

    const double q2 = s.q + 0.5 * h * k1q;
    const double p2 = s.p + 0.5 * h * k1p;
    const double k2q = p2;
    const double k2p = -U.grad(q2, th);
    const double l2 = lagrangian(q2, p2, th);

    const double q3 = s.q + 0.5 * h * k2q;
    const double p3 = s.p + 0.5 * h * k2p;
    const double k3q = p3;
    const double k3p = -U.grad(q3, th);
    const double l3 = lagrangian(q3, p3, th);

    const double q4 = s.q + h * k3q;
    const double p4 = s.p + h * k3p;
    const double k4q = p4;
    const double k4p = -U.grad(q4, times[i]);
    const double l4 = lagrangian(q4, p4, times[i]);

    s.q += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
    s.p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    s.action += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    s.t = times[i];
    if (!std::isfinite(s.q) || !std::isfinite(s.p) || !std::isfinite(s.action)) {
      std::ostringstream os;
      os << "classical flow became non-finite at t = " << s.t;
      throw NumericalError(os.str(), s.t);
    }
    out.push_back(s);
  }
  return Trajectory(std::move(out), U, phi0);
}

}  // namespace schartree
