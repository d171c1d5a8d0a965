#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace schartree {

/// Even pair interaction phi(|r|) with its Taylor data at the origin.
/// Odd derivatives at 0 vanish by evenness.
struct PairPotential {
  std::string name;
  std::function<double(double)> eval;  ///< r >= 0
  double value_at_0 = 0.0;
  double second_deriv_at_0 = 0.0;
  double fourth_deriv_at_0 = 0.0;
};

using SpaceTimeFunction = std::function<double(double x, double t)>;

/// External potential U(x, t) with analytic derivatives up to fourth order
/// in x (the fourth feeds the second-order correction source).
struct ExternalPotential {
  std::string name;
  SpaceTimeFunction eval;
  SpaceTimeFunction grad;
  SpaceTimeFunction hess;
  SpaceTimeFunction third;
  SpaceTimeFunction fourth;
};

/// zero []; cosine [A = 1] (A cos r); gaussian [A = 1] (A exp(-r^2/2));
/// quadratic [c0, c2] (c0 + c2 r^2 / 2).
PairPotential builtin_pair(const std::string& name, std::span<const double> params = {});

/// zero []; harmonic [omega] (omega^2 x^2 / 2); cosine [A] (A cos x);
/// cubic_window [A, w = 2] (A x^3 exp(-x^2 / (2 w^2))).
ExternalPotential builtin_external(const std::string& name, std::span<const double> params = {});

const std::vector<std::string>& pair_potential_names();
const std::vector<std::string>& external_potential_names();

}  // namespace schartree
