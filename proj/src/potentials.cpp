#include "schartree/potentials.hpp"

#include <cmath>
#include <sstream>

#include "schartree/errors.hpp"

namespace schartree {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  return os.str();
}

void expect_params(const std::string& what, std::span<const double> params, std::size_t lo,
                   std::size_t hi) {
  if (params.size() < lo || params.size() > hi) {
    std::ostringstream os;
    os << what << " takes " << lo;
    if (hi != lo) os << " to " << hi;
    os << " parameter(s), got " << params.size();
    throw ValidationError(os.str());
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw ValidationError(what + ": parameters must be finite");
  }
}

double param_or(std::span<const double> params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

}  // namespace

const std::vector<std::string>& pair_potential_names() {
  static const std::vector<std::string> names{"zero", "cosine", "gaussian", "quadratic"};
  return names;
}

const std::vector<std::string>& external_potential_names() {
  static const std::vector<std::string> names{"zero", "harmonic", "cosine", "cubic_window"};
  return names;
}

PairPotential builtin_pair(const std::string& name, std::span<const double> params) {
  if (name == "zero") {
    expect_params("pair potential 'zero'", params, 0, 0);
    return {name, [](double) { return 0.0; }, 0.0, 0.0, 0.0};
  }
  if (name == "cosine") {
    expect_params("pair potential 'cosine'", params, 0, 1);
    const double a = param_or(params, 0, 1.0);
    return {name, [a](double r) { return a * std::cos(r); }, a, -a, a};
  }
  if (name == "gaussian") {
    expect_params("pair potential 'gaussian'", params, 0, 1);
    const double a = param_or(params, 0, 1.0);
    return {name, [a](double r) { return a * std::exp(-0.5 * r * r); }, a, -a, 3.0 * a};
  }
  if (name == "quadratic") {
    expect_params("pair potential 'quadratic'", params, 2, 2);
    const double c0 = params[0];
    const double c2 = params[1];
    return {name, [c0, c2](double r) { return c0 + 0.5 * c2 * r * r; }, c0, c2, 0.0};
  }
  throw ValidationError("unknown pair potential '" + name + "'; valid names: " +
                        join(pair_potential_names()));
}

ExternalPotential builtin_external(const std::string& name, std::span<const double> params) {
  auto zero = [](double, double) { return 0.0; };
  if (name == "zero") {
    expect_params("external potential 'zero'", params, 0, 0);
    return {name, zero, zero, zero, zero, zero};
  }
  if (name == "harmonic") {
    expect_params("external potential 'harmonic'", params, 0, 1);
    const double w2 = std::pow(param_or(params, 0, 1.0), 2);
    return {name,
            [w2](double x, double) { return 0.5 * w2 * x * x; },
            [w2](double x, double) { return w2 * x; },
            [w2](double, double) { return w2; },
            zero,
            zero};
  }
  if (name == "cosine") {
    expect_params("external potential 'cosine'", params, 0, 1);
    const double a = param_or(params, 0, 1.0);
    return {name,
            [a](double x, double) { return a * std::cos(x); },
            [a](double x, double) { return -a * std::sin(x); },
            [a](double x, double) { return -a * std::cos(x); },
            [a](double x, double) { return a * std::sin(x); },
            [a](double x, double) { return a * std::cos(x); }};
  }
  if (name == "cubic_window") {
    expect_params("external potential 'cubic_window'", params, 1, 2);
    const double a = params[0];
    const double w = param_or(params, 1, 2.0);
    if (!(w > 0.0)) throw ValidationError("cubic_window: width must be positive");
    const double w2 = w * w;
    auto g = [w2](double x) { return std::exp(-0.5 * x * x / w2); };
    // Derivatives of A x^3 g(x), g the Gaussian window; polynomial factors
    // collected over w^2 powers.
    return {
        name,
        [a, g](double x, double) { return a * x * x * x * g(x); },
        [a, w2, g](double x, double) { return a * x * x * (3.0 * w2 - x * x) / w2 * g(x); },
        [a, w2, g](double x, double) {
          return a * x * (x * x - w2) * (x * x - 6.0 * w2) / (w2 * w2) * g(x);
        },
        [a, w2, g](double x, double) {
          const double x2 = x * x;
          const double p = 6.0 * w2 * w2 * w2 - 27.0 * w2 * w2 * x2 + 12.0 * w2 * x2 * x2 -
                           x2 * x2 * x2;
          return a * p / (w2 * w2 * w2) * g(x);
        },
        [a, w2, g](double x, double) {
          const double x2 = x * x;
          const double p = -60.0 * w2 * w2 * w2 + 75.0 * w2 * w2 * x2 - 18.0 * w2 * x2 * x2 +
                           x2 * x2 * x2;
          return a * x * p / (w2 * w2 * w2 * w2) * g(x);
        }};
  }
  throw ValidationError("unknown external potential '" + name + "'; valid names: " +
                        join(external_potential_names()));
}

}  // namespace schartree
