#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "schartree/amplitude.hpp"
#include "schartree/classical_flow.hpp"
#include "schartree/errors.hpp"
#include "schartree/hartree.hpp"
#include "schartree/potentials.hpp"
#include "schartree/rescaled.hpp"

using namespace schartree;
using oracle::Complex;

namespace {

GridPtr mu_grid() { return make_grid(512, -16, 16); }

GridPtr physical_grid(double center, double half_width, double eps, double p) {
  const double dx = max_physical_dx(eps, p);
  int n = 8;
  while (2 * half_width / n > dx) n *= 2;
  return make_grid(n, center - half_width, center + half_width);
}

double mean_position(const WaveFunction& psi) { return first_moment(psi); }

ProblemSetup setup_for(const std::string& phi, std::vector<double> phi_params, const std::string& U,
                       std::vector<double> U_params, double T = 1.0) {
  return ProblemSetup{oracle::standard_gaussian(mu_grid()),
                      builtin_pair(phi, phi_params),
                      builtin_external(U, U_params),
                      0.0,
                      1.0,
                      T,
                      std::nullopt,
                      std::nullopt,
                      StepOptions{}};
}

}  // namespace

TEST_CASE("max_physical_dx and default dt") {
  CHECK(max_physical_dx(0.1, 0.5) == doctest::Approx(std::numbers::pi * 0.1 / 4));
  CHECK(max_physical_dx(0.1, -2.0) == doctest::Approx(std::numbers::pi * 0.1 / 8));
  CHECK(default_physical_dt(0.32) == 2e-4);
  CHECK(default_physical_dt(0.01) == doctest::Approx(1e-4));
}

TEST_CASE("coherent state moments") {
  auto a0 = oracle::standard_gaussian(mu_grid());
  const double q = 0.3, p = 1.0;
  for (double eps : {0.01, 0.02, 0.04, 0.08, 0.16, 0.32}) {
    CAPTURE(eps);
    auto grid = physical_grid(q, 6, eps, p);
    auto psi = build_coherent_state(a0, q, p, eps, grid);
    CHECK(psi.frame().is_physical());
    CHECK(psi.frame().epsilon() == eps);
    CHECK(std::fabs(l2_norm(psi) - 1) < 1e-8);
    CHECK(std::fabs(mean_position(psi) - q) < 1e-8);
    double var = 0;
    for (int j = 0; j < grid->size(); ++j) {
      var += std::pow(grid->x(j) - q, 2) * std::norm(psi.samples()[j]);
    }
    CHECK(std::fabs(var * grid->dx() - eps / 2) < 1e-6);
    CHECK(std::fabs(eps * fourier_first_moment(psi) - p) < 1e-6);
  }
}

TEST_CASE("coherent state samples the closed form") {
  auto a0 = oracle::standard_gaussian(mu_grid());
  const double eps = 0.05, q = -0.4, p = 0.7;
  auto grid = physical_grid(q, 5, eps, p);
  auto psi = build_coherent_state(a0, q, p, eps, grid);
  double worst = 0;
  for (int j = 0; j < grid->size(); ++j) {
    const double y = grid->x(j) - q;
    const Complex want =
        std::pow(eps, -0.25) * oracle::gaussian(y / std::sqrt(eps)) * std::polar(1.0, p * y / eps);
    worst = std::max(worst, std::abs(psi.samples()[j] - want));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("coherent state rejects coarse grids with the required n") {
  auto a0 = oracle::standard_gaussian(mu_grid());
  auto coarse = make_grid(64, -4, 4);
  try {
    build_coherent_state(a0, 0, 1, 0.01, coarse);
    FAIL("expected a resolution error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("required n >= 1024") != std::string::npos);
  }
  CHECK_THROWS_AS(build_coherent_state(a0, 0, 1, 0.0, coarse), ValidationError);
}

TEST_CASE("free evolution matches the spreading eps-Gaussian") {
  const double eps = 0.1, T = 0.5, q = 0.0, p = 1.0;
  auto grid = physical_grid(0.25, 6, eps, p);
  auto psi0 = build_coherent_state(oracle::standard_gaussian(mu_grid()), q, p, eps, grid);
  auto run = hartree_evolve(psi0, eps, builtin_pair("zero"), builtin_external("zero"), T, 1e-3);
  CHECK(run.warnings.empty());
  CHECK(run.epsilon == eps);
  const Complex i(0, 1);
  auto exact = WaveFunction::from_function(grid, Frame::physical(eps), [&](double x) {
    const double mu = (x - q - p * T) / std::sqrt(eps);
    const Complex a = std::pow(std::numbers::pi, -0.25) / std::sqrt(1.0 + i * T) *
                      std::exp(-mu * mu / (2.0 * (1.0 + i * T)));
    return std::pow(eps, -0.25) * a * std::exp(i * (p * (x - q) - p * p * T / 2) / eps);
  });
  CHECK(l2_distance(run.psi.back(), exact) < 1e-6);
}

TEST_CASE("Ehrenfest for a harmonic trap") {
  const double eps = 0.05;
  std::vector<double> w{1};
  auto grid = physical_grid(0, 6, eps, 1);
  auto psi0 = build_coherent_state(oracle::standard_gaussian(mu_grid()), 0, 1, eps, grid);
  auto run = hartree_evolve(psi0, eps, builtin_pair("zero"), builtin_external("harmonic", w), 1.0,
                            default_physical_dt(eps));
  for (std::size_t i = 0; i < run.psi.size(); i += 500) {
    CHECK(std::fabs(mean_position(run.psi.psi[i]) - std::sin(run.psi.t[i])) < 1e-6);
  }
  CHECK(std::fabs(mean_position(run.psi.back()) - std::sin(1.0)) < 1e-6);
}

TEST_CASE("norm drift over unit time") {
  const double eps = 0.08;
  std::vector<double> a{1};
  auto U = builtin_external("cosine", a);
  auto phi = builtin_pair("cosine");
  auto traj = integrate_flow(0, 1, U, 1.0, 1.0, 1e-3);
  auto grid = physical_grid_for(traj, eps, 1.0);
  auto psi0 = build_coherent_state(oracle::standard_gaussian(mu_grid()), 0, 1, eps, grid);
  auto run = hartree_evolve(psi0, eps, phi, U, 1.0, default_physical_dt(eps));
  for (const auto& psi : run.psi.psi) CHECK(std::fabs(l2_norm(psi) - 1) <= 1e-9);
}

TEST_CASE("second order in time") {
  const double eps = 0.08;
  std::vector<double> a{1};
  auto U = builtin_external("cosine", a);
  auto phi = builtin_pair("cosine");
  auto traj = integrate_flow(0, 1, U, 1.0, 1.0, 1e-3);
  auto grid = physical_grid_for(traj, eps, 1.0);
  auto psi0 = build_coherent_state(oracle::standard_gaussian(mu_grid()), 0, 1, eps, grid);
  StepOptions last_only;
  last_only.record_every = 1 << 30;
  auto end = [&](double dt) { return hartree_evolve(psi0, eps, phi, U, 1.0, dt, last_only).psi.back(); };
  const auto ref = end(1e-3 / 8);
  const double e1 = l2_distance(end(1e-3), ref);
  const double e2 = l2_distance(end(5e-4), ref);
  CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("potential phase guard") {
  const double eps = 0.1;
  auto grid = physical_grid(0, 6, eps, 1);
  auto psi0 = build_coherent_state(oracle::standard_gaussian(mu_grid()), 0, 1, eps, grid);
  std::vector<double> mild{20}, steep{40};
  auto warn = hartree_evolve(psi0, eps, builtin_pair("zero"), builtin_external("cosine", mild),
                             0.02, 0.01);
  REQUIRE(warn.warnings.size() == 1);
  CHECK(warn.warnings[0].find("pi/2") != std::string::npos);
  CHECK_THROWS_AS(hartree_evolve(psi0, eps, builtin_pair("zero"),
                                 builtin_external("cosine", steep), 0.02, 0.01),
                  NumericalError);
  auto rescaled = oracle::standard_gaussian(mu_grid());
  CHECK_THROWS_AS(hartree_evolve(rescaled, eps, builtin_pair("zero"), builtin_external("zero"),
                                 0.1, 0.01),
                  ValidationError);
  CHECK_THROWS_AS(hartree_evolve(psi0, 0.2, builtin_pair("zero"), builtin_external("zero"), 0.1,
                                 0.01),
                  ValidationError);
}

TEST_CASE("assemble_approximation") {
  auto a0 = oracle::standard_gaussian(mu_grid());
  const double eps = 0.08;
  auto grid = physical_grid(0, 6, eps, 1);
  AmplitudeState amp{a0, 0.0, 0.0};
  ClassicalState cls{0.0, 1.0, 0.0, 0.0};
  auto start = assemble_approximation(amp, cls, eps, grid);
  auto chs = build_coherent_state(a0, 0, 1, eps, grid);
  for (int j = 0; j < grid->size(); ++j) CHECK(start.samples()[j] == chs.samples()[j]);

  AmplitudeState phased{a0, 1.3, 0.4};
  ClassicalState moved{0.2, 1.0, -0.7, 0.4};
  auto a = assemble_approximation(phased, moved, eps, grid);
  auto plain = build_coherent_state(a0, 0.2, 1.0, eps, grid);
  for (int j = 0; j < grid->size(); ++j) {
    CHECK(std::abs(a.samples()[j]) == doctest::Approx(std::abs(plain.samples()[j])).epsilon(1e-14));
  }
  const Complex phase = std::polar(1.0, -0.7 / eps + 1.3);
  CHECK(l2_distance(a, plain.scaled(phase)) < 1e-14);

  ClassicalState wrong{0.2, 1.0, -0.7, 0.5};
  CHECK_THROWS_AS(assemble_approximation(phased, wrong, eps, grid), ValidationError);
}

TEST_CASE("theorem error vanishes at t = 0") {
  auto setup = setup_for("cosine", {}, "cosine", {1}, 0.0);
  CHECK(theorem_error(0.08, setup) <= 1e-10);
}

TEST_CASE("quadratic data make the ansatz exact") {
  auto setup = setup_for("quadratic", {1, -1}, "harmonic", {1});
  for (double eps : {0.02, 0.08, 0.32}) {
    CAPTURE(eps);
    const auto coarse = theorem_error_run(eps, setup);
    CHECK(coarse.error <= 1e-5);
    // What remains is the splitting's own second-order error.
    auto fine_setup = setup;
    fine_setup.dt = coarse.dt / 2;
    const double fine = theorem_error(eps, fine_setup);
    CHECK(coarse.error / fine == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("physical and rescaled errors agree") {
  auto setup = setup_for("cosine", {}, "cosine", {1});
  for (double eps : {0.32, 0.08, 0.02}) {
    CAPTURE(eps);
    const auto full = theorem_error_run(eps, setup, 1000);
    CHECK(full.warnings.empty());
    CHECK(full.trace.size() == 6);
    CHECK(full.trace.front().second < 1e-10);

    auto traj = std::make_shared<Trajectory>(
        integrate_flow(0, 1, setup.U, setup.phi.value_at_0, 1.0, 1e-3));
    auto run = evolve_rescaled(setup.a0, eps, setup.phi, setup.U, traj, 1.0, 1e-3);
    auto b = evolve_b(setup.a0, -1.0, [&](double t) { return traj->hess_along(t); }, 1.0, 1e-3);
    const double h = residual_norm(b.back(), run.a.back());
    CHECK(full.error / h >= 0.5);
    CHECK(full.error / h <= 2.0);
  }
}
