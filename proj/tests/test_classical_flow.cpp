#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "schartree/classical_flow.hpp"
#include "schartree/errors.hpp"
#include "schartree/potentials.hpp"

using namespace schartree;

TEST_CASE("free flight") {
  auto traj = integrate_flow(0, 1, builtin_external("zero"), 1.0, 2.0, 0.01);
  CHECK(traj.back().t == 2.0);
  CHECK(traj.back().q == doctest::Approx(2).epsilon(1e-13));
  CHECK(traj.back().p == 1.0);
  CHECK(traj.back().action == doctest::Approx(-1).epsilon(1e-13));
  CHECK(traj.states().size() == 201);
}

TEST_CASE("harmonic quarter period") {
  std::vector<double> w{1};
  const double T = std::numbers::pi / 2;
  for (double phi0 : {0.0, 1.0}) {
    auto traj = integrate_flow(0, 1, builtin_external("harmonic", w), phi0, T, 1e-3);
    CHECK(std::fabs(traj.back().q - 1) < 1e-8);
    CHECK(std::fabs(traj.back().p) < 1e-8);
    CHECK(std::fabs(traj.back().action - (std::sin(2 * T) / 4 - phi0 * T)) < 1e-8);
    CHECK(traj.back().t == T);
  }
}

TEST_CASE("cosine potential against step-halving Richardson") {
  std::vector<double> a{1};
  auto U = builtin_external("cosine", a);
  const double T = 0.01;
  auto coarse = integrate_flow(0, 0.2, U, 1.0, T, 1e-3).back();
  auto fine = integrate_flow(0, 0.2, U, 1.0, T, 5e-4).back();
  const double rq = fine.q + (fine.q - coarse.q) / 15;
  const double rp = fine.p + (fine.p - coarse.p) / 15;
  const double ra = fine.action + (fine.action - coarse.action) / 15;
  CHECK(std::fabs(coarse.q - rq) < 1e-10);
  CHECK(std::fabs(coarse.p - rp) < 1e-10);
  CHECK(std::fabs(coarse.action - ra) < 1e-10);

  // Independent RK4 on (q, p, action) with a far smaller step.
  auto ref = oracle::rk4(
      [](double, const std::vector<double>& y) {
        return std::vector<double>{y[1], std::sin(y[0]), y[1] * y[1] / 2 - std::cos(y[0]) - 1.0};
      },
      {0.0, 0.2, 0.0}, 0, T, 1000);
  CHECK(std::fabs(coarse.q - ref[0]) < 1e-10);
  CHECK(std::fabs(coarse.p - ref[1]) < 1e-10);
  CHECK(std::fabs(coarse.action - ref[2]) < 1e-10);
}

TEST_CASE("fourth-order convergence on the harmonic case") {
  std::vector<double> w{1};
  auto U = builtin_external("harmonic", w);
  const double T = 2.0, h = 0.1;
  auto ref = integrate_flow(0, 1, U, 0.0, T, h / 8).back();
  auto err = [&](double dt) {
    auto s = integrate_flow(0, 1, U, 0.0, T, dt).back();
    return std::hypot(s.q - ref.q, s.p - ref.p);
  };
  const double order = std::log2(err(h) / err(h / 2));
  CHECK(order >= 3.7);
}

TEST_CASE("phi0 only shifts the action") {
  std::vector<double> a{1};
  auto U = builtin_external("cosine", a);
  auto t0 = integrate_flow(0.3, 1, U, 0.0, 1.0, 1e-2);
  auto t1 = integrate_flow(0.3, 1, U, 1.0, 1.0, 1e-2);
  for (std::size_t i = 0; i < t0.states().size(); ++i) {
    const auto& s0 = t0.states()[i];
    const auto& s1 = t1.states()[i];
    CHECK(s0.q == s1.q);
    CHECK(s0.p == s1.p);
    CHECK(std::fabs(s0.action - s1.action - s0.t) < 1e-13);
  }
}

TEST_CASE("energy is conserved to integrator order") {
  std::vector<double> a{1};
  auto U = builtin_external("cosine", a);
  auto traj = integrate_flow(0, 1, U, 0.0, 1.0, 1e-2);
  const double e0 = 0.5 + U.eval(0, 0);
  for (const auto& s : traj.states()) CHECK(std::fabs(s.p * s.p / 2 + U.eval(s.q, s.t) - e0) < 1e-9);
}

TEST_CASE("short last step and step bookkeeping") {
  CHECK(step_count(1.0, 0.3) == 4);
  CHECK(step_count(1.0, 0.1) == 10);
  auto times = step_times(1.0, 0.3);
  REQUIRE(times.size() == 5);
  CHECK(times.back() == 1.0);
  CHECK(times[3] == doctest::Approx(0.9));
  auto traj = integrate_flow(0, 1, builtin_external("zero"), 0.0, 1.0, 0.3);
  CHECK(traj.back().t == 1.0);
  CHECK(traj.back().q == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Hermite interpolation between nodes") {
  std::vector<double> w{1};
  auto traj = integrate_flow(0, 1, builtin_external("harmonic", w), 0.0, 1.0, 1e-2);
  for (double t : {0.005, 0.3333, 0.777, 0.999}) {
    auto s = traj.at(t);
    CHECK(std::fabs(s.q - std::sin(t)) < 1e-9);
    CHECK(std::fabs(s.p - std::cos(t)) < 1e-9);
    CHECK(std::fabs(s.action - std::sin(2 * t) / 4) < 1e-9);
    CHECK(traj.hess_along(t) == 1.0);
  }
  CHECK_THROWS_AS(traj.at(1.1), ValidationError);
  CHECK_THROWS_AS(traj.at(-0.1), ValidationError);
}

TEST_CASE("blow-up is reported with its time") {
  ExternalPotential steep{"steep",
                          [](double x, double) { return -std::pow(x, 4); },
                          [](double x, double) { return -4 * std::pow(x, 3); },
                          [](double x, double) { return -12 * x * x; },
                          [](double x, double) { return -24 * x; },
                          [](double, double) { return -24.0; }};
  try {
    integrate_flow(1, 10, steep, 0, 5, 1e-2);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(e.time() > 0);
    CHECK(e.time() < 5);
  }
}

TEST_CASE("invalid flow arguments") {
  auto U = builtin_external("zero");
  CHECK_THROWS_AS(integrate_flow(0, 1, U, 0, 1, 0), ValidationError);
  CHECK_THROWS_AS(integrate_flow(0, 1, U, 0, -1, 0.1), ValidationError);
}
