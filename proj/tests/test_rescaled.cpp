#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "schartree/amplitude.hpp"
#include "schartree/classical_flow.hpp"
#include "schartree/errors.hpp"
#include "schartree/potentials.hpp"
#include "schartree/rescaled.hpp"

using namespace schartree;

namespace {

struct Case {
  PairPotential phi;
  ExternalPotential U;
};

Case quadratic_case() {
  std::vector<double> qp{1, -1}, w{1};
  return {builtin_pair("quadratic", qp), builtin_external("harmonic", w)};
}

Case cosine_case() {
  std::vector<double> a{1};
  return {builtin_pair("cosine"), builtin_external("cosine", a)};
}

std::shared_ptr<const Trajectory> flow(const Case& c, double T, double dt) {
  return std::make_shared<Trajectory>(integrate_flow(0, 1, c.U, c.phi.value_at_0, T, dt));
}

WaveSequence b_of(const WaveFunction& a0, const Case& c, const Trajectory& traj, double T,
                  double dt) {
  return evolve_b(a0, c.phi.second_deriv_at_0, [&](double t) { return traj.hess_along(t); }, T,
                  dt);
}

std::vector<double> residual_trace(const Case& c, double eps, int n = 512, double dt = 1e-3) {
  auto a0 = oracle::standard_gaussian(make_grid(n, -16, 16));
  auto traj = flow(c, 1.0, dt);
  auto run = evolve_rescaled(a0, eps, c.phi, c.U, traj, 1.0, dt);
  auto b = b_of(a0, c, *traj, 1.0, dt);
  REQUIRE(b.size() == run.a.size());
  std::vector<double> h;
  for (std::size_t i = 0; i < b.size(); ++i) h.push_back(residual_norm(b.psi[i], run.a.psi[i]));
  return h;
}

}  // namespace

TEST_CASE("quadratic data: the rescaled amplitude is b") {
  const auto c = quadratic_case();
  for (double eps : {0.01, 0.1, 1.0}) {
    CAPTURE(eps);
    auto h = residual_trace(c, eps);
    CHECK(h.front() == 0.0);
    for (double v : h) CHECK(v <= 1e-6);
  }
}

TEST_CASE("norm conservation") {
  const auto c = cosine_case();
  auto a0 = oracle::standard_gaussian(make_grid(512, -16, 16));
  for (double eps : {0.32, 0.04}) {
    auto run = evolve_rescaled(a0, eps, c.phi, c.U, flow(c, 1.0, 1e-3), 1.0, 1e-3);
    CHECK(run.epsilon == eps);
    for (const auto& a : run.a.psi) CHECK(std::fabs(l2_norm(a) - 1) <= 1e-9);
  }
}

TEST_CASE("cosine/cosine residual scales like sqrt(eps)") {
  const auto c = cosine_case();
  const double r16 = residual_trace(c, 0.16).back();
  const double r04 = residual_trace(c, 0.04).back();
  CHECK(r16 / r04 >= 1.6);
  CHECK(r16 / r04 <= 2.6);

  std::vector<double> scaled;
  for (double eps : {0.32, 0.16, 0.08, 0.04, 0.02}) {
    const double r = residual_trace(c, eps).back();
    scaled.push_back(r / std::sqrt(eps));
    CHECK(r / std::sqrt(eps) >= 0.01);
    CHECK(r / std::sqrt(eps) <= 10);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo <= 2.0);
}

TEST_CASE("residual grows continuously and monotonically") {
  auto h = residual_trace(cosine_case(), 0.04);
  CHECK(h.front() == 0.0);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] >= h[i - 1] - 1e-8);
  for (std::size_t i = 2; i < h.size(); ++i) {
    const double step = std::fabs(h[i] - h[i - 1]);
    const double local = std::fabs(h[i - 1] - h[i - 2]);
    CHECK(step <= 10 * local + 1e-9);
  }
}

TEST_CASE("the rescaled frame needs no eps-dependent resolution") {
  const auto c = cosine_case();
  for (double eps : {0.32, 0.16, 0.08, 0.04, 0.02}) {
    CAPTURE(eps);
    const double coarse = residual_trace(c, eps, 512).back();
    const double fine = residual_trace(c, eps, 1024).back();
    CHECK(std::fabs(coarse - fine) / fine < 0.05);
  }
}

TEST_CASE("step halving changes the residual by under two percent") {
  const auto c = cosine_case();
  for (double eps : {0.32, 0.02}) {
    const double coarse = residual_trace(c, eps, 512, 1e-3).back();
    const double fine = residual_trace(c, eps, 512, 5e-4).back();
    CHECK(std::fabs(coarse - fine) / fine < 0.02);
  }
}

TEST_CASE("argument validation") {
  const auto c = cosine_case();
  auto g = make_grid(64, -8, 8);
  auto a0 = oracle::standard_gaussian(g);
  auto traj = flow(c, 0.5, 1e-2);
  CHECK_THROWS_AS(evolve_rescaled(a0, 0.0, c.phi, c.U, traj, 0.5, 1e-2), ValidationError);
  CHECK_THROWS_AS(evolve_rescaled(a0, 0.1, c.phi, c.U, traj, 1.0, 1e-2), ValidationError);
  CHECK_THROWS_AS(evolve_rescaled(a0, 0.1, c.phi, c.U, nullptr, 0.5, 1e-2), ValidationError);
  auto phys = WaveFunction(g, std::vector<Complex>(a0.samples().begin(), a0.samples().end()),
                           Frame::physical(0.1));
  CHECK_THROWS_AS(evolve_rescaled(phys, 0.1, c.phi, c.U, traj, 0.5, 1e-2), ValidationError);
  CHECK_THROWS_AS(residual_norm(phys, a0), ValidationError);
  CHECK_THROWS_AS(residual_norm(a0, oracle::standard_gaussian(make_grid(128, -8, 8))),
                  ValidationError);
}
