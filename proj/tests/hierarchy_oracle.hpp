#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "schartree/potentials.hpp"

namespace oracle {

using schartree::ExternalPotential;
using schartree::GridPtr;
using schartree::PairPotential;

using CVec = std::vector<Complex>;

// Method-of-lines reference for the coupled (a0, a1, a2) hierarchy plus the
// classical (q, p): dense spectral Laplacian, direct O(n^2) distance sums and
// classical RK4 with no operator splitting.
class HierarchyOracle {
 public:
  HierarchyOracle(GridPtr grid, PairPotential phi, ExternalPotential U)
      : g_(std::move(grid)), phi_(std::move(phi)), U_(std::move(U)), n_(g_->size()) {
    // L = F^{-1} diag(-k^2) F as a dense matrix.
    lap_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    const double L = g_->length();
    for (int j = 0; j < n_; ++j) {
      for (int l = 0; l < n_; ++l) {
        Complex s = 0;
        for (int m = 0; m < n_; ++m) {
          const int mm = m < n_ / 2 ? m : m - n_;
          const double k = 2 * std::numbers::pi * mm / L;
          s += -k * k * std::polar(1.0, k * (g_->x(j) - g_->x(l)));
        }
        lap_[static_cast<std::size_t>(j) * n_ + l] = s / static_cast<double>(n_);
      }
    }
  }

  // Returns a1 and a2 at T.
  std::pair<CVec, CVec> run(const CVec& a0, double q0, double p0, double T, int steps) const {
    std::vector<double> y(6 * n_ + 2, 0.0);
    for (int j = 0; j < n_; ++j) {
      y[2 * j] = a0[j].real();
      y[2 * j + 1] = a0[j].imag();
    }
    y[6 * n_] = q0;
    y[6 * n_ + 1] = p0;
    y = oracle::rk4([this](double t, const std::vector<double>& s) { return rhs(t, s); }, y, 0, T,
                    steps);
    CVec a1(n_), a2(n_);
    for (int j = 0; j < n_; ++j) {
      a1[j] = {y[2 * (n_ + j)], y[2 * (n_ + j) + 1]};
      a2[j] = {y[2 * (2 * n_ + j)], y[2 * (2 * n_ + j) + 1]};
    }
    return {a1, a2};
  }

 private:
  std::vector<double> distance_sum(const std::vector<double>& f, int power) const {
    std::vector<double> out(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double s = 0;
      for (int l = 0; l < n_; ++l) s += std::pow(g_->x(j) - g_->x(l), power) * f[l];
      out[j] = s * g_->dx();
    }
    return out;
  }

  CVec laplacian(const CVec& u) const {
    CVec out(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      Complex s = 0;
      for (int l = 0; l < n_; ++l) s += lap_[static_cast<std::size_t>(j) * n_ + l] * u[l];
      out[j] = s;
    }
    return out;
  }

  std::vector<double> rhs(double t, const std::vector<double>& y) const {
    auto field = [&](int k) {
      CVec u(n_);
      for (int j = 0; j < n_; ++j) u[j] = {y[2 * (k * n_ + j)], y[2 * (k * n_ + j) + 1]};
      return u;
    };
    const CVec a0 = field(0), a1 = field(1), a2 = field(2);
    const double q = y[6 * n_], p = y[6 * n_ + 1];
    const double kappa = phi_.second_deriv_at_0;
    const double hess = U_.hess(q, t);
    const double u3 = U_.third(q, t) / 6;
    const double u4 = U_.fourth(q, t) / 24;

    std::vector<double> rho(n_), x01(n_), x02(n_), rho1(n_);
    for (int j = 0; j < n_; ++j) {
      rho[j] = std::norm(a0[j]);
      x01[j] = 2 * (std::conj(a0[j]) * a1[j]).real();
      x02[j] = 2 * (std::conj(a0[j]) * a2[j]).real();
      rho1[j] = std::norm(a1[j]);
    }
    const auto q_rho = distance_sum(rho, 2);
    const auto q4_rho = distance_sum(rho, 4);
    const auto q_01 = distance_sum(x01, 2);
    const auto q_02 = distance_sum(x02, 2);
    const auto q_11 = distance_sum(rho1, 2);
    const auto l0 = laplacian(a0), l1 = laplacian(a1), l2 = laplacian(a2);

    std::vector<double> out(y.size());
    const Complex mi(0, -1);
    for (int j = 0; j < n_; ++j) {
      const double x = g_->x(j);
      const double v = hess * x * x / 2 + kappa / 2 * q_rho[j];
      const Complex d0 = mi * (-0.5 * l0[j] + v * a0[j]);
      const Complex d1 =
          mi * (-0.5 * l1[j] + v * a1[j] + kappa / 2 * q_01[j] * a0[j] + u3 * x * x * x * a0[j]);
      const Complex d2 =
          mi * (-0.5 * l2[j] + v * a2[j] + kappa / 2 * q_02[j] * a0[j] +
                (u4 * std::pow(x, 4) + phi_.fourth_deriv_at_0 / 24 * q4_rho[j] +
                 kappa / 2 * q_11[j]) * a0[j] +
                (kappa / 2 * q_01[j] + u3 * x * x * x) * a1[j]);
      const Complex d[3] = {d0, d1, d2};
      for (int k = 0; k < 3; ++k) {
        out[2 * (k * n_ + j)] = d[k].real();
        out[2 * (k * n_ + j) + 1] = d[k].imag();
      }
    }
    out[6 * n_] = p;
    out[6 * n_ + 1] = -U_.grad(q, t);
    return out;
  }

  GridPtr g_;
  PairPotential phi_;
  ExternalPotential U_;
  int n_;
  CVec lap_;
};

inline double relative(std::span<const Complex> got, const CVec& want) {
  double num = 0, den = 0;
  for (std::size_t j = 0; j < want.size(); ++j) {
    num += std::norm(got[j] - want[j]);
    den += std::norm(want[j]);
  }
  return std::sqrt(num / den);
}

}  // namespace oracle
