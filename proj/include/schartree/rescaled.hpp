#pragma once

#include <memory>

#include "schartree/classical_flow.hpp"
#include "schartree/grid.hpp"
#include "schartree/potentials.hpp"
#include "schartree/stepping.hpp"

namespace schartree {

/// Exact amplitude a(mu, t) in the frame moving with the classical flow.
struct RescaledRun {
  WaveSequence a;
  double epsilon = 0.0;
  std::shared_ptr<const Trajectory> trajectory;
};

/// Strang splitting of
///   (i d_t + 1/2 d_mumu) a = (1/eps) [V_eps(mu, t)
///        + U(q + sqrt(eps) mu, t) - U(q, t) - sqrt(eps) U'(q, t) mu] a,
///   V_eps(mu, t) = int (phi(sqrt(eps)|mu - eta|) - phi(0)) |a(eta, t)|^2 d eta.
/// The U bracket is evaluated pointwise from eval/grad, never Taylor-truncated.
RescaledRun evolve_rescaled(const WaveFunction& a0, double epsilon, const PairPotential& phi,
                            const ExternalPotential& U,
                            std::shared_ptr<const Trajectory> trajectory, double T, double dt,
                            const StepOptions& opts = {});

/// ||b - a||; both must be Rescaled on the same grid.
double residual_norm(const WaveFunction& b, const WaveFunction& a);

}  // namespace schartree
