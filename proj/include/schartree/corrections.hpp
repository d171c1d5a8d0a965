#pragma once

#include <functional>
#include <vector>

#include "schartree/amplitude.hpp"
#include "schartree/classical_flow.hpp"
#include "schartree/grid.hpp"
#include "schartree/potentials.hpp"
#include "schartree/stepping.hpp"

namespace schartree {

/// External source of a linearized amplitude equation at time
/// t_n + theta (t_{n+1} - t_n), theta in {0, 1/2}.
using SourceStream = std::function<std::vector<Complex>(std::size_t step, double theta)>;

/// Solves i d_t c = H0(t) c + K_t[c] + F(t), c(0) = 0, where
///   H0(t) = -1/2 d_mumu + (kappa/2) int |mu - eta|^2 |a0(eta, t)|^2 d eta
///           + hess(t) mu^2 / 2
/// is the propagator of the zeroth-order amplitude `background` and, when
/// `self_coupling` is set,
///   K_t[c] = (kappa/2) (int |mu - eta|^2 2 Re(conj(a0) c)(eta) d eta) a0(mu).
/// Each step propagates with Strang splitting and adds a midpoint-rule
/// Duhamel term, the midpoint source using a predicted c. The background
/// must be recorded at every node; the result shares its nodes.
WaveSequence integrate_duhamel(const WaveSequence& background, double kappa,
                               const TimeFunction& hess, const SourceStream& source,
                               bool self_coupling, const StepOptions& opts = {});

/// First-order amplitude correction with sources
/// K_t[a1] and U'''(q(t), t)/3! mu^3 a0. `a0_seq` is the evolve_b output
/// on the step_times(T, dt) nodes.
WaveSequence evolve_correction_1(const WaveSequence& a0_seq, const PairPotential& phi,
                                 const ExternalPotential& U, const Trajectory& trajectory,
                                 double T, double dt, const StepOptions& opts = {});

/// Second-order correction: K_t[a2] plus
///   U''''/4! mu^4 a0 + phi''''(0)/4! (int |mu - eta|^4 |a0|^2) a0
///   + (phi''(0)/2) (int |mu - eta|^2 |a1|^2) a0
///   + (phi''(0)/2) (int |mu - eta|^2 2 Re(conj(a0) a1)) a1
///   + U'''/3! mu^3 a1.
WaveSequence evolve_correction_2(const WaveSequence& a0_seq, const WaveSequence& a1_seq,
                                 const PairPotential& phi, const ExternalPotential& U,
                                 const Trajectory& trajectory, double T, double dt,
                                 const StepOptions& opts = {});

/// int |mu - eta|^power f(eta) d eta for power 2 or 4, expanded in moments
/// of f (no periodic wrap-around).
std::vector<double> distance_power_field(std::span<const double> f, const Grid& grid, int power);

/// Orders a^(0..K) of the amplitude expansion on shared nodes.
struct CorrectionSet {
  std::vector<double> t;
  std::vector<WaveSequence> orders;
};

/// a0 (= b_t) and corrections up to order K <= 2 from an initial profile.
CorrectionSet compute_corrections(const WaveFunction& a0, const PairPotential& phi,
                                  const ExternalPotential& U, const Trajectory& trajectory,
                                  double T, double dt, int K, const StepOptions& opts = {});

/// sum_{k <= K} eps^{k/2} a^(k) at `node`. Throws ValidationError when an
/// order is missing or K > 2.
WaveFunction assemble_expansion(const CorrectionSet& set, int K, double epsilon,
                                std::size_t node);
WaveFunction assemble_expansion(const CorrectionSet& set, int K, double epsilon);

}  // namespace schartree
