#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schartree/amplitude.hpp"
#include "schartree/classical_flow.hpp"
#include "schartree/grid.hpp"
#include "schartree/potentials.hpp"
#include "schartree/stepping.hpp"

namespace schartree {

struct HartreeRun {
  WaveSequence psi;
  double epsilon = 0.0;
  GridPtr grid;
  std::vector<std::string> warnings;
};

/// Largest admissible physical spacing: pi eps / (4 max(|p|, 1)).
double max_physical_dx(double epsilon, double p);

/// eps^{-1/4} a0((x - q)/sqrt(eps)) exp(i p (x - q)/eps) on `grid`, with a0
/// evaluated by trigonometric interpolation of its mu-grid samples (zero
/// outside the mu-domain). Throws ValidationError naming the required n when
/// the grid is too coarse for the carrier oscillation.
WaveFunction build_coherent_state(const WaveFunction& a0, double q, double p, double epsilon,
                                  const GridPtr& grid);

/// Strang splitting of i eps Psi_t = -(eps^2/2) Psi_xx + (V + U) Psi with
/// V = phi * |Psi|^2 rebuilt every half step. A potential phase per step
/// above pi/2 is reported in `warnings`; above pi it is an error.
HartreeRun hartree_evolve(const WaveFunction& psi0, double epsilon, const PairPotential& phi,
                          const ExternalPotential& U, double T, double dt,
                          const StepOptions& opts = {});

/// exp(i (action/eps + gamma)) times the coherent state of amp.beta at (q, p).
WaveFunction assemble_approximation(const AmplitudeState& amp, const ClassicalState& cls,
                                    double epsilon, const GridPtr& grid);

/// Domain [q_min - W, q_max + W) with W = max(10 sqrt(eps maxvar), 4) and the
/// smallest power-of-two n meeting max_physical_dx along the trajectory.
GridPtr physical_grid_for(const Trajectory& trajectory, double epsilon, double max_variance);

/// 2e-4 * min(1, eps / 0.02).
double default_physical_dt(double epsilon);

/// Everything needed to compare the full Hartree solution with the
/// coherent-state approximation at one epsilon.
struct ProblemSetup {
  WaveFunction a0;  ///< Rescaled-frame profile on the mu-grid
  PairPotential phi;
  ExternalPotential U;
  double q0 = 0.0;
  double p0 = 1.0;
  double T = 1.0;
  std::optional<double> dt;      ///< shared by flow, amplitude and physical solver
  std::optional<int> physical_n;  ///< overrides the automatic physical n
  StepOptions step;
};

struct TheoremErrorResult {
  double error = 0.0;
  double dt = 0.0;
  int physical_n = 0;
  std::vector<std::pair<double, double>> trace;  ///< (t, error) at recorded nodes
  std::vector<std::string> warnings;
};

/// Runs the classical flow, the amplitude equation and the full Hartree
/// solver on matched nodes and measures the L2 distance at T (and at every
/// `trace_every`-th node when trace_every > 0).
TheoremErrorResult theorem_error_run(double epsilon, const ProblemSetup& setup,
                                     int trace_every = 0);

double theorem_error(double epsilon, const ProblemSetup& setup);

}  // namespace schartree
