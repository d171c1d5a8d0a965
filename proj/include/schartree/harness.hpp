#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schartree/amplitude.hpp"
#include "schartree/grid.hpp"
#include "schartree/hartree.hpp"

namespace schartree {

struct NamedSpec {
  std::string name;
  std::vector<double> params;
};

enum class Mode { Physical, Rescaled, Corrections };

struct GridOverrides {
  int mu_n = 512;
  double mu_min = -16.0;
  double mu_max = 16.0;
  std::optional<int> x_n;
};

struct ExperimentConfig {
  NamedSpec a0{"standard-gaussian", {}};
  NamedSpec phi;
  NamedSpec U;
  double q0 = 0.0;
  double p0 = 1.0;
  double T = 1.0;
  std::vector<double> eps_list{0.32, 0.16, 0.08, 0.04, 0.02};
  std::optional<double> dt;
  GridOverrides grid;
  Mode mode = Mode::Physical;
  int K = 0;  ///< expansion order in corrections mode
};

/// Strict JSON parsing: unknown keys, unknown potential/profile names and a
/// non-decreasing eps_list are ValidationErrors.
ExperimentConfig parse_config(std::string_view text);

/// "physical", "rescaled", "corrections-K" (K = 0, 1, 2).
void set_mode(ExperimentConfig& config, std::string_view mode);
std::string mode_name(const ExperimentConfig& config);

/// standard-gaussian []; squeezed-gaussian [s]; shifted-gaussian [c].
WaveFunction make_profile(const NamedSpec& spec, const GridPtr& grid);

GridPtr mu_grid(const ExperimentConfig& config);
ProblemSetup problem_setup(const ExperimentConfig& config);

/// Step used by rescaled and corrections sweeps unless overridden.
inline constexpr double kDefaultRescaledDt = 1e-3;

struct SweepRow {
  double epsilon = 0.0;
  double error = 0.0;
  double error_over_sqrt_eps = 0.0;
  double dt = 0.0;
  int n = 0;
  double wall_ms = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double fitted_slope = 0.0;
  double fit_r2 = 0.0;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (log eps, log error); NaN with fewer than two points.
PowerLawFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& error);

/// Rows are sorted by epsilon descending before fitting.
void finalize_report(SweepReport& report);

/// One sweep datapoint: the mode's error measure at the given step.
SweepRow measure_point(const ExperimentConfig& config, double epsilon, double dt);

/// Step-halving acceptance: relative change below `kGateTolerance` (or an
/// absolute change below `kGateFloor`) between dt and dt/2; dt is halved up
/// to `kGateMaxRefinements` times before giving up.
inline constexpr double kGateTolerance = 0.02;
inline constexpr double kGateFloor = 1e-9;
inline constexpr int kGateMaxRefinements = 3;
SweepRow gated_point(const ExperimentConfig& config, double epsilon);

/// Thrown by run_sweep; carries what completed before the failure.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, SweepReport partial, double failing_epsilon, bool numerical)
      : std::runtime_error(what),
        partial_(std::move(partial)),
        failing_epsilon_(failing_epsilon),
        numerical_(numerical) {}
  const SweepReport& partial() const { return partial_; }
  double failing_epsilon() const { return failing_epsilon_; }
  bool numerical() const { return numerical_; }

 private:
  SweepReport partial_;
  double failing_epsilon_;
  bool numerical_;
};

/// Datapoints run on up to `jobs` threads; the result is independent of jobs.
SweepReport run_sweep(const ExperimentConfig& config, int jobs = 1);

/// CSV: header, one line per row, "# slope=<v> r2=<v>". wall_ms values are
/// left empty in the rows and only written to a trailing comment block when
/// include_timing is set, so the default output is byte-stable.
std::string format_report(const SweepReport& report, bool include_timing = false);
void emit_report(const SweepReport& report, const std::filesystem::path& path,
                 bool include_timing = false);

/// Shortest round-trip decimal, locale independent.
std::string format_number(double v);

/// Small labelled numeric table for traces.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  ///< written as trailing "# ..." lines
};
std::string format_table(const Table& table);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Single-epsilon comparison: full Hartree vs the assembled approximation and
/// the rescaled residual on shared nodes, every `trace_every` steps.
Table compare_trace(const ExperimentConfig& config, double epsilon, int trace_every = 50);

struct LemmaCheck {
  Table trace;          ///< t, ||b - e^{i gamma} beta||, gamma
  double max_difference = 0.0;
  double coarse_gap = 0.0;  ///< ||b_dt - e^{i gamma} beta_{dt/2}|| at T
  double fine_gap = 0.0;    ///< same with dt/2 and dt/4
  double order = 0.0;       ///< log2(coarse_gap / fine_gap)
};
LemmaCheck lemma_check(const ExperimentConfig& config, double dt, int trace_every = 50);

InitialAmplitudeReport validate_config_profile(const ExperimentConfig& config);

/// gnuplot script drawing error vs epsilon on log-log axes from a sweep CSV.
std::string gnuplot_script(const std::string& csv_path);

}  // namespace schartree
