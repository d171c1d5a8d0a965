#include "schartree/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "schartree/classical_flow.hpp"
#include "schartree/corrections.hpp"
#include "schartree/errors.hpp"
#include "schartree/potentials.hpp"
#include "schartree/rescaled.hpp"

namespace schartree {

namespace {

using json = nlohmann::json;

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names{"standard-gaussian", "squeezed-gaussian",
                                              "shifted-gaussian"};
  return names;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string("'") + key + "' must be finite");
  return d;
}

NamedSpec get_named(const json& v, const std::string& where) {
  NamedSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
    return spec;
  }
  if (!v.is_object()) throw ValidationError(where + " must be a name or {\"name\", \"params\"}");
  reject_unknown_keys(v, {"name", "params"}, where);
  if (!v.contains("name") || !v.at("name").is_string()) {
    throw ValidationError(where + ".name must be a string");
  }
  spec.name = v.at("name").get<std::string>();
  if (v.contains("params")) {
    const auto& p = v.at("params");
    if (!p.is_array()) throw ValidationError(where + ".params must be an array");
    for (const auto& x : p) {
      if (!x.is_number()) throw ValidationError(where + ".params must hold numbers");
      spec.params.push_back(x.get<double>());
    }
  }
  return spec;
}

void check_eps_list(const std::vector<double>& eps) {
  if (eps.empty()) throw ValidationError("eps_list must not be empty");
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("eps_list entries must be positive");
  }
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) throw ValidationError("eps_list must be strictly decreasing");
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

double rescaled_dt(const ExperimentConfig& c) { return c.dt.value_or(kDefaultRescaledDt); }

std::shared_ptr<const Trajectory> flow_for(const ExperimentConfig& c, const PairPotential& phi,
                                           const ExternalPotential& U, double dt) {
  return std::make_shared<const Trajectory>(
      integrate_flow(c.q0, c.p0, U, phi.value_at_0, c.T, dt));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void set_mode(ExperimentConfig& config, std::string_view mode) {
  if (mode == "physical") {
    config.mode = Mode::Physical;
    config.K = 0;
  } else if (mode == "rescaled") {
    config.mode = Mode::Rescaled;
    config.K = 0;
  } else if (mode.starts_with("corrections-") && mode.size() == 13 && mode[12] >= '0' &&
             mode[12] <= '2') {
    config.mode = Mode::Corrections;
    config.K = mode[12] - '0';
  } else {
    throw ValidationError("unknown mode '" + std::string(mode) +
                          "'; valid modes: physical, rescaled, corrections-0, corrections-1, "
                          "corrections-2");
  }
}

std::string mode_name(const ExperimentConfig& config) {
  switch (config.mode) {
    case Mode::Physical:
      return "physical";
    case Mode::Rescaled:
      return "rescaled";
    case Mode::Corrections:
      return "corrections-" + std::to_string(config.K);
  }
  return "physical";
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown_keys(doc, {"a0", "phi", "U", "q0", "p0", "T", "eps_list", "dt", "grid", "mode"},
                      "config");

  ExperimentConfig c;
  if (doc.contains("a0")) c.a0 = get_named(doc.at("a0"), "a0");
  if (!doc.contains("phi")) throw ValidationError("config needs 'phi'");
  if (!doc.contains("U")) throw ValidationError("config needs 'U'");
  c.phi = get_named(doc.at("phi"), "phi");
  c.U = get_named(doc.at("U"), "U");
  c.q0 = get_number(doc, "q0", c.q0);
  c.p0 = get_number(doc, "p0", c.p0);
  c.T = get_number(doc, "T", c.T);
  if (!(c.T >= 0.0)) throw ValidationError("T must be nonnegative");
  if (doc.contains("eps_list")) {
    const auto& e = doc.at("eps_list");
    if (!e.is_array()) throw ValidationError("eps_list must be an array");
    c.eps_list.clear();
    for (const auto& x : e) {
      if (!x.is_number()) throw ValidationError("eps_list must hold numbers");
      c.eps_list.push_back(x.get<double>());
    }
  }
  check_eps_list(c.eps_list);
  if (doc.contains("dt")) {
    c.dt = get_number(doc, "dt", 0.0);
    if (!(*c.dt > 0.0)) throw ValidationError("dt must be positive");
  }
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (!g.is_object()) throw ValidationError("grid must be an object");
    reject_unknown_keys(g, {"mu_n", "mu_min", "mu_max", "x_n"}, "grid");
    if (g.contains("mu_n")) {
      if (!g.at("mu_n").is_number_integer()) throw ValidationError("grid.mu_n must be an integer");
      c.grid.mu_n = g.at("mu_n").get<int>();
    }
    c.grid.mu_min = get_number(g, "mu_min", c.grid.mu_min);
    c.grid.mu_max = get_number(g, "mu_max", c.grid.mu_max);
    if (g.contains("x_n")) {
      if (!g.at("x_n").is_number_integer()) throw ValidationError("grid.x_n must be an integer");
      c.grid.x_n = g.at("x_n").get<int>();
      make_grid(*c.grid.x_n, 0.0, 1.0);
    }
  }
  make_grid(c.grid.mu_n, c.grid.mu_min, c.grid.mu_max);
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw ValidationError("mode must be a string");
    set_mode(c, doc.at("mode").get<std::string>());
  }

  // Resolve names now so bad configs fail before any run.
  builtin_pair(c.phi.name, c.phi.params);
  builtin_external(c.U.name, c.U.params);
  make_profile(c.a0, make_grid(8, -1.0, 1.0));
  return c;
}

WaveFunction make_profile(const NamedSpec& spec, const GridPtr& grid) {
  const double norm = std::pow(std::numbers::pi, -0.25);
  auto expect = [&spec](std::size_t count) {
    if (spec.params.size() != count) {
      throw ValidationError("profile '" + spec.name + "' takes " + std::to_string(count) +
                            " parameter(s)");
    }
  };
  if (spec.name == "standard-gaussian") {
    expect(0);
    return WaveFunction::from_function(grid, Frame::rescaled(), [norm](double x) {
      return Complex(norm * std::exp(-0.5 * x * x));
    });
  }
  if (spec.name == "squeezed-gaussian") {
    expect(1);
    const double s = spec.params[0];
    if (!(s > 0.0)) throw ValidationError("squeezed-gaussian width must be positive");
    return WaveFunction::from_function(grid, Frame::rescaled(), [norm, s](double x) {
      return Complex(norm / std::sqrt(s) * std::exp(-0.5 * x * x / (s * s)));
    });
  }
  if (spec.name == "shifted-gaussian") {
    expect(1);
    const double c = spec.params[0];
    return WaveFunction::from_function(grid, Frame::rescaled(), [norm, c](double x) {
      return Complex(norm * std::exp(-0.5 * (x - c) * (x - c)));
    });
  }
  std::string names;
  for (const auto& n : profile_names()) names += (names.empty() ? "" : ", ") + n;
  throw ValidationError("unknown profile '" + spec.name + "'; valid names: " + names);
}

GridPtr mu_grid(const ExperimentConfig& config) {
  return make_grid(config.grid.mu_n, config.grid.mu_min, config.grid.mu_max);
}

ProblemSetup problem_setup(const ExperimentConfig& config) {
  ProblemSetup s{make_profile(config.a0, mu_grid(config)),
                 builtin_pair(config.phi.name, config.phi.params),
                 builtin_external(config.U.name, config.U.params),
                 config.q0,
                 config.p0,
                 config.T,
                 config.dt,
                 config.grid.x_n,
                 StepOptions{}};
  return s;
}

PowerLawFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& error) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  PowerLawFit fit{nan, nan, nan};
  const std::size_t n = std::min(eps.size(), error.size());
  if (n < 2) return fit;
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(eps[i]);
    ly[i] = std::log(error[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : nan);
  return fit;
}

void finalize_report(SweepReport& report) {
  std::sort(report.rows.begin(), report.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.epsilon > b.epsilon; });
  std::vector<double> eps, err;
  for (const auto& r : report.rows) {
    eps.push_back(r.epsilon);
    err.push_back(r.error);
  }
  const auto fit = fit_power_law(eps, err);
  report.fitted_slope = fit.slope;
  report.fit_r2 = fit.r2;
}

SweepRow measure_point(const ExperimentConfig& config, double epsilon, double dt) {
  SweepRow row;
  row.epsilon = epsilon;
  row.dt = dt;
  if (config.mode == Mode::Physical) {
    ProblemSetup setup = problem_setup(config);
    setup.dt = dt;
    const auto r = theorem_error_run(epsilon, setup);
    row.error = r.error;
    row.n = r.physical_n;
  } else {
    const auto grid = mu_grid(config);
    const auto a0 = make_profile(config.a0, grid);
    const auto phi = builtin_pair(config.phi.name, config.phi.params);
    const auto U = builtin_external(config.U.name, config.U.params);
    const auto flow = flow_for(config, phi, U, dt);
    StepOptions last_only;
    last_only.record_every = std::numeric_limits<int>::max();
    const auto exact = evolve_rescaled(a0, epsilon, phi, U, flow, config.T, dt, last_only);
    WaveFunction approx = a0;
    if (config.mode == Mode::Rescaled || config.K == 0) {
      approx = evolve_b(a0, phi.second_deriv_at_0,
                        [&flow](double t) { return flow->hess_along(t); }, config.T, dt,
                        last_only)
                   .back();
    } else {
      const auto set = compute_corrections(a0, phi, U, *flow, config.T, dt, config.K);
      approx = assemble_expansion(set, config.K, epsilon);
    }
    row.error = residual_norm(approx, exact.a.back());
    row.n = grid->size();
  }
  row.error_over_sqrt_eps = row.error / std::sqrt(epsilon);
  return row;
}

SweepRow gated_point(const ExperimentConfig& config, double epsilon) {
  double dt = config.mode == Mode::Physical ? config.dt.value_or(default_physical_dt(epsilon))
                                            : rescaled_dt(config);
  SweepRow coarse = measure_point(config, epsilon, dt);
  for (int refinement = 0; refinement <= kGateMaxRefinements; ++refinement) {
    const SweepRow fine = measure_point(config, epsilon, 0.5 * dt);
    const double change = std::abs(fine.error - coarse.error);
    if (change <= kGateTolerance * std::max(coarse.error, fine.error) || change <= kGateFloor) {
      return coarse;
    }
    coarse = fine;
    dt *= 0.5;
  }
  std::ostringstream os;
  os << "step-halving gate failed at epsilon = " << epsilon << " down to dt = " << dt;
  throw NumericalError(os.str(), config.T);
}

SweepReport run_sweep(const ExperimentConfig& config, int jobs) {
  check_eps_list(config.eps_list);
  if (config.eps_list.size() < 3) throw ValidationError("a rate fit needs at least 3 eps values");
  const std::size_t count = config.eps_list.size();
  std::vector<std::optional<SweepRow>> rows(count);
  std::vector<std::string> errors(count);
  std::vector<char> numerical(count, 0);

  auto work = [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      SweepRow row = gated_point(config, config.eps_list[i]);
      row.wall_ms = elapsed_ms(start);
      rows[i] = row;
    } catch (const NumericalError& e) {
      errors[i] = e.what();
      numerical[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      work(i);
      if (!errors[i].empty()) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs && w < static_cast<int>(count); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepReport report;
  for (const auto& r : rows) {
    if (r) report.rows.push_back(*r);
  }
  finalize_report(report);
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i].empty()) {
      throw SweepError(errors[i], report, config.eps_list[i], numerical[i] != 0);
    }
  }
  return report;
}

std::string format_report(const SweepReport& report, bool include_timing) {
  std::ostringstream os;
  os << "epsilon,error,error_over_sqrt_eps,dt,n,wall_ms\n";
  for (const auto& r : report.rows) {
    os << format_number(r.epsilon) << ',' << format_number(r.error) << ','
       << format_number(r.error_over_sqrt_eps) << ',' << format_number(r.dt) << ',' << r.n
       << ",\n";
  }
  os << "# slope=" << format_number(report.fitted_slope)
     << " r2=" << format_number(report.fit_r2) << '\n';
  if (include_timing) {
    for (const auto& r : report.rows) {
      os << "# wall_ms epsilon=" << format_number(r.epsilon)
         << " ms=" << format_number(std::round(r.wall_ms * 1000.0) / 1000.0) << '\n';
    }
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void emit_report(const SweepReport& report, const std::filesystem::path& path,
                 bool include_timing) {
  write_text(path, format_report(report, include_timing));
}

std::string format_table(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  for (const auto& note : table.notes) os << "# " << note << '\n';
  return os.str();
}

Table compare_trace(const ExperimentConfig& config, double epsilon, int trace_every) {
  ProblemSetup setup = problem_setup(config);
  const double dt = config.dt.value_or(default_physical_dt(epsilon));
  setup.dt = dt;
  const auto physical = theorem_error_run(epsilon, setup, std::max(1, trace_every));

  const auto flow = flow_for(config, setup.phi, setup.U, dt);
  StepOptions opts;
  opts.record_every = std::max(1, trace_every);
  const auto exact = evolve_rescaled(setup.a0, epsilon, setup.phi, setup.U, flow, config.T, dt, opts);
  const auto b = evolve_b(setup.a0, setup.phi.second_deriv_at_0,
                          [&flow](double t) { return flow->hess_along(t); }, config.T, dt, opts);

  Table table;
  table.columns = {"t", "physical_error", "rescaled_residual"};
  for (std::size_t i = 0; i < physical.trace.size() && i < b.size(); ++i) {
    table.rows.push_back({physical.trace[i].first, physical.trace[i].second,
                          residual_norm(b.psi[i], exact.a.psi[i])});
  }
  table.notes.push_back("epsilon=" + format_number(epsilon) + " dt=" + format_number(dt) +
                        " n=" + std::to_string(physical.physical_n));
  for (const auto& w : physical.warnings) table.notes.push_back("warning: " + w);
  return table;
}

LemmaCheck lemma_check(const ExperimentConfig& config, double dt, int trace_every) {
  const auto setup = problem_setup(config);
  const double kappa = setup.phi.second_deriv_at_0;
  const auto flow = flow_for(config, setup.phi, setup.U, 0.25 * dt);
  const auto hess = [&flow](double t) { return flow->hess_along(t); };

  auto final_gap = [&](double coarse_dt) {
    StepOptions last_only;
    last_only.record_every = std::numeric_limits<int>::max();
    const auto b = evolve_b(setup.a0, kappa, hess, config.T, coarse_dt, last_only).back();
    const auto beta = evolve_beta(setup.a0, kappa, hess, config.T, 0.5 * coarse_dt, last_only).back();
    return l2_distance(b, beta.beta.scaled(std::polar(1.0, beta.gamma)));
  };

  LemmaCheck out;
  StepOptions opts;
  opts.record_every = std::max(1, trace_every);
  const auto b = evolve_b(setup.a0, kappa, hess, config.T, dt, opts);
  const auto beta = evolve_beta(setup.a0, kappa, hess, config.T, dt, opts);
  out.trace.columns = {"t", "difference", "gamma"};
  for (std::size_t i = 0; i < b.size() && i < beta.size(); ++i) {
    const double d = l2_distance(b.psi[i], beta[i].beta.scaled(std::polar(1.0, beta[i].gamma)));
    out.max_difference = std::max(out.max_difference, d);
    out.trace.rows.push_back({b.t[i], d, beta[i].gamma});
  }
  out.coarse_gap = final_gap(dt);
  out.fine_gap = final_gap(0.5 * dt);
  out.order = std::log2(out.coarse_gap / out.fine_gap);
  out.trace.notes.push_back("max_difference=" + format_number(out.max_difference));
  out.trace.notes.push_back("cross_resolution_gap dt=" + format_number(out.coarse_gap) +
                            " dt/2=" + format_number(out.fine_gap) +
                            " order=" + format_number(out.order));
  return out;
}

InitialAmplitudeReport validate_config_profile(const ExperimentConfig& config) {
  return validate_initial_amplitude(make_profile(config.a0, mu_grid(config)));
}

std::string gnuplot_script(const std::string& csv_path) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'epsilon'\n"
     << "set ylabel 'L2 error'\n"
     << "set key top left\n"
     << "plot '" << csv_path << "' every ::1 using 1:2 with linespoints title 'error', \\\n"
     << "     '" << csv_path << "' every ::1 using 1:(sqrt($1)) with lines dashtype 2 title 'sqrt(eps)'\n";
  return os.str();
}

}  // namespace schartree
