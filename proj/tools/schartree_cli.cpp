#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "schartree/schartree.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct ConfigDeleter {
  void operator()(sch_config* c) const { sch_config_free(c); }
};
struct ReportDeleter {
  void operator()(sch_report* r) const { sch_report_free(r); }
};
struct TableDeleter {
  void operator()(sch_table* t) const { sch_table_free(t); }
};
struct StringDeleter {
  void operator()(char* s) const { sch_string_free(s); }
};
using ConfigHandle = std::unique_ptr<sch_config, ConfigDeleter>;
using ReportHandle = std::unique_ptr<sch_report, ReportDeleter>;
using TableHandle = std::unique_ptr<sch_table, TableDeleter>;
using StringHandle = std::unique_ptr<char, StringDeleter>;

struct Options {
  std::string config_path;
  std::string out;
  std::string mode;
  std::vector<double> eps;
  int jobs = 1;
  bool quiet = false;
  bool timing = false;
  std::string plot;
  int every = 50;
  double dt = 1e-3;
};

int exit_code(sch_status status) {
  switch (status) {
    case SCH_OK: return kExitOk;
    case SCH_INVALID_ARGUMENT: return kExitValidation;
    case SCH_NUMERICAL_FAILURE: return kExitNumerical;
    default: return kExitFailure;
  }
}

int report_failure(sch_status status) {
  std::cerr << "error: " << sch_last_error() << "\n";
  return exit_code(status);
}

std::optional<ConfigHandle> load_config(const Options& opt, int& code) {
  std::ifstream in(opt.config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file '" << opt.config_path << "'\n";
    code = kExitValidation;
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  sch_config* raw = nullptr;
  sch_status st = sch_config_parse(text.data(), text.size(), &raw);
  if (st != SCH_OK) {
    code = report_failure(st);
    return std::nullopt;
  }
  ConfigHandle cfg(raw);
  if (!opt.mode.empty() && (st = sch_config_set_mode(cfg.get(), opt.mode.c_str())) != SCH_OK) {
    code = report_failure(st);
    return std::nullopt;
  }
  if (!opt.eps.empty() &&
      (st = sch_config_set_eps_list(cfg.get(), opt.eps.data(), opt.eps.size())) != SCH_OK) {
    code = report_failure(st);
    return std::nullopt;
  }
  return cfg;
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

void print_summary(const sch_report* report, const char* label, bool quiet) {
  if (quiet) return;
  const std::size_t n = sch_report_row_count(report);
  for (std::size_t i = 0; i < n; ++i) {
    sch_report_row row{};
    sch_report_get_row(report, i, &row);
    std::fprintf(stderr, "%s eps=%-8g error=%.6e dt=%g n=%d (%.0f ms)\n", label, row.epsilon,
                 row.error, row.dt, row.n, row.wall_ms);
  }
  std::fprintf(stderr, "%s slope=%.4f r2=%.5f\n", label, sch_report_slope(report),
               sch_report_r2(report));
}

int run_and_emit(const sch_config* cfg, const Options& opt, const std::string& out,
                 const char* label) {
  sch_report* raw = nullptr;
  const sch_status st = sch_run_sweep(cfg, opt.jobs, &raw);
  ReportHandle report(raw);
  if (!report) return report_failure(st);

  int code = kExitOk;
  if (st != SCH_OK) {
    std::cerr << "error: " << sch_last_error() << " (failing epsilon "
              << sch_report_failed_epsilon(report.get()) << "; partial report written)\n";
    code = exit_code(st);
  }
  print_summary(report.get(), label, opt.quiet);
  StringHandle text(sch_report_format(report.get(), opt.timing ? 1 : 0));
  if (!text || !write_output(text.get(), out)) return kExitFailure;
  if (!opt.plot.empty() && !out.empty() && out != "-") {
    const sch_status pst = sch_write_gnuplot(out.c_str(), opt.plot.c_str());
    if (pst != SCH_OK) return report_failure(pst);
  }
  return code;
}

int cmd_sweep(const Options& opt) {
  int code = kExitOk;
  auto cfg = load_config(opt, code);
  if (!cfg) return code;
  return run_and_emit(cfg->get(), opt, opt.out, "sweep");
}

std::string with_suffix(const std::string& out, const std::string& suffix) {
  if (out.empty() || out == "-") return "corrections" + suffix + ".csv";
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out + suffix + ".csv";
  }
  return out.substr(0, dot) + suffix + out.substr(dot);
}

int cmd_corrections(Options opt) {
  int code = kExitOk;
  auto cfg = load_config(opt, code);
  if (!cfg) return code;
  const std::string plot = opt.plot;
  int worst = kExitOk;
  for (int k = 1; k <= 2; ++k) {
    const std::string mode = "corrections-" + std::to_string(k);
    const sch_status st = sch_config_set_mode(cfg->get(), mode.c_str());
    if (st != SCH_OK) return report_failure(st);
    const std::string suffix = "_K" + std::to_string(k);
    opt.plot = plot.empty() ? "" : with_suffix(plot, suffix);
    const std::string label = "K=" + std::to_string(k);
    const int rc = run_and_emit(cfg->get(), opt, with_suffix(opt.out, suffix), label.c_str());
    if (rc != kExitOk && worst == kExitOk) worst = rc;
  }
  return worst;
}

int emit_table(sch_table* raw, sch_status st, const Options& opt) {
  TableHandle table(raw);
  if (st != SCH_OK) return report_failure(st);
  StringHandle text(sch_table_format(table.get()));
  if (!text || !write_output(text.get(), opt.out)) return kExitFailure;
  return kExitOk;
}

int cmd_compare(const Options& opt) {
  int code = kExitOk;
  auto cfg = load_config(opt, code);
  if (!cfg) return code;
  if (opt.eps.size() != 1) {
    std::cerr << "error: compare needs exactly one --eps value\n";
    return kExitValidation;
  }
  sch_table* raw = nullptr;
  const sch_status st = sch_compare(cfg->get(), opt.eps[0], opt.every, &raw);
  return emit_table(raw, st, opt);
}

int cmd_lemma(const Options& opt) {
  int code = kExitOk;
  auto cfg = load_config(opt, code);
  if (!cfg) return code;
  sch_table* raw = nullptr;
  double max_diff = 0.0;
  double order = 0.0;
  const sch_status st = sch_lemma_check(cfg->get(), opt.dt, opt.every, &raw, &max_diff, &order);
  if (st == SCH_OK && !opt.quiet) {
    std::fprintf(stderr, "max |b - e^{i gamma} beta| = %.3e, step-halving order = %.3f\n",
                 max_diff, order);
  }
  return emit_table(raw, st, opt);
}

int cmd_validate(const Options& opt) {
  int code = kExitOk;
  auto cfg = load_config(opt, code);
  if (!cfg) return code;
  sch_validation v{};
  const sch_status st = sch_validate(cfg->get(), &v);
  if (st != SCH_OK) return report_failure(st);
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  os << "norm_defect " << v.norm_defect << "\n"
     << "first_moment " << v.first_moment << "\n"
     << "fourier_first_moment " << v.fourier_first_moment << "\n";
  for (int m = 0; m < 4; ++m) os << "abs_moment_" << m << " " << v.abs_moments[m] << "\n";
  os << "status " << (v.pass ? "pass" : "fail") << "\n";
  if (!write_output(os.str(), opt.out)) return kExitFailure;
  return v.pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Hartree coherent-state experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sch_version());

  Options opt;
  app.add_flag("-q,--quiet", opt.quiet, "Suppress progress output");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", opt.out, "Output path (stdout when omitted)");
    sub->add_flag("-q,--quiet", opt.quiet, "Suppress progress output");
  };

  auto* sweep = app.add_subcommand("sweep", "Error-vs-epsilon rate study");
  add_common(sweep);
  sweep->add_option("--mode", opt.mode, "physical | rescaled | corrections-K (K = 0, 1, 2)");
  sweep->add_option("--eps", opt.eps, "Comma-separated epsilon list")->delimiter(',');
  sweep->add_option("-j,--jobs", opt.jobs, "Parallel datapoints")->check(CLI::PositiveNumber);
  sweep->add_flag("--timing", opt.timing, "Append wall-clock block to the CSV");
  sweep->add_option("--plot", opt.plot, "Also write a gnuplot script here");

  auto* compare = app.add_subcommand("compare", "Single-epsilon error trace");
  add_common(compare);
  compare->add_option("--eps", opt.eps, "Epsilon")->required()->expected(1);
  compare->add_option("--every", opt.every, "Trace stride in steps")->check(CLI::PositiveNumber);

  auto* lemma = app.add_subcommand("lemma-check", "Self-consistent profile vs phased amplitude");
  add_common(lemma);
  lemma->add_option("--dt", opt.dt, "Time step")->check(CLI::PositiveNumber);
  lemma->add_option("--every", opt.every, "Trace stride in steps")->check(CLI::PositiveNumber);

  auto* corrections = app.add_subcommand("corrections", "K = 1 and K = 2 expansion sweeps");
  add_common(corrections);
  corrections->add_option("--eps", opt.eps, "Comma-separated epsilon list")->delimiter(',');
  corrections->add_option("-j,--jobs", opt.jobs, "Parallel datapoints")
      ->check(CLI::PositiveNumber);
  corrections->add_flag("--timing", opt.timing, "Append wall-clock block to the CSVs");
  corrections->add_option("--plot", opt.plot, "Also write gnuplot scripts (suffixed _K1, _K2)");

  auto* validate = app.add_subcommand("validate", "Check the initial profile");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*sweep) return cmd_sweep(opt);
  if (*compare) return cmd_compare(opt);
  if (*lemma) return cmd_lemma(opt);
  if (*corrections) return cmd_corrections(opt);
  if (*validate) return cmd_validate(opt);
  return kExitValidation;
}
