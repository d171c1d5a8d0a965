#include "schartree/schartree.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <string>

#include "schartree/errors.hpp"
#include "schartree/harness.hpp"

struct sch_config {
  schartree::ExperimentConfig value;
};

struct sch_report {
  schartree::SweepReport value;
  double failed_epsilon = std::numeric_limits<double>::quiet_NaN();
};

struct sch_table {
  schartree::Table value;
};

namespace {

thread_local std::string last_error;

sch_status fail(sch_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
sch_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const schartree::ValidationError& e) {
    return fail(SCH_INVALID_ARGUMENT, e.what());
  } catch (const schartree::NumericalError& e) {
    return fail(SCH_NUMERICAL_FAILURE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SCH_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(SCH_INTERNAL_ERROR, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sch_version(void) { return "1.0.0"; }

const char* sch_last_error(void) { return last_error.c_str(); }

sch_status sch_config_parse(const char* json, size_t length, sch_config** out) {
  if (!json || !out) return fail(SCH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto cfg = schartree::parse_config(std::string_view(json, length));
    *out = new sch_config{std::move(cfg)};
    return SCH_OK;
  });
}

sch_status sch_config_set_mode(sch_config* config, const char* mode) {
  if (!config || !mode) return fail(SCH_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    schartree::set_mode(config->value, mode);
    return SCH_OK;
  });
}

sch_status sch_config_set_eps_list(sch_config* config, const double* eps, size_t count) {
  if (!config || (!eps && count)) return fail(SCH_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<double> list(eps, eps + count);
    if (list.empty()) throw schartree::ValidationError("eps_list must not be empty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!(list[i] > 0.0)) throw schartree::ValidationError("eps_list entries must be positive");
      if (i && !(list[i] < list[i - 1])) {
        throw schartree::ValidationError("eps_list must be strictly decreasing");
      }
    }
    config->value.eps_list = std::move(list);
    return SCH_OK;
  });
}

char* sch_config_mode(const sch_config* config) {
  if (!config) return nullptr;
  return duplicate(schartree::mode_name(config->value));
}

void sch_config_free(sch_config* config) { delete config; }

sch_status sch_run_sweep(const sch_config* config, int jobs, sch_report** out) {
  if (!config || !out) return fail(SCH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    last_error.clear();
    auto report = schartree::run_sweep(config->value, jobs);
    *out = new sch_report{std::move(report)};
    return SCH_OK;
  } catch (const schartree::SweepError& e) {
    *out = new sch_report{e.partial(), e.failing_epsilon()};
    return fail(e.numerical() ? SCH_NUMERICAL_FAILURE : SCH_INVALID_ARGUMENT, e.what());
  } catch (const schartree::ValidationError& e) {
    return fail(SCH_INVALID_ARGUMENT, e.what());
  } catch (const schartree::NumericalError& e) {
    return fail(SCH_NUMERICAL_FAILURE, e.what());
  } catch (const std::exception& e) {
    return fail(SCH_INTERNAL_ERROR, e.what());
  }
}

size_t sch_report_row_count(const sch_report* report) {
  return report ? report->value.rows.size() : 0;
}

sch_status sch_report_get_row(const sch_report* report, size_t index, sch_report_row* row) {
  if (!report || !row) return fail(SCH_INVALID_ARGUMENT, "null argument");
  if (index >= report->value.rows.size()) return fail(SCH_INVALID_ARGUMENT, "row index out of range");
  const auto& r = report->value.rows[index];
  *row = {r.epsilon, r.error, r.error_over_sqrt_eps, r.dt, r.n, r.wall_ms};
  return SCH_OK;
}

double sch_report_slope(const sch_report* report) {
  return report ? report->value.fitted_slope : std::numeric_limits<double>::quiet_NaN();
}

double sch_report_r2(const sch_report* report) {
  return report ? report->value.fit_r2 : std::numeric_limits<double>::quiet_NaN();
}

double sch_report_failed_epsilon(const sch_report* report) {
  return report ? report->failed_epsilon : std::numeric_limits<double>::quiet_NaN();
}

sch_status sch_report_write_csv(const sch_report* report, const char* path, int include_timing) {
  if (!report || !path) return fail(SCH_INVALID_ARGUMENT, "null argument");
  try {
    last_error.clear();
    schartree::emit_report(report->value, path, include_timing != 0);
    return SCH_OK;
  } catch (const std::exception& e) {
    return fail(SCH_IO_ERROR, e.what());
  }
}

char* sch_report_format(const sch_report* report, int include_timing) {
  if (!report) return nullptr;
  return duplicate(schartree::format_report(report->value, include_timing != 0));
}

void sch_report_free(sch_report* report) { delete report; }

sch_status sch_compare(const sch_config* config, double epsilon, int trace_every,
                       sch_table** out) {
  if (!config || !out) return fail(SCH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto table = schartree::compare_trace(config->value, epsilon, trace_every);
    *out = new sch_table{std::move(table)};
    return SCH_OK;
  });
}

sch_status sch_lemma_check(const sch_config* config, double dt, int trace_every, sch_table** out,
                           double* max_difference, double* order) {
  if (!config || !out) return fail(SCH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto check = schartree::lemma_check(config->value, dt, trace_every);
    if (max_difference) *max_difference = check.max_difference;
    if (order) *order = check.order;
    *out = new sch_table{std::move(check.trace)};
    return SCH_OK;
  });
}

size_t sch_table_row_count(const sch_table* table) { return table ? table->value.rows.size() : 0; }

size_t sch_table_column_count(const sch_table* table) {
  return table ? table->value.columns.size() : 0;
}

const char* sch_table_column_name(const sch_table* table, size_t column) {
  if (!table || column >= table->value.columns.size()) return nullptr;
  return table->value.columns[column].c_str();
}

double sch_table_value(const sch_table* table, size_t row, size_t column) {
  if (!table || row >= table->value.rows.size() || column >= table->value.rows[row].size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return table->value.rows[row][column];
}

sch_status sch_table_write_csv(const sch_table* table, const char* path) {
  if (!table || !path) return fail(SCH_INVALID_ARGUMENT, "null argument");
  try {
    last_error.clear();
    schartree::write_text(path, schartree::format_table(table->value));
    return SCH_OK;
  } catch (const std::exception& e) {
    return fail(SCH_IO_ERROR, e.what());
  }
}

char* sch_table_format(const sch_table* table) {
  if (!table) return nullptr;
  return duplicate(schartree::format_table(table->value));
}

void sch_table_free(sch_table* table) { delete table; }

sch_status sch_validate(const sch_config* config, sch_validation* out) {
  if (!config || !out) return fail(SCH_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto r = schartree::validate_config_profile(config->value);
    out->norm_defect = r.norm_defect;
    out->first_moment = r.first_moment;
    out->fourier_first_moment = r.fourier_first_moment;
    for (int m = 0; m < 4; ++m) out->abs_moments[m] = r.abs_moments[m];
    out->pass = r.pass ? 1 : 0;
    return SCH_OK;
  });
}

sch_status sch_write_gnuplot(const char* csv_path, const char* script_path) {
  if (!csv_path || !script_path) return fail(SCH_INVALID_ARGUMENT, "null argument");
  try {
    last_error.clear();
    schartree::write_text(script_path, schartree::gnuplot_script(csv_path));
    return SCH_OK;
  } catch (const std::exception& e) {
    return fail(SCH_IO_ERROR, e.what());
  }
}

void sch_string_free(char* s) { std::free(s); }

}  // extern "C"
