/* C interface to the semiclassical Hartree toolkit.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return an sch_status; on failure the
 * message is available from sch_last_error() on the calling thread until the
 * next call into the library.
 */
#ifndef SCHARTREE_SCHARTREE_H
#define SCHARTREE_SCHARTREE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SCHARTREE_BUILDING)
#define SCH_API __declspec(dllexport)
#else
#define SCH_API __declspec(dllimport)
#endif
#else
#define SCH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sch_status {
  SCH_OK = 0,
  SCH_INVALID_ARGUMENT = 2, /* validation: bad config, precondition, mismatch */
  SCH_NUMERICAL_FAILURE = 3, /* non-finite state, boundary breach, failed gate */
  SCH_IO_ERROR = 4,
  SCH_INTERNAL_ERROR = 5
} sch_status;

typedef struct sch_config sch_config;
typedef struct sch_report sch_report;
typedef struct sch_table sch_table;

typedef struct sch_report_row {
  double epsilon;
  double error;
  double error_over_sqrt_eps;
  double dt;
  int n;
  double wall_ms;
} sch_report_row;

typedef struct sch_validation {
  double norm_defect;
  double first_moment;
  double fourier_first_moment;
  double abs_moments[4];
  int pass;
} sch_validation;

SCH_API const char* sch_version(void);
SCH_API const char* sch_last_error(void);

/* Config: JSON text (not necessarily NUL-terminated). */
SCH_API sch_status sch_config_parse(const char* json, size_t length, sch_config** out);
/* "physical", "rescaled", "corrections-0", "corrections-1", "corrections-2". */
SCH_API sch_status sch_config_set_mode(sch_config* config, const char* mode);
SCH_API sch_status sch_config_set_eps_list(sch_config* config, const double* eps, size_t count);
/* Caller frees the returned string with sch_string_free. */
SCH_API char* sch_config_mode(const sch_config* config);
SCH_API void sch_config_free(sch_config* config);

/* Runs the rate sweep on up to `jobs` threads. On SCH_NUMERICAL_FAILURE or
 * SCH_INVALID_ARGUMENT raised by a datapoint, *out still receives the partial
 * report; sch_report_failed_epsilon names the failing datapoint. */
SCH_API sch_status sch_run_sweep(const sch_config* config, int jobs, sch_report** out);
SCH_API size_t sch_report_row_count(const sch_report* report);
SCH_API sch_status sch_report_get_row(const sch_report* report, size_t index, sch_report_row* row);
SCH_API double sch_report_slope(const sch_report* report);
SCH_API double sch_report_r2(const sch_report* report);
/* NaN when the sweep completed. */
SCH_API double sch_report_failed_epsilon(const sch_report* report);
SCH_API sch_status sch_report_write_csv(const sch_report* report, const char* path,
                                        int include_timing);
/* Report CSV as a string; free with sch_string_free. */
SCH_API char* sch_report_format(const sch_report* report, int include_timing);
SCH_API void sch_report_free(sch_report* report);

/* Single-epsilon trace of the full solution against the approximation. */
SCH_API sch_status sch_compare(const sch_config* config, double epsilon, int trace_every,
                               sch_table** out);
/* Cross-check of the self-consistent b-equation against exp(i gamma) beta.
 * `order` (may be NULL) receives the step-halving order of the two solvers'
 * common limit; `max_difference` (may be NULL) the same-step gap. */
SCH_API sch_status sch_lemma_check(const sch_config* config, double dt, int trace_every,
                                   sch_table** out, double* max_difference, double* order);
SCH_API size_t sch_table_row_count(const sch_table* table);
SCH_API size_t sch_table_column_count(const sch_table* table);
SCH_API const char* sch_table_column_name(const sch_table* table, size_t column);
SCH_API double sch_table_value(const sch_table* table, size_t row, size_t column);
SCH_API sch_status sch_table_write_csv(const sch_table* table, const char* path);
SCH_API char* sch_table_format(const sch_table* table);
SCH_API void sch_table_free(sch_table* table);

SCH_API sch_status sch_validate(const sch_config* config, sch_validation* out);

SCH_API sch_status sch_write_gnuplot(const char* csv_path, const char* script_path);

SCH_API void sch_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SCHARTREE_SCHARTREE_H */
