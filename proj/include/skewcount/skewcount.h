/* C interface to the skewcount library. */
#ifndef SKEWCOUNT_SKEWCOUNT_H
#define SKEWCOUNT_SKEWCOUNT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SKC_API __declspec(dllexport)
#else
#define SKC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes 0..3 double as CLI exit codes. */
typedef enum skc_status {
  SKC_OK = 0,
  SKC_VERIFICATION_FAILED = 1,
  SKC_CONFIG_ERROR = 2,
  SKC_NUMERICAL_ERROR = 3,
  SKC_BUFFER_TOO_SMALL = 4,
  SKC_INTERNAL_ERROR = 5
} skc_status;

typedef struct skc_config skc_config;
typedef struct skc_table skc_table;
typedef struct skc_result skc_result;

SKC_API const char* skc_version(void);

/* JSON error record of the last failing call on this thread, or "". */
SKC_API const char* skc_last_error(void);

SKC_API skc_status skc_config_parse(const char* json_text, skc_config** out);
SKC_API skc_status skc_config_load(const char* path, skc_config** out);
/* "key.path=value"; the value is read as JSON when it parses. */
SKC_API skc_status skc_config_set(skc_config* config, const char* assignment);
/* 16 hex digits plus terminator: size >= 17. */
SKC_API skc_status skc_config_digest(skc_config* config, char* buffer, size_t size);
SKC_API const char* skc_config_output_directory(skc_config* config);
SKC_API size_t skc_config_warning_count(skc_config* config);
SKC_API const char* skc_config_warning(skc_config* config, size_t index);
SKC_API void skc_config_free(skc_config* config);

/* Runs count, orbits, verify, series, repelling or selftest. On SKC_OK the
 * result holds the verdict (0 pass, 1 fail), a summary and output files. */
SKC_API skc_status skc_run(skc_config* config, const char* subcommand, skc_result** out);
SKC_API int skc_result_exit_code(const skc_result* result);
SKC_API const char* skc_result_summary(const skc_result* result);
SKC_API size_t skc_result_file_count(const skc_result* result);
SKC_API const char* skc_result_file_name(const skc_result* result, size_t index);
SKC_API const char* skc_result_file_content(const skc_result* result, size_t index);
SKC_API skc_status skc_result_write(const skc_result* result, const char* directory);
SKC_API void skc_result_free(skc_result* result);

/* Count table for the configured pipeline, n = 1..n_max. */
SKC_API skc_status skc_table_build(skc_config* config, int n_max, skc_table** out);
SKC_API int skc_table_n_max(const skc_table* table);
/* column is 'E', 'D' or 'C'. Exact tables give full integers. */
SKC_API skc_status skc_table_text(const skc_table* table, char column, int n, char* buffer, size_t size,
                                  size_t* needed);
SKC_API skc_status skc_table_value(const skc_table* table, char column, int n, double* out);
SKC_API void skc_table_free(skc_table* table);

SKC_API skc_status skc_mobius(int64_t n, int* out);
/* (r_1 + ... + r_M)^n + M^n as decimal text. */
SKC_API skc_status skc_periodic_count(const int* degrees, size_t count, int n, char* buffer, size_t size,
                                      size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
