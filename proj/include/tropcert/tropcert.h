#ifndef TROPCERT_TROPCERT_H
#define TROPCERT_TROPCERT_H

/* C interface to the tropical prevariety certifier.
 *
 * Every function returning tc_status reports TC_OK or an error code; the
 * message of the most recent error on the calling thread is available from
 * tc_last_error(). Strings returned through char** out-parameters are owned
 * by the caller and released with tc_string_free(). Strings returned as
 * const char* live as long as the handle they came from. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TC_API __declspec(dllexport)
#else
#define TC_API __attribute__((visibility("default")))
#endif

typedef enum tc_status {
  TC_OK = 0,
  TC_ERR_ARITHMETIC_OVERFLOW = 1,
  TC_ERR_INFEASIBLE_POLYHEDRON = 2,
  TC_ERR_INVALID_ARGUMENT = 3,
  TC_ERR_INVALID_INDEX_PAIR = 4,
  TC_ERR_INVALID_QUADRUPLE = 5,
  TC_ERR_UNSUPPORTED_BODY_COUNT = 6,
  TC_ERR_ZERO_COEFFICIENT = 7,
  TC_ERR_EMPTY_HYPERSURFACE = 8,
  TC_ERR_AMBIENT_MISMATCH = 9,
  TC_ERR_DISTINCT_VALUATIONS_REQUIRED = 10,
  TC_ERR_ORACLE_TOO_LARGE = 11,
  TC_ERR_SCHEMA_MISMATCH = 12,
  TC_ERR_DIGEST_MISMATCH = 13,
  TC_ERR_IO = 14,
  TC_ERR_INTERNAL = 99
} tc_status;

typedef enum tc_verdict { TC_CERTIFIED = 0, TC_INCONCLUSIVE = 1 } tc_verdict;

typedef struct tc_config tc_config;
typedef struct tc_result tc_result;
typedef struct tc_report tc_report;

TC_API const char* tc_version(void);
TC_API const char* tc_last_error(void);
TC_API const char* tc_status_name(tc_status status);
TC_API void tc_string_free(char* s);

/* Run configuration. valuations is a comma-separated list of rationals
 * such as "1,4,9,16,25" or "1/2,3". */
TC_API tc_status tc_config_new(int n, const char* valuations, tc_config** out);
TC_API void tc_config_free(tc_config* cfg);
/* Comma-separated subset of ac, sac, cm. */
TC_API tc_status tc_config_set_equations(tc_config* cfg, const char* families);
/* "checked64" or "big". */
TC_API tc_status tc_config_set_mode(tc_config* cfg, const char* mode);
TC_API tc_status tc_config_set_jobs(tc_config* cfg, size_t jobs);
TC_API tc_status tc_config_set_unsafe_valuations(tc_config* cfg, int allow);
/* Nonzero: certify per component even when the global cone is pointed. */
TC_API tc_status tc_config_set_force_components(tc_config* cfg, int force);
/* Directory receiving certificate.json, complex.json, run_info.json and
 * equations.json; NULL or "" writes nothing. */
TC_API tc_status tc_config_set_output_dir(tc_config* cfg, const char* dir);

TC_API tc_status tc_certify(const tc_config* cfg, tc_result** out);
TC_API void tc_result_free(tc_result* r);
TC_API tc_verdict tc_result_verdict(const tc_result* r);
/* 0 for Certified, 2 for Inconclusive. */
TC_API int tc_result_exit_code(const tc_result* r);
TC_API const char* tc_result_certificate_json(const tc_result* r);
TC_API const char* tc_result_complex_json(const tc_result* r);
TC_API const char* tc_result_run_info_json(const tc_result* r);

TC_API tc_status tc_verify(const char* certificate_path, const char* complex_path, tc_report** out);
TC_API void tc_report_free(tc_report* r);
TC_API int tc_report_passed(const tc_report* r);
TC_API const char* tc_report_json(const tc_report* r);

/* format: "json" or "text". */
TC_API tc_status tc_equations(int n, const char* families, const char* format, char** out);
/* axes: comma-separated 0-based coordinates, two or three of them. */
TC_API tc_status tc_project(const char* complex_path, const char* axes, char** out);

#ifdef __cplusplus
}
#endif

#endif
