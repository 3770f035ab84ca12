#ifndef TWLAB_H
#define TWLAB_H

#include <stddef.h>

#if defined(_WIN32)
#define TWLAB_API __declspec(dllexport)
#else
#define TWLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values follow the library's internal error list. */
enum twlab_status {
    TWLAB_OK = 0,
    TWLAB_E_DOMAIN = 1,
    TWLAB_E_NEWTON_DIVERGENCE,
    TWLAB_E_BAD_INTERVAL,
    TWLAB_E_OUT_OF_RANGE,
    TWLAB_E_POLE,
    TWLAB_E_STEP_FAILURE,
    TWLAB_E_BLOW_UP,
    TWLAB_E_DEGENERATE_Q2,
    TWLAB_E_DEGENERATE_DENOMINATOR,
    TWLAB_E_DEGENERATE_GAUGE,
    TWLAB_E_MATCH_FAILURE,
    TWLAB_E_Q_ZERO_CROSSING,
    TWLAB_E_QUADRATURE,
    TWLAB_E_NON_CONVERGENCE,
    TWLAB_E_ILL_CONDITIONED_FIT,
    TWLAB_E_OUT_OF_SUPPORTED_RANGE,
    TWLAB_E_EIGEN,
    TWLAB_E_FREDHOLM,
    TWLAB_E_UNKNOWN_SERIES,
    TWLAB_E_ORDER_TOO_HIGH,
    TWLAB_E_PARSE,
    TWLAB_E_IO,
    TWLAB_E_INTERNAL,
    TWLAB_E_NULL_ARGUMENT = 100,
    TWLAB_E_CONFIG = 101,     /* twlab_run: configuration error */
    TWLAB_E_RUN_FAILED = 102  /* twlab_run: tolerance violation or numerical failure */
};

typedef struct twlab_config twlab_config;
typedef struct twlab_hm twlab_hm;
typedef struct twlab_aux twlab_aux;

TWLAB_API const char* twlab_version(void);

/* Last error of the calling thread. Strings stay valid until the next failing call. */
TWLAB_API int twlab_last_error_code(void);
TWLAB_API const char* twlab_last_error_message(void);
TWLAB_API const char* twlab_last_error_json(void);
TWLAB_API void twlab_clear_error(void);

/* Run configuration. load/parse return NULL on failure. */
TWLAB_API twlab_config* twlab_config_new(void);
TWLAB_API twlab_config* twlab_config_load(const char* path);
TWLAB_API twlab_config* twlab_config_parse(const char* text);
TWLAB_API void twlab_config_free(twlab_config* cfg);
TWLAB_API int twlab_config_set(twlab_config* cfg, const char* key, const char* value);
/* Pointer owned by cfg, valid until the next get on the same handle. NULL on unknown key. */
TWLAB_API const char* twlab_config_get(twlab_config* cfg, const char* key);
TWLAB_API int twlab_config_save(const twlab_config* cfg, const char* path);
TWLAB_API size_t twlab_config_key_count(void);
TWLAB_API const char* twlab_config_key(size_t i);
TWLAB_API size_t twlab_command_count(void);
TWLAB_API const char* twlab_command_name(size_t i);

/* Runs the configured command. Returns the process exit status: 0 all tolerances met,
   1 tolerance violation or numerical failure, 2 configuration error. For nonzero
   results the error JSON is available from twlab_last_error_json. */
TWLAB_API int twlab_run(const twlab_config* cfg);
/* Manifest written by the last twlab_run on this thread ("" if none). */
TWLAB_API const char* twlab_last_manifest_path(void);

/* Hastings-McLeod solution. */
TWLAB_API twlab_hm* twlab_hm_solve(double t_min, double t_max, int n, double tol);
TWLAB_API void twlab_hm_free(twlab_hm* hm);
TWLAB_API int twlab_hm_eval(const twlab_hm* hm, double t, double* u, double* ut, double* omega);

/* Auxiliary system from t_start down to the lower end of hm. route: 0 linear, 1 nonlinear. */
TWLAB_API twlab_aux* twlab_aux_solve(const twlab_hm* hm, double t_start, double tol, int route);
TWLAB_API void twlab_aux_free(twlab_aux* aux);
TWLAB_API int twlab_aux_q2(const twlab_aux* aux, double t, double* q2);

/* Distribution functions at the external argument. */
TWLAB_API int twlab_F2(const twlab_hm* hm, double t, double* out);
TWLAB_API int twlab_F6(const twlab_hm* hm, const twlab_aux* aux, double t, double* out);
TWLAB_API int twlab_fredholm_F2(double t, int m, double* out);
TWLAB_API int twlab_tail_constant(double beta, double* out);

#ifdef __cplusplus
}
#endif

#endif
