/* Stable extern-C surface of the conebesov shared library.
 *
 * All heavy state lives behind the opaque cb_session handle, created from a
 * JSON experiment config. Every entry point returns a cb_status; the last
 * error text of a session is available via cb_session_error. The stateless
 * closed-form helpers at the bottom need no session.
 */
#ifndef CONEBESOV_C_H
#define CONEBESOV_C_H

#include <stddef.h>

#if defined(_WIN32)
#define CB_API __declspec(dllexport)
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
    CB_OK = 0,
    CB_ERROR = 1,         /* invalid input, validation failure, runtime error */
    CB_VERDICT_FAIL = 2,  /* computation ran, the checked verdict is negative */
} cb_status;

typedef struct cb_session cb_session;

CB_API const char* cb_version(void);
CB_API const char* cb_status_name(cb_status status);

/* Sessions. cb_session_open* return NULL only on allocation failure; parse or
 * validation problems yield a session whose cb_session_ok is 0 with the error
 * text set. */
CB_API cb_session* cb_session_open_file(const char* config_path);
CB_API cb_session* cb_session_open_json(const char* config_text);
CB_API int cb_session_ok(const cb_session* session);
CB_API const char* cb_session_error(const cb_session* session);
CB_API void cb_session_close(cb_session* session);

/* Runs one subcommand (pencil | advise | sample | analyze | nterm |
 * cardinality | verify | report) writing artifacts under out_dir. The
 * one-line summary/error is retrievable via cb_session_error. */
CB_API cb_status cb_run(cb_session* session, const char* subcommand, const char* out_dir);

/* -- stateless closed-form helpers ---------------------------------------- */

/* bc: "DD", "NN" or "DN". Writes up to capacity eigenvalues for
 * m = m_first..m_last into out (DD skips m = 0); *count receives the number
 * written. */
CB_API cb_status cb_edge_eigenvalues(double theta, const char* bc, int m_first, int m_last,
                                     double* out, size_t capacity, size_t* count);

/* Width of the eigenvalue-free strip: pi/theta (DD, NN), pi/(2 theta) (DN). */
CB_API cb_status cb_edge_strip(double theta, const char* bc, double* delta_plus,
                               double* delta_minus);

/* r_max = min{l, 3(l - sum delta), 3 s} (0 when the range is empty). */
CB_API cb_status cb_admissible_r_max(int l, const double* delta, size_t n, double s,
                                     double* r_max);

#ifdef __cplusplus
}
#endif

#endif /* CONEBESOV_C_H */
