/* C surface of the fixed-point-free map / retraction certification library.
 *
 * All functions return fpf_status; failing calls leave a human-readable
 * message in fpf_last_error() (thread-local).  Vectors are passed as dense
 * double arrays over the canonical coordinates 1..len.
 */
#ifndef FPFREE_H
#define FPFREE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpf_status {
  FPF_OK = 0,
  FPF_ERR_INVALID_ARGUMENT = 1,
  FPF_ERR_BOUND_VIOLATION = 2, /* mirrors the experiment exit code */
  FPF_ERR_CONFIG = 3,
  FPF_ERR_SOLVER = 4,
  FPF_ERR_IO = 5,
  FPF_ERR_UNKNOWN_TARGET = 6,
  FPF_ERR_DOMAIN = 7,
  FPF_ERR_NO_CONVERGENCE = 8,
  FPF_ERR_BUFFER_TOO_SMALL = 9,
  FPF_ERR_INTERNAL = 10
} fpf_status;

const char* fpf_version(void);
const char* fpf_last_error(void);

/* ---- self-maps ("lin:l2", "affine:q=0.5", "thmM4:alpha=0.5", ...) -------- */

typedef struct fpf_map fpf_map;

fpf_status fpf_map_create(const char* target, fpf_map** out);
void fpf_map_destroy(fpf_map* map);

/* One application of the map.  `out` receives coordinates 1..out_len; fails
 * with FPF_ERR_BUFFER_TOO_SMALL if the image has support beyond out_len. */
fpf_status fpf_map_eval(fpf_map* map, const double* x, int x_len, double* out,
                        int out_len);

/* Orbit from the map's displacement witness: gaps[k] = |f^{k+1}x - f^k x|,
 * k = 0..steps-1; min_displacement (nullable) receives the smallest gap. */
fpf_status fpf_map_orbit_gaps(fpf_map* map, int steps, double* gaps,
                              double* min_displacement);

/* ---- convex bodies with certified retractions ("segment2d", ...) --------- */

typedef struct fpf_body fpf_body;

fpf_status fpf_body_create(const char* preset, fpf_body** out);
void fpf_body_destroy(fpf_body* body);

int fpf_body_dim(const fpf_body* body);
fpf_status fpf_body_distance(const fpf_body* body, const double* x, int len,
                             double* out);
fpf_status fpf_body_contains(const fpf_body* body, const double* x, int len,
                             int* out);
/* Net-hierarchy retraction onto the body; x and out both of length dim. */
fpf_status fpf_body_retract(const fpf_body* body, const double* x, int len,
                            double* out);

/* ---- catalog and experiment runner --------------------------------------- */

/* Newline-separated "name<TAB>schema<TAB>kind" rows.  With a too-small (or
 * null) buffer, *needed receives the required size including the NUL. */
fpf_status fpf_list_targets(char* buf, int buf_len, int* needed);

/* Run a config file end to end.  out_override/summary may be null;
 * seed_override < 0 keeps the config's seed.  *exit_code receives the
 * process-style code (0 ok, 2 bound violation, 3 config, 4 solver, 5 io). */
fpf_status fpf_run_experiment(const char* config_path, const char* out_override,
                              long long seed_override, int no_svg,
                              int* exit_code, char* summary, int summary_cap);

#ifdef __cplusplus
}
#endif

#endif /* FPFREE_H */
