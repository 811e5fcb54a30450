#ifndef STEPLIKE_H
#define STEPLIKE_H

/* C interface to the steplike-potential scattering library.
 *
 * The library computes transmission/reflection coefficients of the 1-D
 * Schroedinger operator -d^2/dx^2 + V with a steplike potential (constant
 * tails V- on the left, V+ on the right, V+ < V-) on the four-sheeted
 * energy surface where both roots (z - V+-)^{1/2} are single-valued,
 * locates resonances (poles of the continued resolvent) by an
 * argument-principle search, builds counting reports, and runs the
 * inverse-side recovery of the reflection coefficient from resonance data.
 *
 * All functions return slk_status; SLK_OK is 0.  On failure a thread-local
 * message is available from slk_last_error_message().  Strings returned
 * through char** are heap-allocated; release them with slk_string_free().
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slk_status {
  SLK_OK = 0,
  SLK_ERR_INVALID_ARGUMENT = 1, /* bad parameters, schema violations */
  SLK_ERR_PARSE = 2,            /* malformed potential/config JSON */
  SLK_ERR_BRANCH_POINT = 3,     /* evaluation at a projection branch point */
  SLK_ERR_POLE = 4,             /* coefficients requested at a pole */
  SLK_ERR_CONTOUR = 5,          /* winding contour could not be certified */
  SLK_ERR_UNRESOLVED = 6,       /* search left unresolved boxes */
  SLK_ERR_NUMERIC = 7,          /* integration / iteration failure */
  SLK_ERR_IO = 8                /* file access */
} slk_status;

typedef struct slk_potential slk_potential;

/* s_plus, s_minus: +1 or -1, the signs of Im r+ and Im r- fixing the sheet.
 * boundary_side: +1 (limit from above), -1 (from below), 0 when the
 * projection does not lie on a branch cut. */
typedef struct slk_point {
  double re_z, im_z;
  int s_plus, s_minus;
  int boundary_side;
} slk_point;

typedef struct slk_complex {
  double re, im;
} slk_complex;

typedef struct slk_coefficients {
  slk_complex t_minus, t_plus, r_minus, r_plus;
  slk_complex wronskian_d;
  slk_complex r_plus_root, r_minus_root;
} slk_coefficients;

/* ------------------------------------------------------------- potentials */

slk_status slk_potential_from_json(const char* json_text, slk_potential** out);
slk_status slk_potential_from_file(const char* path, slk_potential** out);
void slk_potential_free(slk_potential* pot);

slk_status slk_potential_support_hull(const slk_potential* pot, double* a,
                                      double* b);
slk_status slk_potential_levels(const slk_potential* pot, double* v_plus,
                                double* v_minus);

/* ------------------------------------------------------------- scattering */

/* Coefficients at a surface point.  ode_tol controls the integration when
 * the potential has a continuous perturbation; ignored for staircases. */
slk_status slk_scattering_eval(const slk_potential* pot, slk_point at,
                               double ode_tol, slk_coefficients* out);

/* Residuals of the nine coefficient identities at the point and its deck
 * images, normalized by max(1, |lhs|, |rhs|).  residuals must hold 9
 * doubles; entries skipped at poles are set to -1. */
slk_status slk_identities_check(const slk_potential* pot, slk_point at,
                                double ode_tol, double residuals[9]);

/* ------------------------------------------------------------- resonances */

/* region_json:
 *   {"sheet":"mm","rect":[re0,re1,im0,im1],"tol":1e-9,"ode_tol":1e-10,
 *    "threads":1}
 * csv_out / json_out (either may be NULL) receive the located resonances in
 * the documented CSV / JSON formats.  Returns SLK_ERR_UNRESOLVED when boxes
 * remain unresolved unless allow_unresolved is nonzero (the outputs are
 * still produced). */
slk_status slk_resonances_locate(const slk_potential* pot,
                                 const char* region_json, int allow_unresolved,
                                 char** csv_out, char** json_out);

/* real physical-sheet bound states below V+ */
slk_status slk_eigenvalues(const slk_potential* pot, double tol,
                           double** values, size_t* count);

/* config_json:
 *   {"select":"mm","r_min":2.0,"r_max":30.0,"ratio":1.15,
 *    "predicted_slope":0.6366,"tol":1e-8,"ode_tol":1e-10,"threads":1}
 * Locates resonances in |z| <= r_max^2 on the selected sheet(s) and returns
 * the counting report as JSON. */
slk_status slk_counting_report(const slk_potential* pot,
                               const char* config_json, char** json_out);

/* config_json:
 *   {"target":"r_minus","phi":1.5708,"r_min":10,"r_max":1000,"n":25,
 *    "ode_tol":1e-10} */
slk_status slk_indicator_report(const slk_potential* pot,
                                const char* config_json, char** json_out);

/* config_json:
 *   {"mode":"roundtrip","truncation_k":40,"z_lo":2.0,"z_hi":100.0,"n":120,
 *    "rect_r":30.0,"tol":1e-8,"ode_tol":1e-10}
 * Runs the boundary recovery of R- against forward data and returns the
 * report as JSON. */
slk_status slk_inverse_roundtrip_report(const slk_potential* pot,
                                        const char* config_json,
                                        char** json_out);

/* ---------------------------------------------------------------- strings */

void slk_string_free(char* s);
const char* slk_last_error_message(void);
const char* slk_status_name(slk_status st);

#ifdef __cplusplus
}
#endif

#endif /* STEPLIKE_H */
