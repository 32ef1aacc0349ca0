/* cxrestrict: numerical laboratory for complex curves of simple type.
 *
 * C API over the C++ core. All objects are opaque handles created and
 * destroyed here; every function returns a status code and writes results
 * through out-parameters. Complex numbers and complex arrays travel as
 * interleaved (re, im) doubles. On any error, cxr_last_error() returns a
 * message for the calling thread.
 */
#ifndef CXRESTRICT_H
#define CXRESTRICT_H

#include <stddef.h>

#if defined(_WIN32)
#define CXR_API __declspec(dllexport)
#else
#define CXR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cxr_status {
    CXR_OK = 0,
    CXR_ERR_INVALID_ARGUMENT = 1,
    CXR_ERR_PARSE = 2,
    CXR_ERR_NO_CONVERGENCE = 3,
    CXR_ERR_BUDGET_EXCEEDED = 4,
    CXR_ERR_INTERNAL = 5
} cxr_status;

typedef struct cxr_poly cxr_poly;
typedef struct cxr_curve cxr_curve;
typedef struct cxr_certificate cxr_certificate;
typedef struct cxr_run_result cxr_run_result;

CXR_API const char* cxr_version(void);
CXR_API const char* cxr_last_error(void);
CXR_API void cxr_string_free(char* s);

/* ---- polynomials (coefficients ascending, interleaved re/im) ---- */

CXR_API cxr_status cxr_poly_create(const double* coeffs_re_im, size_t n_coeffs, cxr_poly** out);
CXR_API cxr_status cxr_poly_from_roots(const double* roots_re_im, size_t n_roots, double lead_re,
                                       double lead_im, cxr_poly** out);
CXR_API cxr_status cxr_poly_parse_json(const char* json_text, cxr_poly** out);
CXR_API cxr_status cxr_poly_degree(const cxr_poly* p, int* out);
CXR_API cxr_status cxr_poly_eval(const cxr_poly* p, double re, double im, double* out_re,
                                 double* out_im);
CXR_API cxr_status cxr_poly_derivative(const cxr_poly* p, int order, cxr_poly** out);
/* roots_re_im must hold 2*degree doubles; residual receives the scaled
 * residual of the worst root. */
CXR_API cxr_status cxr_poly_find_roots(const cxr_poly* p, double* roots_re_im, double* residual);
CXR_API void cxr_poly_free(cxr_poly* p);

/* Complete homogeneous symmetric polynomial of degree N at the points. */
CXR_API cxr_status cxr_complete_homogeneous(int N, const double* pts_re_im, size_t n_pts,
                                            double* out_re, double* out_im);
CXR_API cxr_status cxr_vandermonde(const double* pts_re_im, size_t n_pts, double* out_re,
                                   double* out_im);

/* ---- curves ---- */

/* shifts may be NULL (plain curve); otherwise n_shifts pairs with the
 * first shift equal to zero. */
CXR_API cxr_status cxr_curve_create(int d, const cxr_poly* phi, const double* shifts_re_im,
                                    size_t n_shifts, cxr_curve** out);
CXR_API cxr_status cxr_curve_parse_json(const char* json_text, cxr_curve** out);
CXR_API cxr_status cxr_curve_dimension(const cxr_curve* c, int* out);
/* point_re_im: 2d doubles (complex components); embed: 2d doubles (reals). */
CXR_API cxr_status cxr_curve_point(const cxr_curve* c, double re, double im, double* point_re_im);
CXR_API cxr_status cxr_curve_embed(const cxr_curve* c, double re, double im, double* embed);
CXR_API cxr_status cxr_curve_torsion(const cxr_curve* c, double re, double im, double* tors_re,
                                     double* tors_im, double* weight);
/* h_re_im: d-1 offset pairs (h_1 = 0 implicit). */
CXR_API cxr_status cxr_jacobian_direct(const cxr_curve* c, double z_re, double z_im,
                                       const double* h_re_im, double* out_re, double* out_im);
CXR_API cxr_status cxr_jacobian_closed_form(const cxr_curve* c, double z_re, double z_im,
                                            const double* h_re_im, double* out_re,
                                            double* out_im);
CXR_API cxr_status cxr_real_jacobian(const cxr_curve* c, double z_re, double z_im,
                                     const double* h_re_im, double* out);
CXR_API cxr_status cxr_jacobian_integral_d3(const cxr_poly* phi, double u_re, double u_im,
                                            double v_re, double v_im, double w_re, double w_im,
                                            double* out_re, double* out_im);
CXR_API void cxr_curve_free(cxr_curve* c);

/* ---- decomposition certificates ---- */

/* params_json: optional JSON object with the decomposition parameters
 * (b0, sector_eps, kmax, ...); NULL for defaults. */
CXR_API cxr_status cxr_decompose(const cxr_curve* c, const char* params_json,
                                 unsigned long long seed, cxr_certificate** out);
CXR_API cxr_status cxr_certificate_cell_count(const cxr_certificate* cert, size_t* out);
CXR_API cxr_status cxr_certificate_coverage(const cxr_certificate* cert, double* out);
/* Caller frees with cxr_string_free. */
CXR_API cxr_status cxr_certificate_json(const cxr_certificate* cert, char** out);
CXR_API void cxr_certificate_free(cxr_certificate* cert);

/* ---- configured runs (the CLI surface) ---- */

/* config_json: {"command": ..., "seed": ..., "curve": {...}, "params": {...}} */
CXR_API cxr_status cxr_run(const char* config_json, cxr_run_result** out);
CXR_API cxr_status cxr_run_summary_json(const cxr_run_result* r, char** out);
CXR_API cxr_status cxr_run_violations_found(const cxr_run_result* r, int* out);
CXR_API cxr_status cxr_run_file_count(const cxr_run_result* r, size_t* out);
CXR_API cxr_status cxr_run_file_name(const cxr_run_result* r, size_t index, char** out);
CXR_API cxr_status cxr_run_file_data(const cxr_run_result* r, size_t index, char** out);
CXR_API void cxr_run_result_free(cxr_run_result* r);

#ifdef __cplusplus
}
#endif

#endif /* CXRESTRICT_H */
