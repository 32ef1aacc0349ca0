#include "cxrestrict.h"

#include <cstring>
#include <new>
#include <string>

#include "cx/decomposition.hpp"
#include "cx/determinants.hpp"
#include "cx/json_io.hpp"
#include "cx/runner.hpp"

namespace {

thread_local std::string g_last_error;

cxr_status fail(cxr_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
cxr_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const cxr::ParseError& e) {
        return fail(CXR_ERR_PARSE, e.what());
    } catch (const cxr::NoConvergence& e) {
        return fail(CXR_ERR_NO_CONVERGENCE, e.what());
    } catch (const cxr::BudgetExceeded& e) {
        return fail(CXR_ERR_BUDGET_EXCEEDED, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CXR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(CXR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(CXR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CXR_ERR_INTERNAL, "unknown error");
    }
}

std::vector<cxr::C> pairs_to_complex(const double* re_im, size_t n) {
    std::vector<cxr::C> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = cxr::C(re_im[2 * i], re_im[2 * i + 1]);
    return out;
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct cxr_poly {
    cxr::Poly p;
};
struct cxr_curve {
    cxr::OffspringCurve o;
};
struct cxr_certificate {
    cxr::Certificate cert;
};
struct cxr_run_result {
    cxr::RunOutcome outcome;
};

extern "C" {

const char* cxr_version(void) { return "0.1.0"; }

const char* cxr_last_error(void) { return g_last_error.c_str(); }

void cxr_string_free(char* s) { delete[] s; }

cxr_status cxr_poly_create(const double* coeffs_re_im, size_t n_coeffs, cxr_poly** out) {
    return guarded([&]() {
        if (!coeffs_re_im || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        auto coeffs = pairs_to_complex(coeffs_re_im, n_coeffs);
        *out = new cxr_poly{cxr::Poly::from_coeffs(std::move(coeffs))};
        return CXR_OK;
    });
}

cxr_status cxr_poly_from_roots(const double* roots_re_im, size_t n_roots, double lead_re,
                               double lead_im, cxr_poly** out) {
    return guarded([&]() {
        if (!out || (!roots_re_im && n_roots > 0)) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto roots = pairs_to_complex(roots_re_im, n_roots);
        *out = new cxr_poly{cxr::Poly::from_roots(std::move(roots), cxr::C(lead_re, lead_im))};
        return CXR_OK;
    });
}

cxr_status cxr_poly_parse_json(const char* json_text, cxr_poly** out) {
    return guarded([&]() {
        if (!json_text || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::Json j = cxr::Json::parse(json_text, nullptr, false);
        if (j.is_discarded()) return fail(CXR_ERR_PARSE, "invalid JSON text");
        *out = new cxr_poly{cxr::poly_from_json(j)};
        return CXR_OK;
    });
}

cxr_status cxr_poly_degree(const cxr_poly* p, int* out) {
    if (!p || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = p->p.degree();
    return CXR_OK;
}

cxr_status cxr_poly_eval(const cxr_poly* p, double re, double im, double* out_re,
                         double* out_im) {
    return guarded([&]() {
        if (!p || !out_re || !out_im) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::C v = p->p.eval(cxr::C(re, im));
        *out_re = v.real();
        *out_im = v.imag();
        return CXR_OK;
    });
}

cxr_status cxr_poly_derivative(const cxr_poly* p, int order, cxr_poly** out) {
    return guarded([&]() {
        if (!p || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        *out = new cxr_poly{p->p.derivative(order)};
        return CXR_OK;
    });
}

cxr_status cxr_poly_find_roots(const cxr_poly* p, double* roots_re_im, double* residual) {
    return guarded([&]() {
        if (!p || !roots_re_im) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        auto rr = cxr::find_roots(p->p);
        for (size_t i = 0; i < rr.roots.size(); ++i) {
            roots_re_im[2 * i] = rr.roots[i].real();
            roots_re_im[2 * i + 1] = rr.roots[i].imag();
        }
        if (residual) *residual = rr.residual;
        return CXR_OK;
    });
}

void cxr_poly_free(cxr_poly* p) { delete p; }

cxr_status cxr_complete_homogeneous(int N, const double* pts_re_im, size_t n_pts, double* out_re,
                                    double* out_im) {
    return guarded([&]() {
        if (!pts_re_im || !out_re || !out_im) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto pts = pairs_to_complex(pts_re_im, n_pts);
        cxr::C v = cxr::complete_homogeneous(N, pts);
        *out_re = v.real();
        *out_im = v.imag();
        return CXR_OK;
    });
}

cxr_status cxr_vandermonde(const double* pts_re_im, size_t n_pts, double* out_re,
                           double* out_im) {
    return guarded([&]() {
        if (!pts_re_im || !out_re || !out_im) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto pts = pairs_to_complex(pts_re_im, n_pts);
        cxr::C v = cxr::vandermonde(pts);
        *out_re = v.real();
        *out_im = v.imag();
        return CXR_OK;
    });
}

cxr_status cxr_curve_create(int d, const cxr_poly* phi, const double* shifts_re_im,
                            size_t n_shifts, cxr_curve** out) {
    return guarded([&]() {
        if (!phi || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        std::vector<cxr::C> shifts{cxr::C(0.0, 0.0)};
        if (shifts_re_im && n_shifts > 0) shifts = pairs_to_complex(shifts_re_im, n_shifts);
        *out = new cxr_curve{cxr::OffspringCurve(cxr::SimpleCurve(d, phi->p), std::move(shifts))};
        return CXR_OK;
    });
}

cxr_status cxr_curve_parse_json(const char* json_text, cxr_curve** out) {
    return guarded([&]() {
        if (!json_text || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::Json j = cxr::Json::parse(json_text, nullptr, false);
        if (j.is_discarded()) return fail(CXR_ERR_PARSE, "invalid JSON text");
        *out = new cxr_curve{cxr::curve_from_json(j)};
        return CXR_OK;
    });
}

cxr_status cxr_curve_dimension(const cxr_curve* c, int* out) {
    if (!c || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = c->o.base.d;
    return CXR_OK;
}

cxr_status cxr_curve_point(const cxr_curve* c, double re, double im, double* point_re_im) {
    return guarded([&]() {
        if (!c || !point_re_im) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        auto v = cxr::offspring_eval(c->o, cxr::C(re, im));
        for (size_t k = 0; k < v.size(); ++k) {
            point_re_im[2 * k] = v[k].real();
            point_re_im[2 * k + 1] = v[k].imag();
        }
        return CXR_OK;
    });
}

cxr_status cxr_curve_embed(const cxr_curve* c, double re, double im, double* embed) {
    return guarded([&]() {
        if (!c || !embed) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        if (c->o.m() != 1) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "real embedding is defined for plain curves");
        }
        auto v = cxr::real_embed(c->o.base, cxr::C(re, im));
        for (size_t k = 0; k < v.size(); ++k) embed[k] = v[k];
        return CXR_OK;
    });
}

cxr_status cxr_curve_torsion(const cxr_curve* c, double re, double im, double* tors_re,
                             double* tors_im, double* weight) {
    return guarded([&]() {
        if (!c || !tors_re || !tors_im || !weight) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        if (c->o.m() == 1) {
            auto w = cxr::torsion(c->o.base, cxr::C(re, im));
            *tors_re = w.torsion.real();
            *tors_im = w.torsion.imag();
            *weight = w.weight;
        } else {
            cxr::C acc = cxr::offspring_phi_d(c->o, cxr::C(re, im));
            cxr::C tau = cxr::torsion_constant(c->o.base.d) * acc;
            *tors_re = tau.real();
            *tors_im = tau.imag();
            double t = std::abs(tau);
            *weight = (t == 0.0) ? 0.0 : std::pow(t, cxr::weight_exponent(c->o.base.d));
        }
        return CXR_OK;
    });
}

cxr_status cxr_jacobian_direct(const cxr_curve* c, double z_re, double z_im,
                               const double* h_re_im, double* out_re, double* out_im) {
    return guarded([&]() {
        if (!c || !h_re_im || !out_re || !out_im) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto h = pairs_to_complex(h_re_im, c->o.base.d - 1);
        cxr::C J = cxr::jacobian_direct(c->o, cxr::C(z_re, z_im), h);
        *out_re = J.real();
        *out_im = J.imag();
        return CXR_OK;
    });
}

cxr_status cxr_jacobian_closed_form(const cxr_curve* c, double z_re, double z_im,
                                    const double* h_re_im, double* out_re, double* out_im) {
    return guarded([&]() {
        if (!c || !h_re_im || !out_re || !out_im) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto h = pairs_to_complex(h_re_im, c->o.base.d - 1);
        cxr::C J = cxr::jacobian_closed_form(c->o, cxr::C(z_re, z_im), h);
        *out_re = J.real();
        *out_im = J.imag();
        return CXR_OK;
    });
}

cxr_status cxr_real_jacobian(const cxr_curve* c, double z_re, double z_im, const double* h_re_im,
                             double* out) {
    return guarded([&]() {
        if (!c || !h_re_im || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        auto h = pairs_to_complex(h_re_im, c->o.base.d - 1);
        *out = cxr::real_jacobian(c->o, cxr::C(z_re, z_im), h);
        return CXR_OK;
    });
}

cxr_status cxr_jacobian_integral_d3(const cxr_poly* phi, double u_re, double u_im, double v_re,
                                    double v_im, double w_re, double w_im, double* out_re,
                                    double* out_im) {
    return guarded([&]() {
        if (!phi || !out_re || !out_im) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::C J = cxr::jacobian_integral_d3(phi->p, cxr::C(u_re, u_im), cxr::C(v_re, v_im),
                                             cxr::C(w_re, w_im));
        *out_re = J.real();
        *out_im = J.imag();
        return CXR_OK;
    });
}

void cxr_curve_free(cxr_curve* c) { delete c; }

cxr_status cxr_decompose(const cxr_curve* c, const char* params_json, unsigned long long seed,
                         cxr_certificate** out) {
    return guarded([&]() {
        if (!c || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::DecompParams dp;
        dp.seed = seed;
        cxr::C center(0.0, 0.0);
        double radius = 2.0;
        if (params_json) {
            cxr::Json p = cxr::Json::parse(params_json, nullptr, false);
            if (p.is_discarded()) return fail(CXR_ERR_PARSE, "invalid JSON text");
            if (p.contains("b0")) dp.b0 = p.at("b0").get<double>();
            if (p.contains("sector_eps")) dp.sector_eps = p.at("sector_eps").get<double>();
            if (p.contains("kmax")) dp.kmax = p.at("kmax").get<double>();
            if (p.contains("coverage_samples")) {
                dp.coverage_samples = p.at("coverage_samples").get<std::size_t>();
            }
            if (p.contains("check_samples")) dp.check_samples = p.at("check_samples").get<int>();
            if (p.contains("disk_radius")) radius = p.at("disk_radius").get<double>();
            if (p.contains("disk_center")) {
                center = cxr::complex_from_json(p.at("disk_center"), "disk_center");
            }
        }
        *out = new cxr_certificate{
            cxr::build_certificate(c->o.base.phi, c->o.base.d, center, radius, dp)};
        return CXR_OK;
    });
}

cxr_status cxr_certificate_cell_count(const cxr_certificate* cert, size_t* out) {
    if (!cert || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = cert->cert.cells.size();
    return CXR_OK;
}

cxr_status cxr_certificate_coverage(const cxr_certificate* cert, double* out) {
    if (!cert || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = cert->cert.coverage_fraction;
    return CXR_OK;
}

cxr_status cxr_certificate_json(const cxr_certificate* cert, char** out) {
    return guarded([&]() {
        if (!cert || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        *out = dup_string(cert->cert.to_json().dump(2));
        if (!*out) return fail(CXR_ERR_INTERNAL, "allocation failed");
        return CXR_OK;
    });
}

void cxr_certificate_free(cxr_certificate* cert) { delete cert; }

cxr_status cxr_run(const char* config_json, cxr_run_result** out) {
    return guarded([&]() {
        if (!config_json || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        cxr::Json cfg = cxr::Json::parse(config_json, nullptr, false);
        if (cfg.is_discarded()) return fail(CXR_ERR_PARSE, "invalid JSON text");
        *out = new cxr_run_result{cxr::run_config(cfg)};
        return CXR_OK;
    });
}

cxr_status cxr_run_summary_json(const cxr_run_result* r, char** out) {
    return guarded([&]() {
        if (!r || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        *out = dup_string(r->outcome.summary.dump(2));
        if (!*out) return fail(CXR_ERR_INTERNAL, "allocation failed");
        return CXR_OK;
    });
}

cxr_status cxr_run_violations_found(const cxr_run_result* r, int* out) {
    if (!r || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = r->outcome.violations_found ? 1 : 0;
    return CXR_OK;
}

cxr_status cxr_run_file_count(const cxr_run_result* r, size_t* out) {
    if (!r || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
    *out = r->outcome.files.size();
    return CXR_OK;
}

cxr_status cxr_run_file_name(const cxr_run_result* r, size_t index, char** out) {
    return guarded([&]() {
        if (!r || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        if (index >= r->outcome.files.size()) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "file index out of range");
        }
        *out = dup_string(r->outcome.files[index].first);
        if (!*out) return fail(CXR_ERR_INTERNAL, "allocation failed");
        return CXR_OK;
    });
}

cxr_status cxr_run_file_data(const cxr_run_result* r, size_t index, char** out) {
    return guarded([&]() {
        if (!r || !out) return fail(CXR_ERR_INVALID_ARGUMENT, "null argument");
        if (index >= r->outcome.files.size()) {
            return fail(CXR_ERR_INVALID_ARGUMENT, "file index out of range");
        }
        *out = dup_string(r->outcome.files[index].second);
        if (!*out) return fail(CXR_ERR_INTERNAL, "allocation failed");
        return CXR_OK;
    });
}

void cxr_run_result_free(cxr_run_result* r) { delete r; }

}  // extern "C"
