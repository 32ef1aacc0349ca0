// Exercises the shared-library surface the way an external consumer would:
// opaque handles, status codes, thread-local error strings.
#include <cmath>
#include <cstring>
#include <string>

#include "cxrestrict.h"
#include "doctest.h"

namespace {

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { cxr_string_free(ptr); }
};

}  // namespace

TEST_CASE("polynomial lifecycle") {
    // z^2 - (3+4i)
    double coeffs[] = {-3.0, -4.0, 0.0, 0.0, 1.0, 0.0};
    cxr_poly* p = nullptr;
    REQUIRE(cxr_poly_create(coeffs, 3, &p) == CXR_OK);
    int deg = 0;
    CHECK(cxr_poly_degree(p, &deg) == CXR_OK);
    CHECK(deg == 2);

    double re = 0, im = 0;
    CHECK(cxr_poly_eval(p, 2.0, 1.0, &re, &im) == CXR_OK);
    CHECK(std::fabs(re) < 1e-12);  // 2+i is a root
    CHECK(std::fabs(im) < 1e-12);

    double roots[4] = {0, 0, 0, 0};
    double residual = 1.0;
    CHECK(cxr_poly_find_roots(p, roots, &residual) == CXR_OK);
    CHECK(residual < 1e-9);
    for (int i = 0; i < 2; ++i) {
        double rr = roots[2 * i], ri = roots[2 * i + 1];
        double d1 = std::hypot(rr - 2.0, ri - 1.0);
        double d2 = std::hypot(rr + 2.0, ri + 1.0);
        CHECK(std::min(d1, d2) < 1e-9);
    }

    cxr_poly* dp = nullptr;
    CHECK(cxr_poly_derivative(p, 1, &dp) == CXR_OK);
    CHECK(cxr_poly_degree(dp, &deg) == CXR_OK);
    CHECK(deg == 1);
    cxr_poly_free(dp);
    cxr_poly_free(p);
}

TEST_CASE("symmetric polynomial and vandermonde helpers") {
    double ones[] = {1, 0, 1, 0, 1, 0};
    double re = 0, im = 0;
    CHECK(cxr_complete_homogeneous(2, ones, 3, &re, &im) == CXR_OK);
    CHECK(re == doctest::Approx(6.0));
    CHECK(im == doctest::Approx(0.0));

    double pts[] = {0, 0, 1, 0, 2, 0};
    CHECK(cxr_vandermonde(pts, 3, &re, &im) == CXR_OK);
    CHECK(re == doctest::Approx(2.0));
}

TEST_CASE("curve handles and jacobians") {
    double mono4[] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 0};  // z^4
    cxr_poly* phi = nullptr;
    REQUIRE(cxr_poly_create(mono4, 5, &phi) == CXR_OK);
    cxr_curve* c = nullptr;
    REQUIRE(cxr_curve_create(3, phi, nullptr, 0, &c) == CXR_OK);

    double tr = 0, ti = 0, w = 0;
    CHECK(cxr_curve_torsion(c, 1.0, 0.0, &tr, &ti, &w) == CXR_OK);
    CHECK(tr == doctest::Approx(48.0));  // c_3 phi''' = 2 * 24 z at z = 1
    CHECK(w == doctest::Approx(std::pow(48.0, 1.0 / 3.0)));

    double point[6];
    CHECK(cxr_curve_point(c, 2.0, 0.0, point) == CXR_OK);
    CHECK(point[0] == doctest::Approx(2.0));
    CHECK(point[2] == doctest::Approx(4.0));
    CHECK(point[4] == doctest::Approx(16.0));

    double h[] = {0.3, 0.0, 0.0, 0.4};
    double jre = 0, jim = 0, jre2 = 0, jim2 = 0, jr = 0;
    CHECK(cxr_jacobian_direct(c, 0.1, 0.2, h, &jre, &jim) == CXR_OK);
    CHECK(cxr_jacobian_closed_form(c, 0.1, 0.2, h, &jre2, &jim2) == CXR_OK);
    CHECK(jre == doctest::Approx(jre2).epsilon(1e-9));
    CHECK(jim == doctest::Approx(jim2).epsilon(1e-9));
    CHECK(cxr_real_jacobian(c, 0.1, 0.2, h, &jr) == CXR_OK);
    CHECK(jr == doctest::Approx(jre * jre + jim * jim));

    double ire = 0, iim = 0;
    CHECK(cxr_jacobian_integral_d3(phi, 0.1, 0.2, 0.4, 0.2, 0.1, 0.6, &ire, &iim) == CXR_OK);
    double dre = 0, dim = 0;
    double h2[] = {0.3, 0.0, 0.0, 0.4};
    CHECK(cxr_jacobian_direct(c, 0.1, 0.2, h2, &dre, &dim) == CXR_OK);

    cxr_curve_free(c);
    cxr_poly_free(phi);
}

TEST_CASE("json parsing and error reporting") {
    cxr_curve* c = nullptr;
    CHECK(cxr_curve_parse_json("{\"d\": 3, \"phi\": {\"coeffs\": [[0,0],[1,0]]}}", &c) ==
          CXR_OK);
    cxr_curve_free(c);

    c = nullptr;
    cxr_status st = cxr_curve_parse_json("{\"d\": 3}", &c);
    CHECK(st == CXR_ERR_PARSE);
    CHECK(std::string(cxr_last_error()).find("'phi'") != std::string::npos);

    st = cxr_curve_parse_json("not json at all", &c);
    CHECK(st == CXR_ERR_PARSE);

    cxr_poly* p = nullptr;
    CHECK(cxr_poly_create(nullptr, 2, &p) == CXR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("decomposition through the C surface") {
    cxr_curve* c = nullptr;
    // phi with phi''' = 60 z^2 (z^5): single root, sector-only certificate
    REQUIRE(cxr_curve_parse_json(
                "{\"d\": 3, \"phi\": {\"coeffs\": [[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}}",
                &c) == CXR_OK);
    cxr_certificate* cert = nullptr;
    REQUIRE(cxr_decompose(c, "{\"coverage_samples\": 5000, \"check_samples\": 32}", 5, &cert) ==
            CXR_OK);
    size_t cells = 0;
    CHECK(cxr_certificate_cell_count(cert, &cells) == CXR_OK);
    CHECK(cells > 100);
    double coverage = 0;
    CHECK(cxr_certificate_coverage(cert, &coverage) == CXR_OK);
    CHECK(coverage > 0.999);
    OwnedString json;
    CHECK(cxr_certificate_json(cert, &json.ptr) == CXR_OK);
    CHECK(std::string(json.ptr).find("\"cells\"") != std::string::npos);
    cxr_certificate_free(cert);
    cxr_curve_free(c);
}

TEST_CASE("configured runs") {
    const char* cfg =
        "{\"command\": \"verify-sublevel\", \"seed\": 9,"
        " \"params\": {\"d\": 2, \"samples\": 200000, \"u_min\": 0.05, \"u_max\": 1.0}}";
    cxr_run_result* r = nullptr;
    REQUIRE(cxr_run(cfg, &r) == CXR_OK);
    int violations = 1;
    CHECK(cxr_run_violations_found(r, &violations) == CXR_OK);
    CHECK(violations == 0);
    size_t files = 0;
    CHECK(cxr_run_file_count(r, &files) == CXR_OK);
    REQUIRE(files == 1);
    OwnedString name, data, summary;
    CHECK(cxr_run_file_name(r, 0, &name.ptr) == CXR_OK);
    CHECK(std::string(name.ptr) == "sublevel.csv");
    CHECK(cxr_run_file_data(r, 0, &data.ptr) == CXR_OK);
    CHECK(std::string(data.ptr).find("u,hits,measure,used") == 0);
    CHECK(cxr_run_summary_json(r, &summary.ptr) == CXR_OK);
    CHECK(std::string(summary.ptr).find("\"slope\"") != std::string::npos);
    cxr_run_result_free(r);

    cxr_run_result* bad = nullptr;
    CHECK(cxr_run("{\"command\": \"no-such-op\"}", &bad) == CXR_ERR_PARSE);
    CHECK(std::string(cxr_last_error()).find("no-such-op") != std::string::npos);
}
