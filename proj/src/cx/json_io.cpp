#include "cx/json_io.hpp"

namespace cxr {

C complex_from_json(const Json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("key '" + key + "' must be a [re, im] pair");
    }
    return C(j[0].get<double>(), j[1].get<double>());
}

namespace {

std::vector<C> complex_list(const Json& j, const std::string& key) {
    if (!j.is_array()) throw ParseError("key '" + key + "' must be an array of [re, im] pairs");
    std::vector<C> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(complex_from_json(e, key));
    return out;
}

}  // namespace

Poly poly_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("polynomial must be an object");
    bool has_coeffs = j.contains("coeffs");
    bool has_roots = j.contains("roots");
    if (!has_coeffs && !has_roots) {
        throw ParseError("polynomial needs key 'coeffs' or key 'roots'");
    }
    if (has_roots) {
        if (!j.contains("leading")) {
            throw ParseError("polynomial with key 'roots' needs key 'leading'");
        }
        auto roots = complex_list(j.at("roots"), "roots");
        C lead = complex_from_json(j.at("leading"), "leading");
        Poly p = Poly::from_roots(std::move(roots), lead);
        if (has_coeffs) {
            auto coeffs = complex_list(j.at("coeffs"), "coeffs");
            Poly q = Poly::from_coeffs(coeffs);
            if (q.degree() != p.degree()) {
                throw ParseError("keys 'coeffs' and 'roots' disagree on the degree");
            }
            for (int i = 0; i <= p.degree(); ++i) {
                if (rel_err(p.coeffs()[i], q.coeffs()[i]) > 1e-9 &&
                    std::abs(p.coeffs()[i] - q.coeffs()[i]) > 1e-9 * p.max_coeff_abs()) {
                    throw ParseError(
                        "key 'coeffs' does not match the expanded factored form (1e-9)");
                }
            }
        }
        return p;
    }
    return Poly::from_coeffs(complex_list(j.at("coeffs"), "coeffs"));
}

Json poly_to_json(const Poly& p) {
    Json j;
    Json coeffs = Json::array();
    for (const C& c : p.coeffs()) coeffs.push_back(Json::array({c.real(), c.imag()}));
    j["coeffs"] = std::move(coeffs);
    if (p.has_roots()) {
        Json roots = Json::array();
        for (const C& r : p.roots()) roots.push_back(Json::array({r.real(), r.imag()}));
        j["roots"] = std::move(roots);
        j["leading"] = Json::array({p.root_leading().real(), p.root_leading().imag()});
    }
    return j;
}

OffspringCurve curve_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("curve must be an object");
    if (!j.contains("d")) throw ParseError("curve needs key 'd'");
    if (!j.at("d").is_number_integer()) throw ParseError("key 'd' must be an integer");
    int d = j.at("d").get<int>();
    if (d < 2) throw ParseError("key 'd' must be >= 2");
    if (!j.contains("phi")) throw ParseError("curve needs key 'phi'");
    Poly phi;
    try {
        phi = poly_from_json(j.at("phi"));
    } catch (const ParseError& e) {
        throw ParseError(std::string("key 'phi': ") + e.what());
    }
    SimpleCurve base(d, std::move(phi));
    double bound = 1.0;
    if (j.contains("shift_bound")) {
        if (!j.at("shift_bound").is_number()) throw ParseError("key 'shift_bound' must be a number");
        bound = j.at("shift_bound").get<double>();
    }
    std::vector<C> shifts{C(0.0, 0.0)};
    if (j.contains("shifts")) {
        shifts = complex_list(j.at("shifts"), "shifts");
        if (shifts.empty()) throw ParseError("key 'shifts' must be nonempty");
        if (shifts[0] != C(0.0, 0.0)) throw ParseError("key 'shifts' must start with [0, 0]");
    }
    try {
        return OffspringCurve(std::move(base), std::move(shifts), bound);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("key 'shifts': ") + e.what());
    }
}

Json curve_to_json(const OffspringCurve& o) {
    Json j;
    j["d"] = o.base.d;
    j["phi"] = poly_to_json(o.base.phi);
    if (o.m() > 1) {
        Json shifts = Json::array();
        for (const C& b : o.shifts) shifts.push_back(Json::array({b.real(), b.imag()}));
        j["shifts"] = std::move(shifts);
        j["shift_bound"] = o.shift_bound;
    }
    return j;
}

}  // namespace cxr
