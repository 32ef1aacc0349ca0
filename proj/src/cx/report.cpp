#include "cx/report.hpp"

#include <cstdio>

namespace cxr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

Json VerificationReport::to_json() const {
    Json j;
    j["inequality_id"] = inequality_id;
    j["seed"] = seed;
    j["samples"] = samples;
    j["violations"] = violations;
    j["degenerate"] = degenerate;
    j["min_ratio"] = min_ratio;
    j["max_ratio"] = max_ratio;
    j["empirical_constant"] = empirical_constant;
    j["floor"] = floor;
    j["passed"] = passed();
    j["params"] = params;
    return j;
}

std::string VerificationReport::to_csv() const {
    std::string out =
        "inequality_id,domain_id,seed,samples,violations,degenerate,min_ratio,max_ratio,skipped\n";
    for (const auto& r : rows) {
        out += csv_escape(inequality_id);
        out += ',';
        out += csv_escape(r.domain_id);
        out += ',';
        out += std::to_string(seed);
        out += ',';
        out += std::to_string(r.samples);
        out += ',';
        out += std::to_string(r.violations);
        out += ',';
        out += std::to_string(r.degenerate);
        out += ',';
        out += format_double(r.min_ratio);
        out += ',';
        out += format_double(r.max_ratio);
        out += ',';
        out += r.skipped ? "1" : "0";
        out += '\n';
    }
    return out;
}

}  // namespace cxr
