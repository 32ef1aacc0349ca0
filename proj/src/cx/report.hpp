#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cxr {

using Json = nlohmann::ordered_json;

/// One sampled inequality domain (a sector or a certificate cell).
struct DomainRow {
    std::string domain_id;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t degenerate = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool skipped = false;
};

/// Sampling verdict for one inequality; reproducible from (seed, params).
struct VerificationReport {
    std::string inequality_id;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t degenerate = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double empirical_constant = 0.0;  // = min_ratio over valid samples
    double floor = 1e-12;
    Json params;
    std::vector<DomainRow> rows;

    bool passed() const { return violations == 0; }
    Json to_json() const;
    std::string to_csv() const;
};

/// Fixed-format float printing shared by every CSV writer so that equal
/// doubles always serialize to equal bytes.
std::string format_double(double v);

std::string csv_escape(const std::string& s);

}  // namespace cxr
