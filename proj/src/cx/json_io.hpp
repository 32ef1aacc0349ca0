#pragma once

#include "cx/curve.hpp"
#include "cx/report.hpp"

namespace cxr {

/// Schemas (documented in docs/formats.md):
///   polynomial: {"coeffs": [[re, im], ...]}                    powers ascending
///            or {"roots": [[re, im], ...], "leading": [re, im]}
///   curve:      {"d": int, "phi": <polynomial>}
///               + optional {"shifts": [[re, im], ...]}  (offspring, shifts[0] = 0)
///               + optional {"shift_bound": real}
/// Parse errors carry the offending key.
Poly poly_from_json(const Json& j);
Json poly_to_json(const Poly& p);

OffspringCurve curve_from_json(const Json& j);
Json curve_to_json(const OffspringCurve& o);

C complex_from_json(const Json& j, const std::string& key);

}  // namespace cxr
