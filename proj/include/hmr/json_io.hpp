#pragma once

#include <string>

#include <json.hpp>

#include "hmr/adjoint.hpp"
#include "hmr/config.hpp"
#include "hmr/rational_map.hpp"
#include "hmr/regularity.hpp"
#include "hmr/verify.hpp"

namespace hmr {

using json = nlohmann::json;

// Complex numbers serialize as [re, im]; sphere points as [re, im] or "inf".
json to_json(cx z);
json to_json(const ExtPoint& p);
json to_json(const ComplexPoly& p);        // [[re,im], ...], ascending
json to_json(const RationalMap& m);        // {"num": ..., "den": ...}
json to_json(const DiscCertificate& c);
json to_json(const CriticalData& cd);
json to_json(const BoundaryContacts& bc);
json to_json(const RegularityReport& r);   // class as snake_case string
json to_json(const BranchSummand& s);
json to_json(const DecompositionReport& r);
json to_json(const AdjointEvaluation& e);
json to_json(const MonodromyResult& m);
json to_json(const SuiteResult& s);
json to_json(const VerifySummary& v);

// snake_case names used in JSON output.
std::string json_class_name(RegularityClass c);
std::string json_location_name(PointLocation l);

cx cx_from_json(const json& j);            // strict: two-element number array
ComplexPoly poly_from_json(const json& j);
// {"num": [[re,im],...], "den": [[re,im],...]} with optional "name".
RationalMap map_from_json(const json& j, const Tolerances& tol = default_tolerances(),
                          std::string* name_out = nullptr);

// A map specification: either a builtin name ("example-4.1", ...) or an
// inline JSON document.  Throws MapParseError with a diagnostic.
RationalMap parse_map_spec(const std::string& text,
                           const Tolerances& tol = default_tolerances(),
                           std::string* name_out = nullptr);

}  // namespace hmr
