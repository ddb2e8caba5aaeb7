#include "hmr/json_io.hpp"

#include <algorithm>
#include <cctype>

#include "hmr/builtins.hpp"
#include "hmr/errors.hpp"

namespace hmr {

json to_json(cx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ExtPoint& p) {
  if (p.is_infinity()) return json("inf");
  return to_json(p.value());
}

json to_json(const ComplexPoly& p) {
  json out = json::array();
  for (const cx& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

json to_json(const RationalMap& m) {
  return json{{"num", to_json(m.num())}, {"den", to_json(m.den())}};
}

json to_json(const DiscCertificate& c) {
  return json{{"is_self_map", c.is_self_map},
              {"max_boundary_modulus", c.max_boundary_modulus},
              {"grid", c.grid},
              {"diagnostic", c.diagnostic}};
}

json to_json(const CriticalData& cd) {
  json points = json::array();
  for (const ExtPoint& p : cd.critical_points) points.push_back(to_json(p));
  json values = json::array();
  for (const auto& v : cd.critical_values) {
    json witnesses = json::array();
    for (const ExtPoint& w : v.witnesses) witnesses.push_back(to_json(w));
    values.push_back(json{{"value", to_json(v.value)}, {"witnesses", witnesses}});
  }
  return json{{"critical_points", points}, {"critical_values", values}};
}

json to_json(const BoundaryContacts& bc) {
  json points = json::array();
  for (const cx& p : bc.points) points.push_back(to_json(p));
  return json{{"all_of_boundary", bc.all_of_boundary}, {"points", points}};
}

std::string json_class_name(RegularityClass c) {
  switch (c) {
    case RegularityClass::StronglyOuterRegular: return "strongly_outer_regular";
    case RegularityClass::OuterRegular: return "outer_regular";
    case RegularityClass::NotOuterRegular: return "not_outer_regular";
  }
  return "?";
}

std::string json_location_name(PointLocation l) {
  switch (l) {
    case PointLocation::InDisc: return "in_disc";
    case PointLocation::OnCircle: return "on_circle";
    case PointLocation::OutsideDisc: return "outside_disc";
    case PointLocation::AtInfinity: return "at_infinity";
  }
  return "?";
}

namespace {

json points_array(const std::vector<ExtPoint>& pts) {
  json out = json::array();
  for (const ExtPoint& p : pts) out.push_back(to_json(p));
  return out;
}

}  // namespace

json to_json(const RegularityReport& r) {
  return json{{"class", json_class_name(r.klass)},
              {"critical_values_inside", points_array(r.critical_values_inside)},
              {"critical_values_outside_or_boundary",
               points_array(r.critical_values_outside_or_boundary)},
              {"indeterminate", points_array(r.indeterminate)},
              {"phi_at_infinity", to_json(r.phi_at_infinity)},
              {"phi_at_infinity_location", json_location_name(r.phi_at_infinity_location)},
              {"is_blaschke", r.is_blaschke},
              {"boundary_contacts", to_json(r.contacts)},
              {"critical_data", to_json(r.critical)}};
}

json to_json(const BranchSummand& s) {
  return json{{"branch", s.branch},
              {"sup_sigma", s.sup_sigma},
              {"sup_weight", s.sup_weight},
              {"weight_bounded", s.weight_bounded},
              {"composition_compact", s.composition_compact},
              {"owns_boundary_contact", s.owns_boundary_contact}};
}

json to_json(const DecompositionReport& r) {
  json summands = json::array();
  for (const BranchSummand& s : r.summands) summands.push_back(to_json(s));
  json unique = nullptr;
  if (r.unique_noncompact_branch) unique = *r.unique_noncompact_branch;
  return json{{"form", to_string(r.form)},
              {"class", json_class_name(r.klass)},
              {"lambda_kernel", r.lambda_kernel},
              {"lambda_bounded", r.lambda_bounded},
              {"legitimate", r.legitimate},
              {"branches_globally_defined", r.branches_globally_defined},
              {"ring_monodromy", r.ring_monodromy},
              {"summands", summands},
              {"atlas_points", r.atlas_points},
              {"atlas_radius", r.atlas_radius},
              {"min_branch_separation", r.min_branch_separation},
              {"unique_noncompact_branch", unique},
              {"conclusion", r.conclusion},
              {"diagnostics", r.diagnostics}};
}

json to_json(const AdjointEvaluation& e) {
  json terms = json::array();
  for (const cx& t : e.branch_terms) terms.push_back(to_json(t));
  json points = json::array();
  for (const cx& p : e.branch_points) points.push_back(to_json(p));
  return json{{"z", to_json(e.z)},
              {"value", to_json(e.value)},
              {"form_used", to_string(e.form_used)},
              {"lambda_term", to_json(e.lambda_term)},
              {"branch_terms", terms},
              {"branch_points", points},
              {"near_pole", e.near_pole},
              {"near_critical", e.near_critical},
              {"regularity_margin", e.regularity_margin}};
}

json to_json(const MonodromyResult& m) {
  return json{{"permutation", m.permutation},
              {"cycles", cycle_notation(m.permutation)},
              {"return_error", m.return_error},
              {"base", to_json(m.base)}};
}

json to_json(const SuiteResult& s) {
  return json{{"name", s.name},   {"cases", s.cases}, {"max_err", s.max_err},
              {"tol", s.tol},     {"pass", s.pass},   {"note", s.note}};
}

json to_json(const VerifySummary& v) {
  json suites = json::array();
  for (const SuiteResult& s : v.suites) suites.push_back(to_json(s));
  return json{{"map_name", v.map_name},
              {"seed", v.seed},
              {"trials", v.trials},
              {"pass", v.pass},
              {"suites", suites}};
}

cx cx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw MapParseError("expected a complex number as [re, im], got " + j.dump());
  return cx{j[0].get<double>(), j[1].get<double>()};
}

ComplexPoly poly_from_json(const json& j) {
  if (!j.is_array())
    throw MapParseError("expected a coefficient array [[re,im], ...], got " + j.dump());
  std::vector<cx> coeffs;
  for (const json& c : j) coeffs.push_back(cx_from_json(c));
  return ComplexPoly(std::move(coeffs));
}

RationalMap map_from_json(const json& j, const Tolerances& tol, std::string* name_out) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw MapParseError("map JSON must be an object with \"num\" and \"den\" arrays");
  if (name_out) *name_out = j.value("name", std::string{});
  ComplexPoly num = poly_from_json(j["num"]);
  ComplexPoly den = poly_from_json(j["den"]);
  try {
    return RationalMap(std::move(num), std::move(den), tol);
  } catch (const std::invalid_argument& e) {
    throw MapParseError(std::string("invalid map: ") + e.what());
  }
}

RationalMap parse_map_spec(const std::string& text, const Tolerances& tol,
                           std::string* name_out) {
  const auto first = std::find_if_not(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
  if (first != text.end() && *first == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw MapParseError(std::string("map JSON does not parse: ") + e.what());
    }
    return map_from_json(j, tol, name_out);
  }
  if (name_out) *name_out = text;
  return builtin_map(text, tol);
}

}  // namespace hmr
