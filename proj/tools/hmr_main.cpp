// hmr: adjoints of rationally induced composition operators on H^2.
//
// Subcommands:
//   analyze    certificate, critical data, classification, decompositions
//   eval       adjoint values on points/grids with an independent oracle column
//   verify     cross-checking suites (three forms, oracle, identities, fibers)
//   monodromy  branch permutation of the exterior map around a loop
//
// Exit codes: 0 ok, 1 verification/evaluation failure, 2 parse error,
// 3 certification failure, 4 continuation path error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmr/adjoint.hpp"
#include "hmr/builtins.hpp"
#include "hmr/errors.hpp"
#include "hmr/hardy.hpp"
#include "hmr/json_io.hpp"
#include "hmr/regularity.hpp"
#include "hmr/verify.hpp"

namespace {

using hmr::cx;
using hmr::json;

struct CommonOpts {
  std::string map_spec;
  std::string in_file;
  std::string out_file;
  std::vector<std::string> tol_overrides;
  bool json_flag = false;  // accepted for symmetry; JSON is the default
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("map", o.map_spec,
                  "builtin name, inline JSON {\"num\":[[re,im],...],\"den\":...}, or '-' for stdin");
  cmd->add_option("--in", o.in_file, "read the map specification from a file");
  cmd->add_option("--out", o.out_file, "write the report to a file instead of stdout");
  cmd->add_option("--tol", o.tol_overrides, "tolerance override key=value (repeatable)");
  cmd->add_flag("--json", o.json_flag, "emit JSON (the default)");
}

std::string load_map_text(const CommonOpts& o) {
  if (!o.in_file.empty()) {
    std::ifstream in(o.in_file);
    if (!in) throw hmr::MapParseError("cannot open --in file '" + o.in_file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (o.map_spec == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  if (o.map_spec.empty())
    throw hmr::MapParseError("no map given: pass a builtin name, inline JSON, '-', or --in FILE");
  return o.map_spec;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw hmr::MapParseError(what + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw hmr::MapParseError(what + ": not an integer: '" + s + "'");
  }
}

cx parse_cx_arg(const std::string& s, const std::string& what) {
  const size_t comma = s.find(',');
  if (comma == std::string::npos) return cx{parse_double(s, what), 0.0};
  return cx{parse_double(s.substr(0, comma), what),
            parse_double(s.substr(comma + 1), what)};
}

hmr::Tolerances build_tolerances(const std::vector<std::string>& overrides) {
  hmr::Tolerances tol = hmr::default_tolerances();
  for (const std::string& kv : overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw hmr::MapParseError("--tol expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    const auto d = [&] { return parse_double(val, "--tol " + key); };
    const auto i = [&] { return parse_int(val, "--tol " + key); };
    if (key == "normalization_floor_rel") tol.normalization_floor_rel = d();
    else if (key == "root_residual_tol") tol.root_residual_tol = d();
    else if (key == "cluster_tol") tol.cluster_tol = d();
    else if (key == "gcd_match_tol") tol.gcd_match_tol = d();
    else if (key == "aberth_max_sweeps") tol.aberth_max_sweeps = i();
    else if (key == "reconstruction_tol") tol.reconstruction_tol = d();
    else if (key == "derivative_floor") tol.derivative_floor = d();
    else if (key == "fiber_residual_tol") tol.fiber_residual_tol = d();
    else if (key == "pole_guard") tol.pole_guard = d();
    else if (key == "near_critical_margin") tol.near_critical_margin = d();
    else if (key == "continuation_safety") tol.continuation_safety = d();
    else if (key == "continuation_max_depth") tol.continuation_max_depth = i();
    else if (key == "boundary_grid") tol.boundary_grid = i();
    else if (key == "boundary_tol") tol.boundary_tol = d();
    else if (key == "contact_grid") tol.contact_grid = i();
    else if (key == "contact_tol") tol.contact_tol = d();
    else if (key == "class_margin") tol.class_margin = d();
    else if (key == "compact_margin") tol.compact_margin = d();
    else if (key == "blaschke_tol") tol.blaschke_tol = d();
    else if (key == "blaschke_match_tol") tol.blaschke_match_tol = d();
    else if (key == "atlas_eps") tol.atlas_eps = d();
    else if (key == "atlas_grid") tol.atlas_grid = i();
    else throw hmr::MapParseError("--tol: unknown tolerance '" + key + "'");
  }
  return tol;
}

void emit_text(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_file);
  if (!out) throw std::runtime_error("cannot open --out file '" + out_file + "'");
  out << text;
}

void emit_json(const json& j, const std::string& out_file) {
  emit_text(j.dump(2) + "\n", out_file);
}

hmr::HardyPoly parse_function_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw hmr::MapParseError(std::string("--f does not parse as JSON: ") + e.what());
  }
  if (!j.is_array())
    throw hmr::MapParseError("--f must be a coefficient array like [1,0,2] or [[re,im],...]");
  std::vector<cx> coeffs;
  for (const json& c : j) {
    if (c.is_number())
      coeffs.push_back(cx{c.get<double>(), 0.0});
    else
      coeffs.push_back(hmr::cx_from_json(c));
  }
  return hmr::HardyPoly(std::move(coeffs));
}

void parse_grid(const std::string& s, int& angles, int& radii, double& max_radius) {
  const size_t x = s.find('x');
  const size_t at = s.find('@');
  if (x == std::string::npos || at == std::string::npos || at < x)
    throw hmr::MapParseError("--grid expects NxM@R (N angles, M radii, max radius R)");
  angles = parse_int(s.substr(0, x), "--grid angles");
  radii = parse_int(s.substr(x + 1, at - x - 1), "--grid radii");
  max_radius = parse_double(s.substr(at + 1), "--grid max radius");
  if (angles < 1 || radii < 1 || max_radius <= 0.0 || max_radius >= 1.0)
    throw hmr::MapParseError("--grid: need N,M >= 1 and 0 < R < 1");
}

std::string csv_field(cx v, bool ok) {
  if (!ok) return ",";
  std::ostringstream os;
  os.precision(17);
  os << v.real() << ',' << v.imag();
  return os.str();
}

int cmd_analyze(const CommonOpts& o) {
  const hmr::Tolerances tol = build_tolerances(o.tol_overrides);
  std::string name;
  const hmr::RationalMap phi = hmr::parse_map_spec(load_map_text(o), tol, &name);
  const hmr::RegularityReport reg = hmr::classify(phi, tol);

  json j = hmr::to_json(reg);
  j["name"] = name;
  j["map"] = hmr::to_json(phi);
  j["degree"] = phi.degree();
  j["phi_at_zero"] = hmr::to_json(phi.eval_ext(hmr::ExtPoint{cx{0.0}}, tol));
  j["certificate"] = hmr::to_json(hmr::is_self_map_of_disc(phi, tol));
  j["exterior_map"] = hmr::to_json(hmr::exterior_map(phi, tol));
  json values = json::array();
  for (const auto& v : reg.critical.critical_values) values.push_back(hmr::to_json(v.value));
  j["critical_values"] = values;
  j["decompositions"] = json{
      {"backward_shift",
       hmr::to_json(hmr::decomposition_report(phi, hmr::DecompositionForm::BackwardShift, tol))},
      {"weighted",
       hmr::to_json(hmr::decomposition_report(phi, hmr::DecompositionForm::Weighted, tol))}};
  emit_json(j, o.out_file);
  return 0;
}

struct EvalOpts {
  CommonOpts common;
  std::string f_text;
  std::string form = "auto";
  std::vector<std::string> z_args;
  std::string grid;
  bool csv = false;
};

int cmd_eval(const EvalOpts& o) {
  const hmr::Tolerances tol = build_tolerances(o.common.tol_overrides);
  std::string name;
  const hmr::RationalMap phi = hmr::parse_map_spec(load_map_text(o.common), tol, &name);
  const hmr::HardyPoly f = parse_function_json(o.f_text);

  std::vector<cx> points;
  for (const std::string& zs : o.z_args) points.push_back(parse_cx_arg(zs, "--z"));
  if (!o.grid.empty()) {
    int angles = 0, radii = 0;
    double max_radius = 0.0;
    parse_grid(o.grid, angles, radii, max_radius);
    for (int j = 1; j <= radii; ++j) {
      const double r = max_radius * j / radii;
      for (int k = 0; k < angles; ++k)
        points.push_back(std::polar(r, 2.0 * M_PI * k / angles));
    }
  }
  if (points.empty())
    throw hmr::MapParseError("eval: no evaluation points; pass --z re,im and/or --grid NxM@R");
  for (const cx& z : points)
    if (std::abs(z) >= 1.0)
      throw hmr::MapParseError("eval: all points must lie inside the open unit disc");

  const hmr::AdjointEvaluator ev(phi, tol);
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,z_re,z_im,form,value_re,value_im,oracle_re,oracle_im,abs_err,status,error\n";
  int ok_count = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    const cx z = points[i];
    json row;
    std::string err_text;
    bool ok = true;
    cx value{0.0}, oracle{0.0};
    std::string form_used = o.form;
    try {
      hmr::AdjointEvaluation e;
      if (o.form == "thm") e = ev.eval_thm(f, z);
      else if (o.form == "cor") e = ev.eval_cor(f, z);
      else if (o.form == "bs") e = ev.eval_bs(f, z);
      else if (o.form == "auto") e = ev.eval_auto(f, z);
      else throw hmr::MapParseError("--form must be one of thm|cor|bs|auto");
      oracle = hmr::adjoint_oracle(phi, f, z, tol);
      row = hmr::to_json(e);
      row["oracle_value"] = hmr::to_json(oracle);
      row["abs_err"] = std::abs(e.value - oracle);
      row["status"] = "ok";
      value = e.value;
      form_used = hmr::to_string(e.form_used);
      ++ok_count;
    } catch (const hmr::MapParseError&) {
      throw;  // bad --form is a usage error, not a per-point condition
    } catch (const std::exception& e) {
      ok = false;
      err_text = e.what();
      row = json{{"z", hmr::to_json(z)}, {"status", "error"}, {"error", err_text}};
    }
    row["index"] = static_cast<int>(i);
    rows.push_back(row);
    csv << i << ',' << z.real() << ',' << z.imag() << ',' << form_used << ','
        << csv_field(value, ok) << ',' << csv_field(oracle, ok) << ',';
    if (ok) csv << std::abs(value - oracle);
    csv << ',' << (ok ? "ok" : "error") << ',' << '"' << err_text << '"' << '\n';
  }

  if (o.csv) {
    emit_text(csv.str(), o.common.out_file);
  } else {
    emit_json(json{{"name", name},
                   {"map", hmr::to_json(phi)},
                   {"form", o.form},
                   {"f", [&] {
                      json a = json::array();
                      for (const cx& c : f.coeffs()) a.push_back(hmr::to_json(c));
                      return a;
                    }()},
                   {"rows", rows}},
              o.common.out_file);
  }
  return ok_count > 0 ? 0 : 1;
}

struct VerifyOpts {
  CommonOpts common;
  std::uint64_t seed = 12345;
  int trials = 100;
};

int cmd_verify(const VerifyOpts& o) {
  const hmr::Tolerances tol = build_tolerances(o.common.tol_overrides);
  std::string name;
  const hmr::RationalMap phi = hmr::parse_map_spec(load_map_text(o.common), tol, &name);
  const hmr::VerifySummary sum = hmr::run_verify(phi, o.seed, o.trials, name, tol);
  emit_json(hmr::to_json(sum), o.common.out_file);
  return sum.pass ? 0 : 1;
}

struct MonodromyOpts {
  CommonOpts common;
  std::string center = "0,0";
  std::string base;
  double radius = 0.0;
  int steps = 64;
};

int cmd_monodromy(const MonodromyOpts& o) {
  const hmr::Tolerances tol = build_tolerances(o.common.tol_overrides);
  std::string name;
  const hmr::RationalMap phi = hmr::parse_map_spec(load_map_text(o.common), tol, &name);
  const hmr::DiscCertificate cert = hmr::is_self_map_of_disc(phi, tol);
  if (!cert.is_self_map)
    throw hmr::CertificationFailure("monodromy: symbol is not a self-map of the disc (" +
                                    cert.diagnostic + ")");
  if (o.radius <= 0.0) throw hmr::MapParseError("monodromy: --radius must be positive");
  const cx center = parse_cx_arg(o.center, "--center");
  const cx base = o.base.empty() ? center + cx{o.radius, 0.0} : parse_cx_arg(o.base, "--base");
  const hmr::RationalMap phi_e = hmr::exterior_map(phi, tol);
  const hmr::MonodromyResult m = hmr::monodromy(phi_e, base, center, o.radius, o.steps, tol);
  json j = hmr::to_json(m);
  j["name"] = name;
  j["map"] = hmr::to_json(phi);
  j["exterior_map"] = hmr::to_json(phi_e);
  j["center"] = hmr::to_json(center);
  j["radius"] = o.radius;
  j["steps"] = o.steps;
  emit_json(j, o.common.out_file);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adjoints of rationally induced composition operators on H^2"};
  app.require_subcommand(1);

  CommonOpts analyze_opts;
  CLI::App* analyze = app.add_subcommand("analyze", "certificate, critical data, classification");
  add_common(analyze, analyze_opts);

  EvalOpts eval_opts;
  CLI::App* eval = app.add_subcommand("eval", "evaluate the adjoint with an oracle column");
  add_common(eval, eval_opts.common);
  eval->add_option("--f", eval_opts.f_text, "function coefficients, e.g. [1,0,2] or [[re,im],...]")
      ->required();
  eval->add_option("--form", eval_opts.form, "thm|cor|bs|auto (default auto)");
  eval->add_option("--z", eval_opts.z_args, "evaluation point re,im (repeatable)");
  eval->add_option("--grid", eval_opts.grid, "polar grid NxM@R: N angles, M radii up to R");
  eval->add_flag("--csv", eval_opts.csv, "emit CSV rows instead of JSON");

  VerifyOpts verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "run the cross-checking suites");
  add_common(verify, verify_opts.common);
  verify->add_option("--seed", verify_opts.seed, "sampling seed (default 12345)");
  verify->add_option("--trials", verify_opts.trials, "cases per suite (default 100)");

  MonodromyOpts mono_opts;
  CLI::App* mono = app.add_subcommand("monodromy", "branch permutation around a loop");
  add_common(mono, mono_opts.common);
  mono->add_option("--center", mono_opts.center, "loop center re,im (default 0,0)");
  mono->add_option("--radius", mono_opts.radius, "loop radius")->required();
  mono->add_option("--base", mono_opts.base, "base point re,im (default center + radius)");
  mono->add_option("--steps", mono_opts.steps, "loop discretization (default 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_opts);
    if (*eval) return cmd_eval(eval_opts);
    if (*verify) return cmd_verify(verify_opts);
    if (*mono) return cmd_monodromy(mono_opts);
  } catch (const hmr::MapParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hmr::CertificationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hmr::PathThroughCriticalValue& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const hmr::MatchingAmbiguity& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
