#include "hmr/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hmr/errors.hpp"

namespace hmr {

namespace {

bool ext_less(const ExtPoint& a, const ExtPoint& b) {
  if (a.is_infinity()) return false;
  if (b.is_infinity()) return true;
  if (a.value().real() != b.value().real()) return a.value().real() < b.value().real();
  return a.value().imag() < b.value().imag();
}

}  // namespace

PreimageFiber preimage_fiber(const RationalMap& phi_e, cx z, const Tolerances& tol) {
  if (phi_e.degree() < 1)
    throw DegreeZero("preimage_fiber: map of degree >= 1 required");
  if (std::abs(z) >= 1.0)
    throw DomainViolation("preimage_fiber: |z| < 1 required");

  const ComplexPoly g = phi_e.num() - z * phi_e.den();
  if (std::max(g.degree(), 0) < phi_e.degree())
    throw FiberEscape("preimage_fiber: part of the fiber lies at infinity");
  RootSet rs = roots(g, tol);

  // Two Newton steps against g sharpen the simultaneous-iteration output.
  for (cx& w : rs.roots) {
    for (int step = 0; step < 2; ++step) {
      const auto [gv, dgv] = g.eval_with_derivative(w);
      if (std::abs(dgv) < 1e-300) break;
      const cx next = w - gv / dgv;
      if (std::abs(g(next)) <= std::abs(gv)) w = next;
      else break;
    }
  }
  std::sort(rs.roots.begin(), rs.roots.end(), [](const cx& a, const cx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  PreimageFiber out;
  out.z = z;
  out.points = std::move(rs.roots);
  const ComplexPoly dnum =
      phi_e.num().derivative() * phi_e.den() - phi_e.num() * phi_e.den().derivative();

  out.margin = 4.0;
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t j = i + 1; j < out.points.size(); ++j)
      out.margin = std::min(out.margin, std::abs(out.points[i] - out.points[j]));
  if (out.points.size() > 1 && out.margin <= tol.cluster_tol)
    throw NotRegularValue("preimage_fiber: fiber points collide; z is not a regular value",
                          out.margin);

  for (const cx& w : out.points) {
    if (std::abs(w) >= 1.0)
      throw FiberEscape("preimage_fiber: fiber point outside the open unit disc");
    const cx dv = phi_e.den()(w);
    const double residual = std::abs(phi_e.num()(w) - z * dv) / std::max(std::abs(dv), 1e-300);
    out.max_residual = std::max(out.max_residual, residual);
    const cx deriv = dnum(w) / (dv * dv);
    if (std::abs(deriv) <= tol.derivative_floor)
      throw NotRegularValue("preimage_fiber: branch derivative at the floor", std::abs(deriv));
    out.deriv.push_back(deriv);
  }
  if (out.max_residual > tol.fiber_residual_tol)
    throw NonConvergence("preimage_fiber: fiber residual above tolerance");

  out.labels.resize(out.points.size());
  std::iota(out.labels.begin(), out.labels.end(), 0);
  return out;
}

TrackedFiber tracked_fiber(const RationalMap& R, cx z, const Tolerances& tol) {
  const SphereRootSet f = fiber(R, ExtPoint{z}, tol);
  TrackedFiber out;
  out.z = z;
  out.points = f.points;
  std::sort(out.points.begin(), out.points.end(), ext_less);

  out.margin = 4.0;
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t j = i + 1; j < out.points.size(); ++j)
      out.margin = std::min(out.margin, chordal_distance(out.points[i], out.points[j]));
  if (out.points.size() > 1 && out.margin <= tol.cluster_tol)
    throw NotRegularValue("tracked_fiber: fiber points collide", out.margin);

  const ComplexPoly dnum =
      R.num().derivative() * R.den() - R.num() * R.den().derivative();
  for (const ExtPoint& p : out.points) {
    if (p.is_infinity()) continue;
    const cx w = p.value();
    const cx dv = R.den()(w);
    if (std::abs(dv) < 1e-300) continue;  // pole of R, derivative unbounded
    const double deriv = std::abs(dnum(w)) / std::norm(dv);
    if (deriv <= tol.derivative_floor)
      throw NotRegularValue("tracked_fiber: branch derivative at the floor", deriv);
  }
  out.labels.resize(out.points.size());
  std::iota(out.labels.begin(), out.labels.end(), 0);
  return out;
}

namespace {

TrackedFiber continue_step(const RationalMap& R, const ComplexPoly& dnum,
                           const TrackedFiber& from, cx to, int depth,
                           const Tolerances& tol) {
  TrackedFiber target;
  try {
    target = tracked_fiber(R, to, tol);
  } catch (const NotRegularValue& e) {
    throw PathThroughCriticalValue(std::string("continuation hit a non-regular value: ") +
                                   e.what());
  }

  const size_t m = from.points.size();
  if (m == 1) {
    target.labels = from.labels;
    return target;
  }

  // Motion bound: |dz| * max|sigma'| estimated from the source fiber.
  double dmin = 0.0;
  bool have = false;
  for (const ExtPoint& p : from.points) {
    if (p.is_infinity()) continue;
    const cx w = p.value();
    const cx dv = R.den()(w);
    if (std::abs(dv) < 1e-300) continue;
    const double d = std::abs(dnum(w)) / std::norm(dv);
    dmin = have ? std::min(dmin, d) : d;
    have = true;
  }
  const double motion =
      have ? std::abs(to - from.z) / std::max(dmin, 1e-300) : 4.0;

  std::vector<int> match(m, -1);
  double margin = 4.0;
  for (size_t i = 0; i < m; ++i) {
    double best = 4.0, second = 4.0;
    int arg = -1;
    for (size_t k = 0; k < target.points.size(); ++k) {
      const double d = chordal_distance(from.points[i], target.points[k]);
      if (d < best) {
        second = best;
        best = d;
        arg = static_cast<int>(k);
      } else if (d < second) {
        second = d;
      }
    }
    match[i] = arg;
    margin = std::min(margin, second - best);
  }
  std::vector<bool> taken(m, false);
  bool bijection = true;
  for (int k : match) {
    if (k < 0 || taken[static_cast<size_t>(k)]) {
      bijection = false;
      break;
    }
    taken[static_cast<size_t>(k)] = true;
  }

  if (bijection && margin > tol.continuation_safety * motion) {
    for (size_t i = 0; i < m; ++i)
      target.labels[static_cast<size_t>(match[i])] = from.labels[i];
    return target;
  }
  if (depth >= tol.continuation_max_depth)
    throw MatchingAmbiguity("continuation: branch matching ambiguous after max bisection depth");
  const cx mid = from.z + 0.5 * (to - from.z);
  const TrackedFiber half = continue_step(R, dnum, from, mid, depth + 1, tol);
  return continue_step(R, dnum, half, to, depth + 1, tol);
}

}  // namespace

TrackedFiber continue_fiber(const RationalMap& R, const TrackedFiber& from, cx to,
                            const Tolerances& tol) {
  const ComplexPoly dnum =
      R.num().derivative() * R.den() - R.num() * R.den().derivative();
  return continue_step(R, dnum, from, to, 0, tol);
}

TrackedFiber continue_along(const RationalMap& R, TrackedFiber start,
                            std::span<const cx> path, const Tolerances& tol) {
  const ComplexPoly dnum =
      R.num().derivative() * R.den() - R.num() * R.den().derivative();
  for (const cx& to : path) {
    if (to == start.z) continue;
    start = continue_step(R, dnum, start, to, 0, tol);
  }
  return start;
}

PreimageFiber continue_branch(const RationalMap& phi_e, const PreimageFiber& start,
                              std::span<const cx> path, const Tolerances& tol) {
  for (const cx& p : path)
    if (std::abs(p) >= 1.0)
      throw DomainViolation("continue_branch: path must stay inside the unit disc");

  TrackedFiber t;
  t.z = start.z;
  t.margin = start.margin;
  t.labels = start.labels;
  for (const cx& w : start.points) t.points.push_back(ExtPoint{w});
  const TrackedFiber end = continue_along(phi_e, std::move(t), path, tol);

  // Rebuild the strict fiber at the endpoint and carry the transported labels
  // over by nearest-point matching (the points coincide; only labels differ).
  PreimageFiber out = preimage_fiber(phi_e, end.z, tol);
  for (size_t i = 0; i < out.points.size(); ++i) {
    double best = 4.0;
    int arg = -1;
    for (size_t k = 0; k < end.points.size(); ++k) {
      const double d = chordal_distance(ExtPoint{out.points[i]}, end.points[k]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(k);
      }
    }
    out.labels[i] = end.labels[static_cast<size_t>(arg)];
  }
  return out;
}

MonodromyResult monodromy(const RationalMap& R, cx base, cx center, double radius,
                          int steps, const Tolerances& tol) {
  if (radius <= 0.0) throw DomainViolation("monodromy: radius must be positive");
  if (std::abs(std::abs(base - center) - radius) > 1e-9 * std::max(1.0, radius))
    throw DomainViolation("monodromy: base point must lie on the loop circle");
  if (steps < 4) steps = 4;

  // The base point is on the loop, so a non-regular base is a path through a
  // critical value, same as a mid-path hit.
  TrackedFiber start;
  try {
    start = tracked_fiber(R, base, tol);
  } catch (const NotRegularValue& e) {
    throw PathThroughCriticalValue(
        std::string("monodromy base point is not a regular value: ") + e.what());
  }
  const double theta0 = std::arg(base - center);
  std::vector<cx> path;
  path.reserve(static_cast<size_t>(steps));
  for (int k = 1; k < steps; ++k)
    path.push_back(center + std::polar(radius, theta0 + 2.0 * M_PI * k / steps));
  path.push_back(base);  // close the loop exactly

  const TrackedFiber end = continue_along(R, start, path, tol);

  MonodromyResult out;
  out.base = base;
  out.permutation.assign(start.points.size(), -1);
  for (size_t k = 0; k < end.points.size(); ++k) {
    double best = 4.0;
    int arg = -1;
    for (size_t j = 0; j < start.points.size(); ++j) {
      const double d = chordal_distance(end.points[k], start.points[j]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    out.return_error = std::max(out.return_error, best);
    out.permutation[static_cast<size_t>(end.labels[k])] =
        start.labels[static_cast<size_t>(arg)];
  }
  std::vector<bool> seen(out.permutation.size(), false);
  for (int v : out.permutation) {
    if (v < 0 || seen[static_cast<size_t>(v)])
      throw MatchingAmbiguity("monodromy: returned fiber does not match the initial one");
    seen[static_cast<size_t>(v)] = true;
  }
  return out;
}

std::string cycle_notation(const std::vector<int>& permutation) {
  std::ostringstream os;
  std::vector<bool> seen(permutation.size(), false);
  bool any = false;
  for (size_t i = 0; i < permutation.size(); ++i) {
    if (seen[i] || permutation[i] == static_cast<int>(i)) continue;
    os << '(';
    size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) os << ' ';
      os << j;
      first = false;
      j = static_cast<size_t>(permutation[j]);
    }
    os << ')';
    any = true;
  }
  if (!any) return "()";
  return os.str();
}

const char* to_string(AdjointForm f) {
  switch (f) {
    case AdjointForm::thm: return "thm";
    case AdjointForm::cor: return "cor";
    case AdjointForm::bs: return "bs";
  }
  return "?";
}

namespace {

RationalMap make_exterior(const RationalMap& phi, const Tolerances& tol) {
  if (phi.degree() < 1)
    throw DegreeZero("AdjointEvaluator: symbol of degree >= 1 required");
  return exterior_map(phi, tol);
}

ComplexPoly derivative_numerator(const RationalMap& R) {
  return R.num().derivative() * R.den() - R.num() * R.den().derivative();
}

}  // namespace

AdjointEvaluator::AdjointEvaluator(RationalMap phi, const Tolerances& tol)
    : phi_(std::move(phi)),
      phi_e_(make_exterior(phi_, tol)),
      dnum_(derivative_numerator(phi_)),
      dnum_e_(derivative_numerator(phi_e_)),
      tol_(tol) {
  cert_ = is_self_map_of_disc(phi_, tol_);
  if (!cert_.is_self_map)
    throw CertificationFailure("AdjointEvaluator: symbol is not a self-map of the disc (" +
                               cert_.diagnostic + ")");
  phi0_ = phi_.eval_ext(ExtPoint{cx{0.0}}, tol_).value();
  phi_inf_ = phi_.value_at_infinity();
  if (!phi_inf_.is_infinity() && std::abs(phi_inf_.value()) > 1e-300)
    guarded_pole_ = 1.0 / std::conj(phi_inf_.value());
  for (const auto& v : critical_data(phi_e_, tol_).critical_values)
    if (!v.value.is_infinity()) ext_cv_.push_back(v.value.value());
}

double AdjointEvaluator::distance_to_exterior_critical_values(cx z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const cx& v : ext_cv_) d = std::min(d, std::abs(z - v));
  return d;
}

cx AdjointEvaluator::eval_phi_e_derivative(cx w) const {
  const cx dv = phi_e_.den()(w);
  return dnum_e_(w) / (dv * dv);
}

cx AdjointEvaluator::eval_phi_derivative(cx w) const {
  const cx dv = phi_.den()(w);
  return dnum_(w) / (dv * dv);
}

void AdjointEvaluator::guard_check(cx z, const PreimageFiber& fib) const {
  if (guarded_pole_ && std::abs(z - *guarded_pole_) < tol_.pole_guard)
    throw PoleProximity(
        "evaluation inside the guard disc around 1/conj(phi(inf)); use the bs form");
  for (const cx& w : fib.points)
    if (std::abs(w) <= tol_.derivative_floor)
      throw PoleProximity("fiber point at the origin; use the bs form");
}

AdjointEvaluation AdjointEvaluator::assemble(const HardyPoly& f, const PreimageFiber& fib,
                                             AdjointForm form) const {
  AdjointEvaluation r;
  r.z = fib.z;
  r.form_used = form;
  r.regularity_margin = fib.margin;
  r.near_critical = fib.margin < tol_.near_critical_margin;
  if (guarded_pole_)
    r.near_pole = std::abs(fib.z - *guarded_pole_) < 10.0 * tol_.pole_guard;
  r.branch_points = fib.points;

  const cx z = fib.z;
  const cx f0 = f.coeff(0);
  switch (form) {
    case AdjointForm::thm: {
      r.lambda_term = phi_inf_.is_infinity()
                          ? cx{0.0}
                          : f0 / (1.0 - std::conj(phi_inf_.value()) * z);
      for (size_t j = 0; j < fib.points.size(); ++j) {
        const cx sigma_prime = 1.0 / fib.deriv[j];
        r.branch_terms.push_back(z * sigma_prime / fib.points[j] * f(fib.points[j]));
      }
      break;
    }
    case AdjointForm::cor: {
      r.lambda_term = phi_inf_.is_infinity()
                          ? cx{0.0}
                          : f0 / (1.0 - std::conj(phi_inf_.value()) * z);
      for (size_t j = 0; j < fib.points.size(); ++j) {
        const cx w = fib.points[j];
        r.branch_terms.push_back(z * f(w) / (w * fib.deriv[j]));
      }
      break;
    }
    case AdjointForm::bs: {
      r.lambda_term = f0 / (1.0 - std::conj(phi0_) * z);
      const HardyPoly bf = backward_shift(f);
      for (size_t j = 0; j < fib.points.size(); ++j) {
        const cx sigma_prime = 1.0 / fib.deriv[j];
        r.branch_terms.push_back(z * sigma_prime * bf(fib.points[j]));
      }
      break;
    }
  }
  r.value = r.lambda_term;
  for (const cx& t : r.branch_terms) r.value += t;
  return r;
}

namespace {

AdjointEvaluation exact_at_zero(const HardyPoly& f, AdjointForm form) {
  AdjointEvaluation r;
  r.z = cx{0.0};
  r.form_used = form;
  r.lambda_term = f.coeff(0);
  r.value = f.coeff(0);
  r.regularity_margin = 4.0;
  return r;
}

}  // namespace

AdjointEvaluation AdjointEvaluator::eval_thm(const HardyPoly& f, cx z) const {
  if (z == cx{0.0}) return exact_at_zero(f, AdjointForm::thm);
  const PreimageFiber fib = fiber_at(z);
  guard_check(z, fib);
  return assemble(f, fib, AdjointForm::thm);
}

AdjointEvaluation AdjointEvaluator::eval_cor(const HardyPoly& f, cx z) const {
  if (z == cx{0.0}) return exact_at_zero(f, AdjointForm::cor);
  const PreimageFiber fib = fiber_at(z);
  guard_check(z, fib);
  return assemble(f, fib, AdjointForm::cor);
}

AdjointEvaluation AdjointEvaluator::eval_bs(const HardyPoly& f, cx z) const {
  if (z == cx{0.0}) return exact_at_zero(f, AdjointForm::bs);
  return assemble(f, fiber_at(z), AdjointForm::bs);
}

AdjointEvaluation AdjointEvaluator::eval_thm(const HardyPoly& f, const PreimageFiber& fib) const {
  guard_check(fib.z, fib);
  return assemble(f, fib, AdjointForm::thm);
}

AdjointEvaluation AdjointEvaluator::eval_cor(const HardyPoly& f, const PreimageFiber& fib) const {
  guard_check(fib.z, fib);
  return assemble(f, fib, AdjointForm::cor);
}

AdjointEvaluation AdjointEvaluator::eval_bs(const HardyPoly& f, const PreimageFiber& fib) const {
  return assemble(f, fib, AdjointForm::bs);
}

AdjointEvaluation AdjointEvaluator::eval(const HardyPoly& f, cx z, AdjointForm form) const {
  switch (form) {
    case AdjointForm::thm: return eval_thm(f, z);
    case AdjointForm::cor: return eval_cor(f, z);
    case AdjointForm::bs: return eval_bs(f, z);
  }
  return eval_bs(f, z);
}

AdjointEvaluation AdjointEvaluator::eval_auto(const HardyPoly& f, cx z) const {
  if (z == cx{0.0}) return exact_at_zero(f, AdjointForm::bs);
  if (guarded_pole_ && std::abs(z - *guarded_pole_) < 10.0 * tol_.pole_guard)
    return eval_bs(f, z);
  return eval_cor(f, z);
}

cx AdjointEvaluator::omega(const HardyPoly& f, cx z) const {
  if (f.coeff(0) != cx{0.0})
    throw NotInH20("omega: f(0) = 0 required");
  const PreimageFiber fib = fiber_at(z);
  const HardyPoly bf = backward_shift(f);
  cx acc{0.0};
  for (size_t j = 0; j < fib.points.size(); ++j)
    acc += (1.0 / fib.deriv[j]) * bf(fib.points[j]);
  return acc;
}

double AdjointEvaluator::amusing_identity_residual(cx z) const {
  const PreimageFiber fib = fiber_at(z);
  guard_check(z, fib);
  const cx lhs = 1.0 / (1.0 - std::conj(phi0_) * z) -
                 (phi_inf_.is_infinity()
                      ? cx{0.0}
                      : 1.0 / (1.0 - std::conj(phi_inf_.value()) * z));
  cx rhs{0.0};
  for (size_t j = 0; j < fib.points.size(); ++j)
    rhs += 1.0 / (fib.points[j] * fib.deriv[j]);
  rhs *= z;
  return std::abs(lhs - rhs);
}

AdjointEvaluation hmr_eval_thm(const RationalMap& phi, const HardyPoly& f, cx z,
                               const Tolerances& tol) {
  return AdjointEvaluator(phi, tol).eval_thm(f, z);
}

AdjointEvaluation hmr_eval_cor(const RationalMap& phi, const HardyPoly& f, cx z,
                               const Tolerances& tol) {
  return AdjointEvaluator(phi, tol).eval_cor(f, z);
}

AdjointEvaluation hmr_eval_bs(const RationalMap& phi, const HardyPoly& f, cx z,
                              const Tolerances& tol) {
  return AdjointEvaluator(phi, tol).eval_bs(f, z);
}

cx omega_eval(const RationalMap& phi, const HardyPoly& f, cx z, const Tolerances& tol) {
  return AdjointEvaluator(phi, tol).omega(f, z);
}

double amusing_identity_residual(const RationalMap& phi, cx z, const Tolerances& tol) {
  return AdjointEvaluator(phi, tol).amusing_identity_residual(z);
}

cx PartialFraction::operator()(cx w) const {
  cx acc = alpha;
  for (size_t j = 0; j < poles.size(); ++j) acc += residues[j] / (w - poles[j]);
  return acc;
}

PartialFraction kernel_partial_fraction(const AdjointEvaluator& ev, cx z) {
  if (ev.phi_at_infinity().is_infinity())
    throw DomainViolation("kernel_partial_fraction: phi(inf) must be finite");
  if (z == cx{0.0})
    throw DomainViolation("kernel_partial_fraction: z must be nonzero");
  const PreimageFiber fib = ev.fiber_at(z);
  PartialFraction pf;
  pf.alpha = 1.0 / (1.0 - std::conj(z) * ev.phi_at_infinity().value());
  for (const cx& w : fib.points) {
    const cx pole = 1.0 / std::conj(w);
    pf.poles.push_back(pole);
    pf.residues.push_back(-1.0 / (std::conj(z) * ev.eval_phi_derivative(pole)));
  }
  return pf;
}

}  // namespace hmr
