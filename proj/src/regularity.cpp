#include "hmr/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hmr/errors.hpp"
#include "hmr/rng.hpp"

namespace hmr {

const char* to_string(RegularityClass c) {
  switch (c) {
    case RegularityClass::StronglyOuterRegular: return "StronglyOuterRegular";
    case RegularityClass::OuterRegular: return "OuterRegular";
    case RegularityClass::NotOuterRegular: return "NotOuterRegular";
  }
  return "?";
}

const char* to_string(PointLocation l) {
  switch (l) {
    case PointLocation::InDisc: return "InDisc";
    case PointLocation::OnCircle: return "OnCircle";
    case PointLocation::OutsideDisc: return "OutsideDisc";
    case PointLocation::AtInfinity: return "AtInfinity";
  }
  return "?";
}

PointLocation locate(const ExtPoint& p, double margin) {
  if (p.is_infinity()) return PointLocation::AtInfinity;
  const double m = std::abs(p.value());
  if (m < 1.0 - margin) return PointLocation::InDisc;
  if (m > 1.0 + margin) return PointLocation::OutsideDisc;
  return PointLocation::OnCircle;
}

BandClassification classify_moduli(std::span<const double> critical_value_moduli,
                                   double phi_at_infinity_modulus,
                                   double class_margin) {
  BandClassification out;
  for (int i = 0; i < static_cast<int>(critical_value_moduli.size()); ++i) {
    const double m = critical_value_moduli[static_cast<size_t>(i)];
    if (m < 1.0 - class_margin) {
      out.inside.push_back(i);
    } else {
      out.outside_or_boundary.push_back(i);
      if (m <= 1.0 + class_margin) out.indeterminate.push_back(i);
    }
  }
  if (!out.outside_or_boundary.empty()) {
    out.klass = RegularityClass::NotOuterRegular;
  } else if (phi_at_infinity_modulus < 1.0 - class_margin) {
    out.klass = RegularityClass::StronglyOuterRegular;
  } else {
    out.klass = RegularityClass::OuterRegular;
  }
  return out;
}

bool is_finite_blaschke(const RationalMap& phi, const Tolerances& tol) {
  if (phi.degree() < 1) return false;
  if (phi.num().degree() != phi.degree()) return false;

  double maxdev = 0.0;
  for (int k = 0; k < tol.boundary_grid; ++k) {
    const cx zeta = std::polar(1.0, 2.0 * M_PI * k / tol.boundary_grid);
    maxdev = std::max(maxdev, std::abs(std::abs(phi.eval(zeta)) - 1.0));
    if (maxdev > tol.blaschke_tol) return false;
  }

  std::vector<cx> num_roots, den_roots;
  if (phi.num().degree() >= 1) num_roots = roots(phi.num(), tol).roots;
  if (phi.den().degree() >= 1) den_roots = roots(phi.den(), tol).roots;

  std::vector<bool> used(num_roots.size(), false);
  for (const cx& q : den_roots) {
    if (std::abs(q) <= 1.0) return false;  // pole in the closed disc
    const cx target = 1.0 / std::conj(q);
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (size_t i = 0; i < num_roots.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(num_roots[i] - target);
      if (dist < best) {
        best = dist;
        arg = static_cast<int>(i);
      }
    }
    if (arg < 0 || best > tol.blaschke_match_tol) return false;
    used[static_cast<size_t>(arg)] = true;
  }
  for (size_t i = 0; i < num_roots.size(); ++i)
    if (!used[i] && std::abs(num_roots[i]) > tol.blaschke_match_tol) return false;
  return true;
}

BoundaryContacts boundary_contacts(const RationalMap& phi, const Tolerances& tol) {
  BoundaryContacts out;
  if (is_finite_blaschke(phi, tol)) {
    out.all_of_boundary = true;
    return out;
  }

  const RationalMap d1 = phi.derivative(tol);
  const RationalMap d2 = d1.derivative(tol);
  // s(theta) = |phi(e^{i theta})|^2; with g(theta) = phi(e^{i theta}):
  //   g'  = i zeta phi'(zeta)
  //   g'' = -zeta^2 phi''(zeta) - zeta phi'(zeta)
  //   s'  = 2 Re(conj(g) g'),  s'' = 2 (|g'|^2 + Re(conj(g) g''))
  const auto slope = [&](double theta, double& sp, double& spp) {
    const cx zeta = std::polar(1.0, theta);
    const cx g = phi.eval(zeta);
    const cx dphi = d1.eval(zeta);
    const cx gp = cx{0.0, 1.0} * zeta * dphi;
    const cx gpp = -zeta * zeta * d2.eval(zeta) - zeta * dphi;
    sp = 2.0 * std::real(std::conj(g) * gp);
    spp = 2.0 * (std::norm(gp) + std::real(std::conj(g) * gpp));
  };

  const int n = tol.contact_grid;
  std::vector<double> mod(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    mod[static_cast<size_t>(k)] = std::abs(phi.eval(std::polar(1.0, 2.0 * M_PI * k / n)));

  const double cell = 2.0 * M_PI / n;
  const double candidate_floor = 1.0 - std::sqrt(tol.contact_tol);
  std::vector<double> polished;
  for (int k = 0; k < n; ++k) {
    const double here = mod[static_cast<size_t>(k)];
    const double prev = mod[static_cast<size_t>((k + n - 1) % n)];
    const double next = mod[static_cast<size_t>((k + 1) % n)];
    if (here < candidate_floor || here < prev || here < next) continue;

    double theta = 2.0 * M_PI * k / n;
    for (int it = 0; it < 50; ++it) {
      double sp, spp;
      slope(theta, sp, spp);
      if (!(spp < -1e-300)) break;  // degenerate or non-maximal curvature
      double step = sp / spp;
      step = std::clamp(step, -cell, cell);
      theta -= step;
      if (std::abs(step) < 1e-15) break;
    }
    if (std::abs(phi.eval(std::polar(1.0, theta))) >= 1.0 - tol.contact_tol)
      polished.push_back(theta);
  }

  // Deduplicate maxima that converged to the same contact.
  std::vector<cx> points;
  for (double theta : polished) {
    const cx zeta = std::polar(1.0, theta);
    bool dup = false;
    for (const cx& seen : points)
      if (std::abs(zeta - seen) < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) points.push_back(zeta);
  }
  std::sort(points.begin(), points.end(), [](const cx& a, const cx& b) {
    double ta = std::arg(a), tb = std::arg(b);
    if (ta < -1e-12) ta += 2.0 * M_PI;
    if (tb < -1e-12) tb += 2.0 * M_PI;
    return ta < tb;
  });
  out.points = std::move(points);
  return out;
}

RegularityReport classify(const RationalMap& phi, const Tolerances& tol) {
  if (phi.degree() < 1) throw DegreeZero("classify: symbol of degree >= 1 required");
  const DiscCertificate cert = is_self_map_of_disc(phi, tol);
  if (!cert.is_self_map)
    throw CertificationFailure("classify: symbol is not a self-map of the disc (" +
                               cert.diagnostic + ")");

  RegularityReport rep;
  rep.critical = critical_data(phi, tol);
  rep.phi_at_infinity = phi.value_at_infinity();
  rep.phi_at_infinity_location = locate(rep.phi_at_infinity, tol.class_margin);

  std::vector<double> moduli;
  for (const auto& v : rep.critical.critical_values)
    moduli.push_back(v.value.is_infinity() ? std::numeric_limits<double>::infinity()
                                           : std::abs(v.value.value()));
  const double pim = rep.phi_at_infinity.is_infinity()
                         ? std::numeric_limits<double>::infinity()
                         : std::abs(rep.phi_at_infinity.value());
  const BandClassification bc = classify_moduli(moduli, pim, tol.class_margin);
  rep.klass = bc.klass;
  for (int i : bc.inside)
    rep.critical_values_inside.push_back(rep.critical.critical_values[static_cast<size_t>(i)].value);
  for (int i : bc.outside_or_boundary)
    rep.critical_values_outside_or_boundary.push_back(
        rep.critical.critical_values[static_cast<size_t>(i)].value);
  for (int i : bc.indeterminate)
    rep.indeterminate.push_back(rep.critical.critical_values[static_cast<size_t>(i)].value);

  rep.is_blaschke = is_finite_blaschke(phi, tol);
  rep.contacts = boundary_contacts(phi, tol);
  return rep;
}

const char* to_string(DecompositionForm f) {
  switch (f) {
    case DecompositionForm::BackwardShift: return "backward_shift";
    case DecompositionForm::Weighted: return "weighted";
  }
  return "?";
}

namespace {

// A boundary-adjacent point whose labeled fiber the atlas sweep must visit:
// either a boundary contact (attribute it to a branch) or the base point of
// the guarded pole (find the branch whose sigma vanishes there).
struct SweepTarget {
  cx z;           // continuation endpoint
  cx witness;     // contact point to match (purpose 0); unused otherwise
  int purpose;    // 0 = contact ownership, 1 = vanishing-branch search
  int index;      // contact index for purpose 0
};

double wrap_angle(double a) {
  while (a < 0.0) a += 2.0 * M_PI;
  while (a >= 2.0 * M_PI) a -= 2.0 * M_PI;
  return a;
}

}  // namespace

DecompositionReport decomposition_report(const RationalMap& phi, DecompositionForm form,
                                         const Tolerances& tol) {
  const RegularityReport reg = classify(phi, tol);
  const RationalMap phi_e = exterior_map(phi, tol);
  const ComplexPoly dnum_e =
      phi_e.num().derivative() * phi_e.den() - phi_e.num() * phi_e.den().derivative();
  const int d = phi.degree();

  DecompositionReport rep;
  rep.form = form;
  rep.klass = reg.klass;
  rep.atlas_points = tol.atlas_grid;
  rep.atlas_radius = 1.0 - tol.atlas_eps;
  rep.min_branch_separation = 4.0;

  const ExtPoint pinf = phi.value_at_infinity();
  if (form == DecompositionForm::BackwardShift) {
    rep.lambda_kernel = "f(0)/(1 - conj(phi(0)) z)";
    rep.lambda_bounded = true;
    rep.legitimate = reg.klass != RegularityClass::NotOuterRegular;
  } else {
    if (pinf.is_infinity()) {
      rep.lambda_kernel = "absent (phi(inf) = inf)";
      rep.lambda_bounded = true;
    } else {
      rep.lambda_kernel = "f(0)/(1 - conj(phi(inf)) z)";
      rep.lambda_bounded = std::abs(pinf.value()) < 1.0 - tol.class_margin;
    }
    rep.legitimate = reg.klass == RegularityClass::StronglyOuterRegular;
  }

  // Weights start out bounded whenever the branches extend past the circle;
  // the Weighted form may still flip the branch whose sigma vanishes in the
  // closed disc (found by the vanishing-branch search below).
  rep.summands.resize(static_cast<size_t>(d));
  for (int l = 0; l < d; ++l) {
    rep.summands[static_cast<size_t>(l)].branch = l;
    rep.summands[static_cast<size_t>(l)].weight_bounded =
        reg.klass != RegularityClass::NotOuterRegular;
  }

  // Boundary-adjacent targets the sweep must visit with transported labels.
  std::vector<SweepTarget> targets;
  for (size_t i = 0; i < reg.contacts.points.size(); ++i) {
    const cx zeta = reg.contacts.points[i];
    const ExtPoint image = phi_e.eval_ext(ExtPoint{zeta}, tol);
    if (image.is_infinity()) {
      rep.diagnostics.push_back("contact image at infinity; skipped ownership");
      continue;
    }
    cx zstar = image.value();
    zstar /= std::abs(zstar);  // lies on the circle up to rounding
    targets.push_back({zstar, zeta, 0, static_cast<int>(i)});
  }
  std::optional<cx> interior_vanish_target;
  if (form == DecompositionForm::Weighted &&
      reg.klass != RegularityClass::NotOuterRegular) {
    const ExtPoint p = phi_e.eval_ext(ExtPoint{cx{0.0}}, tol);
    if (!p.is_infinity() && std::abs(p.value()) > tol.derivative_floor &&
        std::abs(p.value()) <= 1.0 + tol.class_margin) {
      if (std::abs(p.value()) > rep.atlas_radius)
        targets.push_back({p.value(), cx{0.0}, 1, -1});
      else
        interior_vanish_target = p.value();
    }
  }

  // Base fiber on the ring.
  const double r = rep.atlas_radius;
  const int N = tol.atlas_grid;
  TrackedFiber base;
  double theta0 = 0.0;
  bool have_base = false;
  for (int k = 0; k < 64 && !have_base; ++k) {
    theta0 = k * 1e-3;
    try {
      base = tracked_fiber(phi_e, std::polar(r, theta0), tol);
      have_base = true;
    } catch (const NotRegularValue&) {
    }
  }
  if (!have_base)
    throw PathThroughCriticalValue(
        "decomposition_report: no regular base point found on the atlas ring");

  std::map<int, std::vector<size_t>> targets_at;
  for (size_t t = 0; t < targets.size(); ++t) {
    const double a = wrap_angle(std::arg(targets[t].z) - theta0);
    const int k = static_cast<int>(std::lround(a / (2.0 * M_PI / N))) % N;
    targets_at[k].push_back(t);
  }

  const auto record_separation = [&](const std::vector<ExtPoint>& pts) {
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        rep.min_branch_separation = std::min(
            rep.min_branch_separation, std::abs(pts[i].value() - pts[j].value()));
  };

  const auto weight_at = [&](cx z, cx w) {
    const cx dv = phi_e.den()(w);
    const double deriv = std::abs(dnum_e(w)) / std::norm(dv);
    const double h = std::abs(z) / std::max(deriv, 1e-300);
    if (form == DecompositionForm::BackwardShift) return h;
    return h / std::max(std::abs(w), 1e-300);
  };

  const auto claim_branch = [&](const SweepTarget& tgt, const TrackedFiber& fib) {
    double best = std::numeric_limits<double>::infinity();
    int owner = -1;
    for (size_t i = 0; i < fib.points.size(); ++i) {
      const double dist = tgt.purpose == 0
                              ? std::abs(fib.points[i].value() - tgt.witness)
                              : std::abs(fib.points[i].value());
      if (dist < best) {
        best = dist;
        owner = fib.labels[i];
      }
    }
    if (owner < 0) return;
    auto& s = rep.summands[static_cast<size_t>(owner)];
    if (tgt.purpose == 0) {
      s.owns_boundary_contact = true;
      s.sup_sigma = std::max(s.sup_sigma, 1.0);
      if (best > 1e-6)
        rep.diagnostics.push_back("contact ownership matched only to within " +
                                  std::to_string(best));
    } else {
      s.weight_bounded = false;
      if (best > 1e-6)
        rep.diagnostics.push_back("vanishing-branch search: min |sigma| was " +
                                  std::to_string(best));
    }
  };

  const auto process = [&](const TrackedFiber& ring, int k) {
    record_separation(ring.points);
    // Radial push to the boundary for the sup estimates.
    try {
      const cx zb = ring.z / std::abs(ring.z);
      const TrackedFiber push = continue_fiber(phi_e, ring, zb, tol);
      record_separation(push.points);
      for (size_t i = 0; i < push.points.size(); ++i) {
        const cx w = push.points[i].value();
        auto& s = rep.summands[static_cast<size_t>(push.labels[i])];
        s.sup_sigma = std::max(s.sup_sigma, std::abs(w));
        s.sup_weight = std::max(s.sup_weight, weight_at(zb, w));
      }
    } catch (const PathThroughCriticalValue& e) {
      rep.diagnostics.push_back("boundary push failed at grid index " + std::to_string(k) +
                                ": " + e.what());
    } catch (const MatchingAmbiguity& e) {
      rep.diagnostics.push_back("boundary push ambiguous at grid index " +
                                std::to_string(k) + ": " + e.what());
    }
    // Targets assigned to this grid angle.
    const auto it = targets_at.find(k);
    if (it == targets_at.end()) return;
    for (size_t t : it->second) {
      const SweepTarget& tgt = targets[t];
      try {
        TrackedFiber at = continue_fiber(phi_e, ring, std::polar(r, std::arg(tgt.z)), tol);
        at = continue_fiber(phi_e, at, tgt.z, tol);
        claim_branch(tgt, at);
      } catch (const std::runtime_error& e) {
        rep.diagnostics.push_back("target continuation failed: " + std::string(e.what()));
      }
    }
  };

  TrackedFiber cur = base;
  process(cur, 0);
  for (int k = 1; k <= N; ++k) {
    const cx zk = (k == N) ? base.z : std::polar(r, theta0 + 2.0 * M_PI * k / N);
    cur = continue_fiber(phi_e, cur, zk, tol);
    if (k < N) process(cur, k);
  }

  std::vector<int> perm(static_cast<size_t>(d));
  for (size_t i = 0; i < cur.labels.size(); ++i)
    perm[static_cast<size_t>(cur.labels[i])] = base.labels[i];
  rep.ring_monodromy = cycle_notation(perm);
  rep.branches_globally_defined = true;
  for (size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) rep.branches_globally_defined = false;

  if (interior_vanish_target) {
    try {
      const TrackedFiber at = continue_fiber(phi_e, base, *interior_vanish_target, tol);
      claim_branch(SweepTarget{*interior_vanish_target, cx{0.0}, 1, -1}, at);
    } catch (const std::runtime_error& e) {
      rep.diagnostics.push_back("vanishing-branch continuation failed: " +
                                std::string(e.what()));
    }
  }

  int noncompact = 0, last_noncompact = -1;
  for (auto& s : rep.summands) {
    s.composition_compact = s.sup_sigma < 1.0 - tol.compact_margin;
    if (!s.composition_compact) {
      ++noncompact;
      last_noncompact = s.branch;
    }
  }
  if (noncompact == 1) rep.unique_noncompact_branch = last_noncompact;

  std::ostringstream conc;
  if (!rep.legitimate) {
    conc << (form == DecompositionForm::Weighted
                 ? "not strongly outer regular: the weighted decomposition is not a "
                   "legitimate operator equation"
                 : "not outer regular: the branch decomposition is not a legitimate "
                   "operator equation");
  } else if (!reg.contacts.all_of_boundary && reg.contacts.points.size() == 1 &&
             noncompact == 1) {
    conc << "compact perturbation of "
         << (form == DecompositionForm::Weighted ? "the weighted composition operator M_g C_sigma"
                                                 : "M_h C_sigma B")
         << " for branch " << last_noncompact << " (the one fixing the boundary contact)";
  } else if (reg.contacts.points.empty() && !reg.contacts.all_of_boundary &&
             noncompact == 0) {
    conc << "every composition summand is compact: the adjoint is a compact "
            "perturbation of the rank-one lambda term";
  } else {
    conc << reg.contacts.points.size() << " boundary contact(s), " << noncompact
         << " non-compact summand(s): no single-summand compact-perturbation statement";
  }
  rep.conclusion = conc.str();
  return rep;
}

RationalMap random_blaschke(std::mt19937_64& rng, int degree, const Tolerances& tol) {
  if (degree < 1) throw DegreeZero("random_blaschke: degree >= 1 required");
  ComplexPoly num = ComplexPoly::constant(std::polar(1.0, 2.0 * M_PI * uniform01(rng)));
  ComplexPoly den = ComplexPoly::constant(cx{1.0});
  for (int j = 0; j < degree; ++j) {
    const double radius = 0.9 * std::sqrt(uniform01(rng));  // area-uniform
    const cx a = std::polar(radius, 2.0 * M_PI * uniform01(rng));
    num = num * ComplexPoly({a, cx{-1.0}});
    den = den * ComplexPoly({cx{1.0}, -std::conj(a)});
  }
  return RationalMap(std::move(num), std::move(den), tol);
}

BlaschkeCheckSummary blaschke_never_outer_regular_check(std::uint64_t seed, int trials,
                                                        const Tolerances& tol) {
  BlaschkeCheckSummary sum;
  sum.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int degree = 2 + static_cast<int>(rng() % 4);
    const RationalMap b = random_blaschke(rng, degree, tol);
    const RegularityReport rep = classify(b, tol);
    if (rep.klass != RegularityClass::NotOuterRegular) {
      ++sum.failures;
      std::ostringstream os;
      os << "trial " << t << " (degree " << degree << ") classified "
         << to_string(rep.klass) << "; critical value moduli:";
      for (const auto& v : rep.critical.critical_values) {
        if (v.value.is_infinity())
          os << " inf";
        else
          os << ' ' << std::abs(v.value.value());
      }
      sum.diagnostics.push_back(os.str());
    }
  }
  sum.pass = trials > 0 && sum.failures == 0;
  return sum;
}

}  // namespace hmr
