#include "hmr/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmr/errors.hpp"

namespace hmr {

double chordal_distance(cx a, cx b) {
  return 2.0 * std::abs(a - b) /
         (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

double chordal_distance(const ExtPoint& a, const ExtPoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  return chordal_distance(a.value(), b.value());
}

RationalMap::RationalMap(ComplexPoly num, ComplexPoly den, const Tolerances& tol) {
  if (den.is_zero()) throw ZeroDenominator("RationalMap: zero denominator");
  if (num.is_zero()) {
    num_ = ComplexPoly{};
    den_ = ComplexPoly::constant(1.0);
    degree_ = 0;
    return;
  }
  if (num.degree() >= 1 && den.degree() >= 1) {
    const ComplexPoly g = gcd_approx(num, den, tol);
    if (g.degree() >= 1) {
      num = divmod(num, g).first;
      den = divmod(den, g).first;
    }
  }
  const cx lead = den.leading();
  num_ = (1.0 / lead) * num;
  den_ = (1.0 / lead) * den;
  degree_ = std::max(num_.degree(), den_.degree());
}

ExtPoint RationalMap::value_at_infinity() const {
  const int dn = num_.degree(), dd = den_.degree();
  if (dn > dd) return ExtPoint::infinity();
  if (dn < dd) return ExtPoint{cx{0.0}};
  return ExtPoint{num_.leading() / den_.leading()};
}

ExtPoint RationalMap::eval_ext(const ExtPoint& w, const Tolerances& tol) const {
  if (w.is_infinity()) return value_at_infinity();
  const cx x = w.value();
  const cx nv = num_(x), dv = den_(x);
  // Floors weighted by the argument magnitude so the test is scale-free.
  const double m = std::max(1.0, std::abs(x));
  double wn = num_.scale(), wd = den_.scale();
  for (int k = 0; k < num_.degree(); ++k) wn *= m;
  for (int k = 0; k < den_.degree(); ++k) wd *= m;
  const double fn = tol.normalization_floor_rel * std::max(wn, 1e-300);
  const double fd = tol.normalization_floor_rel * std::max(wd, 1e-300);
  if (std::abs(dv) <= fd) {
    if (std::abs(nv) <= fn)
      throw IndeterminateValue("eval_ext: numerator and denominator both vanish");
    return ExtPoint::infinity();
  }
  return ExtPoint{nv / dv};
}

RationalMap RationalMap::derivative(const Tolerances& tol) const {
  const ComplexPoly w = num_.derivative() * den_ - num_ * den_.derivative();
  return RationalMap(w, den_ * den_, tol);
}

RationalMap exterior_map(const RationalMap& phi, const Tolerances& tol) {
  if (phi.num().is_zero())
    throw ZeroDenominator("exterior_map: reflection of the zero map");
  const int len = phi.degree() + 1;
  ComplexPoly ne = phi.den().conjugated().reversed(len);
  ComplexPoly de = phi.num().conjugated().reversed(len);
  return RationalMap(std::move(ne), std::move(de), tol);
}

SphereRootSet fiber(const RationalMap& R, const ExtPoint& z, const Tolerances& tol) {
  if (R.degree() < 1) throw DegreeZero("fiber: map of degree >= 1 required");
  SphereRootSet out;
  ComplexPoly g;
  if (z.is_infinity()) {
    g = R.den();
  } else {
    g = R.num() - z.value() * R.den();
  }
  if (g.degree() >= 1) {
    const RootSet rs = roots(g, tol);
    for (size_t i = 0; i < rs.roots.size(); ++i) {
      out.points.push_back(ExtPoint{rs.roots[i]});
      out.residuals.push_back(rs.residuals[i]);
    }
  }
  // Degree deficiency of g puts the remaining preimages at infinity.
  const int missing = R.degree() - std::max(g.degree(), 0);
  for (int k = 0; k < missing; ++k) {
    out.points.push_back(ExtPoint::infinity());
    out.residuals.push_back(0.0);
  }

  const int m = static_cast<int>(out.points.size());
  std::vector<int> parent(static_cast<size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<size_t>(i)] != i) i = parent[static_cast<size_t>(i)];
    return i;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (chordal_distance(out.points[static_cast<size_t>(i)],
                           out.points[static_cast<size_t>(j)]) < tol.cluster_tol)
        parent[static_cast<size_t>(find(j))] = find(i);
  std::vector<std::vector<int>> groups(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) groups[static_cast<size_t>(find(i))].push_back(i);
  for (auto& grp : groups)
    if (!grp.empty()) out.multiplicity_clusters.push_back(std::move(grp));
  return out;
}

RegularValueCheck is_regular_value(const RationalMap& R, const ExtPoint& z,
                                   const Tolerances& tol) {
  const SphereRootSet f = fiber(R, z, tol);
  RegularValueCheck check;
  check.margin = 4.0;  // larger than the chordal diameter
  const size_t m = f.points.size();
  if (m == 1) {
    check.regular = true;
  } else {
    for (size_t i = 0; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j)
        check.margin = std::min(check.margin, chordal_distance(f.points[i], f.points[j]));
    check.regular = check.margin > tol.cluster_tol;
  }
  if (!check.regular) return check;

  // Derivative floor at finite fiber points; evaluated without reducing the
  // derivative map.  A pole of R' (possible when z is infinity) passes.
  const ComplexPoly w = R.num().derivative() * R.den() - R.num() * R.den().derivative();
  for (const ExtPoint& p : f.points) {
    if (p.is_infinity()) continue;
    const cx x = p.value();
    const cx dv = R.den()(x);
    if (std::abs(dv) < 1e-300) continue;  // pole of R: |R'| -> infinity
    const double deriv = std::abs(w(x)) / std::norm(dv);
    if (deriv <= tol.derivative_floor) {
      check.regular = false;
      check.margin = std::min(check.margin, deriv);
      return check;
    }
  }
  return check;
}

CriticalData critical_data(const RationalMap& R, const Tolerances& tol) {
  if (R.degree() < 1) throw DegreeZero("critical_data: map of degree >= 1 required");
  CriticalData out;
  const ComplexPoly w =
      R.num().derivative() * R.den() - R.num() * R.den().derivative();
  if (w.degree() >= 1) {
    const RootSet rs = roots(w, tol);
    for (const cx& r : rs.roots) out.critical_points.push_back(ExtPoint{r});
  }
  // Infinity is critical iff its fiber over R(inf) has multiplicity > 1,
  // read off the degree deficiency of num - R(inf) * den.
  const ExtPoint vinf = R.value_at_infinity();
  int mult_at_inf;
  if (vinf.is_infinity()) {
    mult_at_inf = R.num().degree() - R.den().degree();
  } else {
    const ComplexPoly h = R.num() - vinf.value() * R.den();
    mult_at_inf = R.degree() - std::max(h.degree(), 0);
  }
  if (mult_at_inf >= 2) out.critical_points.push_back(ExtPoint::infinity());

  for (const ExtPoint& p : out.critical_points) {
    const ExtPoint v = p.is_infinity() ? vinf : R.eval_ext(p, tol);
    bool placed = false;
    for (auto& cv : out.critical_values) {
      if (chordal_distance(cv.value, v) < tol.cluster_tol) {
        cv.witnesses.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) out.critical_values.push_back({v, {p}});
  }
  return out;
}

DiscCertificate is_self_map_of_disc(const RationalMap& phi, const Tolerances& tol) {
  DiscCertificate cert;
  cert.grid = tol.boundary_grid;
  if (phi.den().degree() >= 1) {
    const RootSet poles = roots(phi.den(), tol);
    for (const cx& p : poles.roots) {
      if (std::abs(p) <= 1.0 + tol.cluster_tol) {
        cert.diagnostic = "pole inside or on the closed unit disc";
        return cert;
      }
    }
  }
  double worst = 0.0;
  for (int k = 0; k < tol.boundary_grid; ++k) {
    const cx z = std::polar(1.0, 2.0 * M_PI * k / tol.boundary_grid);
    worst = std::max(worst, std::abs(phi.num()(z) / phi.den()(z)));
  }
  cert.max_boundary_modulus = worst;
  if (worst > 1.0 + tol.boundary_tol) {
    cert.diagnostic = "boundary modulus exceeds 1";
    return cert;
  }
  if (phi.degree() == 0 && std::abs(phi.num().coeff(0) / phi.den().coeff(0)) >= 1.0) {
    cert.diagnostic = "constant of modulus >= 1";
    return cert;
  }
  cert.is_self_map = true;
  return cert;
}

}  // namespace hmr
