#include "hmr/complex_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmr/errors.hpp"

namespace hmr {

namespace {

void strip_trailing(std::vector<cx>& c, double floor_rel) {
  double scale = 0.0;
  for (const cx& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    c.clear();
    return;
  }
  const double floor = floor_rel * scale;
  while (!c.empty() && std::abs(c.back()) <= floor) c.pop_back();
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<cx> coeffs, double floor_rel)
    : coeffs_(std::move(coeffs)) {
  strip_trailing(coeffs_, floor_rel);
}

ComplexPoly ComplexPoly::constant(cx a) { return ComplexPoly({a}); }

ComplexPoly ComplexPoly::monomial(int k, cx a) {
  std::vector<cx> c(static_cast<size_t>(k) + 1, cx{0.0});
  c.back() = a;
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::from_roots(std::span<const cx> roots, cx leading) {
  std::vector<cx> c{leading};
  for (const cx& r : roots) {
    c.push_back(cx{0.0});
    for (size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return ComplexPoly(std::move(c));
}

cx ComplexPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return cx{0.0};
  return coeffs_[static_cast<size_t>(k)];
}

double ComplexPoly::scale() const {
  double s = 0.0;
  for (const cx& v : coeffs_) s = std::max(s, std::abs(v));
  return s;
}

cx ComplexPoly::operator()(cx z) const {
  cx acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<cx, cx> ComplexPoly::eval_with_derivative(cx z) const {
  cx p{0.0}, dp{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

ComplexPoly ComplexPoly::derivative() const {
  if (coeffs_.size() <= 1) return ComplexPoly{};
  std::vector<cx> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::conjugated() const {
  std::vector<cx> c(coeffs_.size());
  for (size_t k = 0; k < coeffs_.size(); ++k) c[k] = std::conj(coeffs_[k]);
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::reversed(int length) const {
  std::vector<cx> c(static_cast<size_t>(length), cx{0.0});
  for (size_t k = 0; k < coeffs_.size() && k < c.size(); ++k) c[k] = coeffs_[k];
  std::reverse(c.begin(), c.end());
  return ComplexPoly(std::move(c));
}

ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<cx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cx{0.0});
  for (size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return ComplexPoly(std::move(c));
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<cx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cx{0.0});
  for (size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
  return ComplexPoly(std::move(c));
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return ComplexPoly{};
  std::vector<cx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cx{0.0});
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return ComplexPoly(std::move(c));
}

ComplexPoly operator*(cx s, const ComplexPoly& p) {
  std::vector<cx> c(p.coeffs_.begin(), p.coeffs_.end());
  for (cx& v : c) v *= s;
  return ComplexPoly(std::move(c));
}

std::pair<ComplexPoly, ComplexPoly> divmod(const ComplexPoly& p, const ComplexPoly& g) {
  if (g.is_zero()) throw ZeroDenominator("divmod: divisor is zero");
  if (p.degree() < g.degree()) return {ComplexPoly{}, p};
  std::vector<cx> rem(p.coeffs().begin(), p.coeffs().end());
  const int dq = p.degree() - g.degree();
  std::vector<cx> quot(static_cast<size_t>(dq) + 1, cx{0.0});
  const cx glead = g.leading();
  for (int k = dq; k >= 0; --k) {
    const cx q = rem[static_cast<size_t>(k + g.degree())] / glead;
    quot[static_cast<size_t>(k)] = q;
    for (int j = 0; j <= g.degree(); ++j)
      rem[static_cast<size_t>(k + j)] -= q * g.coeff(j);
  }
  rem.resize(static_cast<size_t>(std::max(g.degree(), 0)));
  return {ComplexPoly(std::move(quot)), ComplexPoly(std::move(rem))};
}

namespace {

double backward_error(const ComplexPoly& p, cx r, double scale) {
  const double m = std::max(1.0, std::abs(r));
  double weight = scale;
  for (int k = 0; k < p.degree(); ++k) weight *= m;
  return std::abs(p(r)) / weight;
}

// Fujiwara-style bound on root magnitude; robust when the leading
// coefficient is small relative to the rest.
double initial_radius(std::span<const cx> c) {
  const size_t n = c.size() - 1;
  const double lead = std::abs(c[n]);
  double r = 0.0;
  for (size_t k = 0; k < n; ++k) {
    if (c[k] == cx{0.0}) continue;
    r = std::max(r, std::pow(std::abs(c[k]) / lead, 1.0 / static_cast<double>(n - k)));
  }
  return std::max(2.0 * r, 1e-8);
}

std::vector<cx> aberth(const std::vector<cx>& c, const Tolerances& tol) {
  const int n = static_cast<int>(c.size()) - 1;
  ComplexPoly p{std::vector<cx>(c), 0.0};
  const double r0 = initial_radius(c);
  std::vector<cx> z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Deterministic spread: equally spaced with an irrational phase offset so
    // symmetric polynomials do not start on their own symmetry axes.
    const double theta = 2.0 * M_PI * i / n + 0.7;
    const double rad = r0 * (0.8 + 0.2 * ((i % 3) / 3.0));
    z[static_cast<size_t>(i)] = std::polar(rad, theta);
  }
  for (int sweep = 0; sweep < tol.aberth_max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      auto [pv, dv] = p.eval_with_derivative(z[static_cast<size_t>(i)]);
      if (pv == cx{0.0}) continue;
      if (dv == cx{0.0}) dv = cx{1e-300};
      const cx newton = pv / dv;
      cx s{0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cx diff = z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
        if (diff == cx{0.0}) diff = cx{1e-12, 1e-12};
        s += 1.0 / diff;
      }
      cx denom = 1.0 - newton * s;
      if (denom == cx{0.0}) denom = cx{1e-300};
      const cx corr = newton / denom;
      z[static_cast<size_t>(i)] -= corr;
      worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[static_cast<size_t>(i)])));
    }
    if (worst < 1e-15) break;
  }
  // Newton polish where the derivative is healthy; clusters stay put.
  for (cx& r : z) {
    for (int step = 0; step < 3; ++step) {
      auto [pv, dv] = p.eval_with_derivative(r);
      if (std::abs(dv) < 1e-300) break;
      const cx next = r - pv / dv;
      if (std::abs(p(next)) < std::abs(pv)) r = next;
      else break;
    }
  }
  return z;
}

}  // namespace

RootSet roots(const ComplexPoly& p, const Tolerances& tol) {
  if (p.degree() < 1)
    throw DegreeZero("roots: polynomial of degree >= 1 required");
  const double scale = p.scale();
  const double floor = tol.normalization_floor_rel * scale;

  std::vector<cx> c(p.coeffs().begin(), p.coeffs().end());
  // Exact zero roots: low-order coefficients at the floor come off first.
  size_t nzero = 0;
  while (nzero < c.size() - 1 && std::abs(c[nzero]) <= floor) ++nzero;
  std::vector<cx> found(nzero, cx{0.0});

  std::vector<cx> work(c.begin() + static_cast<std::ptrdiff_t>(nzero), c.end());
  const int n = static_cast<int>(work.size()) - 1;
  if (n == 1) {
    found.push_back(-work[0] / work[1]);
  } else if (n > 1) {
    const std::vector<cx> z = aberth(work, tol);
    found.insert(found.end(), z.begin(), z.end());
  }

  std::sort(found.begin(), found.end(), [](const cx& a, const cx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  RootSet out;
  out.roots = std::move(found);
  out.residuals.reserve(out.roots.size());
  for (const cx& r : out.roots) {
    const double be = backward_error(p, r, scale);
    if (be > tol.root_residual_tol)
      throw NonConvergence("roots: residual " + std::to_string(be) +
                           " above tolerance");
    out.residuals.push_back(be);
  }

  // Union-find clustering at cluster_tol.
  const int m = static_cast<int>(out.roots.size());
  std::vector<int> parent(static_cast<size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<size_t>(i)] != i) i = parent[static_cast<size_t>(i)];
    return i;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(out.roots[static_cast<size_t>(i)] - out.roots[static_cast<size_t>(j)]) <
          tol.cluster_tol)
        parent[static_cast<size_t>(find(j))] = find(i);
  std::vector<std::vector<int>> groups(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) groups[static_cast<size_t>(find(i))].push_back(i);
  for (auto& g : groups)
    if (!g.empty()) out.multiplicity_clusters.push_back(std::move(g));
  return out;
}

ComplexPoly gcd_approx(const ComplexPoly& p, const ComplexPoly& q, const Tolerances& tol) {
  if (p.is_zero() && q.is_zero())
    throw DegreeZero("gcd_approx: both arguments zero");
  if (p.is_zero()) return (1.0 / q.leading()) * q;
  if (q.is_zero()) return (1.0 / p.leading()) * p;
  if (p.degree() < 1 || q.degree() < 1) return ComplexPoly::constant(1.0);

  const RootSet rp = roots(p, tol);
  const RootSet rq = roots(q, tol);
  const bool p_smaller = rp.roots.size() <= rq.roots.size();
  const std::vector<cx>& small = p_smaller ? rp.roots : rq.roots;
  const std::vector<cx>& large = p_smaller ? rq.roots : rp.roots;

  std::vector<bool> used(large.size(), false);
  std::vector<cx> common;
  for (const cx& r : small) {
    int best = -1;
    double bestd = 0.0;
    for (size_t j = 0; j < large.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(r - large[j]);
      if (best < 0 || d < bestd) {
        best = static_cast<int>(j);
        bestd = d;
      }
    }
    if (best >= 0 &&
        bestd <= tol.gcd_match_tol * (1.0 + std::abs(r) + std::abs(large[static_cast<size_t>(best)]))) {
      used[static_cast<size_t>(best)] = true;
      common.push_back(0.5 * (r + large[static_cast<size_t>(best)]));
    }
  }
  if (common.empty()) return ComplexPoly::constant(1.0);
  return ComplexPoly::from_roots(common);
}

}  // namespace hmr
