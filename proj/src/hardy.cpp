#include "hmr/hardy.hpp"

#include <algorithm>
#include <cmath>

#include "hmr/errors.hpp"

namespace hmr {

HardyPoly HardyPoly::monomial(int n, cx a) {
  std::vector<cx> c(static_cast<size_t>(n) + 1, cx{0.0});
  c.back() = a;
  return HardyPoly(std::move(c));
}

cx HardyPoly::operator()(cx z) const {
  cx acc{0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double HardyPoly::norm() const {
  double s = 0.0;
  for (const cx& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

HardyPoly operator+(const HardyPoly& a, const HardyPoly& b) {
  std::vector<cx> c(std::max(a.c_.size(), b.c_.size()), cx{0.0});
  for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return HardyPoly(std::move(c));
}

HardyPoly operator*(cx s, const HardyPoly& f) {
  std::vector<cx> c(f.c_.begin(), f.c_.end());
  for (cx& v : c) v *= s;
  return HardyPoly(std::move(c));
}

cx inner_product(const HardyPoly& f, const HardyPoly& g) {
  const int n = std::min(f.degree(), g.degree());
  cx acc{0.0};
  for (int k = 0; k <= n; ++k) acc += f.coeff(k) * std::conj(g.coeff(k));
  return acc;
}

HardyPoly kernel_coeffs(cx z, int N) {
  if (std::abs(z) >= 1.0)
    throw DomainViolation("kernel_coeffs: |z| < 1 required");
  std::vector<cx> c(static_cast<size_t>(N) + 1);
  const cx zb = std::conj(z);
  cx pw{1.0};
  for (int n = 0; n <= N; ++n) {
    c[static_cast<size_t>(n)] = pw;
    pw *= zb;
  }
  return HardyPoly(std::move(c));
}

HardyPoly backward_shift(const HardyPoly& f) {
  if (f.degree() < 1) return HardyPoly{};
  std::vector<cx> c(f.coeffs().begin() + 1, f.coeffs().end());
  return HardyPoly(std::move(c));
}

HardyPoly forward_shift(const HardyPoly& f) {
  std::vector<cx> c(f.coeffs().size() + 1, cx{0.0});
  std::copy(f.coeffs().begin(), f.coeffs().end(), c.begin() + 1);
  return HardyPoly(std::move(c));
}

std::vector<cx> power_series_div(const ComplexPoly& num, const ComplexPoly& den,
                                 int N, const Tolerances& tol) {
  const cx d0 = den.coeff(0);
  if (std::abs(d0) <= tol.normalization_floor_rel * std::max(den.scale(), 1e-300))
    throw PoleAtOrigin("power_series_div: denominator vanishes at 0");
  std::vector<cx> t(static_cast<size_t>(N) + 1, cx{0.0});
  for (int n = 0; n <= N; ++n) {
    cx acc = num.coeff(n);
    const int top = std::min(n, den.degree());
    for (int k = 1; k <= top; ++k) acc -= den.coeff(k) * t[static_cast<size_t>(n - k)];
    t[static_cast<size_t>(n)] = acc / d0;
  }
  return t;
}

HardyPoly taylor_of_rational(const RationalMap& R, int N, const Tolerances& tol) {
  return HardyPoly(power_series_div(R.num(), R.den(), N, tol));
}

cx adjoint_oracle(const RationalMap& phi, const HardyPoly& f, cx z,
                  const Tolerances& tol) {
  if (std::abs(z) >= 1.0)
    throw DomainViolation("adjoint_oracle: |z| < 1 required");
  if (f.degree() < 0) return cx{0.0};
  // 1/(1 - conj(z) phi) = den / (den - conj(z) num); only the first
  // deg(f) + 1 coefficients contribute to the pairing with f.
  const ComplexPoly d = phi.den() - std::conj(z) * phi.num();
  const std::vector<cx> t = power_series_div(phi.den(), d, f.degree(), tol);
  cx acc{0.0};
  for (int n = 0; n <= f.degree(); ++n)
    acc += f.coeff(n) * std::conj(t[static_cast<size_t>(n)]);
  return acc;
}

}  // namespace hmr
