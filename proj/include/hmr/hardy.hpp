#pragma once

#include <span>
#include <vector>

#include "hmr/complex_poly.hpp"
#include "hmr/config.hpp"
#include "hmr/rational_map.hpp"

namespace hmr {

// Analytic polynomial viewed as an element of the Hardy space: Taylor
// coefficients f_hat(0..N) in ascending order.  Coefficients are stored as
// given (no floor stripping) so exact comparisons behave predictably.
class HardyPoly {
 public:
  HardyPoly() = default;
  explicit HardyPoly(std::vector<cx> coeffs) : c_(std::move(coeffs)) {}
  static HardyPoly monomial(int n, cx a = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  cx coeff(int n) const {
    return (n < 0 || n >= static_cast<int>(c_.size())) ? cx{0.0} : c_[static_cast<size_t>(n)];
  }
  std::span<const cx> coeffs() const { return c_; }
  cx operator()(cx z) const;
  double norm() const;  // Hardy norm: sqrt(sum |f_hat(n)|^2)

  friend HardyPoly operator+(const HardyPoly& a, const HardyPoly& b);
  friend HardyPoly operator*(cx s, const HardyPoly& f);

 private:
  std::vector<cx> c_;
};

// <f,g> = sum f_hat(n) conj(g_hat(n)).
cx inner_product(const HardyPoly& f, const HardyPoly& g);

// First N+1 Taylor coefficients of the reproducing kernel K_z(w) =
// 1/(1 - conj(z) w), i.e. conj(z)^n.  Requires |z| < 1.
HardyPoly kernel_coeffs(cx z, int N);

HardyPoly backward_shift(const HardyPoly& f);  // (f(w) - f(0)) / w
HardyPoly forward_shift(const HardyPoly& f);   // w * f(w)

// First N+1 coefficients of num/den by power-series division; requires
// den(0) bounded away from zero (PoleAtOrigin otherwise).
std::vector<cx> power_series_div(const ComplexPoly& num, const ComplexPoly& den,
                                 int N, const Tolerances& tol = default_tolerances());

// Taylor polynomial of the map at the origin.
HardyPoly taylor_of_rational(const RationalMap& R, int N,
                             const Tolerances& tol = default_tolerances());

// Adjoint value straight from the reproducing identity: C_phi* f(z) =
// <f, K_z . phi> = sum_n f_hat(n) conj(t_n), where t is the Taylor expansion
// of 1/(1 - conj(z) phi(w)) = den / (den - conj(z) num).  Exact for
// polynomial f up to the series-division rounding, with no fibers, branches,
// or root-finding involved; this is the reference all formula variants are
// checked against.  Requires |z| < 1 and phi a self-map of the disc.
cx adjoint_oracle(const RationalMap& phi, const HardyPoly& f, cx z,
                  const Tolerances& tol = default_tolerances());

}  // namespace hmr
