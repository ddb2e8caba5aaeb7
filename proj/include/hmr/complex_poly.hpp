#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hmr/config.hpp"

namespace hmr {

using cx = std::complex<double>;

// Polynomial with complex coefficients stored in ascending order.  The zero
// polynomial has an empty coefficient vector.  Construction strips trailing
// coefficients that fall below the relative normalization floor, so degree()
// reflects the numerically meaningful degree.
class ComplexPoly {
 public:
  ComplexPoly() = default;  // zero polynomial
  explicit ComplexPoly(std::vector<cx> coeffs,
                       double floor_rel = default_tolerances().normalization_floor_rel);

  static ComplexPoly constant(cx a);
  static ComplexPoly monomial(int k, cx a = 1.0);
  static ComplexPoly from_roots(std::span<const cx> roots, cx leading = 1.0);

  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  cx leading() const { return coeffs_.empty() ? cx{0.0} : coeffs_.back(); }
  // Coefficient of z^k; zero beyond the degree.
  cx coeff(int k) const;
  std::span<const cx> coeffs() const { return coeffs_; }
  // max_k |c_k|; zero for the zero polynomial.
  double scale() const;

  cx operator()(cx z) const;  // Horner
  // Value and derivative in one pass.
  std::pair<cx, cx> eval_with_derivative(cx z) const;

  ComplexPoly derivative() const;
  ComplexPoly conjugated() const;  // conjugate each coefficient
  // Coefficients padded with zeros to `length`, then reversed.  The core of
  // the exterior-map construction.
  ComplexPoly reversed(int length) const;

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(cx s, const ComplexPoly& p);
  friend ComplexPoly operator*(const ComplexPoly& p, cx s) { return s * p; }

 private:
  std::vector<cx> coeffs_;
};

// Result of the simultaneous root iteration.  Roots are sorted by real part,
// then imaginary part.  residuals[i] is the backward error
// |p(r_i)| / (scale * max(1,|r_i|)^deg).  multiplicity_clusters partitions
// the index range into groups closer than cluster_tol (singletons included),
// so the group sizes always sum to the degree.
struct RootSet {
  std::vector<cx> roots;
  std::vector<double> residuals;
  std::vector<std::vector<int>> multiplicity_clusters;
};

// All complex roots, with multiplicity, via Aberth-Ehrlich simultaneous
// iteration (initial guesses on a scaled circle, Newton polish, residual
// certificate).  Throws DegreeZero for constants and NonConvergence when a
// residual stays above root_residual_tol.
RootSet roots(const ComplexPoly& p, const Tolerances& tol = default_tolerances());

// Monic approximate gcd by root matching: roots of p and q are paired when
// closer than gcd_match_tol (scaled by root magnitude) and the gcd is rebuilt
// from the midpoints of matched pairs.  Returns 1 when nothing matches or
// either argument is constant.  Requires not both arguments zero.
ComplexPoly gcd_approx(const ComplexPoly& p, const ComplexPoly& q,
                       const Tolerances& tol = default_tolerances());

// Euclidean division p = q * g + r with deg r < deg g.  g must be nonzero.
std::pair<ComplexPoly, ComplexPoly> divmod(const ComplexPoly& p, const ComplexPoly& g);

}  // namespace hmr
