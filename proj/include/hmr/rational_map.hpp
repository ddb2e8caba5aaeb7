#pragma once

#include <string>
#include <vector>

#include "hmr/complex_poly.hpp"
#include "hmr/config.hpp"

namespace hmr {

// A point of the Riemann sphere: either a finite complex number or infinity.
class ExtPoint {
 public:
  ExtPoint() : v_{0.0}, inf_(false) {}
  explicit ExtPoint(cx v) : v_(v), inf_(false) {}
  static ExtPoint infinity() {
    ExtPoint p;
    p.inf_ = true;
    return p;
  }
  bool is_infinity() const { return inf_; }
  // Finite value; calling this on infinity is a bug.
  cx value() const { return v_; }

 private:
  cx v_;
  bool inf_;
};

// Chordal metric on the sphere (diameter 2); the only distance that treats
// infinity like any other point.
double chordal_distance(const ExtPoint& a, const ExtPoint& b);
double chordal_distance(cx a, cx b);

// Reduced rational map num/den with a monic denominator.  Construction
// divides out the approximate gcd and rescales, so the stored pair is
// relatively prime up to gcd_match_tol.  degree() = max(deg num, deg den).
class RationalMap {
 public:
  RationalMap(ComplexPoly num, ComplexPoly den,
              const Tolerances& tol = default_tolerances());

  const ComplexPoly& num() const { return num_; }
  const ComplexPoly& den() const { return den_; }
  int degree() const { return degree_; }

  // Plain quotient; may overflow near poles.  Use eval_ext for pole-aware
  // evaluation.
  cx eval(cx w) const { return num_(w) / den_(w); }
  ExtPoint eval_ext(const ExtPoint& w, const Tolerances& tol = default_tolerances()) const;
  ExtPoint value_at_infinity() const;

  // Reduced derivative map (num' den - num den') / den^2.
  RationalMap derivative(const Tolerances& tol = default_tolerances()) const;

 private:
  ComplexPoly num_, den_;
  int degree_ = 0;
};

// Exterior map rho . phi . rho with rho(z) = 1/conj(z): coefficient-reversal
// and conjugation of the padded pair, so phi_e = rev(conj(den)) / rev(conj(num)).
// Involutive up to the monic normalization; degree is preserved.
RationalMap exterior_map(const RationalMap& phi,
                         const Tolerances& tol = default_tolerances());

// Full preimage of z counted with multiplicity: exactly degree() points of
// the sphere, with residuals for the finite ones and chordal clustering.
struct SphereRootSet {
  std::vector<ExtPoint> points;
  std::vector<double> residuals;  // backward error; 0 for points at infinity
  std::vector<std::vector<int>> multiplicity_clusters;
};
SphereRootSet fiber(const RationalMap& R, const ExtPoint& z,
                    const Tolerances& tol = default_tolerances());

struct RegularValueCheck {
  bool regular = false;
  double margin = 0.0;  // min pairwise chordal distance within the fiber
};
// z is regular when its fiber has degree() distinct points (pairwise chordal
// distance above cluster_tol) and |R'| clears the derivative floor at every
// finite fiber point.
RegularValueCheck is_regular_value(const RationalMap& R, const ExtPoint& z,
                                   const Tolerances& tol = default_tolerances());

// Critical points (roots of num' den - num den' before reduction, plus
// infinity when its fiber multiplicity exceeds 1) and their images,
// deduplicated by chordal clustering with witnesses.
struct CriticalData {
  std::vector<ExtPoint> critical_points;
  struct Value {
    ExtPoint value;
    std::vector<ExtPoint> witnesses;
  };
  std::vector<Value> critical_values;
};
CriticalData critical_data(const RationalMap& R,
                           const Tolerances& tol = default_tolerances());

// Certificate that phi maps the open unit disc into itself: no poles in the
// closed disc and boundary modulus <= 1 + boundary_tol on the sample grid
// (by the maximum principle this certifies the open-disc property at grid
// resolution).
struct DiscCertificate {
  bool is_self_map = false;
  double max_boundary_modulus = 0.0;
  int grid = 0;
  std::string diagnostic;
};
DiscCertificate is_self_map_of_disc(const RationalMap& phi,
                                    const Tolerances& tol = default_tolerances());

}  // namespace hmr
