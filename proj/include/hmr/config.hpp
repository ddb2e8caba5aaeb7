#pragma once

namespace hmr {

// Numerical policy for the whole library.  Defaults target low-degree,
// well-conditioned maps (degree <= ~12) in double precision; every routine
// that makes a tolerance-based decision takes one of these by const reference
// so tests and the CLI can tighten or relax knobs without recompiling.
struct Tolerances {
  // Trailing coefficients below normalization_floor_rel * max|coeff| are
  // treated as zero when a polynomial is constructed.
  double normalization_floor_rel = 1e-13;

  // A root certificate requires backward error <= root_residual_tol,
  // where backward error is |p(r)| / (scale * max(1,|r|)^deg).
  double root_residual_tol = 1e-10;

  // Roots (or fiber points) closer than this count as one point with
  // multiplicity.  Double roots split by ~sqrt(eps) under perturbation,
  // which lands safely below this threshold; triple and higher clusters
  // can split wider and may be reported as distinct.
  double cluster_tol = 1e-7;

  // Root-matching distance used when extracting an approximate gcd.
  double gcd_match_tol = 1e-7;

  // Simultaneous-iteration budget for the root finder.
  int aberth_max_sweeps = 200;

  // Coefficient reconstruction check: |rebuilt - original| <= tol * scale.
  double reconstruction_tol = 1e-8;

  // Quantities smaller than this are considered vanishing derivatives or
  // fiber points too close to the origin for the quotient forms.
  double derivative_floor = 1e-10;

  // A preimage w of z must satisfy |phi_e(w) - z| below this bound.
  double fiber_residual_tol = 1e-10;

  // Formula variants with the 1/(1 - conj(phi(inf)) z) term refuse to
  // evaluate closer than this to the guarded pole 1/conj(phi(inf)).
  double pole_guard = 1e-4;

  // Evaluations whose fiber-separation margin falls below this carry a
  // near_critical condition flag (they still evaluate).
  double near_critical_margin = 1e-5;

  // Branch continuation accepts a step only when the matching margin
  // exceeds continuation_safety * (step motion bound); otherwise the step
  // is bisected, up to continuation_max_depth levels.
  double continuation_safety = 3.0;
  int continuation_max_depth = 20;

  // Unit-circle sample count for the self-map certificate, and the slack
  // allowed above modulus 1 at grid resolution.
  int boundary_grid = 4096;
  double boundary_tol = 1e-9;

  // Boundary-contact search: grid size, and how close to modulus 1 a
  // polished local maximum must come to count as a contact.
  int contact_grid = 8192;
  double contact_tol = 1e-7;

  // Classification margin: critical values with modulus inside
  // [1 - class_margin, 1 + class_margin] are flagged indeterminate.
  double class_margin = 1e-8;

  // A branch with sup|sigma_j| < 1 - compact_margin yields a compact
  // composition operator.
  double compact_margin = 1e-6;

  // Finite-Blaschke test: allowed deviation of |phi| from 1 on the circle,
  // and the zero/pole reflection matching distance.
  double blaschke_tol = 1e-9;
  double blaschke_match_tol = 1e-7;

  // Branch atlas for decomposition reports: fibers over |z| = 1 - atlas_eps
  // at atlas_grid angles, transported by continuation and pushed radially
  // to |z| = 1 for the sup estimates.
  double atlas_eps = 1e-3;
  int atlas_grid = 1024;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace hmr
