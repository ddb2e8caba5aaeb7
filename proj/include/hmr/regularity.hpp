#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hmr/adjoint.hpp"
#include "hmr/config.hpp"
#include "hmr/rational_map.hpp"

namespace hmr {

// Outer regularity: all critical values of the symbol lie inside the open
// unit disc (equivalently, every point of modulus >= 1 is a regular value).
// Strongly outer regular adds phi(inf) inside the disc.
enum class RegularityClass { StronglyOuterRegular, OuterRegular, NotOuterRegular };
const char* to_string(RegularityClass c);

enum class PointLocation { InDisc, OnCircle, OutsideDisc, AtInfinity };
const char* to_string(PointLocation l);
// Band test against the unit circle: moduli within `margin` of 1 report
// OnCircle rather than being forced to one side.
PointLocation locate(const ExtPoint& p, double margin);

// Pure modulus-band logic behind classify(), separated out so the
// fuzz band around |value| = 1 is testable on synthetic data.  Entries are
// critical-value moduli (+infinity allowed); indices land in `inside` when
// the modulus is < 1 - margin and in `outside_or_boundary` otherwise;
// `indeterminate` flags the subset inside the band [1 - margin, 1 + margin].
struct BandClassification {
  RegularityClass klass = RegularityClass::NotOuterRegular;
  std::vector<int> inside;
  std::vector<int> outside_or_boundary;
  std::vector<int> indeterminate;
};
BandClassification classify_moduli(std::span<const double> critical_value_moduli,
                                   double phi_at_infinity_modulus,
                                   double class_margin);

// True iff the symbol is a finite Blaschke product: |phi| stays within
// blaschke_tol of 1 on the boundary grid AND the zero/pole structure is
// reflective (every denominator root is the reflection 1/conj(a) of a
// numerator root, leftover numerator roots at the origin).  Assumes a
// certified self-map.
bool is_finite_blaschke(const RationalMap& phi,
                        const Tolerances& tol = default_tolerances());

// Points of the unit circle that the symbol maps to the unit circle.
// Finite Blaschke products map all of it; everything else gets a finite
// list found by a boundary-grid scan polished with Newton on
// d/dtheta |phi(e^{i theta})|^2.  Points are sorted by principal argument
// in [0, 2 pi).
struct BoundaryContacts {
  bool all_of_boundary = false;
  std::vector<cx> points;
};
BoundaryContacts boundary_contacts(const RationalMap& phi,
                                   const Tolerances& tol = default_tolerances());

struct RegularityReport {
  RegularityClass klass = RegularityClass::NotOuterRegular;
  std::vector<ExtPoint> critical_values_inside;
  std::vector<ExtPoint> critical_values_outside_or_boundary;
  // Critical values whose modulus falls in the fuzz band around 1; they are
  // counted as outside_or_boundary for classification but flagged here.
  std::vector<ExtPoint> indeterminate;
  ExtPoint phi_at_infinity;
  PointLocation phi_at_infinity_location = PointLocation::InDisc;
  bool is_blaschke = false;
  BoundaryContacts contacts;
  CriticalData critical;
};
// Certify the symbol, compute its critical data, and classify.  Throws
// CertificationFailure when the symbol is not a self-map of the disc.
RegularityReport classify(const RationalMap& phi,
                          const Tolerances& tol = default_tolerances());

// The two arrangements of the adjoint as lambda + branch summands:
//   BackwardShift  C_phi* = Lambda_0 + sum_j M_{h_j} C_{sigma_j} B,
//                  h_j(z) = z sigma_j'(z); legitimate iff outer regular.
//   Weighted       C_phi* = Lambda_inf + sum_j M_{g_j} C_{sigma_j},
//                  g_j(z) = z sigma_j'(z)/sigma_j(z); legitimate iff
//                  strongly outer regular.
enum class DecompositionForm { BackwardShift, Weighted };
const char* to_string(DecompositionForm f);

struct BranchSummand {
  int branch = 0;              // atlas label of sigma_j
  double sup_sigma = 0.0;      // sup over the boundary atlas of |sigma_j|
  double sup_weight = 0.0;     // sup of |h_j| (BackwardShift) or |g_j| (Weighted)
  bool weight_bounded = false;
  bool composition_compact = false;  // sup_sigma < 1 - compact_margin
  bool owns_boundary_contact = false;
};

struct DecompositionReport {
  DecompositionForm form = DecompositionForm::BackwardShift;
  RegularityClass klass = RegularityClass::NotOuterRegular;
  std::string lambda_kernel;   // which rank-one kernel the lambda term uses
  bool lambda_bounded = false;
  bool legitimate = false;     // equals the Theorem-level criterion for `form`
  // Whether transporting the fiber once around the atlas ring returns every
  // branch to itself; false means the branches are only locally defined and
  // per-branch sups are sups over the whole cycle of sheets.
  bool branches_globally_defined = false;
  std::string ring_monodromy;  // cycle notation of the ring permutation
  std::vector<BranchSummand> summands;
  int atlas_points = 0;
  double atlas_radius = 0.0;
  double min_branch_separation = 0.0;  // over ring and pushed fibers
  std::optional<int> unique_noncompact_branch;
  std::string conclusion;
  std::vector<std::string> diagnostics;
};
// Build the branch atlas (fibers of the exterior map over |z| = 1 -
// atlas_eps, transported by continuation and pushed radially to |z| = 1),
// estimate per-branch sups, decide weight boundedness, attribute boundary
// contacts to branches, and assemble the compact-perturbation conclusion.
DecompositionReport decomposition_report(const RationalMap& phi, DecompositionForm form,
                                         const Tolerances& tol = default_tolerances());

// Random finite Blaschke product: `degree` zeros sampled area-uniformly in
// |a| < 0.9 and a random unimodular front factor.
RationalMap random_blaschke(std::mt19937_64& rng, int degree,
                            const Tolerances& tol = default_tolerances());

// Empirical check that finite Blaschke products of degree >= 2 are never
// outer regular: random products of degree 2..5, classified one by one.
struct BlaschkeCheckSummary {
  int trials = 0;
  int failures = 0;
  std::vector<std::string> diagnostics;  // one entry per failing trial
  bool pass = false;
};
BlaschkeCheckSummary blaschke_never_outer_regular_check(
    std::uint64_t seed, int trials, const Tolerances& tol = default_tolerances());

}  // namespace hmr
