#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmr/config.hpp"
#include "hmr/hardy.hpp"
#include "hmr/rational_map.hpp"

namespace hmr {

// Fiber of the exterior map over a point z of the open disc, prepared for
// the adjoint formulas: the points w_j = sigma_j(z) all lie inside the disc,
// are pairwise distinct, and carry the derivative phi_e'(w_j) (so the branch
// derivative is sigma_j'(z) = 1 / phi_e'(w_j)).  labels are stable branch
// ids: canonical (sorted) at a base point, transported by continuation
// otherwise.
struct PreimageFiber {
  cx z;
  std::vector<cx> points;
  std::vector<cx> deriv;    // phi_e'(w_j)
  std::vector<int> labels;
  double margin = 0.0;      // min pairwise distance between fiber points
  double max_residual = 0.0;
};

// Compute the fiber of phi_e over z with Newton polish and the full set of
// admissibility checks: |z| < 1 (DomainViolation), all points inside the
// disc (FiberEscape), pairwise distinct with healthy derivatives
// (NotRegularValue), residuals below fiber_residual_tol (NonConvergence).
PreimageFiber preimage_fiber(const RationalMap& phi_e, cx z,
                             const Tolerances& tol = default_tolerances());

// Generalized fiber for continuation: any finite regular value of any
// rational map, points on the sphere, no disc containment demanded.
struct TrackedFiber {
  cx z;
  std::vector<ExtPoint> points;
  std::vector<int> labels;
  double margin = 0.0;  // min pairwise chordal distance
};
TrackedFiber tracked_fiber(const RationalMap& R, cx z,
                           const Tolerances& tol = default_tolerances());

// Transport a labeled fiber along a piecewise-linear path.  Each step is
// accepted only when the nearest-point matching is unambiguous: the matching
// margin must exceed continuation_safety times the step motion bound,
// otherwise the step bisects (up to continuation_max_depth).  Throws
// PathThroughCriticalValue when a path point is not regular and
// MatchingAmbiguity when bisection cannot separate the branches.
TrackedFiber continue_fiber(const RationalMap& R, const TrackedFiber& from, cx to,
                            const Tolerances& tol = default_tolerances());
TrackedFiber continue_along(const RationalMap& R, TrackedFiber start,
                            std::span<const cx> path,
                            const Tolerances& tol = default_tolerances());

// PreimageFiber-typed wrapper (path inside the disc) for the adjoint layer.
PreimageFiber continue_branch(const RationalMap& phi_e, const PreimageFiber& start,
                              std::span<const cx> path,
                              const Tolerances& tol = default_tolerances());

// Branch permutation around a loop: the circle of the given radius about
// `center`, traversed counterclockwise from `base` (which must sit on the
// circle), discretized into `steps` arcs with adaptive bisection on top.
// permutation[l] = m means the branch starting with label l ends the loop at
// the starting position of label m.
struct MonodromyResult {
  std::vector<int> permutation;
  double return_error = 0.0;  // max chordal distance between the returned
                              // fiber and the initial one, as sets
  cx base;
};
MonodromyResult monodromy(const RationalMap& R, cx base, cx center, double radius,
                          int steps = 64, const Tolerances& tol = default_tolerances());
std::string cycle_notation(const std::vector<int>& permutation);

enum class AdjointForm { thm, cor, bs };
const char* to_string(AdjointForm f);

// One adjoint evaluation with its term breakdown: value = lambda_term +
// sum(branch_terms) by construction.
struct AdjointEvaluation {
  cx z;
  cx value;
  AdjointForm form_used = AdjointForm::bs;
  cx lambda_term;
  std::vector<cx> branch_terms;   // aligned with branch_points
  std::vector<cx> branch_points;  // sigma_j(z)
  bool near_pole = false;      // within 10 * pole_guard of 1/conj(phi(inf))
  bool near_critical = false;  // fiber margin below near_critical_margin
  double regularity_margin = 0.0;
};

// Shared state for evaluating the adjoint of a composition operator with a
// fixed rational symbol: certifies the symbol once, precomputes the exterior
// map and the derivative numerators, and exposes the three formula variants.
//
//   thm  value = f(0)/(1 - conj(phi(inf)) z) + z sum_j sigma_j'/sigma_j f(sigma_j)
//        (lambda term absent when phi(inf) = inf); refuses the guard disc
//        around 1/conj(phi(inf)).
//   cor  same lambda, branch sum rearranged over fiber points:
//        z sum_w f(w) / (w phi_e'(w)); same guard.
//   bs   value = f(0)/(1 - conj(phi(0)) z) + z sum_j sigma_j' (Bf)(sigma_j)
//        with B the backward shift; finite at the guarded pole, so no guard.
//
// All variants return f(0) exactly at z = 0.
class AdjointEvaluator {
 public:
  explicit AdjointEvaluator(RationalMap phi,
                            const Tolerances& tol = default_tolerances());

  const RationalMap& map() const { return phi_; }
  const RationalMap& exterior() const { return phi_e_; }
  const Tolerances& tolerances() const { return tol_; }
  cx phi_at_zero() const { return phi0_; }
  ExtPoint phi_at_infinity() const { return phi_inf_; }
  const DiscCertificate& certificate() const { return cert_; }
  // 1/conj(phi(inf)) when phi(inf) is finite and nonzero; the thm and cor
  // variants keep a guard disc around it.
  std::optional<cx> guarded_pole() const { return guarded_pole_; }
  // Critical values of the exterior map (finite ones), for condition flags.
  const std::vector<cx>& exterior_critical_values() const { return ext_cv_; }
  double distance_to_exterior_critical_values(cx z) const;

  cx eval_phi_e_derivative(cx w) const;
  cx eval_phi_derivative(cx w) const;

  PreimageFiber fiber_at(cx z) const { return preimage_fiber(phi_e_, z, tol_); }

  AdjointEvaluation eval(const HardyPoly& f, cx z, AdjointForm form) const;
  AdjointEvaluation eval_thm(const HardyPoly& f, cx z) const;
  AdjointEvaluation eval_cor(const HardyPoly& f, cx z) const;
  AdjointEvaluation eval_bs(const HardyPoly& f, cx z) const;
  // bs inside 10 * pole_guard of the guarded pole, cor elsewhere.
  AdjointEvaluation eval_auto(const HardyPoly& f, cx z) const;

  // Fiber-reusing variants for callers that evaluate many f at one z.
  AdjointEvaluation eval_thm(const HardyPoly& f, const PreimageFiber& fib) const;
  AdjointEvaluation eval_cor(const HardyPoly& f, const PreimageFiber& fib) const;
  AdjointEvaluation eval_bs(const HardyPoly& f, const PreimageFiber& fib) const;

  // sum_j sigma_j'(z) (Bf)(sigma_j(z)) for f with f(0) = 0; the analytic
  // completion of C_phi* f(z) / z, valid at every regular z of the closed
  // formula including 1/conj(phi(inf)) and 0.
  cx omega(const HardyPoly& f, cx z) const;

  // | [1/(1 - conj(phi(0)) z) - 1/(1 - conj(phi(inf)) z)] -
  //   z sum_w 1/(w phi_e'(w)) |; the second kernel term is dropped when
  // phi(inf) = inf.  A closed-form identity, so the residual is pure
  // floating-point noise at regular z.
  double amusing_identity_residual(cx z) const;

 private:
  AdjointEvaluation assemble(const HardyPoly& f, const PreimageFiber& fib,
                             AdjointForm form) const;
  void guard_check(cx z, const PreimageFiber& fib) const;

  RationalMap phi_, phi_e_;
  ComplexPoly dnum_, dnum_e_;  // derivative numerators num' den - num den'
  Tolerances tol_;
  DiscCertificate cert_;
  cx phi0_;
  ExtPoint phi_inf_;
  std::optional<cx> guarded_pole_;
  std::vector<cx> ext_cv_;
};

// One-shot conveniences mirroring the evaluator methods.
AdjointEvaluation hmr_eval_thm(const RationalMap& phi, const HardyPoly& f, cx z,
                               const Tolerances& tol = default_tolerances());
AdjointEvaluation hmr_eval_cor(const RationalMap& phi, const HardyPoly& f, cx z,
                               const Tolerances& tol = default_tolerances());
AdjointEvaluation hmr_eval_bs(const RationalMap& phi, const HardyPoly& f, cx z,
                              const Tolerances& tol = default_tolerances());
cx omega_eval(const RationalMap& phi, const HardyPoly& f, cx z,
              const Tolerances& tol = default_tolerances());
double amusing_identity_residual(const RationalMap& phi, cx z,
                                 const Tolerances& tol = default_tolerances());

// Partial-fraction expansion of w -> 1/(1 - conj(z) phi(w)): constant part
// alpha = 1/(1 - conj(z) phi(inf)), simple poles at the reflections
// w_j = 1/conj(sigma_j(z)) with residues beta_j = -1/(conj(z) phi'(w_j)).
// Requires phi(inf) finite and z nonzero.
struct PartialFraction {
  cx alpha;
  std::vector<cx> poles;
  std::vector<cx> residues;
  cx operator()(cx w) const;
};
PartialFraction kernel_partial_fraction(const AdjointEvaluator& ev, cx z);

}  // namespace hmr
