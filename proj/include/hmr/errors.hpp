#pragma once

#include <stdexcept>
#include <string>

namespace hmr {

// Iteration budget exhausted with residuals above tolerance.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires degree >= 1.
struct DegreeZero : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Denominator is the zero polynomial (or an exterior map was requested for
// the zero map).
struct ZeroDenominator : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerator and denominator both vanish at the evaluation point: the input
// survived reduction with a floor-level common factor.
struct IndeterminateValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the contract's domain (e.g. kernel point with |z| >= 1).
struct DomainViolation : std::domain_error {
  using std::domain_error::domain_error;
};

// Taylor expansion at 0 requested for a map with den(0) = 0.
struct PoleAtOrigin : std::domain_error {
  using std::domain_error::domain_error;
};

// Fiber points collide (or a branch derivative vanishes): z is not a
// regular value at the configured tolerances.
struct NotRegularValue : std::runtime_error {
  NotRegularValue(const std::string& what, double margin_)
      : std::runtime_error(what), margin(margin_) {}
  double margin = 0.0;
};

// A preimage landed outside the open unit disc where the adjoint formulas
// require it inside.
struct FiberEscape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point inside the guard disc around 1/conj(phi(inf)); the
// backward-shift form evaluates there instead.
struct PoleProximity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation defined on functions vanishing at 0 received f with f(0) != 0.
struct NotInH20 : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A continuation path ran into (or indistinguishably close to) a critical
// value.
struct PathThroughCriticalValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Branch matching stayed ambiguous after the maximum bisection depth.
struct MatchingAmbiguity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The map failed the self-map-of-the-disc certificate.
struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unparseable map specification (CLI input).
struct MapParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hmr
