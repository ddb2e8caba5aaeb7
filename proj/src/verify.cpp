#include "hmr/verify.hpp"

#include <algorithm>
#include <cmath>

#include "hmr/errors.hpp"
#include "hmr/hardy.hpp"
#include "hmr/rng.hpp"

namespace hmr {

namespace {

HardyPoly random_poly(std::mt19937_64& rng, int max_degree) {
  const int deg = static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree + 1));
  std::vector<cx> c(static_cast<size_t>(deg) + 1);
  for (auto& a : c) {
    const double re = 2.0 * uniform01(rng) - 1.0;
    const double im = 2.0 * uniform01(rng) - 1.0;
    a = cx{re, im};
  }
  return HardyPoly(std::move(c));
}

// Regular point of the open disc, kept a little off the boundary, off the
// critical values of the exterior map, and (optionally) out of the guard
// disc around 1/conj(phi(inf)).
cx sample_regular_z(const AdjointEvaluator& ev, std::mt19937_64& rng, bool avoid_guard) {
  const Tolerances& tol = ev.tolerances();
  for (int attempt = 0; attempt < 512; ++attempt) {
    const double radius = 0.95 * std::sqrt(uniform01(rng));
    const cx z = std::polar(radius, 2.0 * M_PI * uniform01(rng));
    if (avoid_guard && ev.guarded_pole() &&
        std::abs(z - *ev.guarded_pole()) < 10.0 * tol.pole_guard)
      continue;
    try {
      const PreimageFiber fib = ev.fiber_at(z);
      if (fib.margin <= tol.cluster_tol) continue;
      bool origin_ok = true;
      if (avoid_guard)
        for (const cx& w : fib.points)
          if (std::abs(w) <= tol.derivative_floor) origin_ok = false;
      if (!origin_ok) continue;
    } catch (const std::exception&) {
      continue;
    }
    return z;
  }
  throw NonConvergence("verify: could not sample a regular evaluation point");
}

}  // namespace

VerifySummary run_verify(const RationalMap& phi, std::uint64_t seed, int trials,
                         const std::string& map_name, const Tolerances& tol) {
  VerifySummary sum;
  sum.map_name = map_name;
  sum.seed = seed;
  sum.trials = trials;

  const AdjointEvaluator ev(phi, tol);

  // Three arrangements of the same formula must agree to rounding.
  {
    SuiteResult s;
    s.name = "three_form_agreement";
    s.tol = 1e-11;
    std::mt19937_64 rng(seed ^ 0x1001);
    for (int t = 0; t < trials; ++t) {
      const HardyPoly f = random_poly(rng, 16);
      const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/true);
      const PreimageFiber fib = ev.fiber_at(z);
      const cx a = ev.eval_thm(f, fib).value;
      const cx b = ev.eval_cor(f, fib).value;
      const cx c = ev.eval_bs(f, fib).value;
      const double scale = 1.0 + std::abs(b);
      s.max_err = std::max({s.max_err, std::abs(a - b) / scale, std::abs(c - b) / scale});
      ++s.cases;
    }
    s.pass = s.max_err <= s.tol;
    sum.suites.push_back(std::move(s));
  }

  // The closed formula against the truncated-series oracle.
  {
    SuiteResult s;
    s.name = "oracle_agreement";
    s.tol = 1e-9;
    s.note = "tolerance relaxed to 1e-7 within 1e-3 of an exterior critical value";
    std::mt19937_64 rng(seed ^ 0x2002);
    bool ok = true;
    for (int t = 0; t < trials; ++t) {
      const HardyPoly f = random_poly(rng, 16);
      const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/true);
      const cx v = ev.eval_auto(f, z).value;
      const cx o = adjoint_oracle(phi, f, z, tol);
      const double err = std::abs(v - o) / (1.0 + std::abs(o));
      const double case_tol =
          ev.distance_to_exterior_critical_values(z) < 1e-3 ? 1e-7 : s.tol;
      if (err > case_tol) ok = false;
      s.max_err = std::max(s.max_err, err);
      ++s.cases;
    }
    s.pass = ok;
    sum.suites.push_back(std::move(s));
  }

  // All three arrangements return exactly f(0) at z = 0.
  {
    SuiteResult s;
    s.name = "value_at_zero";
    s.tol = 0.0;
    std::mt19937_64 rng(seed ^ 0x3003);
    for (int t = 0; t < trials; ++t) {
      const HardyPoly f = random_poly(rng, 16);
      for (const AdjointForm form :
           {AdjointForm::thm, AdjointForm::cor, AdjointForm::bs}) {
        const cx v = ev.eval(f, cx{0.0}, form).value;
        s.max_err = std::max(s.max_err, std::abs(v - f.coeff(0)));
        ++s.cases;
      }
    }
    s.pass = s.max_err == 0.0;
    sum.suites.push_back(std::move(s));
  }

  // f = 1 collapses the formula to the reproducing kernel at phi(0).
  {
    SuiteResult s;
    s.name = "constant_function";
    s.tol = 1e-12;
    std::mt19937_64 rng(seed ^ 0x4004);
    const HardyPoly one(std::vector<cx>{cx{1.0}});
    for (int t = 0; t < trials; ++t) {
      const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/true);
      const cx v = ev.eval_auto(one, z).value;
      const cx expected = 1.0 / (1.0 - std::conj(ev.phi_at_zero()) * z);
      s.max_err = std::max(s.max_err, std::abs(v - expected) / (1.0 + std::abs(expected)));
      ++s.cases;
    }
    s.pass = s.max_err <= s.tol;
    sum.suites.push_back(std::move(s));
  }

  // The two-kernel identity holds in closed form at regular points.
  {
    SuiteResult s;
    s.name = "amusing_identity";
    s.tol = 1e-10;
    std::mt19937_64 rng(seed ^ 0x5005);
    for (int t = 0; t < trials; ++t) {
      const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/true);
      s.max_err = std::max(s.max_err, ev.amusing_identity_residual(z));
      ++s.cases;
    }
    s.pass = s.max_err <= s.tol;
    sum.suites.push_back(std::move(s));
  }

  // Partial-fraction expansion of w -> 1/(1 - conj(z) phi(w)).
  {
    SuiteResult s;
    s.name = "partial_fraction";
    s.tol = 1e-10;
    if (ev.phi_at_infinity().is_infinity()) {
      s.pass = true;
      s.note = "skipped: phi(inf) = inf, no constant term to expand around";
    } else {
      std::mt19937_64 rng(seed ^ 0x6006);
      for (int t = 0; t < trials; ++t) {
        const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/true);
        const PartialFraction pf = kernel_partial_fraction(ev, z);
        for (int k = 0; k < 20; ++k) {
          const cx w = std::polar(3.0 * std::sqrt(uniform01(rng)),
                                  2.0 * M_PI * uniform01(rng));
          bool near_pole = false;
          for (const cx& p : pf.poles)
            if (std::abs(w - p) < 0.1) near_pole = true;
          if (near_pole) continue;
          const cx direct = 1.0 / (1.0 - std::conj(z) * phi.eval(w));
          const double err = std::abs(pf(w) - direct) / (1.0 + std::abs(direct));
          s.max_err = std::max(s.max_err, err);
          ++s.cases;
        }
      }
      s.pass = s.max_err <= s.tol;
    }
    sum.suites.push_back(std::move(s));
  }

  // Every fiber point of the exterior map over U stays inside U.
  {
    SuiteResult s;
    s.name = "fiber_containment";
    s.tol = 1.0;
    s.note = "max_err is the largest fiber-point modulus; must stay below 1";
    std::mt19937_64 rng(seed ^ 0x7007);
    for (int t = 0; t < trials; ++t) {
      const cx z = sample_regular_z(ev, rng, /*avoid_guard=*/false);
      const PreimageFiber fib = ev.fiber_at(z);
      for (const cx& w : fib.points) s.max_err = std::max(s.max_err, std::abs(w));
      ++s.cases;
    }
    s.pass = s.max_err < s.tol;
    sum.suites.push_back(std::move(s));
  }

  sum.pass = true;
  for (const SuiteResult& s : sum.suites)
    if (!s.pass) sum.pass = false;
  return sum;
}

}  // namespace hmr
