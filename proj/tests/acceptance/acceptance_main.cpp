// Acceptance gate: one line per criterion, [PASS]/[FAIL] with the achieved
// metric and the pinned tolerance; exit 0 iff every criterion passes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "hmr/adjoint.hpp"
#include "hmr/builtins.hpp"
#include "hmr/complex_poly.hpp"
#include "hmr/errors.hpp"
#include "hmr/hardy.hpp"
#include "hmr/rational_map.hpp"
#include "hmr/regularity.hpp"
#include "hmr/rng.hpp"

using hmr::AdjointEvaluator;
using hmr::AdjointForm;
using hmr::ComplexPoly;
using hmr::cx;
using hmr::ExtPoint;
using hmr::HardyPoly;
using hmr::RationalMap;

namespace {

constexpr double kTau = 6.283185307179586476925287;

cx rand_cx(std::mt19937_64& g, double s = 1.0) {
  return cx{s * (2.0 * hmr::uniform01(g) - 1.0), s * (2.0 * hmr::uniform01(g) - 1.0)};
}

HardyPoly rand_f(std::mt19937_64& g, int max_deg) {
  const int deg = static_cast<int>(g() % static_cast<std::uint64_t>(max_deg + 1));
  std::vector<cx> c(static_cast<size_t>(deg) + 1);
  for (auto& v : c) v = rand_cx(g);
  return HardyPoly(std::move(c));
}

cx sample_disc(std::mt19937_64& g, double radius) {
  return radius * std::sqrt(hmr::uniform01(g)) * std::polar(1.0, kTau * hmr::uniform01(g));
}

// Rejection-sample a regular point of the exterior map, outside the guard
// disc of the shifted kernel pole.
cx sample_regular_z(const AdjointEvaluator& ev, std::mt19937_64& g, double radius = 0.95) {
  for (int attempt = 0; attempt < 512; ++attempt) {
    const cx z = sample_disc(g, radius);
    if (ev.guarded_pole() &&
        std::abs(z - *ev.guarded_pole()) < 10.0 * ev.tolerances().pole_guard)
      continue;
    try {
      (void)ev.fiber_at(z);
      return z;
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("sample_regular_z: rejection sampling exhausted");
}

// The full builtin registry at the parameter values the criteria use.
std::vector<std::pair<std::string, RationalMap>> all_builtins() {
  std::vector<std::pair<std::string, RationalMap>> maps;
  for (const char* name :
       {"example-4.1", "example-4.2", "blaschke-2.6", "family-5.3:d=2", "family-5.3:d=3",
        "family-5.3:d=4", "family-5.3:d=5", "family-5.3:d=6", "z-pow:n=2",
        "z-over-a-minus-zn:a=2,n=3"})
    maps.emplace_back(name, hmr::builtin_map(name));
  return maps;
}

struct Line {
  bool pass = false;
  std::string text;
};

Line line(int n, bool pass, const std::string& what, double metric, const char* metric_name,
          double tol) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "[%s] %d %s (%s %.3e, tol %.0e)", pass ? "PASS" : "FAIL", n,
                what.c_str(), metric_name, metric, tol);
  return Line{pass, buf};
}

// ---------------------------------------------------------------------------
// 1. The squaring symbol: all three forms equal the even-coefficient pullback.
Line criterion_1() {
  const double tol = 1e-10;
  AdjointEvaluator ev(hmr::builtin_map("z-pow:n=2"));
  std::mt19937_64 g(20260801);
  double worst = 0.0;
  for (int fi = 0; fi < 50; ++fi) {
    std::vector<cx> c(static_cast<size_t>(g() % 21) + 1);
    for (auto& v : c) v = rand_cx(g);
    HardyPoly f(std::move(c));
    for (int zi = 0; zi < 100; ++zi) {
      const cx z = sample_disc(g, 0.95);
      cx want{0.0};
      cx zn{1.0};
      for (int n = 0; 2 * n <= f.degree(); ++n) {
        want += f.coeff(2 * n) * zn;
        zn *= z;
      }
      for (const AdjointForm form : {AdjointForm::thm, AdjointForm::cor, AdjointForm::bs}) {
        const cx got = ev.eval(f, z, form).value;
        worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
      }
    }
  }
  return line(1, worst <= tol, "squaring symbol: three forms match the even-coefficient pullback",
              worst, "max rel err", tol);
}

// 2. Formula value equals the series oracle over the builtin registry.
Line criterion_2() {
  const double tol_far = 1e-9, tol_near = 1e-7, near_dist = 1e-3;
  std::mt19937_64 g(20260802);
  double worst = 0.0;
  bool pass = true;
  for (const char* name : {"example-4.1", "example-4.2", "blaschke-2.6", "family-5.3:d=2",
                           "family-5.3:d=3", "family-5.3:d=4", "family-5.3:d=5",
                           "family-5.3:d=6", "z-over-a-minus-zn:a=2,n=3"}) {
    const RationalMap phi = hmr::builtin_map(name);
    AdjointEvaluator ev(phi);
    std::vector<HardyPoly> fs;
    for (int fi = 0; fi < 20; ++fi) fs.push_back(rand_f(g, 16));
    for (int zi = 0; zi < 50; ++zi) {
      const cx z = sample_regular_z(ev, g);
      const hmr::PreimageFiber fib = ev.fiber_at(z);
      const double case_tol =
          ev.distance_to_exterior_critical_values(z) < near_dist ? tol_near : tol_far;
      for (const HardyPoly& f : fs) {
        const cx oracle = hmr::adjoint_oracle(phi, f, z);
        const cx got = ev.eval_cor(f, fib).value;
        const double rel = std::abs(got - oracle) / (1.0 + std::abs(oracle));
        worst = std::max(worst, rel);
        pass = pass && rel <= case_tol;
      }
    }
  }
  return line(2, pass, "formula equals the series oracle on the builtin registry", worst,
              "max rel err", tol_far);
}

// 3. Exact value at the origin.
Line criterion_3() {
  std::mt19937_64 g(20260803);
  int failures = 0;
  for (const auto& [name, phi] : all_builtins()) {
    AdjointEvaluator ev(phi);
    for (int fi = 0; fi < 100; ++fi) {
      HardyPoly f = rand_f(g, 12);
      for (const AdjointForm form : {AdjointForm::thm, AdjointForm::cor, AdjointForm::bs})
        if (ev.eval(f, cx{0.0}, form).value != f.coeff(0)) ++failures;
    }
  }
  return line(3, failures == 0, "value at the origin is the zeroth coefficient, exactly",
              static_cast<double>(failures), "violations", 0.0);
}

// 4. Constant function pulls back to the kernel at phi(0).
Line criterion_4() {
  const double tol = 1e-12;
  std::mt19937_64 g(20260804);
  const HardyPoly one({cx{1.0}});
  double worst = 0.0;
  for (const auto& [name, phi] : all_builtins()) {
    AdjointEvaluator ev(phi);
    const cx phi0 = ev.phi_at_zero();
    for (int zi = 0; zi < 100; ++zi) {
      const cx z = sample_regular_z(ev, g);
      const cx want = 1.0 / (1.0 - std::conj(phi0) * z);
      const cx got = ev.eval_auto(one, z).value;
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  return line(4, worst <= tol, "constant function returns the kernel at phi(0)", worst,
              "max rel err", tol);
}

// 5. Pole cancellation at the shifted kernel pole 1/conj(phi(inf)).
Line criterion_5() {
  const double tol_bs = 1e-9, tol_agree = 1e-8;
  const RationalMap phi(ComplexPoly({cx{0.0}, cx{1.0}, cx{2.0}}),
                        ComplexPoly({cx{4.0}, cx{0.0}, cx{1.0}}));  // (2z^2+z)/(4+z^2)
  AdjointEvaluator ev(phi);
  if (!ev.guarded_pole()) return line(5, false, "pole cancellation (no guarded pole)", 1.0, "err", tol_bs);
  const cx p = *ev.guarded_pole();
  std::mt19937_64 g(20260805);
  double worst_bs = 0.0, worst_agree = 0.0;
  for (int fi = 0; fi < 10; ++fi) {
    HardyPoly f = rand_f(g, 10);
    const cx oracle = hmr::adjoint_oracle(phi, f, p);
    const cx bs_at_p = ev.eval_bs(f, p).value;
    worst_bs = std::max(worst_bs, std::abs(bs_at_p - oracle) / (1.0 + std::abs(oracle)));
    for (int k = 0; k < 16; ++k) {
      const cx z = p + std::polar(1e-3, kTau * k / 16.0);
      const cx thm = ev.eval_thm(f, z).value;
      const cx bs = ev.eval_bs(f, z).value;
      worst_agree = std::max(worst_agree, std::abs(thm - bs) / (1.0 + std::abs(bs)));
    }
  }
  const bool pass = std::abs(p - cx{0.5}) <= 1e-12 && worst_bs <= tol_bs &&
                    worst_agree <= tol_agree;
  return line(5, pass, "singular kernel terms cancel at the shifted pole",
              std::max(worst_bs, worst_agree), "max rel err", tol_agree);
}

// 6. The two-kernel identity holds to floating-point noise.
Line criterion_6() {
  const double tol = 1e-10;
  std::mt19937_64 g(20260806);
  double worst = 0.0;
  for (const char* name : {"example-4.1", "example-4.2"}) {
    AdjointEvaluator ev(hmr::builtin_map(name));
    for (int zi = 0; zi < 50; ++zi)
      worst = std::max(worst, ev.amusing_identity_residual(sample_regular_z(ev, g)));
  }
  return line(6, worst <= tol, "two-kernel identity residual", worst, "max residual", tol);
}

// 7. Partial fractions of the composed kernel reconstruct it.
Line criterion_7() {
  const double tol = 1e-10;
  std::mt19937_64 g(20260807);
  double worst = 0.0;
  for (const auto& [name, phi] : all_builtins()) {
    if (phi.value_at_infinity().is_infinity()) continue;
    AdjointEvaluator ev(phi);
    for (int zi = 0; zi < 20; ++zi) {
      const cx z = sample_regular_z(ev, g);
      if (std::abs(z) < 1e-3) continue;
      const hmr::PartialFraction pf = hmr::kernel_partial_fraction(ev, z);
      int used = 0;
      for (int wi = 0; used < 20 && wi < 400; ++wi) {
        const cx w = 3.0 * std::sqrt(hmr::uniform01(g)) * std::polar(1.0, kTau * hmr::uniform01(g));
        bool near = std::abs(phi.den()(w)) < 0.1;
        for (const cx& q : pf.poles) near = near || std::abs(w - q) < 0.1;
        if (near) continue;
        ++used;
        const cx direct = 1.0 / (1.0 - std::conj(z) * phi.eval(w));
        worst = std::max(worst, std::abs(pf(w) - direct) / (1.0 + std::abs(direct)));
      }
    }
  }
  return line(7, worst <= tol, "kernel partial fractions reconstruct the composed kernel", worst,
              "max rel err", tol);
}

// 8. Critical values of the two reference symbols.
Line criterion_8() {
  const double tol_a = 1e-10, tol_b = 1e-9;
  hmr::CriticalData a = hmr::critical_data(hmr::builtin_map("example-4.1"));
  double err_a = 1.0;
  if (a.critical_values.size() == 2) {
    std::vector<cx> got;
    for (const auto& v : a.critical_values)
      got.push_back(v.value.is_infinity() ? cx{1e9} : v.value.value());
    const std::vector<cx> want{cx{0.0}, cx{4.0 / 13.0}};
    err_a = 0.0;
    for (const cx& x : want) {
      double best = 1e300;
      for (const cx& y : got) best = std::min(best, std::abs(x - y));
      err_a = std::max(err_a, best);
    }
  }
  hmr::CriticalData b = hmr::critical_data(hmr::builtin_map("blaschke-2.6"));
  double err_b = 1.0;
  const cx big{7.0 + 4.0 * std::sqrt(3.0)};
  for (const auto& v : b.critical_values)
    if (!v.value.is_infinity()) err_b = std::min(err_b, std::abs(v.value.value() - big));
  const bool pass = err_a <= tol_a && err_b <= tol_b;
  return line(8, pass, "critical values: {0, 4/13} and 7+4*sqrt(3)", std::max(err_a, err_b),
              "max abs err", tol_b);
}

// 9. The classification table.
Line criterion_9() {
  using hmr::RegularityClass;
  int failures = 0;
  const auto check = [&](bool ok) { failures += ok ? 0 : 1; };

  check(hmr::classify(hmr::builtin_map("example-4.1")).klass ==
        RegularityClass::StronglyOuterRegular);

  const RationalMap e42 = hmr::builtin_map("example-4.2");
  check(hmr::classify(e42).klass == RegularityClass::OuterRegular);
  check(hmr::decomposition_report(e42, hmr::DecompositionForm::BackwardShift).legitimate);
  check(!hmr::decomposition_report(e42, hmr::DecompositionForm::Weighted).legitimate);

  check(hmr::classify(hmr::builtin_map("blaschke-2.6")).klass ==
        RegularityClass::NotOuterRegular);

  for (int d = 2; d <= 6; ++d) {
    const RationalMap phi = hmr::builtin_map("family-5.3:d=" + std::to_string(d));
    hmr::RegularityReport rep = hmr::classify(phi);
    check(rep.klass == RegularityClass::StronglyOuterRegular);
    check(!rep.contacts.all_of_boundary && rep.contacts.points.size() == 1 &&
          std::abs(rep.contacts.points[0] - cx{1.0}) <= 1e-6);
    hmr::DecompositionReport dec =
        hmr::decomposition_report(phi, hmr::DecompositionForm::Weighted);
    int noncompact = 0;
    for (const auto& s : dec.summands) noncompact += s.composition_compact ? 0 : 1;
    check(noncompact == 1 && dec.unique_noncompact_branch.has_value());
  }

  for (int n = 2; n <= 4; ++n)
    check(hmr::classify(hmr::builtin_map("z-over-a-minus-zn:a=2,n=" + std::to_string(n))).klass ==
          RegularityClass::StronglyOuterRegular);

  return line(9, failures == 0, "classification table over the builtin registry",
              static_cast<double>(failures), "violations", 0.0);
}

// 10. Random Blaschke products never classify outer regular.
Line criterion_10() {
  hmr::BlaschkeCheckSummary s = hmr::blaschke_never_outer_regular_check(20260810, 50);
  return line(10, s.pass && s.trials == 50, "random Blaschke products all classify not outer regular",
              static_cast<double>(s.failures), "failures", 0.0);
}

// 11. Fibers of the exterior map stay inside the disc.
Line criterion_11() {
  std::mt19937_64 g(20260811);
  double worst = 0.0;
  bool pass = true;
  for (const auto& [name, phi] : all_builtins()) {
    AdjointEvaluator ev(phi);
    int accepted = 0;
    int guard = 0;
    while (accepted < 500 && guard < 20000) {
      ++guard;
      const cx z = sample_disc(g, 0.999);
      try {
        const hmr::PreimageFiber fib = ev.fiber_at(z);
        ++accepted;
        for (const cx& w : fib.points) worst = std::max(worst, std::abs(w));
      } catch (const hmr::NotRegularValue&) {
        continue;  // not a regular value: outside the criterion's scope
      } catch (const std::exception&) {
        pass = false;  // escape or convergence failure on a disc point
        ++accepted;
      }
    }
    pass = pass && accepted == 500;
  }
  return line(11, pass && worst < 1.0, "exterior-map fibers stay inside the unit disc", worst,
              "max |w|", 1.0);
}

// 12. Monodromy: one forced transposition, twenty trivial loops.
Line criterion_12() {
  const double tol = 1e-10;
  double worst_return = 0.0;
  bool pass = true;

  RationalMap w2(ComplexPoly({cx{0.0}, cx{0.0}, cx{1.0}}), ComplexPoly({cx{1.0}}));
  hmr::MonodromyResult tr = hmr::monodromy(w2, cx{0.5}, cx{0.0}, 0.5, 64);
  pass = pass && tr.permutation == std::vector<int>{1, 0};
  worst_return = std::max(worst_return, tr.return_error);

  std::mt19937_64 g(20260812);
  const RationalMap ext_a = hmr::exterior_map(hmr::builtin_map("example-4.1"));
  const RationalMap ext_b = hmr::exterior_map(hmr::builtin_map("blaschke-2.6"));
  const std::vector<cx> cv_b{cx{7.0 - 4.0 * std::sqrt(3.0)}, cx{7.0 + 4.0 * std::sqrt(3.0)}};
  int done = 0;
  while (done < 10) {  // loops inside the disc, where ext_a has no critical values
    const cx center = sample_disc(g, 0.5);
    const double radius = 0.05 + 0.3 * hmr::uniform01(g);
    if (std::abs(center) + radius > 0.95) continue;
    hmr::MonodromyResult m = hmr::monodromy(ext_a, center + radius, center, radius, 48);
    for (size_t i = 0; i < m.permutation.size(); ++i)
      pass = pass && m.permutation[i] == static_cast<int>(i);
    worst_return = std::max(worst_return, m.return_error);
    ++done;
  }
  done = 0;
  while (done < 10) {  // loops dodging both branch points of the Blaschke exterior
    const cx center = rand_cx(g, 1.0);
    const double radius = 0.05 + 0.35 * hmr::uniform01(g);
    bool ok = true;
    for (const cx& cv : cv_b) ok = ok && std::abs(center - cv) > radius + 0.05;
    if (!ok) continue;
    hmr::MonodromyResult m = hmr::monodromy(ext_b, center + radius, center, radius, 48);
    for (size_t i = 0; i < m.permutation.size(); ++i)
      pass = pass && m.permutation[i] == static_cast<int>(i);
    worst_return = std::max(worst_return, m.return_error);
    ++done;
  }
  return line(12, pass && worst_return <= tol,
              "monodromy: forced transposition, trivial regular loops", worst_return,
              "max return err", tol);
}

// 13. Branch atlases keep the branches separated.
Line criterion_13() {
  const double tol = hmr::default_tolerances().cluster_tol;
  double worst = 1e300;
  bool pass = true;
  for (const auto& [name, phi] : all_builtins()) {
    hmr::DecompositionReport rep =
        hmr::decomposition_report(phi, hmr::DecompositionForm::BackwardShift);
    worst = std::min(worst, rep.min_branch_separation);
    pass = pass && rep.min_branch_separation > tol;
  }
  return line(13, pass, "branches stay pairwise separated over every atlas", worst,
              "min separation", tol);
}

// 14. The exterior map: exact on the reference symbol, involutive in general.
Line criterion_14() {
  const double tol = 1e-12;
  RationalMap ext = hmr::exterior_map(hmr::builtin_map("example-4.1"));
  const bool exact = ext.num().coeff(0) == cx{-1.0} && ext.num().coeff(1) == cx{-1.0} &&
                     ext.num().coeff(2) == cx{3.0} && ext.den().coeff(0) == cx{0.0} &&
                     ext.den().coeff(1) == cx{0.0} && ext.den().coeff(2) == cx{1.0};

  std::mt19937_64 g(20260814);
  double worst = 0.0;
  int built = 0;
  while (built < 50) {
    const int m = 1 + static_cast<int>(g() % 4);
    ComplexPoly den = ComplexPoly::constant(cx{1.0});
    for (int k = 0; k < m; ++k) {
      const cx p = std::polar(1.3 + 1.7 * hmr::uniform01(g), kTau * hmr::uniform01(g));
      den = den * ComplexPoly({cx{1.0}, -1.0 / p});
    }
    std::vector<cx> nc(static_cast<size_t>(g() % static_cast<std::uint64_t>(m + 1)) + 1);
    for (auto& v : nc) v = rand_cx(g);
    ComplexPoly num(std::move(nc));
    if (num.is_zero()) continue;
    RationalMap raw(num, den);
    const hmr::DiscCertificate pre = hmr::is_self_map_of_disc(raw);
    if (pre.max_boundary_modulus <= 0.0) continue;
    RationalMap phi((0.9 / pre.max_boundary_modulus) * raw.num(), raw.den());
    if (!hmr::is_self_map_of_disc(phi).is_self_map) continue;
    ++built;

    RationalMap back = hmr::exterior_map(hmr::exterior_map(phi));
    const double scale = std::max(phi.num().scale(), phi.den().scale());
    if (back.num().degree() != phi.num().degree() ||
        back.den().degree() != phi.den().degree()) {
      worst = std::max(worst, 1.0);
      continue;
    }
    for (int k = 0; k <= phi.num().degree(); ++k)
      worst = std::max(worst, std::abs(back.num().coeff(k) - phi.num().coeff(k)) / scale);
    for (int k = 0; k <= phi.den().degree(); ++k)
      worst = std::max(worst, std::abs(back.den().coeff(k) - phi.den().coeff(k)) / scale);
  }
  return line(14, exact && worst <= tol,
              "exterior map: exact reference coefficients, involutive on random symbols", worst,
              "max coeff err", tol);
}

}  // namespace

int main() {
  const std::vector<Line> results{
      criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(),
      criterion_6(), criterion_7(), criterion_8(), criterion_9(), criterion_10(),
      criterion_11(), criterion_12(), criterion_13(), criterion_14()};
  bool all = true;
  for (const Line& l : results) {
    std::printf("%s\n", l.text.c_str());
    all = all && l.pass;
  }
  std::printf("%s\n", all ? "acceptance: all criteria pass" : "acceptance: FAILURES present");
  return all ? 0 : 1;
}
