#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hmr/builtins.hpp"
#include "hmr/complex_poly.hpp"
#include "hmr/errors.hpp"
#include "hmr/rational_map.hpp"
#include "hmr/regularity.hpp"

using hmr::ComplexPoly;
using hmr::cx;
using hmr::ExtPoint;
using hmr::RationalMap;

TEST_CASE("band classification of critical-value moduli") {
  const double m = 1e-8;

  // Everything well inside, image of infinity well inside: the strong class.
  hmr::BandClassification a = hmr::classify_moduli(std::vector<double>{0.1, 0.5}, 0.3, m);
  CHECK(a.klass == hmr::RegularityClass::StronglyOuterRegular);
  CHECK(a.inside.size() == 2);
  CHECK(a.outside_or_boundary.empty());
  CHECK(a.indeterminate.empty());

  // Image of infinity on the circle demotes strong to plain.
  hmr::BandClassification b = hmr::classify_moduli(std::vector<double>{0.1}, 1.0, m);
  CHECK(b.klass == hmr::RegularityClass::OuterRegular);

  // One critical value outside kills the class no matter the rest.
  hmr::BandClassification c =
      hmr::classify_moduli(std::vector<double>{0.1, 2.0}, 0.0, m);
  CHECK(c.klass == hmr::RegularityClass::NotOuterRegular);
  CHECK(c.outside_or_boundary == std::vector<int>{1});

  // Values inside the fuzz band count as outside but are flagged.
  hmr::BandClassification d =
      hmr::classify_moduli(std::vector<double>{0.5, 1.0 - m / 2.0}, 0.0, m);
  CHECK(d.klass == hmr::RegularityClass::NotOuterRegular);
  CHECK(d.indeterminate == std::vector<int>{1});

  // Infinite critical values are plain outside.
  hmr::BandClassification e = hmr::classify_moduli(
      std::vector<double>{std::numeric_limits<double>::infinity()}, 0.0, m);
  CHECK(e.klass == hmr::RegularityClass::NotOuterRegular);
  CHECK(e.indeterminate.empty());

  // No critical values at all: vacuously outer regular.
  hmr::BandClassification f = hmr::classify_moduli(std::vector<double>{}, 0.2, m);
  CHECK(f.klass == hmr::RegularityClass::StronglyOuterRegular);
}

TEST_CASE("point location against the circle band") {
  CHECK(hmr::locate(ExtPoint{cx{0.2}}, 1e-8) == hmr::PointLocation::InDisc);
  CHECK(hmr::locate(ExtPoint{cx{2.0}}, 1e-8) == hmr::PointLocation::OutsideDisc);
  CHECK(hmr::locate(ExtPoint{cx{-1.0}}, 1e-8) == hmr::PointLocation::OnCircle);
  CHECK(hmr::locate(ExtPoint::infinity(), 1e-8) == hmr::PointLocation::AtInfinity);
}

TEST_CASE("classification of the named symbols") {
  hmr::RegularityReport a = hmr::classify(hmr::builtin_map("example-4.1"));
  CHECK(a.klass == hmr::RegularityClass::StronglyOuterRegular);
  CHECK(a.phi_at_infinity_location == hmr::PointLocation::InDisc);
  CHECK(a.critical_values_inside.size() == 2);
  CHECK(a.critical_values_outside_or_boundary.empty());
  CHECK(!a.is_blaschke);

  hmr::RegularityReport b = hmr::classify(hmr::builtin_map("example-4.2"));
  CHECK(b.klass == hmr::RegularityClass::OuterRegular);
  CHECK(b.phi_at_infinity_location == hmr::PointLocation::OnCircle);
  CHECK(std::abs(b.phi_at_infinity.value() - cx{-1.0}) <= 1e-12);

  hmr::RegularityReport c = hmr::classify(hmr::builtin_map("blaschke-2.6"));
  CHECK(c.klass == hmr::RegularityClass::NotOuterRegular);
  CHECK(c.is_blaschke);
  // 7 - 4 sqrt(3) is inside, 7 + 4 sqrt(3) outside.
  CHECK(c.critical_values_inside.size() == 1);
  CHECK(c.critical_values_outside_or_boundary.size() == 1);

  hmr::RegularityReport d = hmr::classify(hmr::builtin_map("z-pow:n=2"));
  CHECK(d.klass == hmr::RegularityClass::NotOuterRegular);
  CHECK(d.is_blaschke);

  for (int deg = 2; deg <= 4; ++deg) {
    hmr::RegularityReport e =
        hmr::classify(hmr::builtin_map("family-5.3:d=" + std::to_string(deg)));
    CHECK(e.klass == hmr::RegularityClass::StronglyOuterRegular);
  }
  for (int n = 2; n <= 4; ++n) {
    hmr::RegularityReport e =
        hmr::classify(hmr::builtin_map("z-over-a-minus-zn:a=2,n=" + std::to_string(n)));
    CHECK(e.klass == hmr::RegularityClass::StronglyOuterRegular);
  }

  CHECK_THROWS_AS(
      hmr::classify(RationalMap(ComplexPoly({cx{0.0}, cx{2.0}}), ComplexPoly({cx{1.0}}))),
      hmr::CertificationFailure);
}

TEST_CASE("finite Blaschke detection") {
  CHECK(hmr::is_finite_blaschke(hmr::builtin_map("blaschke-2.6")));
  CHECK(hmr::is_finite_blaschke(hmr::builtin_map("z-pow:n=3")));
  CHECK(!hmr::is_finite_blaschke(hmr::builtin_map("example-4.1")));
  CHECK(!hmr::is_finite_blaschke(
      RationalMap(ComplexPoly({cx{0.0}, cx{1.0}}), ComplexPoly({cx{2.0}}))));  // z/2

  // A single Moebius factor (z - a)/(1 - conj(a) z).
  const cx a{0.4, -0.3};
  RationalMap moebius(ComplexPoly({-a, cx{1.0}}), ComplexPoly({cx{1.0}, -std::conj(a)}));
  CHECK(hmr::is_finite_blaschke(moebius));
}

TEST_CASE("boundary contacts of the named symbols") {
  hmr::BoundaryContacts a = hmr::boundary_contacts(hmr::builtin_map("example-4.1"));
  CHECK(!a.all_of_boundary);
  REQUIRE(a.points.size() == 1);
  CHECK(std::abs(a.points[0] - cx{1.0}) <= 1e-6);

  hmr::BoundaryContacts b = hmr::boundary_contacts(hmr::builtin_map("example-4.2"));
  REQUIRE(b.points.size() == 1);
  CHECK(std::abs(b.points[0] - cx{1.0}) <= 1e-6);

  hmr::BoundaryContacts c = hmr::boundary_contacts(hmr::builtin_map("blaschke-2.6"));
  CHECK(c.all_of_boundary);

  hmr::BoundaryContacts d = hmr::boundary_contacts(
      RationalMap(ComplexPoly({cx{0.0}, cx{1.0}}), ComplexPoly({cx{2.0}})));  // z/2
  CHECK(!d.all_of_boundary);
  CHECK(d.points.empty());

  hmr::BoundaryContacts e = hmr::boundary_contacts(hmr::builtin_map("family-5.3:d=4"));
  REQUIRE(e.points.size() == 1);
  CHECK(std::abs(e.points[0] - cx{1.0}) <= 1e-6);
}

TEST_CASE("decomposition atlas: strongly outer regular symbol") {
  for (const hmr::DecompositionForm form :
       {hmr::DecompositionForm::BackwardShift, hmr::DecompositionForm::Weighted}) {
    hmr::DecompositionReport rep =
        hmr::decomposition_report(hmr::builtin_map("example-4.1"), form);
    CHECK(rep.klass == hmr::RegularityClass::StronglyOuterRegular);
    CHECK(rep.legitimate);
    CHECK(rep.lambda_bounded);
    CHECK(rep.branches_globally_defined);
    CHECK(rep.ring_monodromy == "()");
    REQUIRE(rep.summands.size() == 2);
    CHECK(rep.min_branch_separation > hmr::default_tolerances().cluster_tol);
    int noncompact = 0, owners = 0;
    for (const auto& s : rep.summands) {
      CHECK(s.sup_sigma <= 1.0 + 1e-6);
      CHECK(s.weight_bounded);
      noncompact += s.composition_compact ? 0 : 1;
      owners += s.owns_boundary_contact ? 1 : 0;
    }
    CHECK(noncompact == 1);
    CHECK(owners == 1);
    REQUIRE(rep.unique_noncompact_branch.has_value());
    CHECK(rep.conclusion.find("compact perturbation") != std::string::npos);
  }
}

TEST_CASE("decomposition atlas: plain outer regular symbol") {
  hmr::DecompositionReport bs = hmr::decomposition_report(
      hmr::builtin_map("example-4.2"), hmr::DecompositionForm::BackwardShift);
  CHECK(bs.klass == hmr::RegularityClass::OuterRegular);
  CHECK(bs.legitimate);

  hmr::DecompositionReport w = hmr::decomposition_report(
      hmr::builtin_map("example-4.2"), hmr::DecompositionForm::Weighted);
  CHECK(!w.legitimate);
  // The branch through the vanishing point carries an unbounded weight.
  int unbounded = 0;
  for (const auto& s : w.summands) unbounded += s.weight_bounded ? 0 : 1;
  CHECK(unbounded >= 1);
  CHECK(w.conclusion.find("not strongly outer regular") != std::string::npos);
}

TEST_CASE("decomposition atlas: Blaschke symbol is never legitimate") {
  for (const hmr::DecompositionForm form :
       {hmr::DecompositionForm::BackwardShift, hmr::DecompositionForm::Weighted}) {
    hmr::DecompositionReport rep =
        hmr::decomposition_report(hmr::builtin_map("blaschke-2.6"), form);
    CHECK(rep.klass == hmr::RegularityClass::NotOuterRegular);
    CHECK(!rep.legitimate);
    CHECK(rep.conclusion.find("not a legitimate operator equation") != std::string::npos);
    CHECK(rep.min_branch_separation > hmr::default_tolerances().cluster_tol);
  }
}

TEST_CASE("decomposition atlas: ring monodromy of the squaring symbol") {
  hmr::DecompositionReport rep = hmr::decomposition_report(
      hmr::builtin_map("z-pow:n=2"), hmr::DecompositionForm::BackwardShift);
  CHECK(!rep.branches_globally_defined);
  CHECK(rep.ring_monodromy == "(0 1)");
}

TEST_CASE("random Blaschke products are certified Blaschke products") {
  std::mt19937_64 g(13001);
  for (int trial = 0; trial < 10; ++trial) {
    const int deg = 2 + static_cast<int>(g() % 4);
    RationalMap b = hmr::random_blaschke(g, deg);
    CHECK(b.degree() == deg);
    CHECK(hmr::is_self_map_of_disc(b).is_self_map);
    CHECK(hmr::is_finite_blaschke(b));
  }
}

TEST_CASE("Blaschke products of degree >= 2 never classify outer regular") {
  hmr::BlaschkeCheckSummary s = hmr::blaschke_never_outer_regular_check(424242, 20);
  CHECK(s.trials == 20);
  CHECK(s.failures == 0);
  CHECK(s.pass);
  CHECK(s.diagnostics.empty());
}
