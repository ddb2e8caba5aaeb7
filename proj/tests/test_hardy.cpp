#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hmr/complex_poly.hpp"
#include "hmr/errors.hpp"
#include "hmr/hardy.hpp"
#include "hmr/rational_map.hpp"
#include "hmr/rng.hpp"

using hmr::ComplexPoly;
using hmr::cx;
using hmr::HardyPoly;
using hmr::RationalMap;

namespace {

cx rand_cx(std::mt19937_64& g, double s = 1.0) {
  return cx{s * (2.0 * hmr::uniform01(g) - 1.0), s * (2.0 * hmr::uniform01(g) - 1.0)};
}

HardyPoly rand_f(std::mt19937_64& g, int max_deg) {
  const int deg = static_cast<int>(g() % static_cast<std::uint64_t>(max_deg + 1));
  std::vector<cx> c(static_cast<size_t>(deg) + 1);
  for (auto& v : c) v = rand_cx(g);
  return HardyPoly(std::move(c));
}

// Test-local series division, written independently of the library routine:
// the plain convolution recurrence t_n = (a_n - sum_{j>=1} b_j t_{n-j}) / b_0.
std::vector<cx> series_div_local(const ComplexPoly& num, const ComplexPoly& den, int N) {
  std::vector<cx> t(static_cast<size_t>(N) + 1);
  const cx b0 = den.coeff(0);
  for (int n = 0; n <= N; ++n) {
    cx acc = num.coeff(n);
    for (int j = 1; j <= n; ++j) acc -= den.coeff(j) * t[static_cast<size_t>(n - j)];
    t[static_cast<size_t>(n)] = acc / b0;
  }
  return t;
}

// Independent adjoint oracle: expand the composed kernel as a power series in
// conj(z) using explicit truncated series powers of the symbol.  This shares
// no code path with the library's series-division route.
cx adjoint_matrix_route(const RationalMap& phi, const HardyPoly& f, cx z) {
  const int M = std::max(f.degree(), 0);
  const std::vector<cx> t = series_div_local(phi.num(), phi.den(), M);
  const int K = 260;  // |z| <= 0.6 makes the kernel tail below double noise
  std::vector<cx> pk(static_cast<size_t>(M) + 1, cx{0.0});
  pk[0] = cx{1.0};
  std::vector<cx> S(static_cast<size_t>(M) + 1, cx{0.0});
  cx zbar_k{1.0};
  for (int k = 0; k <= K; ++k) {
    for (int m = 0; m <= M; ++m) S[static_cast<size_t>(m)] += zbar_k * pk[static_cast<size_t>(m)];
    zbar_k *= std::conj(z);
    // pk <- pk * t, truncated at degree M.
    std::vector<cx> next(static_cast<size_t>(M) + 1, cx{0.0});
    for (int a = 0; a <= M; ++a)
      for (int b = 0; a + b <= M; ++b) next[static_cast<size_t>(a + b)] += pk[static_cast<size_t>(a)] * t[static_cast<size_t>(b)];
    pk = std::move(next);
  }
  cx acc{0.0};
  for (int m = 0; m <= M; ++m) acc += f.coeff(m) * std::conj(S[static_cast<size_t>(m)]);
  return acc;
}

RationalMap disc_reciprocal_quadratic() {
  return RationalMap(ComplexPoly({cx{1.0}}), ComplexPoly({cx{3.0}, cx{-1.0}, cx{-1.0}}));
}

}  // namespace

TEST_CASE("coefficients are stored verbatim and norms are coefficient norms") {
  HardyPoly f({cx{1.0}, cx{0.0}, cx{1e-30}});
  CHECK(f.degree() == 2);  // no stripping
  CHECK(f.coeff(2) == cx{1e-30});
  CHECK(f.coeff(-1) == cx{0.0});
  CHECK(f.coeff(5) == cx{0.0});
  HardyPoly g({cx{3.0}, cx{4.0}});
  CHECK(std::abs(g.norm() - 5.0) <= 1e-15);
  CHECK(hmr::inner_product(g, g) == cx{25.0});
  CHECK(HardyPoly::monomial(4).degree() == 4);
  CHECK(HardyPoly::monomial(4)(cx{0.5}) == cx{0.0625});
}

TEST_CASE("reproducing kernel reproduces point evaluations") {
  std::mt19937_64 g(9001);
  for (int trial = 0; trial < 40; ++trial) {
    HardyPoly f = rand_f(g, 15);
    const cx z = 0.95 * rand_cx(g, 0.7);
    HardyPoly K = hmr::kernel_coeffs(z, std::max(f.degree(), 0));
    const cx via_kernel = hmr::inner_product(f, K);
    CHECK(std::abs(via_kernel - f(z)) <= 1e-12 * (1.0 + std::abs(f(z))));
  }
  // Kernel coefficients are conj(z)^n.
  HardyPoly K = hmr::kernel_coeffs(cx{0.3, 0.4}, 3);
  CHECK(K.coeff(0) == cx{1.0});
  CHECK(std::abs(K.coeff(2) - std::conj(cx{0.3, 0.4}) * std::conj(cx{0.3, 0.4})) <= 1e-15);
}

TEST_CASE("backward and forward shifts are adjoint to each other") {
  HardyPoly f({cx{5.0}, cx{1.0}, cx{2.0}});
  HardyPoly bf = hmr::backward_shift(f);
  CHECK(bf.degree() == 1);
  CHECK(bf.coeff(0) == cx{1.0});
  CHECK(bf.coeff(1) == cx{2.0});
  HardyPoly ff = hmr::forward_shift(bf);
  CHECK(ff.coeff(0) == cx{0.0});
  CHECK(ff.coeff(1) == cx{1.0});
  CHECK(ff.coeff(2) == cx{2.0});

  std::mt19937_64 g(9002);
  for (int trial = 0; trial < 25; ++trial) {
    HardyPoly a = rand_f(g, 10), b = rand_f(g, 10);
    const cx lhs = hmr::inner_product(hmr::backward_shift(a), b);
    const cx rhs = hmr::inner_product(a, hmr::forward_shift(b));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("power series division: closed leading terms and the local recurrence") {
  // 1/(3 - z - z^2): 1/3, 1/9, 4/27, ...
  std::vector<cx> t = hmr::power_series_div(ComplexPoly({cx{1.0}}),
                                            ComplexPoly({cx{3.0}, cx{-1.0}, cx{-1.0}}), 5);
  CHECK(std::abs(t[0] - cx{1.0 / 3.0}) <= 1e-15);
  CHECK(std::abs(t[1] - cx{1.0 / 9.0}) <= 1e-15);
  CHECK(std::abs(t[2] - cx{4.0 / 27.0}) <= 1e-15);

  std::mt19937_64 g(9003);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexPoly num({rand_cx(g), rand_cx(g), rand_cx(g)});
    ComplexPoly den({rand_cx(g) + cx{2.0}, rand_cx(g), rand_cx(g)});
    std::vector<cx> lib = hmr::power_series_div(num, den, 20);
    std::vector<cx> local = series_div_local(num, den, 20);
    for (int n = 0; n <= 20; ++n)
      CHECK(std::abs(lib[static_cast<size_t>(n)] - local[static_cast<size_t>(n)]) <= 1e-11);
  }

  CHECK_THROWS_AS(hmr::power_series_div(ComplexPoly({cx{1.0}}),
                                        ComplexPoly({cx{0.0}, cx{1.0}}), 4),
                  hmr::PoleAtOrigin);
}

TEST_CASE("Taylor expansion of a rational map matches series division") {
  RationalMap R = disc_reciprocal_quadratic();
  HardyPoly tay = hmr::taylor_of_rational(R, 12);
  std::vector<cx> ref = series_div_local(R.num(), R.den(), 12);
  for (int n = 0; n <= 12; ++n)
    CHECK(std::abs(tay.coeff(n) - ref[static_cast<size_t>(n)]) <= 1e-13);
  // And it evaluates close to the map well inside the disc.
  CHECK(std::abs(tay(cx{0.2}) - R.eval(cx{0.2})) <= 1e-8);
}

TEST_CASE("series adjoint on the squaring symbol keeps even coefficients") {
  RationalMap sq(ComplexPoly({cx{0.0}, cx{0.0}, cx{1.0}}), ComplexPoly({cx{1.0}}));
  std::mt19937_64 g(9004);
  for (int trial = 0; trial < 30; ++trial) {
    HardyPoly f = rand_f(g, 14);
    const cx z = 0.9 * rand_cx(g, 0.7);
    cx want{0.0};
    cx zn{1.0};
    for (int n = 0; 2 * n <= f.degree(); ++n) {
      want += f.coeff(2 * n) * zn;
      zn *= z;
    }
    const cx got = hmr::adjoint_oracle(sq, f, z);
    CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("series adjoint: exactness at zero, constants, linearity") {
  RationalMap R = disc_reciprocal_quadratic();
  std::mt19937_64 g(9005);
  for (int trial = 0; trial < 20; ++trial) {
    HardyPoly f = rand_f(g, 12);
    CHECK(hmr::adjoint_oracle(R, f, cx{0.0}) == f.coeff(0));
  }

  // Constant functions: conj(K_z(phi(0))) pattern collapses to a kernel value.
  const cx phi0 = R.eval(cx{0.0});
  for (int trial = 0; trial < 20; ++trial) {
    const cx z = 0.9 * rand_cx(g, 0.7);
    const cx got = hmr::adjoint_oracle(R, HardyPoly({cx{1.0}}), z);
    const cx want = 1.0 / (1.0 - std::conj(phi0) * z);
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
  }

  for (int trial = 0; trial < 10; ++trial) {
    HardyPoly a = rand_f(g, 10), b = rand_f(g, 10);
    const cx s = rand_cx(g);
    const cx z = 0.8 * rand_cx(g, 0.7);
    const cx lhs = hmr::adjoint_oracle(R, a + s * b, z);
    const cx rhs = hmr::adjoint_oracle(R, a, z) + s * hmr::adjoint_oracle(R, b, z);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("series adjoint agrees with the explicit kernel-expansion route") {
  const std::vector<RationalMap> maps{
      disc_reciprocal_quadratic(),
      RationalMap(ComplexPoly({cx{0.0}, cx{0.0}, cx{1.0}}),
                  ComplexPoly({cx{3.0}, cx{-1.0}, cx{-1.0}})),
      RationalMap(ComplexPoly({cx{0.0}, cx{1.0}, cx{-2.0}}), ComplexPoly({cx{2.0}, cx{-1.0}}))};
  std::mt19937_64 g(9006);
  for (const RationalMap& R : maps) {
    for (int trial = 0; trial < 12; ++trial) {
      HardyPoly f = rand_f(g, 10);
      const cx z = 0.6 * std::sqrt(hmr::uniform01(g)) *
                   std::polar(1.0, 6.283185307179586 * hmr::uniform01(g));
      const cx lib = hmr::adjoint_oracle(R, f, z);
      const cx ref = adjoint_matrix_route(R, f, z);
      CHECK(std::abs(lib - ref) <= 1e-10 * (1.0 + std::abs(ref)));
    }
  }
}
