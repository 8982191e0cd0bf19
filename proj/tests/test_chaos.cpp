#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "wickprop/chaos.hpp"
#include "wickprop/errors.hpp"

using namespace wickprop;

namespace {

std::shared_ptr<const IndexSet> make_set(int modes, int order) {
  return std::make_shared<IndexSet>(modes, order);
}

ChaosField random_field(const std::shared_ptr<const IndexSet>& iset, std::size_t nx,
                        oracle::Rng& rng, double scale = 1.0) {
  ChaosField f(iset, nx);
  for (double& v : f.flat()) v = scale * rng.uniform();
  return f;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i]))
      return false;
  return true;
}

}  // namespace

TEST_CASE("wick product against a literal single-mode convolution") {
  auto iset = make_set(1, 3);
  ChaosField f(iset, 2), g(iset, 2);
  const double fv[4] = {0.5, -1.25, 2.0, 0.75};
  const double gv[4] = {1.5, 0.25, -0.5, 3.0};
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t x = 0; x < 2; ++x) {
      f.coeff(n)[x] = fv[n] * (x + 1);
      g.coeff(n)[x] = gv[n] * (x + 1);
    }
  ChaosField p = wick_product(f, g);
  for (std::size_t n = 0; n < 4; ++n) {
    for (std::size_t x = 0; x < 2; ++x) {
      double want = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        want += fv[i] * (x + 1) * gv[n - i] * (x + 1);
      CHECK(p.coeff(n)[x] == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("wick product with the unit field is the identity") {
  auto iset = make_set(3, 3);
  oracle::Rng rng(11);
  ChaosField f = random_field(iset, 5, rng);
  ChaosField one = unit_field(iset, 5);
  ChaosField p = wick_product(f, one);
  for (std::size_t i = 0; i < f.flat().size(); ++i)
    CHECK(p.flat()[i] == f.flat()[i]);
}

TEST_CASE("wick product is bitwise commutative") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull, 101ull, 2024ull}) {
    oracle::Rng rng(seed);
    auto iset = make_set(3, 4);
    ChaosField f = random_field(iset, 7, rng, 3.0);
    ChaosField g = random_field(iset, 7, rng, 0.5);
    ChaosField fg = wick_product(f, g);
    ChaosField gf = wick_product(g, f);
    CHECK(bit_equal(fg.flat(), gf.flat()));
  }
}

TEST_CASE("wick product is associative and distributive to rounding") {
  oracle::Rng rng(31415);
  auto iset = make_set(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    ChaosField f = random_field(iset, 4, rng);
    ChaosField g = random_field(iset, 4, rng);
    ChaosField h = random_field(iset, 4, rng);
    ChaosField ab = wick_product(wick_product(f, g), h);
    ChaosField ba = wick_product(f, wick_product(g, h));
    const double scale = (1.0 + max_abs(f.flat())) * (1.0 + max_abs(g.flat())) *
                         (1.0 + max_abs(h.flat()));
    for (std::size_t i = 0; i < ab.flat().size(); ++i)
      CHECK(std::abs(ab.flat()[i] - ba.flat()[i]) <= 1e-12 * scale);

    ChaosField sum(iset, 4);
    for (std::size_t i = 0; i < sum.flat().size(); ++i)
      sum.flat()[i] = g.flat()[i] + h.flat()[i];
    ChaosField lhs = wick_product(f, sum);
    ChaosField r1 = wick_product(f, g);
    ChaosField r2 = wick_product(f, h);
    for (std::size_t i = 0; i < lhs.flat().size(); ++i)
      CHECK(std::abs(lhs.flat()[i] - (r1.flat()[i] + r2.flat()[i])) <= 1e-13 * scale);
  }
}

TEST_CASE("expectation of a wick product factorizes exactly") {
  oracle::Rng rng(99);
  auto iset = make_set(4, 3);
  ChaosField f = random_field(iset, 3, rng);
  ChaosField g = random_field(iset, 3, rng);
  ChaosField p = wick_product(f, g);
  for (std::size_t x = 0; x < 3; ++x)
    CHECK(p.coeff(0)[x] == f.coeff(0)[x] * g.coeff(0)[x]);
}

TEST_CASE("fields supported on the zero index multiply like scalars") {
  auto iset = make_set(2, 3);
  ChaosField c(iset, 1), d(iset, 1);
  c.coeff(0)[0] = -1.75;
  d.coeff(0)[0] = 2.5;
  ChaosField p = wick_product(c, d);
  CHECK(p.coeff(0)[0] == -1.75 * 2.5);
  for (std::size_t i = 1; i < iset->size(); ++i) CHECK(p.coeff(i)[0] == 0.0);

  ChaosField cube = wick_power(c, 3);
  CHECK(cube.coeff(0)[0] == doctest::Approx(std::pow(-1.75, 3)).epsilon(1e-15));
}

TEST_CASE("wick power follows the recursive definition") {
  oracle::Rng rng(5);
  auto iset = make_set(2, 4);
  ChaosField u = random_field(iset, 3, rng);
  ChaosField p0 = wick_power(u, 0);
  CHECK(p0.coeff(0)[0] == 1.0);
  CHECK(max_abs(p0.flat()) == 1.0);
  CHECK(bit_equal(wick_power(u, 1).flat(), u.flat()));
  CHECK(bit_equal(wick_power(u, 2).flat(), wick_product(u, u).flat()));
  CHECK(bit_equal(wick_power(u, 3).flat(),
                  wick_product(wick_product(u, u), u).flat()));
}

TEST_CASE("remainder rows: frozen closed forms") {
  AnalyticFunction phi = analytic::exp_family(2.0, -2.0);
  auto iset = make_set(2, 3);
  ChaosField u(iset, 1);
  const double a = 0.7, b = 0.3, c = 0.2, e1 = -0.4, e2 = 0.9;
  u.coeff(0)[0] = c;
  u.coeff(iset->position(MultiIndex{1, 0}))[0] = a;
  u.coeff(iset->position(MultiIndex{0, 1}))[0] = e2;
  u.coeff(iset->position(MultiIndex{2, 0}))[0] = b;
  u.coeff(iset->position(MultiIndex{1, 1}))[0] = e1;

  const double d2 = -2.0 * std::exp(c);  // second and third derivatives coincide
  SUBCASE("order-3 single mode") {
    auto r = wick_remainder(phi, u, MultiIndex{3, 0});
    const double want = d2 * (a * b) + d2 * (a * a * a) / 6.0;
    CHECK(r[0] == doctest::Approx(want).epsilon(1e-13));
  }
  SUBCASE("mixed (1,1)") {
    auto r = wick_remainder(phi, u, MultiIndex{1, 1});
    CHECK(r[0] == doctest::Approx(d2 * a * e2).epsilon(1e-13));
  }
  SUBCASE("orders zero and one vanish") {
    CHECK(max_abs(wick_remainder(phi, u, MultiIndex{0, 0})) == 0.0);
    CHECK(max_abs(wick_remainder(phi, u, MultiIndex{1, 0})) == 0.0);
    CHECK(max_abs(wick_remainder(phi, u, MultiIndex{0, 1})) == 0.0);
  }
}

TEST_CASE("remainder rows match the nested-sum formula on random fields") {
  std::vector<AnalyticFunction> phis = {
      analytic::polynomial({0.0, 1.0, -1.0}),
      analytic::exp_family(2.0, -2.0),
      analytic::cos_cosh_mean(),
  };
  oracle::Rng rng(271828);
  auto iset = make_set(2, 4);
  const std::size_t nx = 3;
  for (const auto& phi : phis) {
    for (int trial = 0; trial < 3; ++trial) {
      ChaosField u = random_field(iset, nx, rng, 0.8);
      for (std::size_t ai = 0; ai < iset->size(); ++ai) {
        const MultiIndex& alpha = iset->at(ai);
        auto got = wick_remainder(phi, u, alpha);
        std::vector<double> want(nx, 0.0);
        for (int k = 2; k <= alpha.order(); ++k) {
          std::vector<double> conv(nx, 0.0);
          oracle::brute_decompositions(
              alpha, k, [&](std::span<const MultiIndex> parts) {
                for (std::size_t x = 0; x < nx; ++x) {
                  double prod = 1.0;
                  for (const auto& p : parts)
                    prod *= u.coeff(iset->position(p))[x];
                  conv[x] += prod;
                }
              });
          for (std::size_t x = 0; x < nx; ++x)
            want[x] += phi.derivative(k, u.coeff(0)[x]) *
                       std::exp(-std::lgamma(k + 1.0)) * conv[x];
        }
        for (std::size_t x = 0; x < nx; ++x)
          CHECK(got[x] == doctest::Approx(want[x]).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("derivative-split assembly equals direct series summation") {
  std::vector<AnalyticFunction> phis = {
      analytic::polynomial({0.5, 1.0, -1.0, 0.25}),
      analytic::exp_family(2.0, -2.0),
      analytic::cos_cosh_mean(),
  };
  oracle::Rng rng(424242);
  auto iset = make_set(3, 4);
  for (const auto& phi : phis) {
    for (int trial = 0; trial < 5; ++trial) {
      ChaosField u = random_field(iset, 4, rng, 0.5);
      ChaosField split = wick_analytic(phi, u);
      DirectExpansion direct = wick_analytic_direct(phi, u, 40);
      CHECK(direct.tail_bound < 1e-20);
      for (std::size_t i = 0; i < split.flat().size(); ++i) {
        const double scale = 1.0 + std::abs(direct.field.flat()[i]);
        CHECK(std::abs(split.flat()[i] - direct.field.flat()[i]) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("derivative-split rows decompose as first-order part plus remainder") {
  AnalyticFunction phi = analytic::exp_family(2.0, -2.0);
  oracle::Rng rng(777);
  auto iset = make_set(2, 4);
  ChaosField u = random_field(iset, 3, rng, 0.6);
  ChaosField split = wick_analytic(phi, u);
  for (std::size_t ai = 1; ai < iset->size(); ++ai) {
    auto rem = wick_remainder(phi, u, iset->at(ai));
    for (std::size_t x = 0; x < 3; ++x) {
      const double want =
          phi.derivative(1, u.coeff(0)[x]) * u.coeff(ai)[x] + rem[x];
      CHECK(split.coeff(ai)[x] == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // zero row is the plain function of the zero coefficient
  for (std::size_t x = 0; x < 3; ++x)
    CHECK(split.coeff(0)[x] == phi.derivative(0, u.coeff(0)[x]));
}

TEST_CASE("direct expansion reports a diverging tail outside the series radius") {
  AnalyticFunction phi = analytic::log1p_function();
  auto iset = make_set(1, 2);
  ChaosField u(iset, 2);
  u.coeff(0)[0] = 0.5;
  u.coeff(0)[1] = 1.25;  // beyond radius 1
  DirectExpansion d = wick_analytic_direct(phi, u, 10);
  CHECK(std::isinf(d.tail_bound));

  u.coeff(0)[1] = 0.5;
  DirectExpansion ok = wick_analytic_direct(phi, u, 30);
  CHECK(ok.tail_bound > 0.0);
  CHECK(ok.tail_bound < 1e-8);
  // tail of sum 0.5^n / n from 31: crude upper comparison
  CHECK(ok.tail_bound <= std::pow(0.5, 31) / 31.0 / (1.0 - 0.5) * 1.0001);
}

TEST_CASE("analytic family derivative and majorant consistency") {
  std::vector<AnalyticFunction> phis = {
      analytic::polynomial({1.0, -2.0, 0.0, 4.0}),
      analytic::exp_family(2.0, -2.0),
      analytic::log1p_function(),
      analytic::cos_cosh_mean(),
  };
  for (const auto& phi : phis) {
    for (int k = 0; k <= 5; ++k) {
      const double m = 0.8;
      const double bound = phi.majorant(k, m);
      for (double x = -m; x <= m; x += 0.1)
        CHECK(std::abs(phi.derivative(k, x)) <= bound * (1.0 + 1e-12));
    }
  }
  // finite-difference check of the first three derivatives
  for (const auto& phi : phis) {
    for (int k = 0; k <= 2; ++k) {
      const double x = 0.3, h = 1e-6;
      const double fd =
          (phi.derivative(k, x + h) - phi.derivative(k, x - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(phi.derivative(k + 1, x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("exp family series: zero coefficient merges the constant") {
  AnalyticFunction phi = analytic::exp_family(2.0, -2.0);
  CHECK(phi.taylor(0) == 0.0);
  CHECK(phi.taylor(1) == -2.0);
  CHECK(phi.taylor(3) == doctest::Approx(-2.0 / 6.0).epsilon(1e-15));
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(1.0) == doctest::Approx(2.0 - 2.0 * std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("shape mismatches are rejected") {
  auto a = make_set(2, 2);
  auto b = make_set(2, 2);
  ChaosField f(a, 3), g(b, 3), h(a, 4);
  CHECK_THROWS_AS(wick_product(f, g), ShapeError);  // distinct set objects
  CHECK_THROWS_AS(wick_product(f, h), ShapeError);
  AnalyticFunction no_series("opaque", [](int, double) { return 0.0; },
                             [](int, double) { return 0.0; });
  CHECK_THROWS_AS(wick_analytic_direct(no_series, f, 5), ShapeError);
}
