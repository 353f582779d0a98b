#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oflx/fit.hpp"
#include "oflx/grid.hpp"
#include "oflx/quadrature.hpp"
#include "oracles.hpp"

using namespace oflx;

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::vector<double> sampled_scalar(const Grid3& g,
                                   const std::function<double(double, double, double)>& fn) {
  std::vector<double> s(g.nodeCount());
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t k = 0; k < g.nz(); ++k)
        s[g.index(i, j, k)] = fn(g.x1(i), g.x2(j), g.x3(k));
  return s;
}

}  // namespace

TEST_CASE("grid geometry and node layout") {
  const Grid3 g(8, 12, 5, 2.0);
  CHECK(g.nz() == 11);
  CHECK(g.nodeCount() == 8 * 12 * 11);
  CHECK(g.hx() == doctest::Approx(kTwoPi / 8).epsilon(1e-15));
  CHECK(g.hz() == doctest::Approx(0.4).epsilon(1e-15));
  // Symmetric x3 ladder containing 0 exactly once.
  CHECK(g.x3(0) == -2.0);
  CHECK(g.x3(5) == 0.0);
  CHECK(g.x3(10) == 2.0);
  CHECK(g.x3(7) == -g.x3(3));
  CHECK_THROWS_AS(Grid3(3, 8, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(8, 8, 4, 0.0), std::invalid_argument);
}

TEST_CASE("region bounds and membership") {
  const Grid3 g(8, 8, 8, 2.0);
  double lo = 0.0, hi = 0.0;
  Region::halfPlus().zbounds(g.Lz, lo, hi);
  CHECK(lo == 0.0);
  CHECK(hi == 2.0);
  Region::above(-0.5).zbounds(g.Lz, lo, hi);
  CHECK(lo == -0.5);
  Region::strip(-0.25, 0.75).zbounds(g.Lz, lo, hi);
  CHECK(lo == -0.25);
  CHECK(hi == 0.75);
  CHECK_THROWS_AS(Region::strip(-3.0, 1.0).zbounds(g.Lz, lo, hi), std::domain_error);
  CHECK_THROWS_AS(Region::above(2.5).zbounds(g.Lz, lo, hi), std::domain_error);

  CHECK(Region::halfPlus().contains(0.0, g.Lz));
  CHECK(!Region::halfPlus().contains(-0.1, g.Lz));
  CHECK(Region::strip(-0.5, 0.5).contains(0.5, g.Lz));
  CHECK(!Region::above(0.25).contains(0.25, g.Lz));  // strict

  // Widening a region that would dip past the slab floor falls back to the
  // whole slab rather than inventing an unrepresentable tag.
  const Region w = Region::above(-1.9).widened(0.5, g);
  CHECK(w.kind == Region::Kind::FullSlab);
}

TEST_CASE("integrate: constants, zero, and slab splitting") {
  const Grid3 g(8, 8, 16, 2.0);
  const auto one = sampled_scalar(g, [](double, double, double) { return 1.0; });

  // Strip measure is exact whether or not the cut lands on a node.
  CHECK(integrate(one, g, Region::strip(-1.0, 1.0)) ==
        doctest::Approx(2.0 * kTwoPi * kTwoPi).epsilon(1e-12));
  const Grid3 g2(8, 8, 13, 1.7);
  const auto one2 = sampled_scalar(g2, [](double, double, double) { return 1.0; });
  CHECK(integrate(one2, g2, Region::strip(-1.0, 1.0)) ==
        doctest::Approx(2.0 * kTwoPi * kTwoPi).epsilon(1e-12));

  const auto zero = sampled_scalar(g, [](double, double, double) { return 0.0; });
  CHECK(integrate(zero, g, Region::fullSlab()) == 0.0);

  // Half-weight boundary rule: the slab integral splits exactly into the
  // two closed half slabs.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> noise(g.nodeCount());
  for (double& v : noise) v = u(rng);
  const double full = integrate(noise, g, Region::fullSlab());
  const double upper = integrate(noise, g, Region::halfPlus());
  const double lower = integrate(noise, g, Region::strip(-g.Lz, 0.0));
  CHECK(full == doctest::Approx(upper + lower).epsilon(1e-12));
}

TEST_CASE("integrate matches the product-quadrature value") {
  // sin^2(x1) * exp(-x3^2) over the full slab with Lz = 8: the horizontal
  // rule is exact below Nyquist and the z trapezoid is far below 1e-8 for
  // this rapidly decaying integrand.
  const Grid3 g(16, 8, 64, 8.0);
  const auto f = sampled_scalar(g, [](double x1, double, double x3) {
    return std::sin(x1) * std::sin(x1) * std::exp(-x3 * x3);
  });
  const double got = integrate(f, g, Region::fullSlab());
  CHECK(got == doctest::Approx(oracle::kSin2GaussIntegral).epsilon(1e-8));

  // Independent Simpson product quadrature reproduces the frozen constant.
  const double sx = oracle::simpson([](double x) { return std::sin(x) * std::sin(x); },
                                    0.0, kTwoPi, 512);
  const double sz = oracle::simpson([](double z) { return std::exp(-z * z); }, -8.0, 8.0, 4096);
  CHECK(sx * kTwoPi * sz == doctest::Approx(oracle::kSin2GaussIntegral).epsilon(1e-10));
}

TEST_CASE("integrate is linear and monotone") {
  const Grid3 g(8, 8, 8, 1.0);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(g.nodeCount()), d(g.nodeCount()), fpd(g.nodeCount());
  for (std::size_t q = 0; q < f.size(); ++q) {
    f[q] = u(rng) - 0.3;
    d[q] = u(rng);  // nonnegative bump
    fpd[q] = f[q] + 2.5 * d[q];
  }
  const Region r = Region::strip(-0.8, 0.6);
  CHECK(integrate(fpd, g, r) ==
        doctest::Approx(integrate(f, g, r) + 2.5 * integrate(d, g, r)).epsilon(1e-12));
  CHECK(integrate(fpd, g, r) >= integrate(f, g, r));  // monotonicity, f + 2.5 d >= f
}

TEST_CASE("inner products: symmetry, bilinearity, orthogonal constants") {
  const Grid3 g(8, 8, 8, 1.5);
  auto mk = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorField f(g, Region::fullSlab());
    for (auto& c : f.comps)
      for (double& v : c) v = u(rng);
    return f;
  };
  const VectorField a = mk(1), b = mk(2), c = mk(3);
  const Region r = Region::fullSlab();

  CHECK(inner_product(a, b, r) == inner_product(b, a, r));
  const double lhs = inner_product(a, b, r) + 0.7 * inner_product(a, c, r);
  VectorField bc = b;
  for (int k = 0; k < 3; ++k)
    for (std::size_t q = 0; q < bc.comps[k].size(); ++q) bc.comps[k][q] += 0.7 * c.comps[k][q];
  CHECK(inner_product(a, bc, r) == doctest::Approx(lhs).epsilon(1e-12));

  CHECK(inner_product(a, a, r) > 0.0);
  const VectorField zero(g, Region::fullSlab());
  CHECK(inner_product(zero, zero, r) == 0.0);

  const auto e1 = VectorField::sampled(g, [](double, double, double) {
    return std::array<double, 3>{1.0, 0.0, 0.0};
  });
  const auto e2 = VectorField::sampled(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 1.0, 0.0};
  });
  CHECK(inner_product(e1, e2, r) == 0.0);

  // Tensor inner product agrees with the component-sum definition.
  const TensorField ta = TensorField::outer(a, b);
  const TensorField tb = TensorField::outer(c, a);
  double manual = 0.0;
  {
    std::vector<double> prod(g.nodeCount(), 0.0);
    for (int e = 0; e < 9; ++e)
      for (std::size_t q = 0; q < prod.size(); ++q) prod[q] += ta.comps[e][q] * tb.comps[e][q];
    manual = integrate(prod, g, r);
  }
  CHECK(inner_product(ta, tb, r) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("lp norms: closed forms and consistency") {
  const Grid3 g(16, 16, 16, 2.0);
  const Region strip01 = Region::strip(0.0, 1.0);
  const auto cfield = VectorField::sampled(g, [](double, double, double) {
    return std::array<double, 3>{-2.5, 0.0, 0.0};
  });
  CHECK(lp_norm(cfield, 2.0, strip01) ==
        doctest::Approx(2.5 * std::sqrt(kTwoPi * kTwoPi)).epsilon(1e-12));

  const auto sx = VectorField::sampled(g, [](double x1, double, double) {
    return std::array<double, 3>{std::sin(x1), 0.0, 0.0};
  });
  const double inf = lp_norm(sx, std::numeric_limits<double>::infinity(), Region::fullSlab());
  CHECK(std::fabs(inf - 1.0) <= g.hx() * g.hx());

  const VectorField zero(g, Region::fullSlab());
  for (double p : {1.0, 2.0, 3.0}) CHECK(lp_norm(zero, p, Region::fullSlab()) == 0.0);

  // ||f||_2^2 == <f, f>
  const double n2 = lp_norm(sx, 2.0, Region::halfPlus());
  CHECK(n2 * n2 == doctest::Approx(inner_product(sx, sx, Region::halfPlus())).epsilon(1e-12));
}

TEST_CASE("log-log fitting recovers exponents and trims envelopes") {
  std::vector<double> x{0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
  const FitResult f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(f.residual <= 1e-12);
  CHECK(f.used == 5);

  // Bend the two largest scales; the trimmed fit drops them and recovers
  // the small-scale exponent.
  std::vector<double> ybent = y;
  ybent[3] *= 0.4;
  ybent[4] *= 0.1;
  const FitResult t = loglog_fit_trimmed(x, ybent);
  CHECK(t.used == 3);
  CHECK(t.slope == doctest::Approx(2.5).epsilon(1e-10));

  const std::vector<double> one{1.0}, two{2.0};
  CHECK_THROWS_AS(loglog_fit(one, two), std::invalid_argument);
  const std::vector<double> xs{1.0, 2.0}, bad{0.0, -1.0};
  CHECK_THROWS_AS(loglog_fit(xs, bad), std::invalid_argument);
}
