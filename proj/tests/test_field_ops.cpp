#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oflx/bump.hpp"
#include "oflx/field.hpp"
#include "oflx/field_ops.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/synth_fields.hpp"

using namespace oflx;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

bool same_samples(const VectorField& a, const VectorField& b) {
  for (int c = 0; c < 3; ++c)
    if (a.comps[c] != b.comps[c]) return false;
  return true;
}

}  // namespace

TEST_CASE("shift: periodic wrap, zero fill, additive composition") {
  const Grid3 g(32, 32, 8, kPi);
  const auto sine = VectorField::sampled(
      g, [](double x1, double, double) { return std::array<double, 3>{std::sin(x1), 0.0, 0.0}; });

  SUBCASE("zero offset and full-period offsets reproduce the field bitwise") {
    CHECK(same_samples(shift(sine, 0, 0, 0), sine));
    CHECK(same_samples(shift(sine, static_cast<int>(g.nx), 0, 0), sine));
    CHECK(same_samples(shift(sine, 0, static_cast<int>(g.ny), 0), sine));
  }

  SUBCASE("half-period offset negates a sine") {
    const VectorField s = shift(sine, static_cast<int>(g.nx) / 2, 0, 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.nodeCount(); ++k)
      worst = std::fmax(worst, std::fabs(s.comps[0][k] + sine.comps[0][k]));
    CHECK(worst <= 1e-12);
  }

  SUBCASE("x3 rows shifted past the slab edge are zero filled") {
    const auto ones = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{1.0, 1.0, 1.0}; });
    const VectorField s = shift(ones, 0, 0, 5);
    const std::size_t nz = g.nz();
    for (int c = 0; c < 3; ++c) {
      CHECK(s.comps[c][g.index(2, 3, nz - 5)] == 0.0);
      CHECK(s.comps[c][g.index(2, 3, nz - 1)] == 0.0);
      CHECK(s.comps[c][g.index(2, 3, nz - 6)] == 1.0);
    }
  }

  SUBCASE("shifts compose additively while no x3 data is lost") {
    // Nonzero rows satisfy |x3| < Lz/2, so net offsets up to 4 rows lose nothing.
    const auto compact = VectorField::sampled(g, [&g](double x1, double x2, double x3) {
      if (std::fabs(x3) >= 0.5 * g.Lz) return std::array<double, 3>{0.0, 0.0, 0.0};
      return std::array<double, 3>{std::sin(x1 + x3), std::cos(x2) * x3, x1 * 0.1};
    });
    const VectorField two = shift(shift(compact, 1, 2, 3), -4, 5, -1);
    const VectorField one = shift(compact, -3, 7, 2);
    CHECK(same_samples(two, one));
  }
}

TEST_CASE("divergence: exact zeros for structurally divergence-free fields") {
  SUBCASE("constants differentiate to exactly zero") {
    const Grid3 g(16, 16, 4, 1.0);
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{0.75, -1.5, 2.0}; });
    CHECK(max_abs(divergence(c)) == 0.0);
  }

  SUBCASE("components independent of their own coordinate") {
    const Grid3 g(16, 16, 6, 2.0);
    const auto f = VectorField::sampled(g, [](double, double x2, double x3) {
      return std::array<double, 3>{std::sin(x2), std::sin(x3), 0.0};
    });
    CHECK(max_abs(divergence(f)) == 0.0);
  }

  SUBCASE("generated shear flows are structurally divergence free") {
    const Grid3 g(16, 16, 8, kPi);
    const VectorField u = gen_shear(
        g, [](double z) { return std::sin(z); }, [](double z) { return 0.5 * z; },
        default_envelope(0.85 * g.Lz));
    CHECK(max_abs(divergence(u)) == 0.0);
  }
}

TEST_CASE("divergence: second-order accuracy against closed forms") {
  SUBCASE("horizontal: d/dx1 sin(x1) = cos(x1) + O(hx^2)") {
    const Grid3 g(32, 8, 4, 1.0);
    const auto f = VectorField::sampled(
        g, [](double x1, double, double) { return std::array<double, 3>{std::sin(x1), 0.0, 0.0}; });
    const std::vector<double> d = divergence(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
      worst = std::fmax(worst, std::fabs(d[g.index(i, 0, 0)] - std::cos(g.x1(i))));
    const double h2 = g.hx() * g.hx();
    CHECK(worst <= 0.2 * h2);   // central-difference constant is 1/6
    CHECK(worst >= 0.05 * h2);  // and the error really is O(h^2), not zero
  }

  SUBCASE("vertical one-sided rows stay second order under refinement") {
    auto worst_err = [](std::uint32_t nzHalf) {
      const Grid3 g(8, 8, nzHalf, kPi);
      const auto f = VectorField::sampled(g, [](double, double, double x3) {
        return std::array<double, 3>{0.0, 0.0, std::sin(x3)};
      });
      const std::vector<double> d = divergence(f);
      double worst = 0.0;
      for (std::size_t k = 0; k < g.nz(); ++k)
        worst = std::fmax(worst, std::fabs(d[g.index(1, 1, k)] - std::cos(g.x3(k))));
      return worst;
    };
    const double coarse = worst_err(8), fine = worst_err(16);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.3));
  }
}

TEST_CASE("fd_jacobian: entry (i,j) holds d f_i / d x_j") {
  const Grid3 g(48, 48, 4, 1.0);
  const auto f = VectorField::sampled(g, [](double x1, double x2, double) {
    return std::array<double, 3>{std::sin(x2), std::sin(2.0 * x1), 0.5};
  });
  const TensorField t = fd_jacobian(f);
  const double h2 = g.hx() * g.hx();

  double e01 = 0.0, e10 = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) {
      const std::size_t k = g.index(i, j, 2);
      e01 = std::fmax(e01, std::fabs(t.comps[3 * 0 + 1][k] - std::cos(g.x2(j))));
      e10 = std::fmax(e10, std::fabs(t.comps[3 * 1 + 0][k] - 2.0 * std::cos(2.0 * g.x1(i))));
    }
  CHECK(e01 <= 0.2 * h2);
  CHECK(e10 <= 1.5 * h2);  // k = 2 mode: constant scales as k^3/6

  // Entries that differentiate along a constant direction vanish exactly,
  // including the one-sided x3 rows (0.5 has exact small-integer multiples).
  CHECK(max_abs(t.comps[3 * 0 + 0]) == 0.0);
  CHECK(max_abs(t.comps[3 * 1 + 1]) == 0.0);
  CHECK(max_abs(t.comps[3 * 2 + 0]) == 0.0);
  CHECK(max_abs(t.comps[3 * 2 + 1]) == 0.0);
  CHECK(max_abs(t.comps[3 * 2 + 2]) == 0.0);

  // The trace reproduces divergence up to summation order.
  const std::vector<double> d = divergence(f);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.nodeCount(); ++k) {
    const double tr = t.comps[0][k] + t.comps[4][k] + t.comps[8][k];
    worst = std::fmax(worst, std::fabs(tr - d[k]));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("weak_div_defect: discrete summation by parts and a genuine defect") {
  const Grid3 g(24, 24, 12, 2.0);
  const auto scalars = default_test_scalars(g, 10, 7);

  SUBCASE("horizontal constants telescope away") {
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{1.25, -0.5, 0.0}; });
    CHECK(weak_div_defect(c, scalars) <= 1e-10);
  }

  SUBCASE("shear flow against ten random smooth scalars") {
    const Grid3 gs(24, 24, 12, kPi);
    const VectorField u = gen_shear(
        gs, [](double z) { return std::sin(z); }, [](double z) { return std::cos(z); },
        default_envelope(0.85 * gs.Lz));
    CHECK(weak_div_defect(u, default_test_scalars(gs, 10, 11)) <= 1e-8);
  }

  SUBCASE("a gradient field has defect equal to the gradient norm") {
    // b is a compactly supported bump centered at (pi, pi, 0.5) with radius
    // 0.75, so testing f = grad b against b itself normalizes to |grad b|_2.
    std::vector<double> b(g.nodeCount());
    const double R = 1.5;
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t k = 0; k < g.nz(); ++k) {
          const double dx = g.x1(i) - kPi, dy = g.x2(j) - kPi, dz = g.x3(k) - 0.5;
          b[g.index(i, j, k)] = bump_profile((dx * dx + dy * dy + dz * dz) / (R * R));
        }
    VectorField grad = fd_gradient(b, g);
    const double norm = lp_norm(grad, 2.0, Region::halfPlus());
    const double defect = weak_div_defect(grad, {b});
    CHECK(defect == doctest::Approx(norm).epsilon(1e-12));
    CHECK(defect > 0.1);
  }

  SUBCASE("precondition failures") {
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{1.0, 0.0, 0.0}; });
    CHECK_THROWS_AS(weak_div_defect(c, {}), std::domain_error);
    CHECK_THROWS_AS(default_test_scalars(g, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("axpy and scaled: exact componentwise algebra") {
  const Grid3 g(8, 8, 6, 1.5);
  const auto f = VectorField::sampled(g, [](double x1, double x2, double x3) {
    return std::array<double, 3>{std::sin(x1 + x3), std::cos(x2), x3};
  });
  const auto h = VectorField::sampled(g, [](double x1, double x2, double x3) {
    return std::array<double, 3>{x1, std::sin(x2 * x3), std::cos(x1)};
  });

  const VectorField a = axpy(f, -2.5, h);
  const VectorField s = scaled(f, 2.0);
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < g.nodeCount(); ++k) {
      CHECK(a.comps[c][k] == f.comps[c][k] + -2.5 * h.comps[c][k]);
      CHECK(s.comps[c][k] == 2.0 * f.comps[c][k]);
    }
  CHECK(a.support == Region::fullSlab());

  const Grid3 g2(8, 8, 6, 2.0);
  const VectorField other(g2, Region::fullSlab());
  CHECK_THROWS_AS(axpy(f, 1.0, other), std::invalid_argument);
}

TEST_CASE("trapezoid weights and snapshot-cached time integrals") {
  SUBCASE("uniform and nonuniform weights") {
    const std::vector<double> u = trapezoid_weights({0.0, 1.0, 2.0, 3.0});
    CHECK(u == std::vector<double>{0.5, 1.0, 1.0, 0.5});
    const std::vector<double> n = trapezoid_weights({0.0, 1.0, 3.0});
    CHECK(n == std::vector<double>{0.5, 1.5, 1.0});
    CHECK(trapezoid_weights({0.0}) == std::vector<double>{0.0});
    CHECK(trapezoid_weights({}).empty());
  }

  const Grid3 g(8, 8, 4, 1.0);
  const auto base = std::make_shared<VectorField>(VectorField::sampled(
      g, [](double x1, double, double) { return std::array<double, 3>{std::sin(x1), 0.0, 0.0}; }));

  SUBCASE("steady series evaluate the integrand once") {
    TimeSeries ts;
    ts.times = {0.0, 0.25, 0.5, 0.75, 1.0};
    ts.snaps.assign(5, base);
    int calls = 0;
    const double value = time_integral(ts, [&calls](const VectorField&) {
      ++calls;
      return 3.25;
    });
    CHECK(calls == 1);
    CHECK(value == 3.25);  // weights sum to the duration exactly here
  }

  SUBCASE("distinct snapshots integrate with trapezoid weights") {
    TimeSeries ts;
    ts.times = {0.0, 0.5, 1.0};
    std::vector<double> vals;
    for (double amp : {1.0, 2.0, 4.0}) {
      ts.snaps.push_back(std::make_shared<VectorField>(scaled(*base, amp)));
      vals.push_back(inner_product(*ts.snaps.back(), *ts.snaps.back(), Region::fullSlab()));
    }
    int calls = 0;
    const double got = time_integral(ts, [&calls](const VectorField& v) {
      ++calls;
      return inner_product(v, v, Region::fullSlab());
    });
    CHECK(calls == 3);
    const std::vector<double> w = trapezoid_weights(ts.times);
    double acc = 0.0;
    for (std::size_t k = 0; k < 3; ++k) acc += w[k] * vals[k];
    CHECK(got == acc);
  }
}
