#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "oflx/bump.hpp"
#include "oflx/field.hpp"
#include "oflx/field_ops.hpp"
#include "oflx/fit.hpp"
#include "oflx/mollifier.hpp"
#include "oflx/parallel.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/reflectex.hpp"
#include "oflx/synth_fields.hpp"
#include "oracles.hpp"

using namespace oflx;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_samples(const VectorField& a, const VectorField& b) {
  for (int c = 0; c < 3; ++c)
    if (a.comps[c] != b.comps[c]) return false;
  return true;
}

VectorField smooth_compact(const Grid3& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  const double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng);
  const double cut = 0.85 * g.Lz;
  return VectorField::sampled(g, [=](double x1, double x2, double x3) {
    const double e = decay_envelope(x3, cut);
    return std::array<double, 3>{e * std::sin(x1 + p1) * std::cos(x3 + p2),
                                 e * std::cos(x2 + p2) * std::sin(2.0 * x1 + p3),
                                 e * std::sin(x1 + x2 + p3) * std::sin(x3)};
  });
}

}  // namespace

TEST_CASE("make_kernel: discrete mollifier identities") {
  const Grid3 g(16, 16, 16, 2.0);
  const MollKernel k = make_kernel(1.6, g);

  SUBCASE("resolution rule and admissible range") {
    const double minEps = 4.0 * g.hmax();
    CHECK_NOTHROW(make_kernel(minEps, g));  // the boundary case is admissible
    try {
      make_kernel(0.999 * minEps, g);
      FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("minimum admissible") != std::string::npos);
      CHECK(std::string(e.what()).find(std::to_string(minEps).substr(0, 4)) !=
            std::string::npos);
    }
    CHECK_THROWS_AS(make_kernel(2.0 * g.Lz, g), std::domain_error);
  }

  SUBCASE("taps sum to exactly one and stay strictly inside the support cube") {
    CHECK(pairwise_sum(k.weightsScaled) == 1.0);
    CHECK(k.rx * g.hx() < 0.5 * k.epsilon);
    CHECK(k.ry * g.hy() < 0.5 * k.epsilon);
    CHECK(k.rz * g.hz() < 0.5 * k.epsilon);
    CHECK(k.weightsScaled.size() == k.tapCount());
    // Unscaled weights are the scaled taps divided by the cell volume.
    const double h3 = g.hx() * g.hy() * g.hz();
    double acc = 0.0;
    for (double w : k.weights) acc += w;
    CHECK(acc * h3 == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("weights are even under every coordinate sign flip, bit-exactly") {
    for (int i = -k.rx; i <= k.rx; ++i)
      for (int j = -k.ry; j <= k.ry; ++j)
        for (int kk = -k.rz; kk <= k.rz; ++kk) {
          const double w = k.weightsScaled[k.tapIndex(i, j, kk)];
          CHECK(w == k.weightsScaled[k.tapIndex(-i, -j, -kk)]);
          CHECK(w == k.weightsScaled[k.tapIndex(-i, j, kk)]);
          CHECK(w == k.weightsScaled[k.tapIndex(i, -j, kk)]);
          CHECK(w == k.weightsScaled[k.tapIndex(i, j, -kk)]);
        }
  }

  SUBCASE("gradient taps are odd in their own coordinate and sum to zero") {
    for (int axis = 0; axis < 3; ++axis) {
      const auto& gs = k.gradWeightsScaled[axis];
      for (int i = -k.rx; i <= k.rx; ++i)
        for (int j = -k.ry; j <= k.ry; ++j)
          for (int kk = -k.rz; kk <= k.rz; ++kk) {
            const int mi = axis == 0 ? -i : i;
            const int mj = axis == 1 ? -j : j;
            const int mk = axis == 2 ? -kk : kk;
            CHECK(gs[k.tapIndex(i, j, kk)] == -gs[k.tapIndex(mi, mj, mk)]);
          }
      double acc = 0.0;
      for (double w : gs) acc += w;
      CHECK(std::fabs(acc) <= 1e-14);
    }
  }
}

TEST_CASE("mollify: constants, oracle values, and reflection symmetry") {
  const Grid3 g(16, 16, 16, 2.0);
  const MollKernel k = make_kernel(1.6, g);

  SUBCASE("constants are preserved away from the slab edge") {
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{0.75, -1.25, 0.5}; });
    const VectorField jc = mollify(c, k);
    const double inner = g.Lz - 0.5 * k.epsilon;
    for (std::size_t kz = 0; kz < g.nz(); ++kz) {
      if (std::fabs(g.x3(kz)) > inner) continue;
      CHECK(std::fabs(jc.comps[0][g.index(3, 5, kz)] - 0.75) <= 1e-12);
      CHECK(std::fabs(jc.comps[1][g.index(3, 5, kz)] + 1.25) <= 1e-12);
      CHECK(std::fabs(jc.comps[2][g.index(3, 5, kz)] - 0.5) <= 1e-12);
    }
  }

  SUBCASE("node values match the dense-convolution oracle") {
    const auto f = VectorField::sampled(g, [](double x1, double, double) {
      return std::array<double, 3>{std::sin(x1), 0.0, 0.0};
    });
    const VectorField jf = mollify(f, k);
    for (std::size_t i = 0; i < g.nx; i += 5)
      for (std::size_t kz = 4; kz < g.nz(); kz += 7) {
        const double want = oracle::mollify_at(f, k.epsilon, 0, i, 2, kz);
        CHECK(std::fabs(jf.comps[0][g.index(i, 2, kz)] - want) <= 1e-10);
      }
    // A single scalar attenuation: J sin = c*sin with c in (0, 1].
    const std::size_t mid = g.index(4, 2, g.nzHalf);  // x1 = pi/2, sin = 1
    const double chat = jf.comps[0][mid];
    CHECK(chat > 0.0);
    CHECK(chat <= 1.0);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double s = std::sin(g.x1(i));
      CHECK(std::fabs(jf.comps[0][g.index(i, 9, g.nzHalf / 2)] - chat * s) <= 1e-10);
    }
  }

  SUBCASE("odd third components have no normal trace at the boundary plane") {
    const Grid3 gz(8, 8, 16, 2.0);
    const MollKernel kz = make_kernel(1.6, gz);
    const auto gup = VectorField::sampled(
        gz,
        [&](double x1, double, double x3) {
          const double e = decay_envelope(x3, 0.85 * gz.Lz);
          return std::array<double, 3>{0.0, 0.0, x3 * std::exp(-x3) * (1.0 + 0.5 * std::sin(x1)) * e};
        },
        Region::halfPlus());
    const VectorField je = mollify(extend(gup).field, kz);
    for (std::size_t i = 0; i < gz.nx; ++i)
      for (std::size_t j = 0; j < gz.ny; ++j)
        CHECK(je.comps[2][gz.index(i, j, gz.nzHalf)] == 0.0);
  }

  SUBCASE("mollification commutes with reflection bit-exactly") {
    const VectorField f = smooth_compact(g, 97);
    CHECK(same_samples(mollify(reflect(f), k), reflect(mollify(f, k))));
  }

  SUBCASE("mollification commutes with in-range shifts bit-exactly") {
    const VectorField f = gen_test_function(g, 12);
    for (const auto& off : std::vector<std::array<int, 3>>{{3, -2, 0}, {0, 0, 2}, {-1, 4, -2}}) {
      const VectorField a = shift(mollify(f, k), off[0], off[1], off[2]);
      const VectorField b = mollify(shift(f, off[0], off[1], off[2]), k);
      CHECK(same_samples(a, b));
    }
  }

  SUBCASE("grid mismatch is rejected") {
    const Grid3 other(16, 16, 16, 2.5);
    CHECK_THROWS_AS(mollify(VectorField(other, Region::fullSlab()), k), std::invalid_argument);
  }
}

TEST_CASE("grad_mollify: analytic kernel gradient taps") {
  const Grid3 g(16, 16, 16, 2.0);
  const MollKernel k = make_kernel(1.6, g);

  SUBCASE("constants have zero gradient") {
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{2.0, -0.5, 1.0}; });
    const TensorField t = grad_mollify(c, k);
    double worst = 0.0;
    for (int e = 0; e < 9; ++e)
      for (double v : t.comps[e]) worst = std::fmax(worst, std::fabs(v));
    CHECK(worst <= 1e-12);
  }

  SUBCASE("entry (i, j) = d(J f_j)/dx_i, against the dense oracle") {
    const auto f = VectorField::sampled(g, [](double x1, double x2, double x3) {
      return std::array<double, 3>{std::sin(x1), std::cos(x1 + x2) * std::sin(x3), 0.0};
    });
    const TensorField t = grad_mollify(f, k);
    double offDiag = 0.0;
    for (std::size_t i = 0; i < g.nx; i += 5)
      for (std::size_t kz = 4; kz < g.nz(); kz += 5) {
        const double w00 = oracle::grad_mollify_at(f, k.epsilon, 0, 0, i, 3, kz);
        const double w21 = oracle::grad_mollify_at(f, k.epsilon, 2, 1, i, 3, kz);
        const double w12 = oracle::grad_mollify_at(f, k.epsilon, 1, 2, i, 3, kz);
        CHECK(std::fabs(t.comps[3 * 0 + 0][g.index(i, 3, kz)] - w00) <= 1e-10);
        CHECK(std::fabs(t.comps[3 * 2 + 1][g.index(i, 3, kz)] - w21) <= 1e-10);
        CHECK(std::fabs(t.comps[3 * 1 + 2][g.index(i, 3, kz)] - w12) <= 1e-10);
        offDiag = std::fmax(offDiag, std::fabs(w12));  // f3 = 0: this entry vanishes
      }
    CHECK(offDiag <= 1e-10);
  }

  SUBCASE("the direct sum and the increment form agree") {
    // Sum of gradient taps is zero, so convolving f(x - y) or the increment
    // f(x - y) - f(x) must give the same entries.
    const VectorField f = smooth_compact(g, 5);
    const TensorField t = grad_mollify(f, k);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> di(0, g.nx - 1), dj(0, g.ny - 1),
        dk(6, g.nz() - 7);
    for (int probe = 0; probe < 12; ++probe) {
      const std::size_t i = di(rng), j = dj(rng), kz = dk(rng);
      for (int axis = 0; axis < 3; ++axis) {
        const auto& gw = k.gradWeightsScaled[axis];
        const double fx = f.comps[1][g.index(i, j, kz)];
        double direct = 0.0, increment = 0.0;
        for (int a = -k.rx; a <= k.rx; ++a)
          for (int b = -k.ry; b <= k.ry; ++b)
            for (int c = -k.rz; c <= k.rz; ++c) {
              const long ii = (static_cast<long>(i) - a) % static_cast<long>(g.nx);
              const long jj = (static_cast<long>(j) - b) % static_cast<long>(g.ny);
              const long kk = static_cast<long>(kz) - c;
              const std::size_t ui = static_cast<std::size_t>(ii < 0 ? ii + static_cast<long>(g.nx) : ii);
              const std::size_t uj = static_cast<std::size_t>(jj < 0 ? jj + static_cast<long>(g.ny) : jj);
              const double w = gw[k.tapIndex(a, b, c)];
              const double src = (kk < 0 || kk >= static_cast<long>(g.nz()))
                                     ? 0.0
                                     : f.comps[1][g.index(ui, uj, static_cast<std::size_t>(kk))];
              direct += w * src;
              increment += w * (src - fx);
            }
        CHECK(std::fabs(direct - increment) <= 1e-12);
        CHECK(std::fabs(t.comps[3 * axis + 1][g.index(i, j, kz)] - direct) <= 1e-12);
      }
    }
  }

  SUBCASE("the trace vanishes for discretely divergence-free extended fields") {
    const Grid3 gs(16, 16, 16, kPi);
    const MollKernel ks = make_kernel(2.4, gs);
    const VectorField u = gen_shear(
        gs, [](double z) { return 1.0 + std::sin(z); }, [](double z) { return std::cos(z); },
        default_envelope(0.85 * gs.Lz));
    const TensorField t = grad_mollify(extend(u).field, ks);
    double worst = 0.0;
    for (std::size_t n = 0; n < gs.nodeCount(); ++n)
      worst = std::fmax(worst, std::fabs(t.comps[0][n] + t.comps[4][n] + t.comps[8][n]));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("double_mollify: adjoint moves, contraction, convergence") {
  const Grid3 g(16, 16, 16, 2.0);
  const MollKernel k = make_kernel(1.6, g);

  SUBCASE("constants survive two passes interiorly") {
    const auto c = VectorField::sampled(
        g, [](double, double, double) { return std::array<double, 3>{1.5, 0.0, -2.0}; });
    const VectorField jj = double_mollify(c, k);
    const double inner = g.Lz - k.epsilon;
    for (std::size_t kz = 0; kz < g.nz(); ++kz) {
      if (std::fabs(g.x3(kz)) > inner) continue;
      CHECK(std::fabs(jj.comps[0][g.index(7, 1, kz)] - 1.5) <= 1e-12);
      CHECK(std::fabs(jj.comps[2][g.index(7, 1, kz)] + 2.0) <= 1e-12);
    }
  }

  SUBCASE("self-adjointness and the double-mollifier adjoint move") {
    const VectorField v = gen_test_function(g, 1);
    const VectorField w = gen_test_function(g, 2);
    const Region full = Region::fullSlab();
    CHECK(std::fabs(inner_product(mollify(v, k), w, full) -
                    inner_product(v, mollify(w, k), full)) <= 1e-11);
    CHECK(std::fabs(inner_product(v, double_mollify(w, k), full) -
                    inner_product(mollify(v, k), mollify(w, k), full)) <= 1e-11);
  }

  SUBCASE("mollification contracts every Lp norm") {
    const VectorField f = smooth_compact(g, 33);
    const VectorField jf = mollify(f, k);
    for (double p : {1.0, 2.0, 3.0})
      CHECK(lp_norm(jf, p, Region::fullSlab()) <=
            lp_norm(f, p, Region::fullSlab()) * (1.0 + 1e-10));
  }

  SUBCASE("J f -> f at second order in eps for smooth fields") {
    const Grid3 gf(48, 48, 24, 2.0);
    const auto f = VectorField::sampled(gf, [&](double x1, double x2, double x3) {
      const double e = decay_envelope(x3, 0.85 * gf.Lz);
      return std::array<double, 3>{e * std::sin(x1), e * std::cos(x2), 0.0};
    });
    std::vector<double> eps, err;
    for (double s : {0.55, 0.778, 1.1, 1.556}) {
      const MollKernel ks = make_kernel(s, gf);
      eps.push_back(s);
      err.push_back(lp_norm(axpy(mollify(f, ks), -1.0, f), 2.0, Region::fullSlab()));
    }
    const FitResult fit = loglog_fit(eps, err);
    CHECK(fit.slope >= 1.8);
    CHECK(fit.slope <= 2.2);
  }

  SUBCASE("J J u -> u at first order or better for Lipschitz fields") {
    const Grid3 gf(48, 48, 24, 2.0);
    const auto u = VectorField::sampled(gf, [&](double x1, double, double x3) {
      const double e = decay_envelope(x3, 0.85 * gf.Lz);
      return std::array<double, 3>{e * std::fabs(std::sin(x1)), 0.0, 0.0};
    });
    std::vector<double> eps, err;
    for (double s : {0.55, 0.778, 1.1, 1.556}) {
      const MollKernel ks = make_kernel(s, gf);
      eps.push_back(s);
      err.push_back(lp_norm(axpy(double_mollify(u, ks), -1.0, u), 2.0, Region::fullSlab()));
    }
    CHECK(loglog_fit(eps, err).slope >= 0.9);
  }
}
