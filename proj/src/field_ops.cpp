#include "oflx/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "oflx/bump.hpp"
#include "oflx/parallel.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/rng.hpp"

namespace oflx {

namespace {

std::size_t wrap(std::int64_t i, std::int64_t n) {
  std::int64_t r = i % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

/// Conservative superset of the union of two support tags.
Region support_union(const Region& r1, const Region& r2, const Grid3& g) {
  if (r1 == r2) return r1;
  double lo1, hi1, lo2, hi2;
  r1.zbounds(g.Lz, lo1, hi1);
  r2.zbounds(g.Lz, lo2, hi2);
  const double slack = 0.25 * g.hz();
  const double lo = std::fmin(lo1, lo2) - slack;
  const double hi = std::fmax(hi1, hi2);
  if (lo <= -g.Lz) return Region::fullSlab();
  if (hi >= g.Lz) return Region::above(lo);
  return Region::strip(lo, std::fmin(hi + slack, g.Lz));
}

/// d s / d x_axis, second order: central stencils, periodic wrap in x1, x2,
/// one-sided (-3 s0 + 4 s1 - s2)/(2h) rows at x3 = +-Lz.
std::vector<double> partial(std::span<const double> s, const Grid3& g, int axis) {
  if (s.size() != g.nodeCount())
    throw std::invalid_argument("partial: sample count does not match the grid");
  std::vector<double> out(s.size());
  const std::size_t nz = g.nz();
  const std::int64_t nx = g.nx, ny = g.ny;

  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        double* po = out.data() + g.index(i, j, 0);
        if (axis == 0) {
          const double inv2h = 1.0 / (2.0 * g.hx());
          const double* pp = s.data() + g.index(wrap(static_cast<std::int64_t>(i) + 1, nx), j, 0);
          const double* pm = s.data() + g.index(wrap(static_cast<std::int64_t>(i) - 1, nx), j, 0);
          for (std::size_t k = 0; k < nz; ++k) po[k] = (pp[k] - pm[k]) * inv2h;
        } else if (axis == 1) {
          const double inv2h = 1.0 / (2.0 * g.hy());
          const double* pp = s.data() + g.index(i, wrap(static_cast<std::int64_t>(j) + 1, ny), 0);
          const double* pm = s.data() + g.index(i, wrap(static_cast<std::int64_t>(j) - 1, ny), 0);
          for (std::size_t k = 0; k < nz; ++k) po[k] = (pp[k] - pm[k]) * inv2h;
        } else {
          const double inv2h = 1.0 / (2.0 * g.hz());
          const double* ps = s.data() + g.index(i, j, 0);
          po[0] = (-3.0 * ps[0] + 4.0 * ps[1] - ps[2]) * inv2h;
          for (std::size_t k = 1; k + 1 < nz; ++k) po[k] = (ps[k + 1] - ps[k - 1]) * inv2h;
          po[nz - 1] = (3.0 * ps[nz - 1] - 4.0 * ps[nz - 2] + ps[nz - 3]) * inv2h;
        }
      }
  });
  return out;
}

}  // namespace

VectorField shift(const VectorField& f, int a, int b, int c) {
  const Grid3& g = f.grid;
  VectorField out(g, f.support.translated(c * g.hz(), g), f.time);
  const std::int64_t nx = g.nx, ny = g.ny;
  const std::int64_t nz = static_cast<std::int64_t>(g.nz());
  const std::int64_t kLo = std::max<std::int64_t>(0, -static_cast<std::int64_t>(c));
  const std::int64_t kHi = std::min<std::int64_t>(nz, nz - c);
  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i) {
      const std::size_t si = wrap(static_cast<std::int64_t>(i) + a, nx);
      for (std::size_t j = 0; j < g.ny; ++j) {
        const std::size_t sj = wrap(static_cast<std::int64_t>(j) + b, ny);
        const std::size_t dst = g.index(i, j, 0);
        const std::size_t src = g.index(si, sj, 0);
        for (int comp = 0; comp < 3; ++comp) {
          const double* ps = f.comps[comp].data() + src;
          double* pd = out.comps[comp].data() + dst;
          for (std::int64_t k = kLo; k < kHi; ++k) pd[k] = ps[k + c];
        }
      }
    }
  });
  return out;
}

std::vector<double> divergence(const VectorField& f) {
  std::vector<double> out = partial(f.comps[0], f.grid, 0);
  const std::vector<double> d2 = partial(f.comps[1], f.grid, 1);
  const std::vector<double> d3 = partial(f.comps[2], f.grid, 2);
  parallel_for(out.size(), [&](std::size_t b0, std::size_t e0) {
    for (std::size_t k = b0; k < e0; ++k) out[k] += d2[k] + d3[k];
  });
  return out;
}

TensorField fd_jacobian(const VectorField& f) {
  TensorField t(f.grid, f.support.widened(1.5 * f.grid.hz(), f.grid));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.comps[3 * i + j] = partial(f.comps[i], f.grid, j);
  return t;
}

VectorField fd_gradient(std::span<const double> s, const Grid3& g) {
  VectorField grad(g, Region::fullSlab());
  for (int axis = 0; axis < 3; ++axis) grad.comps[axis] = partial(s, g, axis);
  return grad;
}

double weak_div_defect(const VectorField& f,
                       const std::vector<std::vector<double>>& testScalars) {
  if (testScalars.empty())
    throw std::domain_error("weak_div_defect: need at least one test scalar");
  const Region half = Region::halfPlus();
  double worst = 0.0;
  for (const auto& phi : testScalars) {
    const VectorField gphi = fd_gradient(phi, f.grid);
    const double num = std::fabs(inner_product(f, gphi, half));
    const double den = lp_norm(gphi, 2.0, half);
    if (den > 0.0) worst = std::fmax(worst, num / den);
  }
  return worst;
}

std::vector<std::vector<double>> default_test_scalars(const Grid3& g, int count,
                                                      unsigned long long seed) {
  if (count < 1) throw std::invalid_argument("default_test_scalars: count must be >= 1");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  const double cut = 0.85 * g.Lz;
  const std::size_t nz = g.nz();
  struct Mode {
    double amp, t1, t2;
    int k1, k2, k3;
  };
  for (int s = 0; s < count; ++s) {
    SplitMix64 rng(seed + 0x100000001B3ULL * static_cast<unsigned long long>(s));
    std::array<Mode, 3> modes;
    for (auto& m : modes) {
      m.amp = rng.sign() * rng.uniform(0.5, 1.5);
      m.k1 = static_cast<int>(rng.below(4));
      m.k2 = static_cast<int>(rng.below(4));
      m.k3 = 1 + static_cast<int>(rng.below(3));
      m.t1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
      m.t2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    std::vector<double> phi(g.nodeCount(), 0.0);
    parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t j = 0; j < g.ny; ++j)
          for (std::size_t kz = 0; kz < nz; ++kz) {
            const double z = g.x3(kz);
            const double env = decay_envelope(z, cut);
            if (env == 0.0) continue;
            double v = 0.0;
            for (const auto& m : modes)
              v += m.amp * std::cos(m.k1 * g.x1(i) + m.t1) *
                   std::cos(m.k2 * g.x2(j) + m.t2) *
                   std::cos(m.k3 * std::numbers::pi * z / g.Lz);
            phi[g.index(i, j, kz)] = env * v;
          }
    });
    out.push_back(std::move(phi));
  }
  return out;
}

VectorField axpy(const VectorField& x, double s, const VectorField& y) {
  require_same_grid(x.grid, y.grid, "axpy");
  VectorField out(x.grid, support_union(x.support, y.support, x.grid), x.time);
  for (int c = 0; c < 3; ++c) {
    const double* px = x.comps[c].data();
    const double* py = y.comps[c].data();
    double* po = out.comps[c].data();
    parallel_for(x.nodeCount(), [&, px, py, po](std::size_t b0, std::size_t e0) {
      for (std::size_t k = b0; k < e0; ++k) po[k] = px[k] + s * py[k];
    });
  }
  return out;
}

VectorField scaled(const VectorField& x, double s) {
  VectorField out(x.grid, x.support, x.time);
  for (int c = 0; c < 3; ++c) {
    const double* px = x.comps[c].data();
    double* po = out.comps[c].data();
    parallel_for(x.nodeCount(), [&, px, po](std::size_t b0, std::size_t e0) {
      for (std::size_t k = b0; k < e0; ++k) po[k] = s * px[k];
    });
  }
  return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  const std::size_t n = times.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  w[0] = 0.5 * (times[1] - times[0]);
  for (std::size_t k = 1; k + 1 < n; ++k) w[k] = 0.5 * (times[k + 1] - times[k - 1]);
  w[n - 1] = 0.5 * (times[n - 1] - times[n - 2]);
  return w;
}

double time_integral(const TimeSeries& u,
                     const std::function<double(const VectorField&)>& fn) {
  u.validate();
  std::unordered_map<const VectorField*, double> cache;
  const std::vector<double> w = trapezoid_weights(u.times);
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const VectorField* p = u.snaps[k].get();
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, fn(*p)).first;
    acc += w[k] * it->second;
  }
  return acc;
}

}  // namespace oflx
