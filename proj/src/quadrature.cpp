#include "oflx/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oflx/parallel.hpp"

namespace oflx {

std::vector<double> z_weights(const Grid3& g, const Region& r) {
  double lo, hi;
  r.zbounds(g.Lz, lo, hi);
  const std::size_t nz = g.nz();
  const double hz = g.hz();
  std::vector<double> w(nz, 0.0);
  for (std::size_t k = 0; k + 1 < nz; ++k) {
    const double zk = g.x3(k);
    const double zk1 = g.x3(k + 1);
    const double a = std::fmax(zk, lo);
    const double b = std::fmin(zk1, hi);
    if (!(b > a)) continue;
    if (a == zk && b == zk1) {  // full cell: exact trapezoid halves
      w[k] += 0.5 * hz;
      w[k + 1] += 0.5 * hz;
    } else {  // partial cell: integrate the linear interpolant over [a, b]
      const double len = b - a;
      const double mid = 0.5 * (a + b);
      w[k] += len * (zk1 - mid) / hz;
      w[k + 1] += len * (mid - zk) / hz;
    }
  }
  return w;
}

namespace {

// Weighted z-rows reduced per (i, j) column, then cascaded across columns.
double reduce_weighted(std::span<const double> s, const Grid3& g,
                       const std::vector<double>& wz) {
  const std::size_t nz = g.nz();
  const std::size_t cols = static_cast<std::size_t>(g.nx) * g.ny;
  std::vector<double> colsum(cols);
  parallel_for(cols, [&](std::size_t b, std::size_t e) {
    std::vector<double> row(nz);
    for (std::size_t c = b; c < e; ++c) {
      const double* p = s.data() + c * nz;
      for (std::size_t k = 0; k < nz; ++k) row[k] = p[k] * wz[k];
      colsum[c] = pairwise_sum(row);
    }
  });
  return pairwise_sum(colsum) * g.hx() * g.hy();
}

}  // namespace

double integrate(std::span<const double> samples, const Grid3& g, const Region& r) {
  if (samples.size() != g.nodeCount())
    throw std::invalid_argument("integrate: sample count does not match grid");
  return reduce_weighted(samples, g, z_weights(g, r));
}

double inner_product(const VectorField& f, const VectorField& g, const Region& r) {
  if (f.grid != g.grid) throw std::invalid_argument("inner_product: grid mismatch");
  const auto wz = z_weights(f.grid, r);
  const Grid3& gr = f.grid;
  const std::size_t nz = gr.nz();
  const std::size_t cols = static_cast<std::size_t>(gr.nx) * gr.ny;
  std::vector<double> colsum(cols);
  parallel_for(cols, [&](std::size_t b, std::size_t e) {
    std::vector<double> row(nz);
    for (std::size_t c = b; c < e; ++c) {
      const std::size_t off = c * nz;
      for (std::size_t k = 0; k < nz; ++k) {
        const std::size_t n = off + k;
        const double dot = f.comps[0][n] * g.comps[0][n] + f.comps[1][n] * g.comps[1][n] +
                           f.comps[2][n] * g.comps[2][n];
        row[k] = dot * wz[k];
      }
      colsum[c] = pairwise_sum(row);
    }
  });
  return pairwise_sum(colsum) * gr.hx() * gr.hy();
}

double inner_product(const TensorField& f, const TensorField& g, const Region& r) {
  if (f.grid != g.grid) throw std::invalid_argument("inner_product: grid mismatch");
  const auto wz = z_weights(f.grid, r);
  const Grid3& gr = f.grid;
  const std::size_t nz = gr.nz();
  const std::size_t cols = static_cast<std::size_t>(gr.nx) * gr.ny;
  std::vector<double> colsum(cols);
  parallel_for(cols, [&](std::size_t b, std::size_t e) {
    std::vector<double> row(nz);
    for (std::size_t c = b; c < e; ++c) {
      const std::size_t off = c * nz;
      for (std::size_t k = 0; k < nz; ++k) {
        const std::size_t n = off + k;
        double dot = 0.0;
        for (int m = 0; m < 9; ++m) dot += f.comps[m][n] * g.comps[m][n];
        row[k] = dot * wz[k];
      }
      colsum[c] = pairwise_sum(row);
    }
  });
  return pairwise_sum(colsum) * gr.hx() * gr.hy();
}

double lp_norm(const VectorField& f, double p, const Region& r) {
  const Grid3& g = f.grid;
  if (std::isinf(p)) {
    double m = 0.0;
    const std::size_t nz = g.nz();
    for (std::size_t kz = 0; kz < nz; ++kz) {
      if (!r.contains(g.x3(kz), g.Lz)) continue;
      for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.ny; ++j) {
          const std::size_t n = g.index(i, j, kz);
          const double a = std::sqrt(f.comps[0][n] * f.comps[0][n] +
                                     f.comps[1][n] * f.comps[1][n] +
                                     f.comps[2][n] * f.comps[2][n]);
          m = std::fmax(m, a);
        }
    }
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
  std::vector<double> mag(g.nodeCount());
  const std::size_t n = g.nodeCount();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const double a = std::sqrt(f.comps[0][k] * f.comps[0][k] +
                                 f.comps[1][k] * f.comps[1][k] +
                                 f.comps[2][k] * f.comps[2][k]);
      if (p == 1.0)      mag[k] = a;
      else if (p == 2.0) mag[k] = a * a;
      else if (p == 3.0) mag[k] = a * a * a;
      else               mag[k] = std::pow(a, p);
    }
  });
  const double s = integrate(mag, g, r);
  return std::pow(s, 1.0 / p);
}

}  // namespace oflx
