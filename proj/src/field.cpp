#include "oflx/field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oflx/parallel.hpp"

namespace oflx {

VectorField::VectorField(Grid3 g, Region sup, double t) : grid(g), support(sup), time(t) {
  for (auto& c : comps) c.assign(grid.nodeCount(), 0.0);
}

VectorField VectorField::sampled(
    const Grid3& g, const std::function<std::array<double, 3>(double, double, double)>& fn,
    Region sup, double t) {
  VectorField f(g, sup, t);
  const std::size_t nz = g.nz();
  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i) {
      const double x = g.x1(i);
      for (std::size_t j = 0; j < g.ny; ++j) {
        const double y = g.x2(j);
        for (std::size_t kz = 0; kz < nz; ++kz) {
          const double z = g.x3(kz);
          if (!sup.contains(z, g.Lz)) continue;
          const auto v = fn(x, y, z);
          const std::size_t n = g.index(i, j, kz);
          f.comps[0][n] = v[0];
          f.comps[1][n] = v[1];
          f.comps[2][n] = v[2];
        }
      }
    }
  });
  return f;
}

double VectorField::decayMarginMax(double marginFrac) const {
  const double zcut = (1.0 - marginFrac) * grid.Lz;
  double m = 0.0;
  const std::size_t nz = grid.nz();
  for (std::size_t kz = 0; kz < nz; ++kz) {
    if (std::fabs(grid.x3(kz)) < zcut) continue;
    for (std::size_t i = 0; i < grid.nx; ++i)
      for (std::size_t j = 0; j < grid.ny; ++j) {
        const std::size_t n = grid.index(i, j, kz);
        for (const auto& c : comps) m = std::fmax(m, std::fabs(c[n]));
      }
  }
  return m;
}

void VectorField::requireDecayMargin(double tol, double marginFrac) const {
  const double m = decayMarginMax(marginFrac);
  if (m > tol) {
    std::ostringstream os;
    os << "field violates the decay margin: max |u| = " << m << " > " << tol
       << " in the outer " << marginFrac * 100.0 << "% of the slab";
    throw std::domain_error(os.str());
  }
}

TensorField::TensorField(Grid3 g, Region sup) : grid(g), support(sup) {
  for (auto& c : comps) c.assign(grid.nodeCount(), 0.0);
}

TensorField TensorField::outer(const VectorField& a, const VectorField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("outer: grid mismatch");
  TensorField t(a.grid, a.support);  // product vanishes wherever either factor does
  const std::size_t n = a.nodeCount();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double* pa = a.comps[i].data();
      const double* pb = b.comps[j].data();
      double* pt = t.comps[3 * i + j].data();
      parallel_for(n, [&, pa, pb, pt](std::size_t b0, std::size_t e0) {
        for (std::size_t k = b0; k < e0; ++k) pt[k] = pa[k] * pb[k];
      });
    }
  return t;
}

TensorField TensorField::transposed() const {
  TensorField t(grid, support);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.comps[3 * i + j] = comps[3 * j + i];
  return t;
}

void TimeSeries::validate() const {
  if (times.empty() || times.size() != snaps.size())
    throw std::invalid_argument("TimeSeries: times/snapshots size mismatch or empty");
  if (times.front() != 0.0) throw std::invalid_argument("TimeSeries: times[0] must be 0");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!snaps[k]) throw std::invalid_argument("TimeSeries: null snapshot");
    if (k && !(times[k] > times[k - 1]))
      throw std::invalid_argument("TimeSeries: times must be strictly increasing");
    if (snaps[k]->grid != snaps[0]->grid)
      throw std::invalid_argument("TimeSeries: snapshots on different grids");
  }
}

}  // namespace oflx
