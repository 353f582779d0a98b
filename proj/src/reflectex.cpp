#include "oflx/reflectex.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oflx/parallel.hpp"
#include "oflx/quadrature.hpp"

namespace oflx {

namespace {

/// Mirror of a support tag under x3 -> -x3. Above/HalfPlus mirror onto
/// regions closed at -Lz which no open-bottom tag can represent, so those
/// stay conservative (FullSlab).
Region mirrored(const Region& r) {
  if (r.kind == Region::Kind::Strip) return Region::strip(-r.b, -r.a);
  if (r.kind == Region::Kind::FullSlab) return r;
  return Region::fullSlab();
}

/// Throws std::domain_error if any sample strictly below the boundary plane
/// is nonzero.
void require_half_support(const VectorField& g, const char* what) {
  const Grid3& grid = g.grid;
  double worst = 0.0;
  for (std::size_t kz = 0; kz < grid.nzHalf; ++kz)
    for (std::size_t i = 0; i < grid.nx; ++i)
      for (std::size_t j = 0; j < grid.ny; ++j) {
        const std::size_t n = grid.index(i, j, kz);
        for (const auto& c : g.comps) worst = std::fmax(worst, std::fabs(c[n]));
      }
  if (worst > 0.0) {
    std::ostringstream os;
    os << what << ": input has nonzero samples below the boundary plane (max |u| = "
       << worst << ")";
    throw std::domain_error(os.str());
  }
}

}  // namespace

VectorField reflect(const VectorField& f) {
  const Grid3& g = f.grid;
  VectorField out(g, mirrored(f.support), f.time);
  const std::size_t nz = g.nz();
  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        const std::size_t col = g.index(i, j, 0);
        const double* p1 = f.comps[0].data() + col;
        const double* p2 = f.comps[1].data() + col;
        const double* p3 = f.comps[2].data() + col;
        double* q1 = out.comps[0].data() + col;
        double* q2 = out.comps[1].data() + col;
        double* q3 = out.comps[2].data() + col;
        for (std::size_t k = 0; k < nz; ++k) {
          const std::size_t m = nz - 1 - k;
          q1[k] = p1[m];
          q2[k] = p2[m];
          q3[k] = -p3[m];
        }
      }
  });
  return out;
}

VectorField zero_extend(const VectorField& g) {
  require_half_support(g, "zero_extend");
  VectorField out = g;
  out.support = Region::halfPlus();
  return out;
}

ExtensionResult extend(const VectorField& g, double boundaryTol) {
  require_half_support(g, "extend");
  const Grid3& grid = g.grid;
  const std::size_t nz = grid.nz();
  const std::size_t mid = grid.nzHalf;

  ExtensionResult res;
  res.field = VectorField(grid, Region::fullSlab(), g.time);
  parallel_for(grid.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i)
      for (std::size_t j = 0; j < grid.ny; ++j) {
        const std::size_t col = grid.index(i, j, 0);
        const double* p1 = g.comps[0].data() + col;
        const double* p2 = g.comps[1].data() + col;
        const double* p3 = g.comps[2].data() + col;
        double* q1 = res.field.comps[0].data() + col;
        double* q2 = res.field.comps[1].data() + col;
        double* q3 = res.field.comps[2].data() + col;
        for (std::size_t k = mid + 1; k < nz; ++k) {
          q1[k] = p1[k];
          q2[k] = p2[k];
          q3[k] = p3[k];
        }
        for (std::size_t k = 0; k < mid; ++k) {
          const std::size_t m = nz - 1 - k;
          q1[k] = p1[m];
          q2[k] = p2[m];
          q3[k] = -p3[m];
        }
        // Half-sum rule at the boundary plane: (g1, g2, 0) exactly.
        q1[mid] = p1[mid];
        q2[mid] = p2[mid];
        q3[mid] = 0.0;
      }
  });

  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j)
      res.boundaryMax = std::fmax(res.boundaryMax, std::fabs(g.comps[2][grid.index(i, j, mid)]));
  res.boundaryWarning = res.boundaryMax > boundaryTol;

  res.sourceNormL2 = lp_norm(g, 2.0, Region::halfPlus());
  res.extendedNormL2 = lp_norm(res.field, 2.0, Region::fullSlab());
  return res;
}

VectorField truncated_reflect(const VectorField& v, double gamma) {
  const Grid3& g = v.grid;
  if (!(gamma > 0.0) || gamma >= g.Lz)
    throw std::domain_error("truncated_reflect: gamma must lie in (0, Lz), got " +
                            std::to_string(gamma));
  VectorField out = reflect(v);
  out.support = Region::above(-gamma);
  const std::size_t nz = g.nz();
  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        const std::size_t col = g.index(i, j, 0);
        for (auto& c : out.comps) {
          double* q = c.data() + col;
          for (std::size_t k = 0; k < nz && !(g.x3(k) > -gamma); ++k) q[k] = 0.0;
        }
      }
  });
  return out;
}

}  // namespace oflx
