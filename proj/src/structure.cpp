#include "oflx/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "oflx/field_ops.hpp"
#include "oflx/parallel.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/reflectex.hpp"

namespace oflx {

namespace {

double offset_length(const Grid3& g, const std::array<int, 3>& y) {
  const double dx = y[0] * g.hx();
  const double dy = y[1] * g.hy();
  const double dz = y[2] * g.hz();
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const Grid3& series_grid(const TimeSeries& u) {
  u.validate();
  return u.snaps[0]->grid;
}

/// Integral of |f|^3 over the region, cubing pointwise (no norm/cube round
/// trip) so that scaling f by a power of two scales the result by its exact
/// cube.
double integral_cubed(const VectorField& f, const Region& region) {
  std::vector<double> cubed(f.nodeCount());
  for (std::size_t q = 0; q < cubed.size(); ++q) {
    const double m2 = f.comps[0][q] * f.comps[0][q] + f.comps[1][q] * f.comps[1][q] +
                      f.comps[2][q] * f.comps[2][q];
    cubed[q] = m2 * std::sqrt(m2);
  }
  return integrate(cubed, f.grid, region);
}

double s3_core(const TimeSeries& u, const std::array<int, 3>& y, const Region& probe) {
  if (y[0] == 0 && y[1] == 0 && y[2] == 0)
    throw std::invalid_argument("structure_function: offset must be nonzero");
  return time_integral(u, [&](const VectorField& snap) {
    const VectorField v = zero_extend(snap);  // enforces the half-support contract
    const VectorField sh = shift(v, y[0], y[1], y[2]);
    return integral_cubed(axpy(sh, -1.0, v), probe);
  });
}

}  // namespace

double structure_function(const TimeSeries& u, const std::array<int, 3>& y) {
  const Grid3& g = series_grid(u);
  const double yLen = offset_length(g, y);
  if (!(yLen < 0.5 * g.Lz)) {
    std::ostringstream os;
    os << "structure_function: |y| = " << yLen << " must stay below Lz/2 = "
       << 0.5 * g.Lz;
    throw std::domain_error(os.str());
  }
  return s3_core(u, y, Region::above(yLen));
}

double structure_function(const TimeSeries& u, const std::array<int, 3>& y,
                          const Region& probe) {
  series_grid(u);
  return s3_core(u, y, probe);
}

StructureReport bulk_condition_study(const TimeSeries& u,
                                     const std::vector<std::array<int, 3>>& directions,
                                     int scaleCount, int baseStep) {
  const Grid3& g = series_grid(u);
  if (directions.empty())
    throw std::invalid_argument("bulk_condition_study: no directions given");
  if (scaleCount < 1 || baseStep < 1)
    throw std::invalid_argument("bulk_condition_study: scaleCount and baseStep must be >= 1");

  std::vector<int> usable;
  for (int j = 0; j < scaleCount; ++j) {
    const long long k = static_cast<long long>(baseStep) << j;
    if (k > std::numeric_limits<int>::max() / 8) break;
    bool ok = true;
    for (const auto& d : directions) {
      const std::array<int, 3> y{static_cast<int>(k) * d[0], static_cast<int>(k) * d[1],
                                 static_cast<int>(k) * d[2]};
      if (!(offset_length(g, y) < 0.5 * g.Lz)) ok = false;
    }
    if (ok) usable.push_back(static_cast<int>(k));
  }
  if (usable.size() < 4) {
    std::ostringstream os;
    os << "bulk_condition_study: only " << usable.size()
       << " usable dyadic scales (|y| < Lz/2); need at least 4";
    throw std::domain_error(os.str());
  }

  StructureReport rep;
  rep.scales = usable;
  bool anyUnfit = false, anyViolating = false, allOk = true;
  for (const auto& d : directions) {
    DirectionStudy ds;
    ds.direction = d;
    for (int k : usable) {
      const std::array<int, 3> y{k * d[0], k * d[1], k * d[2]};
      const double s3 = structure_function(u, y);
      const double yLen = offset_length(g, y);
      ds.yLens.push_back(yLen);
      ds.s3.push_back(s3);
      ds.s3OverY.push_back(s3 / yLen);
    }
    const bool vanishes =
        std::all_of(ds.s3.begin(), ds.s3.end(), [](double v) { return v == 0.0; });
    if (vanishes) {
      // Identically zero increments satisfy the bulk condition trivially.
      ds.slope = FitResult{};
    } else {
      try {
        ds.slope = loglog_fit_trimmed(ds.yLens, ds.s3OverY);
      } catch (const std::invalid_argument&) {
        ds.slope = FitResult{};
        anyUnfit = true;
      }
      if (ds.slope.used >= 2) {
        if (!(ds.slope.slope >= rep.slopeThreshold &&
              ds.slope.residual < rep.residualThreshold))
          allOk = false;
        if (ds.slope.slope <= -rep.slopeThreshold) anyViolating = true;
      }
    }
    rep.perDirection.push_back(std::move(ds));
  }
  if (anyUnfit)
    rep.verdict = "inconclusive";
  else if (allOk)
    rep.verdict = "satisfied";
  else if (anyViolating)
    rep.verdict = "violated";
  else
    rep.verdict = "inconclusive";
  return rep;
}

ModulusTable boundary_modulus(const TimeSeries& u, double delta) {
  const Grid3& g = series_grid(u);
  const double hz = g.hz();
  if (!(delta < g.Lz))
    throw std::domain_error("boundary_modulus: delta must be below Lz");
  if (delta < 3.0 * hz)
    throw std::domain_error(
        "boundary_modulus: delta is under-resolved (fewer than 4 x3 nodes in [0, delta])");

  // Dyadic radius ladder <= delta, down to the grid spacing; 0 first.
  std::vector<double> ladder;
  for (double r = delta; r >= hz * (1.0 - 1e-12); r *= 0.5) ladder.push_back(r);
  std::reverse(ladder.begin(), ladder.end());
  ModulusTable table;
  table.radii.push_back(0.0);
  table.radii.insert(table.radii.end(), ladder.begin(), ladder.end());
  table.times = u.times;

  // Grid offsets z with x + z inside T^2 x [0, delta] and |z| <= delta.
  struct Offset {
    int o1, o2, o3;
    double len;
  };
  const int m1 = static_cast<int>(delta / g.hx());
  const int m2 = static_cast<int>(delta / g.hy());
  const int m3 = static_cast<int>(delta / hz * (1.0 + 1e-12));
  std::vector<Offset> offsets;
  for (int o1 = -m1; o1 <= m1; ++o1)
    for (int o2 = -m2; o2 <= m2; ++o2)
      for (int o3 = 0; o3 <= m3; ++o3) {
        if (o1 == 0 && o2 == 0 && o3 == 0) continue;
        const double len = offset_length(g, {o1, o2, o3});
        if (len <= delta * (1.0 + 1e-12)) offsets.push_back({o1, o2, o3, len});
      }
  std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    if (a.len != b.len) return a.len < b.len;
    return std::tie(a.o1, a.o2, a.o3) < std::tie(b.o1, b.o2, b.o3);
  });

  const std::size_t kz0 = g.nzHalf;
  auto snapshot_row = [&](const VectorField& f) {
    std::vector<double> sup(offsets.size(), 0.0);
    parallel_for(offsets.size(), [&](std::size_t b0, std::size_t e0) {
      for (std::size_t q = b0; q < e0; ++q) {
        const Offset& o = offsets[q];
        double best = 0.0;
        for (std::uint32_t i = 0; i < g.nx; ++i) {
          const std::uint32_t it = (i + static_cast<std::uint32_t>(o.o1 + static_cast<int>(g.nx))) % g.nx;
          for (std::uint32_t j = 0; j < g.ny; ++j) {
            const std::uint32_t jt = (j + static_cast<std::uint32_t>(o.o2 + static_cast<int>(g.ny))) % g.ny;
            const std::size_t pa = f.grid.index(i, j, kz0);
            const std::size_t pb = f.grid.index(it, jt, kz0 + static_cast<std::size_t>(o.o3));
            double m = 0.0;
            for (int c = 0; c < 3; ++c) {
              const double d = f.comps[c][pb] - f.comps[c][pa];
              m += d * d;
            }
            best = std::max(best, m);
          }
        }
        sup[q] = std::sqrt(best);
      }
    });
    // Nested radius sets: prefix maxima over the sorted offsets.
    std::vector<double> row(table.radii.size(), 0.0);
    double running = 0.0;
    std::size_t q = 0;
    for (std::size_t r = 1; r < table.radii.size(); ++r) {
      const double cap = table.radii[r] * (1.0 + 1e-12);
      while (q < offsets.size() && offsets[q].len <= cap)
        running = std::max(running, sup[q++]);
      row[r] = running;
    }
    return row;
  };

  std::unordered_map<const VectorField*, std::vector<double>> cache;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const VectorField* p = u.snaps[k].get();
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, snapshot_row(*p)).first;
    table.values.push_back(it->second);
  }
  for (const auto& row : table.values)
    for (std::size_t r = 1; r < row.size(); ++r)
      if (row[r] < row[r - 1]) table.monotone = false;
  return table;
}

FitResult modulus_slope(const ModulusTable& table) {
  if (table.values.empty()) throw std::invalid_argument("modulus_slope: empty table");
  std::vector<double> r, w;
  for (std::size_t q = 1; q < table.radii.size(); ++q) {
    double m = 0.0;
    for (const auto& row : table.values) m = std::max(m, row[q]);
    r.push_back(table.radii[q]);
    w.push_back(m);
  }
  return loglog_fit(r, w);
}

StripStudy strip_norm_study(const TimeSeries& u, const std::vector<double>& epsilons) {
  const Grid3& g = series_grid(u);
  if (epsilons.empty())
    throw std::invalid_argument("strip_norm_study: no epsilons given");
  const double hz = g.hz();
  for (double eps : epsilons) {
    if (!(eps >= 2.0 * hz)) {
      std::ostringstream os;
      os << "strip_norm_study: eps = " << eps << " is below 2*hz = " << 2.0 * hz;
      throw std::domain_error(os.str());
    }
    double lo, hi;
    Region::strip(-eps, eps).zbounds(g.Lz, lo, hi);  // throws if the strip leaves the slab
  }

  StripStudy st;
  st.epsilons = epsilons;
  st.horizon = u.duration();

  // Zero-extended and odd-extended snapshots, one pass per distinct field.
  std::unordered_map<const VectorField*, std::pair<std::shared_ptr<const VectorField>,
                                                   std::shared_ptr<const VectorField>>>
      cache;
  auto pair_for = [&](const VectorField& f) -> const auto& {
    auto it = cache.find(&f);
    if (it == cache.end()) {
      auto zx = std::make_shared<const VectorField>(zero_extend(f));
      auto ex = std::make_shared<const VectorField>(extend(f).field);
      it = cache.emplace(&f, std::make_pair(std::move(zx), std::move(ex))).first;
    }
    return it->second;
  };
  for (const auto& snap : u.snaps) pair_for(*snap);

  const Region half = Region::halfPlus();
  for (const auto& [p, pr] : cache)
    st.supSample = std::max(st.supSample,
                            lp_norm(*pr.first, std::numeric_limits<double>::infinity(), half));

  const std::array<double, 3> steps{g.hx(), g.hy(), hz};
  for (int d = 0; d < 3; ++d) {
    for (double eps : epsilons) {
      const int o = std::max(1, static_cast<int>(std::lround(eps / steps[d])));
      st.shiftLen[d].push_back(o * steps[d]);
      const Region strip = Region::strip(-eps, eps);
      const std::array<int, 3> sh{d == 0 ? -o : 0, d == 1 ? -o : 0, d == 2 ? -o : 0};
      auto cubed = [&](const VectorField& f) {
        const VectorField moved = shift(f, sh[0], sh[1], sh[2]);
        return integral_cubed(axpy(moved, -1.0, f), strip);
      };
      const double qa = time_integral(u, [&](const VectorField& f) {
                          return cubed(*pair_for(f).first);
                        }) / eps;
      const double qb = time_integral(u, [&](const VectorField& f) {
                          return cubed(*pair_for(f).second);
                        }) / eps;
      st.zeroExtended[d].push_back(qa);
      st.extended[d].push_back(qb);
      st.boundConstant = std::max(st.boundConstant, qa);
    }
    auto fit_or_unused = [&](const std::vector<double>& vals) {
      try {
        return loglog_fit(epsilons, vals);
      } catch (const std::invalid_argument&) {
        return FitResult{};
      }
    };
    st.slopeZeroExtended[d] = fit_or_unused(st.zeroExtended[d]);
    st.slopeExtended[d] = fit_or_unused(st.extended[d]);
  }
  return st;
}

}  // namespace oflx
