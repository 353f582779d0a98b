#include "oflx/energy_budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "oflx/field_ops.hpp"
#include "oflx/parallel.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/reflectex.hpp"

namespace oflx {

namespace {

constexpr double kL2 = 2.0;

// Truncates the series at the snapshot time t (which must be on the grid).
TimeSeries clip_series(const TimeSeries& u, double t, const char* who) {
  u.validate();
  std::size_t idx = u.times.size();
  for (std::size_t k = 0; k < u.times.size(); ++k)
    if (u.times[k] == t) idx = k;
  if (idx == u.times.size()) {
    std::ostringstream os;
    os << who << ": t = " << t << " is not a snapshot time";
    throw std::domain_error(os.str());
  }
  TimeSeries s;
  s.times.assign(u.times.begin(), u.times.begin() + idx + 1);
  s.snaps.assign(u.snaps.begin(), u.snaps.begin() + idx + 1);
  return s;
}

// Centered time difference with first-order one-sided ends: together with
// trapezoid weights this telescopes sums of <df, g> + <f, dg> exactly.
VectorField time_diff(const std::vector<const VectorField*>& f,
                      const std::vector<double>& tms, std::size_t k) {
  const std::size_t n = f.size();
  if (n == 1) return VectorField(f[0]->grid, f[0]->support, tms[0]);
  std::size_t lo = k, hi = k;
  if (k == 0)
    hi = 1;
  else if (k + 1 == n)
    lo = k - 1;
  else {
    lo = k - 1;
    hi = k + 1;
  }
  VectorField d = scaled(axpy(*f[hi], -1.0, *f[lo]), 1.0 / (tms[hi] - tms[lo]));
  d.time = tms[k];
  return d;
}

double sq(double v) { return v * v; }

}  // namespace

double weak_residual(const TimeSeries& u, const TimeSeries& psi, double t) {
  u.validate();
  psi.validate();
  if (u.snaps[0]->grid != psi.snaps[0]->grid)
    throw std::invalid_argument("weak_residual: u and psi grids differ");
  if (u.times != psi.times)
    throw std::invalid_argument("weak_residual: u and psi snapshot times differ");

  const Grid3& g = u.snaps[0]->grid;
  const Region half = Region::halfPlus();

  // Admissibility of psi: discretely divergence-free, tangential at the wall.
  {
    const auto scalars = default_test_scalars(g, 5, 0x0F1CE5EEDULL);
    std::unordered_map<const VectorField*, bool> seen;
    for (const auto& snap : psi.snaps) {
      if (seen.emplace(snap.get(), true).second == false) continue;
      const double defect = weak_div_defect(*snap, scalars);
      if (!(defect <= 1e-6)) {
        std::ostringstream os;
        os << "weak_residual: psi has weak divergence defect " << defect
           << " (tolerance 1e-6)";
        throw std::domain_error(os.str());
      }
      double b = 0.0;
      for (std::uint32_t i = 0; i < g.nx; ++i)
        for (std::uint32_t j = 0; j < g.ny; ++j)
          b = std::max(b, std::abs(snap->comps[2][g.index(i, j, g.nzHalf)]));
      if (!(b <= 1e-12)) {
        std::ostringstream os;
        os << "weak_residual: psi3 is not zero on the boundary plane (max " << b << ")";
        throw std::domain_error(os.str());
      }
    }
  }

  const TimeSeries su = clip_series(u, t, "weak_residual");
  const TimeSeries sp = clip_series(psi, t, "weak_residual");
  const std::size_t n = su.size();
  std::vector<const VectorField*> pu(n), pp(n);
  for (std::size_t k = 0; k < n; ++k) {
    pu[k] = su.snaps[k].get();
    pp[k] = sp.snaps[k].get();
  }

  const double boundary = inner_product(*pu[n - 1], *pp[n - 1], half) -
                          inner_product(*pu[0], *pp[0], half);

  const std::vector<double> w = trapezoid_weights(su.times);
  std::unordered_map<const VectorField*, std::shared_ptr<const TensorField>> jac;
  double timePart = 0.0, fluxPart = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const VectorField dpsi = time_diff(pp, sp.times, k);
    timePart += w[k] * inner_product(*pu[k], dpsi, half);
    auto it = jac.find(pp[k]);
    if (it == jac.end())
      it = jac.emplace(pp[k], std::make_shared<const TensorField>(fd_jacobian(*pp[k])))
               .first;
    fluxPart += w[k] * inner_product(TensorField::outer(*pu[k], *pu[k]), *it->second, half);
  }
  return boundary - timePart - fluxPart;
}

TensorField commutator_r(const VectorField& uE, const VectorField& u,
                         const MollKernel& k) {
  if (uE.grid != u.grid || uE.grid != k.grid)
    throw std::invalid_argument("commutator_r: grid mismatch");
  const Grid3& g = u.grid;
  const Region sup =
      k.epsilon < g.Lz ? Region::above(-k.epsilon) : Region::fullSlab();
  TensorField out(g, sup);

  struct Tap {
    int dx, dy, dz;
    double w;
  };
  std::vector<Tap> taps;
  for (int dx = -k.rx; dx <= k.rx; ++dx)
    for (int dy = -k.ry; dy <= k.ry; ++dy)
      for (int dz = -k.rz; dz <= k.rz; ++dz) {
        const double w = k.weightsScaled[k.tapIndex(dx, dy, dz)];
        if (w != 0.0) taps.push_back({dx, dy, dz, w});
      }

  const std::size_t nz = g.nz();
  // Below -eps every u increment vanishes, so the rows there are exact
  // zeros; restrict the computed window accordingly.
  std::size_t kzLo = 0;
  if (k.epsilon < g.Lz) {
    const double zmin = -k.epsilon - g.hz();
    while (kzLo + 1 < nz && g.x3(kzLo + 1) < zmin) ++kzLo;
  }

  const std::size_t win = nz - kzLo;
  parallel_for(g.nx, [&](std::size_t i0, std::size_t i1) {
    std::vector<double> acc(win * 9);
    for (std::size_t i = i0; i < i1; ++i)
      for (std::uint32_t j = 0; j < g.ny; ++j) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const std::size_t cBase = g.index(i, j, 0);
        const double* ce[3] = {uE.comps[0].data() + cBase, uE.comps[1].data() + cBase,
                               uE.comps[2].data() + cBase};
        const double* cu[3] = {u.comps[0].data() + cBase, u.comps[1].data() + cBase,
                               u.comps[2].data() + cBase};
        for (const Tap& tp : taps) {
          const std::uint32_t si =
              (static_cast<std::uint32_t>(i) + static_cast<std::uint32_t>(tp.dx + static_cast<int>(g.nx))) % g.nx;
          const std::uint32_t sj =
              (j + static_cast<std::uint32_t>(tp.dy + static_cast<int>(g.ny))) % g.ny;
          const std::size_t sBase = g.index(si, sj, 0);
          const double* se[3] = {uE.comps[0].data() + sBase,
                                 uE.comps[1].data() + sBase,
                                 uE.comps[2].data() + sBase};
          const double* su[3] = {u.comps[0].data() + sBase, u.comps[1].data() + sBase,
                                 u.comps[2].data() + sBase};
          for (std::size_t kz = kzLo; kz < nz; ++kz) {
            const std::ptrdiff_t sk = static_cast<std::ptrdiff_t>(kz) - tp.dz;
            const bool in = sk >= 0 && sk < static_cast<std::ptrdiff_t>(nz);
            double a[3], b[3];
            for (int c = 0; c < 3; ++c) {
              a[c] = (in ? se[c][sk] : 0.0) - ce[c][kz];
              b[c] = (in ? su[c][sk] : 0.0) - cu[c][kz];
            }
            double* row = acc.data() + (kz - kzLo) * 9;
            for (int r = 0; r < 3; ++r)
              for (int cc = 0; cc < 3; ++cc) row[3 * r + cc] += tp.w * a[r] * b[cc];
          }
        }
        for (int e = 0; e < 9; ++e) {
          double* dst = out.comps[e].data() + cBase;
          for (std::size_t kz = kzLo; kz < nz; ++kz) dst[kz] = acc[(kz - kzLo) * 9 + e];
        }
      }
  });
  return out;
}

BudgetReport budget(const TimeSeries& u, const std::vector<double>& epsilonsIn,
                    double t) {
  if (epsilonsIn.empty()) throw std::invalid_argument("budget: no epsilons given");
  const TimeSeries s = clip_series(u, t, "budget");
  const Grid3& g = s.snaps[0]->grid;

  std::vector<double> eps = epsilonsIn;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  if (eps.back() <= 0.0) throw std::invalid_argument("budget: epsilons must be positive");

  const std::size_t n = s.size();
  // Preprocess distinct snapshots: enforce the half-support contract, build
  // the odd extension and the reflection once each.
  struct Pre {
    std::shared_ptr<const VectorField> zx, uE, uR;
    double halfNorm2 = 0.0;
  };
  std::unordered_map<const VectorField*, Pre> pre;
  std::vector<const Pre*> at(n);
  const Region half = Region::halfPlus();
  for (std::size_t k = 0; k < n; ++k) {
    const VectorField* p = s.snaps[k].get();
    auto it = pre.find(p);
    if (it == pre.end()) {
      Pre entry;
      entry.zx = std::make_shared<const VectorField>(zero_extend(*p));
      entry.uE = std::make_shared<const VectorField>(extend(*entry.zx).field);
      entry.uR = std::make_shared<const VectorField>(reflect(*entry.zx));
      entry.halfNorm2 = sq(lp_norm(*entry.zx, kL2, half));
      it = pre.emplace(p, std::move(entry)).first;
    }
    at[k] = &it->second;
  }

  BudgetReport rep;
  rep.epsilons = eps;
  rep.horizon = t;
  rep.energyGap = 0.5 * (at[n - 1]->halfNorm2 - at[0]->halfNorm2);

  const std::vector<double> w = trapezoid_weights(s.times);
  double scale = std::max(std::abs(rep.energyGap), 0.5 * at[0]->halfNorm2);

  for (double e : eps) {
    const MollKernel kernel = make_kernel(e, g);
    const Region reg = e < g.Lz ? Region::above(-e) : Region::fullSlab();

    struct PerSnap {
      std::shared_ptr<const VectorField> Ju, JuE;
      double cross = 0.0, nJu2 = 0.0;
      double trans = 0.0, transIBP = 0.0, reps = 0.0, dfct = 0.0;
    };
    std::unordered_map<const Pre*, PerSnap> per;
    for (std::size_t k = 0; k < n; ++k) {
      const Pre* p = at[k];
      if (per.count(p)) continue;
      PerSnap ps;
      ps.Ju = std::make_shared<const VectorField>(mollify(*p->zx, kernel));
      ps.JuE = std::make_shared<const VectorField>(mollify(*p->uE, kernel));
      {
        const VectorField JuR = mollify(*p->uR, kernel);
        ps.cross = inner_product(*ps.Ju, JuR, reg);
      }
      ps.nJu2 = sq(lp_norm(*ps.Ju, kL2, reg));
      const TensorField gradT = grad_mollify(*p->uE, kernel).transposed();
      ps.trans = inner_product(TensorField::outer(*ps.JuE, *ps.Ju), gradT, reg);
      {
        const TensorField gradU = grad_mollify(*p->zx, kernel);
        std::vector<double> ibp(g.nodeCount());
        parallel_for(g.nodeCount(), [&](std::size_t b0, std::size_t e0) {
          for (std::size_t q = b0; q < e0; ++q) {
            const double div = gradU.comps[0][q] + gradU.comps[4][q] + gradU.comps[8][q];
            const double m2 = sq(ps.JuE->comps[0][q]) + sq(ps.JuE->comps[1][q]) +
                              sq(ps.JuE->comps[2][q]);
            ibp[q] = div * m2;
          }
        });
        ps.transIBP = -0.5 * integrate(ibp, g, reg);
      }
      ps.reps = inner_product(commutator_r(*p->uE, *p->zx, kernel), gradT, reg);
      ps.dfct = inner_product(
          TensorField::outer(axpy(*p->uE, -1.0, *ps.JuE), axpy(*p->zx, -1.0, *ps.Ju)),
          gradT, reg);
      per.emplace(p, std::move(ps));
    }

    std::vector<const VectorField*> Ju(n), JuE(n);
    for (std::size_t k = 0; k < n; ++k) {
      Ju[k] = per.at(at[k]).Ju.get();
      JuE[k] = per.at(at[k]).JuE.get();
    }

    BudgetRow row;
    row.epsilon = e;
    row.lhsBoundary = inner_product(*Ju[n - 1], *JuE[n - 1], reg) -
                      inner_product(*Ju[0], *JuE[0], reg);
    row.crossTerm = per.at(at[n - 1]).cross - per.at(at[0]).cross;
    double symTime = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const PerSnap& ps = per.at(at[k]);
      row.lhsTime += w[k] * inner_product(*Ju[k], time_diff(JuE, s.times, k), reg);
      symTime += w[k] * inner_product(*Ju[k], time_diff(Ju, s.times, k), reg);
      row.transport += w[k] * ps.trans;
      row.transportIBP += w[k] * ps.transIBP;
      row.rEpsTerm += w[k] * ps.reps;
      row.defectTerm -= w[k] * ps.dfct;
    }
    row.identityResidual = row.lhsBoundary - row.lhsTime - row.transport -
                           row.rEpsTerm - row.defectTerm;
    row.timeSymmetryResidual =
        per.at(at[n - 1]).nJu2 - per.at(at[0]).nJu2 - 2.0 * symTime;
    rep.rows.push_back(row);

    for (double v : {row.lhsBoundary, row.lhsTime, row.transport, row.transportIBP,
                     row.rEpsTerm, row.defectTerm, row.crossTerm})
      scale = std::max(scale, std::abs(v));
  }

  rep.scale = std::max(scale, 1e-300);
  auto fit_or_unused = [&](auto pick) {
    std::vector<double> ys;
    for (const BudgetRow& r : rep.rows) ys.push_back(std::abs(pick(r)));
    try {
      return loglog_fit(rep.epsilons, ys);
    } catch (const std::invalid_argument&) {
      return FitResult{};
    }
  };
  rep.rEpsSlope = fit_or_unused([](const BudgetRow& r) { return r.rEpsTerm; });
  rep.defectSlope = fit_or_unused([](const BudgetRow& r) { return r.defectTerm; });
  return rep;
}

double lipschitz_in_time_check(const TimeSeries& u, double epsilon) {
  u.validate();
  if (u.size() < 2)
    throw std::domain_error("lipschitz_in_time_check: needs at least 2 snapshots");
  const Grid3& g = u.snaps[0]->grid;
  const MollKernel kernel = make_kernel(epsilon, g);
  const Region half = Region::halfPlus();

  std::unordered_map<const VectorField*, std::shared_ptr<const VectorField>> cache;
  std::vector<const VectorField*> JuE(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const VectorField* p = u.snaps[k].get();
    auto it = cache.find(p);
    if (it == cache.end()) {
      const VectorField zx = zero_extend(*p);
      it = cache.emplace(p, std::make_shared<const VectorField>(
                                mollify(extend(zx).field, kernel)))
               .first;
    }
    JuE[k] = it->second.get();
  }
  double best = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      if (JuE[a] == JuE[b]) continue;  // identical snapshots contribute 0
      const double d = lp_norm(axpy(*JuE[b], -1.0, *JuE[a]), kL2, half);
      best = std::max(best, d / (u.times[b] - u.times[a]));
    }
  return best;
}

}  // namespace oflx
