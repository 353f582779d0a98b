#include "oflx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "oflx/energy_budget.hpp"
#include "oflx/field_ops.hpp"
#include "oflx/fit.hpp"
#include "oflx/mollifier.hpp"
#include "oflx/quadrature.hpp"
#include "oflx/reflectex.hpp"
#include "oflx/structure.hpp"

namespace oflx {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json parse_config(const std::string& configJson) {
  if (configJson.empty()) return Json::object();
  try {
    return Json::parse(configJson);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("report: config is not valid JSON: ") + e.what());
  }
}

Json envelope(const char* command, const TimeSeries& u, const std::string& configJson) {
  u.validate();
  const Grid3& g = u.snaps.front()->grid;
  Json j;
  j["tool"] = "oflx";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = parse_config(configJson);
  j["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"nzHalf", g.nzHalf}, {"Lz", g.Lz}};
  j["snapshots"] = u.snaps.size();
  j["horizon"] = u.times.back();
  return j;
}

Json fit_json(const FitResult& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept},
          {"residual", f.residual}, {"used", f.used}};
}

// ---------------------------------------------------------------------------
// verify: the reflection/extension/mollification identity suite
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double maxError = 0.0;
  double tolerance = 0.0;
  bool pass() const { return maxError <= tolerance; }
};

double max_node_diff(const VectorField& a, const VectorField& b) {
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < a.comps[c].size(); ++q)
      worst = std::fmax(worst, std::fabs(a.comps[c][q] - b.comps[c][q]));
  return worst;
}

double max_node_diff_strip(const VectorField& a, const VectorField& b, double delta) {
  const Grid3& g = a.grid;
  double worst = 0.0;
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    if (std::fabs(g.x3(kz)) > delta) continue;
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        const std::size_t n = g.index(i, j, kz);
        for (int c = 0; c < 3; ++c)
          worst = std::fmax(worst, std::fabs(a.comps[c][n] - b.comps[c][n]));
      }
  }
  return worst;
}

bool lower_half_is_zero(const VectorField& f) {
  const Grid3& g = f.grid;
  for (std::size_t kz = 0; kz < g.nzHalf; ++kz)
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        const std::size_t n = g.index(i, j, kz);
        for (int c = 0; c < 3; ++c)
          if (f.comps[c][n] != 0.0) return false;
      }
  return true;
}

/// Restriction to the upper half slab: values kept for x3 >= 0 (boundary
/// plane included), zero below. Used when verify receives a full-slab field.
VectorField mask_upper(const VectorField& f) {
  VectorField g(f.grid, Region::halfPlus(), f.time);
  const std::size_t nz = f.grid.nz();
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < f.grid.nx; ++i)
      for (std::size_t j = 0; j < f.grid.ny; ++j) {
        const std::size_t col = f.grid.index(i, j, 0);
        for (std::size_t kz = f.grid.nzHalf; kz < nz; ++kz)
          g.comps[c][col + kz] = f.comps[c][col + kz];
      }
  return g;
}

}  // namespace

RenderedReport run_verify(const TimeSeries& u, const VerifyOptions& opt,
                          const std::string& configJson) {
  Json j = envelope("verify", u, configJson);
  const Grid3& g = u.snaps.front()->grid;

  const double eps = opt.epsilon > 0.0 ? opt.epsilon : 4.0 * g.hmax();
  const double gamma = opt.gamma > 0.0 ? opt.gamma : 0.5 * (eps + g.Lz);
  if (!(gamma > eps))
    throw std::domain_error("verify: gamma = " + std::to_string(gamma) +
                            " must exceed epsilon = " + std::to_string(eps));
  const MollKernel kernel = make_kernel(eps, g);
  const Region adjStrip = Region::strip(-0.5 * gamma, 0.5 * gamma);

  std::vector<Check> checks = {
      {"reflection_involution", 0.0, opt.tol},
      {"reflection_isometry", 0.0, opt.tol},
      {"adjoint_symmetry", 0.0, opt.tol},
      {"kernel_commutation", 0.0, opt.tol},
      {"boundary_normal", 0.0, opt.tol},
      {"boundary_compatibility", 0.0, opt.boundaryTol},
      {"truncated_adjoint", 0.0, opt.tol},
      {"truncated_commutation", 0.0, opt.tol},
      {"extension_norm_p1", 0.0, g.hz() / g.Lz},
      {"extension_norm_p2", 0.0, g.hz() / g.Lz},
      {"extension_norm_p3", 0.0, g.hz() / g.Lz},
  };
  auto bump = [&](std::size_t idx, double err) {
    checks[idx].maxError = std::fmax(checks[idx].maxError, err);
  };

  for (const auto& snap : u.snaps) {
    const VectorField& v = *snap;
    const VectorField half = lower_half_is_zero(v) ? zero_extend(v) : mask_upper(v);

    const VectorField vR = reflect(v);
    bump(0, max_node_diff(reflect(vR), v));
    for (double p : {1.0, 2.0, 3.0})
      bump(1, std::fabs(lp_norm(vR, p, Region::fullSlab()) -
                        lp_norm(v, p, Region::fullSlab())));

    const VectorField w = shift(v, 3, 1, 0);
    bump(2, std::fabs(inner_product(v, reflect(w), adjStrip) -
                      inner_product(vR, w, adjStrip)));

    bump(3, max_node_diff(mollify(vR, kernel), reflect(mollify(v, kernel))));

    const ExtensionResult ext = extend(half, opt.boundaryTol);
    const VectorField JE = mollify(ext.field, kernel);
    double bn = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j)
        bn = std::fmax(bn, std::fabs(JE.comps[2][g.index(i, j, g.nzHalf)]));
    bump(4, bn);
    bump(5, ext.boundaryMax);

    const VectorField vr = truncated_reflect(v, gamma);
    bump(6, std::fabs(inner_product(w, vr, adjStrip) -
                      inner_product(truncated_reflect(w, gamma), v, adjStrip)));
    bump(7, max_node_diff_strip(mollify(vr, kernel),
                                truncated_reflect(mollify(v, kernel), gamma),
                                gamma - eps));

    for (int p = 1; p <= 3; ++p) {
      const double src = lp_norm(half, double(p), Region::halfPlus());
      const double full = lp_norm(ext.field, double(p), Region::fullSlab());
      const double want = std::pow(2.0, 1.0 / p) * src;
      bump(std::size_t(7 + p), want > 0.0 ? std::fabs(full - want) / want : full);
    }
  }

  bool all = true;
  Json rows = Json::array();
  std::string csv = "check,max_error,tolerance,pass\n";
  for (const auto& c : checks) {
    all = all && c.pass();
    rows.push_back({{"name", c.name}, {"maxError", c.maxError},
                    {"tolerance", c.tolerance}, {"pass", c.pass()}});
    csv += c.name + "," + fmt_num(c.maxError) + "," + fmt_num(c.tolerance) + "," +
           (c.pass() ? "true" : "false") + "\n";
  }

  j["epsilon"] = eps;
  j["gamma"] = gamma;
  j["checks"] = rows;
  j["passed"] = all;
  return {j.dump(2) + "\n", csv, all};
}

// ---------------------------------------------------------------------------
// structure / modulus / strip: hypothesis studies
// ---------------------------------------------------------------------------

RenderedReport run_structure(const TimeSeries& u, const StructureOptions& opt,
                             const std::string& configJson) {
  Json j = envelope("structure", u, configJson);
  std::vector<std::array<int, 3>> dirs = opt.directions;
  if (dirs.empty()) dirs = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}};

  const StructureReport rep = bulk_condition_study(u, dirs, opt.scaleCount, opt.baseStep);

  Json per = Json::array();
  std::string csv = "direction,|y|,S3,S3_over_y,slope,residual,verdict\n";
  for (const auto& d : rep.perDirection) {
    Json row;
    row["direction"] = {d.direction[0], d.direction[1], d.direction[2]};
    row["yLen"] = d.yLens;
    row["s3"] = d.s3;
    row["s3OverY"] = d.s3OverY;
    row["fit"] = fit_json(d.slope);
    per.push_back(row);
    const std::string dname = std::to_string(d.direction[0]) + " " +
                              std::to_string(d.direction[1]) + " " +
                              std::to_string(d.direction[2]);
    for (std::size_t s = 0; s < d.yLens.size(); ++s)
      csv += dname + "," + fmt_num(d.yLens[s]) + "," + fmt_num(d.s3[s]) + "," +
             fmt_num(d.s3OverY[s]) + "," + fmt_num(d.slope.slope) + "," +
             fmt_num(d.slope.residual) + "," + rep.verdict + "\n";
  }

  j["scales"] = rep.scales;
  j["slopeThreshold"] = rep.slopeThreshold;
  j["residualThreshold"] = rep.residualThreshold;
  j["directions"] = per;
  j["verdict"] = rep.verdict;
  j["passed"] = true;
  return {j.dump(2) + "\n", csv, true};
}

RenderedReport run_modulus(const TimeSeries& u, const ModulusOptions& opt,
                           const std::string& configJson) {
  Json j = envelope("modulus", u, configJson);
  const Grid3& g = u.snaps.front()->grid;
  const double delta = opt.delta > 0.0 ? opt.delta : 0.25 * g.Lz;

  const ModulusTable tab = boundary_modulus(u, delta);
  const FitResult fit = modulus_slope(tab);

  std::string csv = "time,radius,value\n";
  Json vals = Json::array();
  for (std::size_t t = 0; t < tab.times.size(); ++t) {
    vals.push_back(tab.values[t]);
    for (std::size_t r = 0; r < tab.radii.size(); ++r)
      csv += fmt_num(tab.times[t]) + "," + fmt_num(tab.radii[r]) + "," +
             fmt_num(tab.values[t][r]) + "\n";
  }

  j["delta"] = delta;
  j["radii"] = tab.radii;
  j["times"] = tab.times;
  j["values"] = vals;
  j["monotone"] = tab.monotone;
  j["fit"] = fit_json(fit);
  j["passed"] = true;
  return {j.dump(2) + "\n", csv, true};
}

RenderedReport run_strip(const TimeSeries& u, const StripOptions& opt,
                         const std::string& configJson) {
  Json j = envelope("strip", u, configJson);
  const StripStudy st = strip_norm_study(u, opt.epsilons);

  Json per = Json::array();
  std::string csv = "eta,epsilon,shift_len,zero_extended,extended\n";
  for (int d = 0; d < 3; ++d) {
    Json row;
    row["eta"] = d + 1;
    row["shiftLen"] = st.shiftLen[d];
    row["zeroExtended"] = st.zeroExtended[d];
    row["extended"] = st.extended[d];
    row["fitZeroExtended"] = fit_json(st.slopeZeroExtended[d]);
    row["fitExtended"] = fit_json(st.slopeExtended[d]);
    per.push_back(row);
    for (std::size_t e = 0; e < st.epsilons.size(); ++e)
      csv += std::to_string(d + 1) + "," + fmt_num(st.epsilons[e]) + "," +
             fmt_num(st.shiftLen[d][e]) + "," + fmt_num(st.zeroExtended[d][e]) + "," +
             fmt_num(st.extended[d][e]) + "\n";
  }

  j["epsilons"] = st.epsilons;
  j["supSample"] = st.supSample;
  j["boundConstant"] = st.boundConstant;
  j["directions"] = per;
  j["passed"] = true;
  return {j.dump(2) + "\n", csv, true};
}

// ---------------------------------------------------------------------------
// budget
// ---------------------------------------------------------------------------

RenderedReport run_budget(const TimeSeries& u, const BudgetOptions& opt,
                          const std::string& configJson) {
  Json j = envelope("budget", u, configJson);
  const double t = opt.t < 0.0 ? u.times.back() : opt.t;
  const BudgetReport rep = budget(u, opt.epsilons, t);

  bool all = true;
  Json rows = Json::array();
  std::string csv =
      "epsilon,lhs_boundary,lhs_time,cross_term,transport,transport_ibp,"
      "r_eps_term,defect_term,identity_residual,time_symmetry_residual\n";
  for (const auto& r : rep.rows) {
    const bool ok = std::fabs(r.identityResidual) <= opt.identityTol * rep.scale;
    all = all && ok;
    rows.push_back({{"epsilon", r.epsilon},
                    {"lhsBoundary", r.lhsBoundary},
                    {"lhsTime", r.lhsTime},
                    {"crossTerm", r.crossTerm},
                    {"transport", r.transport},
                    {"transportIBP", r.transportIBP},
                    {"rEpsTerm", r.rEpsTerm},
                    {"defectTerm", r.defectTerm},
                    {"identityResidual", r.identityResidual},
                    {"timeSymmetryResidual", r.timeSymmetryResidual},
                    {"identityPass", ok}});
    csv += fmt_num(r.epsilon) + "," + fmt_num(r.lhsBoundary) + "," +
           fmt_num(r.lhsTime) + "," + fmt_num(r.crossTerm) + "," +
           fmt_num(r.transport) + "," + fmt_num(r.transportIBP) + "," +
           fmt_num(r.rEpsTerm) + "," + fmt_num(r.defectTerm) + "," +
           fmt_num(r.identityResidual) + "," + fmt_num(r.timeSymmetryResidual) + "\n";
  }

  j["epsilons"] = rep.epsilons;
  j["t"] = rep.horizon;
  j["energyGap"] = rep.energyGap;
  j["scale"] = rep.scale;
  j["identityTol"] = opt.identityTol;
  j["rows"] = rows;
  j["rEpsSlope"] = fit_json(rep.rEpsSlope);
  j["defectSlope"] = fit_json(rep.defectSlope);
  j["passed"] = all;
  return {j.dump(2) + "\n", csv, all};
}

}  // namespace oflx
