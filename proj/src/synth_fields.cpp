#include "oflx/synth_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "oflx/bump.hpp"
#include "oflx/field_ops.hpp"
#include "oflx/rng.hpp"

namespace oflx {

namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
}

// Largest |divergence| sample; generators with roughness only in passive
// coordinates must come out exactly zero (the stencils difference equal
// values), so this is a structural check, not a tolerance check.
double max_abs_divergence(const VectorField& u) {
  const std::vector<double> d = divergence(u);
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string kind_name(FieldSpec::Kind k) {
  switch (k) {
    case FieldSpec::Kind::Shear: return "shear";
    case FieldSpec::Kind::Lacunary: return "lacunary";
    case FieldSpec::Kind::GradientBump: return "gradient_bump";
    case FieldSpec::Kind::TimeModulatedShear: return "time_modulated_shear";
  }
  throw std::invalid_argument("unknown field kind");
}

FieldSpec::Kind kind_from_name(const std::string& name) {
  if (name == "shear") return FieldSpec::Kind::Shear;
  if (name == "lacunary") return FieldSpec::Kind::Lacunary;
  if (name == "gradient_bump") return FieldSpec::Kind::GradientBump;
  if (name == "time_modulated_shear") return FieldSpec::Kind::TimeModulatedShear;
  throw std::invalid_argument("unknown field kind '" + name + "'");
}

int max_mode_count(const Grid3& g) {
  // Four nodes per wavelength: horizontal 2^(M-1) <= min(nx,ny)/4,
  // vertical 2^(M-1) <= nzHalf/2 (wavelength 2*Lz/2^m on nzHalf cells).
  int m = 0;
  const int hcap = static_cast<int>(std::min(g.nx, g.ny) / 4u);
  const int vcap = static_cast<int>(g.nzHalf / 2u);
  while ((1 << m) <= std::min(hcap, vcap)) ++m;
  return m;  // modeCount, i.e. top frequency 2^(m-1)
}

LacunaryDraws lacunary_draws(int modeCount, std::uint64_t seed, bool crossModes) {
  if (modeCount < 1) throw std::invalid_argument("modeCount must be >= 1");
  SplitMix64 rng(seed);
  LacunaryDraws d;
  auto draw_block = [&](std::vector<double>& sa, std::vector<double>& sb,
                        std::vector<double>& pa, std::vector<double>& pb) {
    for (int m = 0; m < modeCount; ++m) {
      sa.push_back(rng.sign());
      pa.push_back(rng.uniform(0.0, 2.0 * kPi));
      sb.push_back(rng.sign());
      pb.push_back(rng.uniform(0.0, 2.0 * kPi));
    }
  };
  draw_block(d.signA1, d.signB1, d.phaseA1, d.phaseB1);
  draw_block(d.signA2, d.signB2, d.phaseA2, d.phaseB2);
  if (crossModes) {
    auto draw_cross = [&](std::vector<double>& sc, std::vector<double>& ph,
                          std::vector<double>& pv) {
      for (int m = 0; m < modeCount; ++m) {
        sc.push_back(rng.sign());
        ph.push_back(rng.uniform(0.0, 2.0 * kPi));
        pv.push_back(rng.uniform(0.0, 2.0 * kPi));
      }
    };
    draw_cross(d.signC1, d.phaseH1, d.phaseV1);
    draw_cross(d.signC2, d.phaseH2, d.phaseV2);
  }
  return d;
}

ScalarFn default_envelope(double cut) {
  return [cut](double z) { return decay_envelope(z, cut); };
}

VectorField gen_shear(const Grid3& g, const ScalarFn& fProfile,
                      const ScalarFn& gProfile, const ScalarFn& envelope) {
  VectorField u(g, Region::halfPlus(), 0.0);
  const std::size_t nz = g.nz();
  std::vector<double> p1(nz, 0.0), p2(nz, 0.0);
  for (std::size_t kz = g.nzHalf; kz < nz; ++kz) {
    const double z = g.x3(kz);
    const double e = envelope(z);
    if (!std::isfinite(e)) throw std::domain_error("gen_shear: envelope not finite");
    const double fv = fProfile(z), gv = gProfile(z);
    if (!std::isfinite(fv) || !std::isfinite(gv))
      throw std::domain_error("gen_shear: profile not finite on [0, Lz]");
    p1[kz] = fv * e;
    p2[kz] = gv * e;
  }
  for (std::uint32_t i = 0; i < g.nx; ++i)
    for (std::uint32_t j = 0; j < g.ny; ++j) {
      const std::size_t base = g.index(i, j, 0);
      for (std::size_t kz = g.nzHalf; kz < nz; ++kz) {
        u.comps[0][base + kz] = p1[kz];
        u.comps[1][base + kz] = p2[kz];
      }
    }
  u.requireDecayMargin();
  if (max_abs_divergence(u) != 0.0)
    throw std::logic_error("gen_shear: divergence not structurally zero");
  return u;
}

VectorField gen_lacunary(const Grid3& g, double alpha, int modeCount,
                         std::uint64_t seed, const ScalarFn& envelope,
                         bool crossModes) {
  require_alpha(alpha);
  const int maxM = max_mode_count(g);
  if (modeCount < 1) throw std::invalid_argument("modeCount must be >= 1");
  if (modeCount > maxM) {
    std::ostringstream os;
    os << "gen_lacunary: modeCount " << modeCount
       << " violates the grid Nyquist limit (four nodes per wavelength); "
       << "max admissible modeCount is " << maxM;
    throw std::domain_error(os.str());
  }
  const LacunaryDraws d = lacunary_draws(modeCount, seed, crossModes);

  const std::size_t nz = g.nz();
  std::vector<double> env(nz, 0.0), amp(modeCount);
  for (std::size_t kz = g.nzHalf; kz < nz; ++kz) env[kz] = envelope(g.x3(kz));
  for (int m = 0; m < modeCount; ++m) amp[m] = std::pow(2.0, -alpha * m);

  // u1 lives on the (x2, x3) plane, u2 on the (x1, x3) plane; broadcast.
  auto plane = [&](std::uint32_t nh, double hstep, const std::vector<double>& sa,
                   const std::vector<double>& pa, const std::vector<double>& sb,
                   const std::vector<double>& pb, const std::vector<double>& sc,
                   const std::vector<double>& ph, const std::vector<double>& pv) {
    std::vector<double> out(static_cast<std::size_t>(nh) * nz, 0.0);
    for (std::uint32_t h = 0; h < nh; ++h) {
      const double x = h * hstep;
      for (std::size_t kz = g.nzHalf; kz < nz; ++kz) {
        const double z = g.x3(kz);
        double s = 0.0;
        for (int m = 0; m < modeCount; ++m) {
          const double freq = static_cast<double>(1 << m);
          double term = sa[m] * std::cos(freq * x + pa[m]) +
                        sb[m] * std::cos(freq * kPi * z / g.Lz + pb[m]);
          if (crossModes)
            term += sc[m] * std::cos(freq * x + ph[m]) *
                    std::cos(freq * kPi * z / g.Lz + pv[m]);
          s += amp[m] * term;
        }
        out[static_cast<std::size_t>(h) * nz + kz] = s * env[kz];
      }
    }
    return out;
  };
  const std::vector<double> p1 = plane(g.ny, g.hy(), d.signA1, d.phaseA1,
                                       d.signB1, d.phaseB1, d.signC1, d.phaseH1,
                                       d.phaseV1);
  const std::vector<double> p2 = plane(g.nx, g.hx(), d.signA2, d.phaseA2,
                                       d.signB2, d.phaseB2, d.signC2, d.phaseH2,
                                       d.phaseV2);

  VectorField u(g, Region::halfPlus(), 0.0);
  for (std::uint32_t i = 0; i < g.nx; ++i)
    for (std::uint32_t j = 0; j < g.ny; ++j) {
      const std::size_t base = g.index(i, j, 0);
      const std::size_t r1 = static_cast<std::size_t>(j) * nz;
      const std::size_t r2 = static_cast<std::size_t>(i) * nz;
      for (std::size_t kz = g.nzHalf; kz < nz; ++kz) {
        u.comps[0][base + kz] = p1[r1 + kz];
        u.comps[1][base + kz] = p2[r2 + kz];
      }
    }
  u.requireDecayMargin();
  if (max_abs_divergence(u) != 0.0)
    throw std::logic_error("gen_lacunary: divergence not structurally zero");
  return u;
}

namespace {

// Streamfunction pair sampled on the grid, then differentiated with the
// shared stencils so the curl is divergence-free to commutator roundoff
// (~1e-14), far below the 1e-12 generator contract.
struct StreamMode {
  double amp, freq, phase, z0, width;
};

std::vector<double> sample_stream(const Grid3& g, const std::vector<StreamMode>& modes,
                                  bool alongX2) {
  std::vector<double> s(g.nodeCount(), 0.0);
  const std::size_t nz = g.nz();
  const std::uint32_t nh = alongX2 ? g.ny : g.nx;
  const double hstep = alongX2 ? g.hy() : g.hx();
  std::vector<double> plane(static_cast<std::size_t>(nh) * nz, 0.0);
  for (std::uint32_t h = 0; h < nh; ++h)
    for (std::size_t kz = 0; kz < nz; ++kz) {
      const double z = g.x3(kz);
      double v = 0.0;
      for (const StreamMode& m : modes)
        v += m.amp * std::cos(m.freq * h * hstep + m.phase) *
             decay_envelope(z - m.z0, m.width);
      plane[static_cast<std::size_t>(h) * nz + kz] = v;
    }
  for (std::uint32_t i = 0; i < g.nx; ++i)
    for (std::uint32_t j = 0; j < g.ny; ++j) {
      const std::size_t base = g.index(i, j, 0);
      const std::size_t row = static_cast<std::size_t>(alongX2 ? j : i) * nz;
      for (std::size_t kz = 0; kz < nz; ++kz) s[base + kz] = plane[row + kz];
    }
  return s;
}

std::vector<StreamMode> draw_modes(SplitMix64& rng, const Grid3& g, bool upperOnly) {
  std::vector<StreamMode> modes;
  for (int q = 0; q < 3; ++q) {
    StreamMode m;
    m.amp = rng.sign() * rng.uniform(0.5, 1.5);
    m.freq = 1.0 + static_cast<double>(rng.below(3));
    m.phase = rng.uniform(0.0, 2.0 * kPi);
    const double side = upperOnly ? 1.0 : rng.sign();
    m.z0 = side * rng.uniform(0.35, 0.55) * g.Lz;
    m.width = rng.uniform(0.08, 0.18) * g.Lz;
    modes.push_back(m);
  }
  return modes;
}

VectorField curl_of_streams(const Grid3& g, std::uint64_t seed, bool upperOnly,
                            Region support) {
  // Mode supports live in 0.17*Lz <= |z| <= 0.73*Lz; one stencil cell of
  // slack on either side needs hz < 0.17*Lz.
  if (g.nzHalf < 6)
    throw std::invalid_argument("stream curl generators need nzHalf >= 6");
  SplitMix64 rng(seed);
  const std::vector<StreamMode> ma = draw_modes(rng, g, upperOnly);
  const std::vector<StreamMode> mb = draw_modes(rng, g, upperOnly);
  // psiA(x2,x3) -> (0, -d3 psiA, d2 psiA); psiB(x1,x3) -> (d3 psiB, 0, -d1 psiB).
  const std::vector<double> psiA = sample_stream(g, ma, /*alongX2=*/true);
  const std::vector<double> psiB = sample_stream(g, mb, /*alongX2=*/false);
  const VectorField ga = fd_gradient(psiA, g);
  const VectorField gb = fd_gradient(psiB, g);
  VectorField u(g, support, 0.0);
  const std::size_t n = g.nodeCount();
  for (std::size_t p = 0; p < n; ++p) {
    u.comps[0][p] = gb.comps[2][p];
    u.comps[1][p] = -ga.comps[2][p];
    u.comps[2][p] = ga.comps[1][p] - gb.comps[0][p];
  }
  u.requireDecayMargin();
  double scale = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double v : u.comps[c]) scale = std::max(scale, std::abs(v));
  if (max_abs_divergence(u) > 1e-12 * std::max(1.0, scale))
    throw std::logic_error("stream curl: divergence above the generator contract");
  return u;
}

}  // namespace

VectorField gen_gradient_bump(const Grid3& g, std::uint64_t seed) {
  return curl_of_streams(g, seed, /*upperOnly=*/false, Region::fullSlab());
}

VectorField gen_test_function(const Grid3& g, std::uint64_t seed) {
  // Modes sit in [0.1, 0.7]*Lz, so all components (and their stencil
  // neighborhoods) vanish identically at the boundary plane.
  return curl_of_streams(g, seed, /*upperOnly=*/true, Region::halfPlus());
}

ScalarFn modulation_fn(const std::string& preset, double rate) {
  if (preset == "steady") return [](double) { return 1.0; };
  if (preset == "linear") return [rate](double tau) { return 1.0 + rate * tau; };
  if (preset == "cosine")
    return [rate](double tau) { return 1.0 + rate * (1.0 - std::cos(tau)); };
  throw std::invalid_argument("unknown modulation preset '" + preset + "'");
}

TimeSeries gen_time_series(const VectorField& base, const ScalarFn& modulation,
                           const std::vector<double>& times) {
  TimeSeries s;
  s.times = times;
  bool steady = true;
  std::vector<double> a(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    a[k] = modulation(times[k]);
    if (a[k] != 1.0) steady = false;
  }
  if (steady) {
    auto snap = std::make_shared<VectorField>(base);
    snap->time = 0.0;
    s.snaps.assign(times.size(), snap);
  } else {
    for (std::size_t k = 0; k < times.size(); ++k) {
      VectorField f = scaled(base, a[k]);
      f.time = times[k];
      s.snaps.push_back(std::make_shared<const VectorField>(std::move(f)));
    }
  }
  s.validate();
  return s;
}

VectorField generate(const FieldSpec& spec) {
  const Grid3& g = spec.grid;
  const double cut = spec.envelopeCut * g.Lz;
  if (!(spec.envelopeCut > 0.0))
    throw std::invalid_argument("envelopeCut must be positive");
  const ScalarFn env = default_envelope(cut);
  switch (spec.kind) {
    case FieldSpec::Kind::Shear:
    case FieldSpec::Kind::TimeModulatedShear: {
      auto series = [&g](const std::vector<double>& c) {
        return [&g, c](double z) {
          double s = 0.0;
          for (std::size_t k = 0; k < c.size(); ++k)
            s += c[k] * std::cos(static_cast<double>(k) * kPi * z / g.Lz);
          return s;
        };
      };
      return gen_shear(g, series(spec.fCoeff), series(spec.gCoeff), env);
    }
    case FieldSpec::Kind::Lacunary:
      return gen_lacunary(g, spec.alpha, spec.modeCount, spec.seed, env,
                          spec.crossModes);
    case FieldSpec::Kind::GradientBump:
      return gen_gradient_bump(g, spec.seed);
  }
  throw std::invalid_argument("unknown field kind");
}

TimeSeries generate_series(const FieldSpec& spec) {
  const VectorField base = generate(spec);
  return gen_time_series(base, modulation_fn(spec.modulation, spec.modRate),
                         spec.times);
}

FieldSpec field_spec_from_json(const std::string& jsonText) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jsonText);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field spec: bad JSON: ") + e.what());
  }
  try {
    FieldSpec s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    const auto& jg = j.at("grid");
    s.grid = Grid3{jg.at("nx").get<std::uint32_t>(), jg.at("ny").get<std::uint32_t>(),
                   jg.at("nzHalf").get<std::uint32_t>(), jg.at("Lz").get<double>()};
    s.fCoeff = j.value("fCoeff", s.fCoeff);
    s.gCoeff = j.value("gCoeff", s.gCoeff);
    s.alpha = j.value("alpha", s.alpha);
    s.modeCount = j.value("modeCount", s.modeCount);
    s.crossModes = j.value("crossModes", s.crossModes);
    s.seed = j.value("seed", s.seed);
    s.envelopeCut = j.value("envelopeCut", s.envelopeCut);
    s.modulation = j.value("modulation", s.modulation);
    s.modRate = j.value("modRate", s.modRate);
    s.times = j.value("times", s.times);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field spec: missing or mistyped key: ") +
                                e.what());
  }
}

std::string field_spec_to_json(const FieldSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(spec.kind);
  j["grid"] = {{"nx", spec.grid.nx},
               {"ny", spec.grid.ny},
               {"nzHalf", spec.grid.nzHalf},
               {"Lz", spec.grid.Lz}};
  j["fCoeff"] = spec.fCoeff;
  j["gCoeff"] = spec.gCoeff;
  j["alpha"] = spec.alpha;
  j["modeCount"] = spec.modeCount;
  j["crossModes"] = spec.crossModes;
  j["seed"] = spec.seed;
  j["envelopeCut"] = spec.envelopeCut;
  j["modulation"] = spec.modulation;
  j["modRate"] = spec.modRate;
  j["times"] = spec.times;
  return j.dump(2);
}

}  // namespace oflx
