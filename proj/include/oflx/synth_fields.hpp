#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oflx/field.hpp"

namespace oflx {

using ScalarFn = std::function<double(double)>;

// Serializable description of a generated field / series. The callable
// overloads below are the general entry points; generate()/generate_series()
// realize a FieldSpec through them.
struct FieldSpec {
  enum class Kind { Shear, Lacunary, GradientBump, TimeModulatedShear };

  Kind kind = Kind::Shear;
  Grid3 grid{};

  // Shear profiles as cosine series p(z) = sum_k c[k] * cos(k*pi*z/Lz).
  // Even in x3, so the odd-extension of (f*e, g*e, 0) keeps its regularity.
  std::vector<double> fCoeff{1.0};
  std::vector<double> gCoeff{};

  // Lacunary parameters.
  double alpha = 0.5;
  int modeCount = 5;
  bool crossModes = false;

  // GradientBump / Lacunary randomness.
  std::uint64_t seed = 1;

  // Decay envelope support cut as a fraction of Lz (must leave the outer
  // decay margin exactly zero, i.e. stay <= 0.9).
  double envelopeCut = 0.85;

  // Time series: amplitude a(tau) applied to the base snapshot.
  std::string modulation = "steady";  // steady | linear | cosine
  double modRate = 0.0;
  std::vector<double> times{0.0};
};

std::string kind_name(FieldSpec::Kind k);
FieldSpec::Kind kind_from_name(const std::string& name);

// Largest modeCount whose top frequency 2^(modeCount-1) still leaves four
// grid nodes per wavelength in every used direction.
int max_mode_count(const Grid3& g);

// Coefficients drawn for gen_lacunary, exposed so tests can inspect the
// exact 2^(-alpha*m) amplitude law and the phase content.
struct LacunaryDraws {
  std::vector<double> signA1, signB1, phaseA1, phaseB1;  // u1 modes
  std::vector<double> signA2, signB2, phaseA2, phaseB2;  // u2 modes
  // Cross-mode extension (only used when crossModes is on).
  std::vector<double> signC1, phaseH1, phaseV1;
  std::vector<double> signC2, phaseH2, phaseV2;
};
LacunaryDraws lacunary_draws(int modeCount, std::uint64_t seed, bool crossModes);

// Default smooth envelope: 1 at the boundary plane, identically zero for
// |x3| >= cut (cut given in absolute length).
ScalarFn default_envelope(double cut);

// Steady shear u = (f(x3)*e(x3), g(x3)*e(x3), 0).
VectorField gen_shear(const Grid3& g, const ScalarFn& fProfile,
                      const ScalarFn& gProfile, const ScalarFn& envelope);

// Lacunary Hoelder-alpha field; roughness only in passive coordinates so
// the divergence vanishes structurally. crossModes adds same-frequency
// horizontal x vertical product modes (still passive, still divergence
// free) so that mollification remainders are not annihilated by symmetry.
VectorField gen_lacunary(const Grid3& g, double alpha, int modeCount,
                         std::uint64_t seed, const ScalarFn& envelope,
                         bool crossModes = false);

// Divergence-free full-slab field built as the discrete curl of sampled
// streamfunctions; generic in z (not reflection-symmetric), vanishes near
// the boundary plane and inside the decay margin. Ground truth for the
// reflection / extension / mollification lemmas.
VectorField gen_gradient_bump(const Grid3& g, std::uint64_t seed);

// Admissible test function: divergence-free, supported strictly inside the
// upper half slab, psi3 = 0 on the boundary plane exactly.
VectorField gen_test_function(const Grid3& g, std::uint64_t seed);

// Named amplitude modulations for time series.
ScalarFn modulation_fn(const std::string& preset, double rate);

// Snapshots a(tau) * base; a(0) need not be 1. Steady modulation (a == 1)
// shares one snapshot across all times.
TimeSeries gen_time_series(const VectorField& base, const ScalarFn& modulation,
                           const std::vector<double>& times);

// FieldSpec-driven entry points used by the CLI.
VectorField generate(const FieldSpec& spec);
TimeSeries generate_series(const FieldSpec& spec);

FieldSpec field_spec_from_json(const std::string& jsonText);
std::string field_spec_to_json(const FieldSpec& spec);

}  // namespace oflx
