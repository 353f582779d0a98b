#pragma once

#include <cmath>

namespace oflx {

/// Radial C_c^infinity bump profile exp(-1/(1 - 4|x|^2)) for |x| < 1/2,
/// zero outside; takes |x|^2. Unnormalized.
inline double bump_profile(double r2) {
  const double q = 1.0 - 4.0 * r2;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

/// d/dx_i of bump_profile as a factor: grad = bump * (-8 x_i) / q^2.
inline double bump_profile_grad_factor(double r2) {
  const double q = 1.0 - 4.0 * r2;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-8.0) / (q * q);
}

/// Smooth even envelope in x3: exactly 1 at z = 0, compactly supported on
/// |z| < cut, identically zero beyond, all derivatives vanishing at the cut.
/// With cut = 0.85*Lz the outer 10% of the slab is exactly zero, which
/// satisfies the decay-margin policy by construction.
inline double decay_envelope(double z, double cut) {
  const double t = z / cut;
  const double q = 1.0 - t * t;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

}  // namespace oflx
