#pragma once

#include <array>
#include <vector>

#include "oflx/field.hpp"

namespace oflx {

/// Discretized compact mollifier phi_eps and its gradient on a Grid3.
///
/// Offsets run over the centered integer cube [-rx,rx]x[-ry,ry]x[-rz,rz]
/// chosen so every physical offset lies strictly inside (-eps/2, eps/2)^3;
/// the profile is the radial bump c*exp(-1/(1-4|x|^2)) supported on the
/// ball |x| < 1/2, scaled by eps. `weights` are phi_eps samples after the
/// discrete renormalization sum(weights)*hx*hy*hz = 1; `gradWeights` are the
/// analytic gradient samples under the same renormalization, antisymmetrized
/// so each component is exactly odd in its own coordinate. The *Scaled
/// arrays carry the cell volume premultiplied and are what the convolutions
/// consume; their tap sums are driven to 1 and 0 at machine precision.
struct MollKernel {
  Grid3 grid;
  double epsilon = 0.0;
  int rx = 0, ry = 0, rz = 0;
  double normConst = 0.0;  ///< discrete mass of the raw sampled profile

  std::vector<double> weights;
  std::array<std::vector<double>, 3> gradWeights;
  std::vector<double> weightsScaled;
  std::array<std::vector<double>, 3> gradWeightsScaled;

  std::size_t nw(int axis) const { return 2 * static_cast<std::size_t>(axis == 0 ? rx : axis == 1 ? ry : rz) + 1; }
  std::size_t tapCount() const { return nw(0) * nw(1) * nw(2); }
  /// i in [-rx, rx], j in [-ry, ry], k in [-rz, rz].
  std::size_t tapIndex(int i, int j, int k) const {
    return (static_cast<std::size_t>(i + rx) * nw(1) + static_cast<std::size_t>(j + ry)) * nw(2) +
           static_cast<std::size_t>(k + rz);
  }
};

/// Builds the kernel for a scale eps on a grid. Requires
/// eps >= 4*max(hx,hy,hz) (else std::domain_error naming the minimum) and
/// eps/2 < Lz.
MollKernel make_kernel(double epsilon, const Grid3& grid);

/// J_eps f by direct discrete convolution: periodic wrap in x1, x2, zero
/// fill beyond +-Lz. The support tag widens by eps/2 in x3 (HalfPlus becomes
/// Above(-eps/2)). Deterministic tap order; z taps are folded as symmetric
/// pairs so odd/even symmetries survive bit-exactly.
VectorField mollify(const VectorField& f, const MollKernel& k);
TensorField mollify(const TensorField& f, const MollKernel& k);

/// (grad J_eps f): entry (i, j) = convolution of f_j with gradWeights_i,
/// i.e. d(J_eps f_j)/dx_i.
TensorField grad_mollify(const VectorField& f, const MollKernel& k);

/// J_eps J_eps f; support widens by eps total.
VectorField double_mollify(const VectorField& f, const MollKernel& k);

}  // namespace oflx
