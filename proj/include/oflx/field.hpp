#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "oflx/grid.hpp"

namespace oflx {

/// Sampled vector field on a Grid3. comps[c] holds component c+1 in C order
/// (x1 slowest, x3 fastest). `support` is a conservative tag: samples at
/// nodes outside it are exactly zero. Fields are treated as immutable once
/// built; operations return new fields.
struct VectorField {
  Grid3 grid;
  std::array<std::vector<double>, 3> comps;
  Region support = Region::fullSlab();
  double time = 0.0;

  VectorField() = default;
  VectorField(Grid3 g, Region sup, double t = 0.0);

  /// Samples fn(x1, x2, x3) -> (u1, u2, u3); nodes outside `sup` are zeroed.
  static VectorField sampled(const Grid3& g,
                             const std::function<std::array<double, 3>(double, double, double)>& fn,
                             Region sup = Region::fullSlab(), double t = 0.0);

  std::size_t nodeCount() const { return grid.nodeCount(); }

  /// Largest |comps| sample over nodes in the outer fraction of the slab
  /// (|x3| >= (1 - marginFrac)*Lz). The decay-margin policy requires this
  /// to stay below the declared tolerance so that zero fill past the slab
  /// edge is exact in practice.
  double decayMarginMax(double marginFrac = 0.1) const;
  void requireDecayMargin(double tol = 1e-12, double marginFrac = 0.1) const;
};

/// Sampled 3x3 tensor field; comps[3*i + j] is entry (row i, column j).
struct TensorField {
  Grid3 grid;
  std::array<std::vector<double>, 9> comps;
  Region support = Region::fullSlab();

  TensorField() = default;
  TensorField(Grid3 g, Region sup);

  static TensorField outer(const VectorField& a, const VectorField& b);
  TensorField transposed() const;
};

/// Snapshots at strictly increasing times, times[0] == 0. Snapshots are
/// shared immutably so steady series can alias one field.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::shared_ptr<const VectorField>> snaps;

  std::size_t size() const { return times.size(); }
  const VectorField& at(std::size_t k) const { return *snaps[k]; }
  double duration() const { return times.empty() ? 0.0 : times.back(); }

  void validate() const;  ///< shape/monotonicity checks, throws on violation
};

}  // namespace oflx
