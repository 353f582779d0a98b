#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace oflx {

/// Uniform tensor grid on the slab T^2 x [-Lz, Lz].
///
/// x1, x2 are 2*pi-periodic with nx, ny nodes (the node at 2*pi is the
/// wrap-around of node 0 and is not stored). x3 carries 2*nzHalf + 1 nodes
/// k*hz, k = -nzHalf..nzHalf, hz = Lz/nzHalf, so x3 = 0 is always a node.
/// Sample storage is C order: x1 slowest, x3 fastest.
struct Grid3 {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nzHalf = 0;
  double Lz = 0.0;

  Grid3() = default;
  Grid3(std::uint32_t nx_, std::uint32_t ny_, std::uint32_t nzHalf_, double Lz_);

  std::size_t nz() const { return 2 * static_cast<std::size_t>(nzHalf) + 1; }
  std::size_t nodeCount() const { return static_cast<std::size_t>(nx) * ny * nz(); }

  double hx() const;
  double hy() const;
  double hz() const { return Lz / static_cast<double>(nzHalf); }
  double hmax() const;

  double x1(std::size_t i) const { return hx() * static_cast<double>(i); }
  double x2(std::size_t j) const { return hy() * static_cast<double>(j); }
  /// kz is the storage index 0..nz-1; the physical node is (kz - nzHalf)*hz.
  double x3(std::size_t kz) const {
    return hz() * (static_cast<double>(kz) - static_cast<double>(nzHalf));
  }

  std::size_t index(std::size_t i, std::size_t j, std::size_t kz) const {
    return (i * ny + j) * nz() + kz;
  }

  bool operator==(const Grid3&) const = default;
};

/// Axis-aligned x3 regions used for integration, norms and support tags.
///
///   FullSlab   T^2 x [-Lz, Lz]
///   HalfPlus   T^2 x [0, Lz], boundary plane included
///   Above(s)   {x3 > s}
///   Strip(a,b) T^2 x (a, b)
///
/// As a support tag a region is a conservative superset: samples outside it
/// are exactly zero.
struct Region {
  enum class Kind : std::uint8_t { FullSlab = 0, HalfPlus = 1, Above = 2, Strip = 3 };

  Kind kind = Kind::FullSlab;
  double a = 0.0;  ///< Above: threshold s. Strip: lower edge.
  double b = 0.0;  ///< Strip: upper edge.

  static Region fullSlab() { return {}; }
  static Region halfPlus() { return {Kind::HalfPlus, 0.0, 0.0}; }
  static Region above(double s) { return {Kind::Above, s, 0.0}; }
  static Region strip(double lo, double hi) { return {Kind::Strip, lo, hi}; }

  /// Node membership (used for sup norms and masking).
  bool contains(double z, double Lz) const;

  /// Closure [lo, hi] of the region inside the slab; throws std::domain_error
  /// if the region does not lie within the slab.
  void zbounds(double Lz, double& lo, double& hi) const;

  /// Support-tag arithmetic: translate by dz in x3 (with half-cell slack so
  /// every possibly-nonzero node stays strictly inside an open bound) or
  /// widen symmetrically by w. Results clamp to FullSlab when they cover it.
  Region translated(double dz, const Grid3& g) const;
  Region widened(double w, const Grid3& g) const;

  std::string describe() const;

  bool operator==(const Region&) const = default;
};

}  // namespace oflx
