#pragma once

#include <span>
#include <vector>

#include "oflx/field.hpp"

namespace oflx {

/// Per-node x3 quadrature weights for a region: trapezoid rule between nodes,
/// with partial end cells integrated under the piecewise-linear interpolant
/// (so constants integrate exactly over Strip(a, b) for any a, b). A region
/// spanning x3 = 0 gives that node hz/2 from each side; HalfPlus gives its
/// one-sided end weight hz/2, which keeps
///   integrate(FullSlab) == integrate(HalfPlus) + integrate(mirror)
/// exact. Throws std::domain_error if the region leaves the slab.
std::vector<double> z_weights(const Grid3& g, const Region& r);

/// Rectangle rule in x1, x2 and the z_weights trapezoid in x3, reduced with
/// a fixed cascade tree (bit-identical for any worker count).
double integrate(std::span<const double> samples, const Grid3& g, const Region& r);

/// <f, g> = Int sum_c f_c g_c over the region.
double inner_product(const VectorField& f, const VectorField& g, const Region& r);

/// <F, G> = Int sum_ij F_ij G_ij over the region (full contraction).
double inner_product(const TensorField& f, const TensorField& g, const Region& r);

/// L^p norm of |f| (pointwise Euclidean magnitude) over the region.
/// p = infinity (pass std::numeric_limits<double>::infinity()) returns the
/// max over region nodes.
double lp_norm(const VectorField& f, double p, const Region& r);

}  // namespace oflx
