#pragma once

#include <array>
#include <span>
#include <vector>

#include "oflx/field.hpp"

namespace oflx {

/// shifted(x) = f(x + (a*hx, b*hy, c*hz)). Pure index shift: periodic wrap in
/// x1, x2 and zero fill past the slab in x3; no interpolation ever happens.
/// The support tag is translated accordingly.
VectorField shift(const VectorField& f, int a, int b, int c);

/// Second-order divergence samples: central stencils, periodic in x1, x2,
/// one-sided second-order rows at x3 = +-Lz.
std::vector<double> divergence(const VectorField& f);

/// Jacobian of f by the same stencils: entry (i, j) = d f_i / d x_j.
TensorField fd_jacobian(const VectorField& f);

/// Gradient of a scalar sample array as a VectorField.
VectorField fd_gradient(std::span<const double> s, const Grid3& g);

/// Weak divergence defect max_phi |<f, grad phi>_{D+}| / ||grad phi||_{L2(D+)}
/// over the supplied test scalars.
double weak_div_defect(const VectorField& f,
                       const std::vector<std::vector<double>>& testScalars);

/// Deterministic smooth decaying test scalars for weak_div_defect.
std::vector<std::vector<double>> default_test_scalars(const Grid3& g, int count,
                                                      unsigned long long seed);

/// out = x + s*y (componentwise); grids must match.
VectorField axpy(const VectorField& x, double s, const VectorField& y);
VectorField scaled(const VectorField& x, double s);

/// Trapezoid quadrature weights on the snapshot times.
std::vector<double> trapezoid_weights(const std::vector<double>& times);

/// Trapezoid-in-time integral of fn over the series. fn is evaluated once
/// per distinct snapshot (steady series alias one field), so the steady
/// case reduces to value * duration.
double time_integral(const TimeSeries& u,
                     const std::function<double(const VectorField&)>& fn);

}  // namespace oflx
