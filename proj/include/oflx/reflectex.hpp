#pragma once

#include "oflx/field.hpp"

namespace oflx {

/// Result of the boundary-preserving extension g_E = g + g_R.
struct ExtensionResult {
  VectorField field;            ///< g_E on the full slab
  double sourceNormL2 = 0.0;    ///< ||g||_{L2, half slab}
  double extendedNormL2 = 0.0;  ///< ||g_E||_{L2, full slab}
  bool boundaryWarning = false; ///< set when |g3| at the boundary plane exceeded tol
  double boundaryMax = 0.0;     ///< max |g3(., 0)| observed on the boundary plane
};

/// Odd reflection f_R(x1, x2, x3) = (f1(x1, x2, -x3), f2(..), -f3(..)).
/// Node-exact mirror (the grid is symmetric about x3 = 0), no interpolation.
VectorField reflect(const VectorField& f);

/// Extension by zero below the boundary plane. The input must genuinely live
/// on x3 >= 0: any nonzero sample at x3 < 0 raises std::domain_error. The
/// boundary node keeps its value; the result is tagged HalfPlus.
VectorField zero_extend(const VectorField& g);

/// Boundary-preserving extension g_E: g above the plane, g_R below, and the
/// half-sum value (g1, g2, 0) exactly at x3 = 0. If |g3| on the boundary
/// plane exceeds boundaryTol a warning is recorded in the result (the
/// extension is still computed; discrete inputs need not satisfy u.n = 0
/// exactly).
ExtensionResult extend(const VectorField& g, double boundaryTol = 1e-10);

/// Truncated reflection v_r = indicator{x3 > -gamma} * v_R. Strict cut: a
/// node exactly at -gamma is zeroed, the node nearest -gamma from above is
/// the last retained. Requires 0 < gamma < Lz.
VectorField truncated_reflect(const VectorField& v, double gamma);

}  // namespace oflx
