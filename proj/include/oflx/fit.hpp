#pragma once

#include <span>

namespace oflx {

/// Least-squares fit of log(y) against log(x).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS of log-space residuals
  int used = 0;           ///< number of points entering the fit
};

/// Fits log y = slope*log x + intercept over points with y > 0 (the rest are
/// skipped). Throws std::invalid_argument with fewer than 2 usable points.
FitResult loglog_fit(std::span<const double> x, std::span<const double> y);

/// loglog_fit, then retried with the two largest-x points discarded; the
/// trimmed fit is returned when it strictly improves the residual (small
/// scales diagnose the limit, the largest scales feel the envelope).
FitResult loglog_fit_trimmed(std::span<const double> x, std::span<const double> y);

}  // namespace oflx
