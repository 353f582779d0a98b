#include "oflx/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oflx {

namespace {

FitResult fit_logs(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("loglog_fit: degenerate abscissae");
  FitResult r;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (r.slope * lx[i] + r.intercept);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / static_cast<double>(n));
  r.used = static_cast<int>(n);
  return r;
}

void collect_logs(std::span<const double> x, std::span<const double> y, std::vector<double>& lx,
                  std::vector<double>& ly) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_fit: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw std::invalid_argument("loglog_fit: nonpositive abscissa");
    if (y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2)
    throw std::invalid_argument("loglog_fit: fewer than 2 usable (positive) points");
}

}  // namespace

FitResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  collect_logs(x, y, lx, ly);
  return fit_logs(lx, ly);
}

FitResult loglog_fit_trimmed(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  collect_logs(x, y, lx, ly);
  const FitResult full = fit_logs(lx, ly);
  if (lx.size() < 5) return full;  // keep at least 3 points in a trimmed fit

  // Drop the two largest abscissae (inputs may be in any order).
  std::vector<std::size_t> idx(lx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lx[a] < lx[b]; });
  std::vector<double> tx, ty;
  for (std::size_t i = 0; i + 2 < idx.size(); ++i) {
    tx.push_back(lx[idx[i]]);
    ty.push_back(ly[idx[i]]);
  }
  const FitResult trimmed = fit_logs(tx, ty);
  return trimmed.residual < full.residual ? trimmed : full;
}

}  // namespace oflx
