#include "oflx/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>

#include "oflx/bump.hpp"
#include "oflx/parallel.hpp"

namespace oflx {

namespace {

std::size_t wrap(std::int64_t i, std::int64_t n) {
  std::int64_t r = i % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

/// Largest integer radius with r*h strictly inside eps/2.
int strict_radius(double eps, double h) {
  int r = static_cast<int>(std::floor(0.5 * eps / h));
  while (r > 0 && static_cast<double>(r) * h >= 0.5 * eps) --r;
  return r;
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

/// Core direct convolution of one scalar array with a centered tap cube.
/// `out` must be zero-initialized; only z rows that can receive mass (input
/// support widened by rz cells) are written, the rest stay exactly zero —
/// identical to what the full sum would produce, since every skipped row
/// sums products with all-zero sources.
///
/// Tap order per output node is fixed: (dx, dy) columns in cube order, and
/// within a column the k = 0 tap followed by symmetric pairs folded as
/// fl(w[k]*src[kz-k] + w[-k]*src[kz+k]). The pair folding makes even/odd
/// z-symmetries of the integrand cancel bit-exactly, which is what pushes
/// the reflection identities to machine zero instead of mere O(eps^2).
void convolve_array(const Grid3& g, std::span<const double> in, const Region& inSupport,
                    std::span<double> out, const std::vector<double>& taps, int rx, int ry,
                    int rz) {
  const std::int64_t nx = g.nx, ny = g.ny;
  const std::int64_t nzi = static_cast<std::int64_t>(g.nz());
  const std::size_t nwy = 2 * static_cast<std::size_t>(ry) + 1;
  const std::size_t nwz = 2 * static_cast<std::size_t>(rz) + 1;

  double lo, hi;
  inSupport.zbounds(g.Lz, lo, hi);
  const double hz = g.hz();
  std::int64_t kzLo =
      static_cast<std::int64_t>(std::floor(lo / hz)) + static_cast<std::int64_t>(g.nzHalf) - rz - 1;
  std::int64_t kzHi =
      static_cast<std::int64_t>(std::ceil(hi / hz)) + static_cast<std::int64_t>(g.nzHalf) + rz + 1;
  kzLo = std::max<std::int64_t>(kzLo, 0);
  kzHi = std::min<std::int64_t>(kzHi, nzi - 1);
  if (kzLo > kzHi) return;

  // Active tap columns: cube corners outside the ball carry only zeros and
  // are skipped; each kept column is trimmed to its outermost nonzero tap.
  struct Col {
    int dx, dy, kmax;
    const double* w;  // points at the k = 0 tap of the column
  };
  std::vector<Col> cols;
  cols.reserve((2 * static_cast<std::size_t>(rx) + 1) * nwy);
  for (int dx = -rx; dx <= rx; ++dx)
    for (int dy = -ry; dy <= ry; ++dy) {
      const double* w0 =
          taps.data() +
          (static_cast<std::size_t>(dx + rx) * nwy + static_cast<std::size_t>(dy + ry)) * nwz +
          static_cast<std::size_t>(rz);
      int kmax = -1;
      for (int k = rz; k >= 0; --k)
        if (w0[k] != 0.0 || w0[-k] != 0.0) {
          kmax = k;
          break;
        }
      if (kmax >= 0) cols.push_back({dx, dy, kmax, w0});
    }
  if (cols.empty()) return;

  parallel_for(g.nx, [&](std::size_t ib, std::size_t ie) {
    std::vector<double> acc(static_cast<std::size_t>(nzi));
    for (std::size_t i = ib; i < ie; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        std::fill(acc.begin() + kzLo, acc.begin() + kzHi + 1, 0.0);
        for (const Col& c : cols) {
          const std::size_t si = wrap(static_cast<std::int64_t>(i) - c.dx, nx);
          const std::size_t sj = wrap(static_cast<std::int64_t>(j) - c.dy, ny);
          const double* src = in.data() + g.index(si, sj, 0);
          const double* w = c.w;
          const int km = c.kmax;
          for (std::int64_t kz = kzLo; kz <= kzHi; ++kz) {
            double t = w[0] * src[kz];
            if (kz - km >= 0 && kz + km < nzi) {
              for (int k = 1; k <= km; ++k) t += w[k] * src[kz - k] + w[-k] * src[kz + k];
            } else {
              for (int k = 1; k <= km; ++k) {
                const double a = (kz - k >= 0) ? w[k] * src[kz - k] : 0.0;
                const double b = (kz + k < nzi) ? w[-k] * src[kz + k] : 0.0;
                t += a + b;
              }
            }
            acc[static_cast<std::size_t>(kz)] += t;
          }
        }
        double* po = out.data() + g.index(i, j, 0);
        for (std::int64_t kz = kzLo; kz <= kzHi; ++kz)
          po[kz] = acc[static_cast<std::size_t>(kz)];
      }
  });
}

void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string(what) + ": field grid does not match the kernel grid");
}

}  // namespace

MollKernel make_kernel(double epsilon, const Grid3& grid) {
  const double minEps = 4.0 * grid.hmax();
  if (!(epsilon >= minEps)) {
    std::ostringstream os;
    os << "make_kernel: epsilon = " << epsilon
       << " is under-resolved on this grid; the minimum admissible value is "
          "4*max(hx,hy,hz) = "
       << minEps;
    throw std::domain_error(os.str());
  }
  if (!(0.5 * epsilon < grid.Lz))
    throw std::domain_error("make_kernel: epsilon/2 must be smaller than Lz = " +
                            std::to_string(grid.Lz));

  MollKernel k;
  k.grid = grid;
  k.epsilon = epsilon;
  k.rx = strict_radius(epsilon, grid.hx());
  k.ry = strict_radius(epsilon, grid.hy());
  k.rz = strict_radius(epsilon, grid.hz());

  const double hx = grid.hx(), hy = grid.hy(), hz = grid.hz();
  const double h3 = hx * hy * hz;
  const double invE = 1.0 / epsilon;
  const double invE3 = invE * invE * invE;
  const std::size_t n = k.tapCount();

  // phi_eps samples, premultiplied by the cell volume, then renormalized so
  // the taps sum to 1; a short fixup loop drives the pairwise tap sum to 1.0
  // at the last bit (the residual is folded into the center tap).
  std::vector<double> r2(n);
  k.weightsScaled.assign(n, 0.0);
  for (int i = -k.rx; i <= k.rx; ++i)
    for (int j = -k.ry; j <= k.ry; ++j)
      for (int kk = -k.rz; kk <= k.rz; ++kk) {
        const double ox = i * hx * invE, oy = j * hy * invE, oz = kk * hz * invE;
        const std::size_t t = k.tapIndex(i, j, kk);
        r2[t] = ox * ox + oy * oy + oz * oz;
        k.weightsScaled[t] = invE3 * bump_profile(r2[t]) * h3;
      }
  const double S = pairwise_sum(k.weightsScaled);
  if (!(S > 0.0)) throw std::domain_error("make_kernel: sampled kernel has no mass");
  k.normConst = S;
  for (auto& w : k.weightsScaled) w /= S;
  const std::size_t center = k.tapIndex(0, 0, 0);
  for (int pass = 0; pass < 4; ++pass) {
    const double resid = 1.0 - pairwise_sum(k.weightsScaled);
    if (resid == 0.0) break;
    k.weightsScaled[center] += resid;
  }
  k.weights.resize(n);
  for (std::size_t t = 0; t < n; ++t) k.weights[t] = k.weightsScaled[t] / h3;

  // Gradient taps: grad phi_eps = eps^-4 (grad phi)(x/eps), same
  // renormalization factor, antisymmetrized against the mirror in the own
  // coordinate (a bitwise no-op for exact sampling, but it pins the oddness
  // contract regardless of how the profile is evaluated).
  const double invE4 = invE3 * invE;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> graw(n);
    for (int i = -k.rx; i <= k.rx; ++i)
      for (int j = -k.ry; j <= k.ry; ++j)
        for (int kk = -k.rz; kk <= k.rz; ++kk) {
          const std::size_t t = k.tapIndex(i, j, kk);
          const double off =
              (axis == 0 ? i * hx : axis == 1 ? j * hy : kk * hz) * invE;
          graw[t] = invE4 * bump_profile_grad_factor(r2[t]) * off * h3 / S;
        }
    auto& gs = k.gradWeightsScaled[axis];
    gs.assign(n, 0.0);
    for (int i = -k.rx; i <= k.rx; ++i)
      for (int j = -k.ry; j <= k.ry; ++j)
        for (int kk = -k.rz; kk <= k.rz; ++kk) {
          const int mi = axis == 0 ? -i : i;
          const int mj = axis == 1 ? -j : j;
          const int mk = axis == 2 ? -kk : kk;
          gs[k.tapIndex(i, j, kk)] =
              0.5 * (graw[k.tapIndex(i, j, kk)] - graw[k.tapIndex(mi, mj, mk)]);
        }
    k.gradWeights[axis].resize(n);
    for (std::size_t t = 0; t < n; ++t) k.gradWeights[axis][t] = gs[t] / h3;
  }
  return k;
}

VectorField mollify(const VectorField& f, const MollKernel& k) {
  require_same_grid(f.grid, k.grid, "mollify");
  VectorField out(f.grid, f.support.widened(0.5 * k.epsilon, f.grid), f.time);
  for (int c = 0; c < 3; ++c) {
    if (all_zero(f.comps[c])) continue;
    convolve_array(f.grid, f.comps[c], f.support, out.comps[c], k.weightsScaled, k.rx, k.ry,
                   k.rz);
  }
  return out;
}

TensorField mollify(const TensorField& f, const MollKernel& k) {
  require_same_grid(f.grid, k.grid, "mollify");
  TensorField out(f.grid, f.support.widened(0.5 * k.epsilon, f.grid));
  for (int c = 0; c < 9; ++c) {
    if (all_zero(f.comps[c])) continue;
    convolve_array(f.grid, f.comps[c], f.support, out.comps[c], k.weightsScaled, k.rx, k.ry,
                   k.rz);
  }
  return out;
}

TensorField grad_mollify(const VectorField& f, const MollKernel& k) {
  require_same_grid(f.grid, k.grid, "grad_mollify");
  TensorField out(f.grid, f.support.widened(0.5 * k.epsilon, f.grid));
  for (int j = 0; j < 3; ++j) {
    if (all_zero(f.comps[j])) continue;
    for (int i = 0; i < 3; ++i)
      convolve_array(f.grid, f.comps[j], f.support, out.comps[3 * i + j],
                     k.gradWeightsScaled[i], k.rx, k.ry, k.rz);
  }
  return out;
}

VectorField double_mollify(const VectorField& f, const MollKernel& k) {
  return mollify(mollify(f, k), k);
}

}  // namespace oflx
