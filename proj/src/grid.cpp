#include "oflx/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace oflx {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid3::Grid3(std::uint32_t nx_, std::uint32_t ny_, std::uint32_t nzHalf_, double Lz_)
    : nx(nx_), ny(ny_), nzHalf(nzHalf_), Lz(Lz_) {
  if (nx < 4 || ny < 4 || nzHalf < 2)
    throw std::invalid_argument("Grid3: need nx, ny >= 4 and nzHalf >= 2");
  if (!(Lz > 0.0) || !std::isfinite(Lz))
    throw std::invalid_argument("Grid3: Lz must be positive and finite");
}

double Grid3::hx() const { return kTwoPi / static_cast<double>(nx); }
double Grid3::hy() const { return kTwoPi / static_cast<double>(ny); }
double Grid3::hmax() const { return std::fmax(hx(), std::fmax(hy(), hz())); }

bool Region::contains(double z, double Lz) const {
  switch (kind) {
    case Kind::FullSlab: return z >= -Lz && z <= Lz;
    case Kind::HalfPlus: return z >= 0.0 && z <= Lz;
    case Kind::Above:    return z > a && z <= Lz;
    case Kind::Strip:    return z > a && z < b;
  }
  return false;
}

void Region::zbounds(double Lz, double& lo, double& hi) const {
  switch (kind) {
    case Kind::FullSlab: lo = -Lz; hi = Lz; return;
    case Kind::HalfPlus: lo = 0.0; hi = Lz; return;
    case Kind::Above:
      if (a < -Lz || a >= Lz)
        throw std::domain_error("Region: Above(" + std::to_string(a) +
                                ") does not lie within the slab [-Lz, Lz]");
      lo = a; hi = Lz; return;
    case Kind::Strip:
      if (a < -Lz || b > Lz || !(a < b))
        throw std::domain_error("Region: Strip(" + std::to_string(a) + ", " +
                                std::to_string(b) + ") does not lie within the slab");
      lo = a; hi = b; return;
  }
  throw std::domain_error("Region: unknown kind");
}

Region Region::translated(double dz, const Grid3& g) const {
  if (dz == 0.0) return *this;
  double lo, hi;
  zbounds(g.Lz, lo, hi);
  // Open bounds sit half a cell beyond the outermost supported node.
  const double slack = 0.5 * g.hz();
  double nlo = lo - dz - slack;
  double nhi = hi - dz + slack;
  // Above/Strip are open below; a lower bound clamped onto -Lz would wrongly
  // exclude the bottom node, so stay conservative and cover the whole slab.
  if (nlo <= -g.Lz) return fullSlab();
  nhi = std::fmin(nhi, g.Lz);
  if (nhi >= g.Lz) return above(nlo);
  return strip(nlo, nhi);
}

Region Region::widened(double w, const Grid3& g) const {
  if (w <= 0.0) return *this;
  double lo, hi;
  zbounds(g.Lz, lo, hi);
  double nlo = lo - w;
  double nhi = hi + w;
  if (kind == Kind::HalfPlus && -w > -g.Lz) return above(-w);  // D_{> -w} idiom
  if (nlo <= -g.Lz) return fullSlab();  // see translated(): no closed-bottom tag
  nhi = std::fmin(nhi, g.Lz);
  if (nhi >= g.Lz) return above(nlo);
  return strip(nlo, nhi);
}

std::string Region::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::FullSlab: os << "FullSlab"; break;
    case Kind::HalfPlus: os << "HalfPlus"; break;
    case Kind::Above:    os << "Above(" << a << ")"; break;
    case Kind::Strip:    os << "Strip(" << a << ", " << b << ")"; break;
  }
  return os.str();
}

}  // namespace oflx
