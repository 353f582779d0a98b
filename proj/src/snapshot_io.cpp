#include "oflx/snapshot_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "oflx/sha256.hpp"

namespace oflx {

namespace {

constexpr char kMagic[5] = {'O', 'F', 'L', 'X', '1'};
constexpr unsigned char kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

struct Reader {
  const unsigned char* p;
  std::size_t left;

  void need(std::size_t n) {
    if (left < n) throw std::invalid_argument("snapshot: truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    p += 4;
    left -= 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    p += 8;
    left -= 8;
    return v;
  }
  unsigned char u8() {
    need(1);
    const unsigned char v = *p;
    ++p;
    --left;
    return v;
  }
};

}  // namespace

void write_snapshot(const std::string& path, const VectorField& f) {
  std::string out;
  out.reserve(32 + 24 * f.nodeCount());
  out.append(kMagic, sizeof(kMagic));
  out.push_back(static_cast<char>(kVersion));
  put_u32(out, f.grid.nx);
  put_u32(out, f.grid.ny);
  put_u32(out, f.grid.nzHalf);
  put_f64(out, f.grid.Lz);
  put_f64(out, f.time);
  out.push_back(static_cast<char>(f.support.kind));
  put_f64(out, f.support.a);
  put_f64(out, f.support.b);
  for (int c = 0; c < 3; ++c)
    for (double v : f.comps[c]) put_f64(out, v);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

VectorField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (is.bad()) throw std::runtime_error("snapshot: read failed for '" + path + "'");

  Reader r{bytes.data(), bytes.size()};
  r.need(6);
  if (std::memcmp(r.p, kMagic, sizeof(kMagic)) != 0)
    throw std::invalid_argument("snapshot: bad magic (not an OFLX1 file)");
  r.p += 5;
  r.left -= 5;
  if (r.u8() != kVersion) throw std::invalid_argument("snapshot: unsupported version");

  const std::uint32_t nx = r.u32(), ny = r.u32(), nzHalf = r.u32();
  const double Lz = r.f64();
  const double time = r.f64();
  const unsigned char kind = r.u8();
  const double a = r.f64(), b = r.f64();
  if (kind > static_cast<unsigned char>(Region::Kind::Strip))
    throw std::invalid_argument("snapshot: bad support tag");

  const Grid3 g(nx, ny, nzHalf, Lz);  // validates shape
  Region sup;
  sup.kind = static_cast<Region::Kind>(kind);
  sup.a = a;
  sup.b = b;
  VectorField f(g, sup, time);
  const std::size_t n = g.nodeCount();
  if (r.left != 3 * n * 8)
    throw std::invalid_argument("snapshot: payload size does not match the grid");
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < n; ++q) f.comps[c][q] = r.f64();
  return f;
}

std::string file_sha256(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("digest: cannot open '" + path + "'");
  Sha256 h;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h.update(buf, static_cast<std::size_t>(is.gcount()));
  }
  if (is.bad()) throw std::runtime_error("digest: read failed for '" + path + "'");
  return h.hex_digest();
}

}  // namespace oflx
