#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace oflx {

/// Incremental SHA-256 (FIPS 180-2). Used to fingerprint snapshot files and
/// report payloads for the reproducibility contract.
struct Sha256 {
  Sha256();
  void update(const void* data, std::size_t len);
  /// Finalizes and returns the lowercase hex digest; the object is spent.
  std::string hex_digest();

 private:
  std::uint32_t state_[8];
  std::uint64_t length_ = 0;
  unsigned char buffer_[64];
  std::size_t fill_ = 0;
  void compress(const unsigned char* block);
};

std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& s);

}  // namespace oflx
