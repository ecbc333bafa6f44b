#include "autopeer/digest.hpp"

#include <openssl/sha.h>

#include <algorithm>

#include "autopeer/errors.hpp"

namespace autopeer {

Bytes32 sha256(std::span<const std::uint8_t> data) {
  Bytes32 out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes32 sha256_concat(const Bytes32& a, const Bytes32& b, const Bytes32& c) {
  std::array<std::uint8_t, 96> buf{};
  auto it = std::copy(a.begin(), a.end(), buf.begin());
  it = std::copy(b.begin(), b.end(), it);
  std::copy(c.begin(), c.end(), it);
  return sha256(buf);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes32 bytes32_from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw InvalidParameter("expected 64 hex digits, got " + std::to_string(hex.size()));
  }
  Bytes32 out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InvalidParameter("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace autopeer
