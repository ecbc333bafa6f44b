#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace autopeer {

using Bytes32 = std::array<std::uint8_t, 32>;

/// SHA-256 over raw bytes.
Bytes32 sha256(std::span<const std::uint8_t> data);

/// SHA-256 over the concatenation of three 32-byte values (96 bytes).
Bytes32 sha256_concat(const Bytes32& a, const Bytes32& b, const Bytes32& c);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Parses exactly 64 hex digits. Throws InvalidParameter otherwise.
Bytes32 bytes32_from_hex(std::string_view hex);

}  // namespace autopeer
