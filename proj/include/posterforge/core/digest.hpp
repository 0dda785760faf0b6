#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace posterforge {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 sha256(std::span<const std::uint8_t> bytes);
Sha256 sha256(std::string_view bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view bytes);

/// Stable 64-bit key: the first eight bytes of SHA-256, big-endian.
std::uint64_t stable_hash64(std::string_view bytes);

std::string base64_encode(std::string_view bytes);
/// Throws Error(InvalidArgument) on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace posterforge
