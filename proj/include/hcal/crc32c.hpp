#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace hcal {

/// CRC-32C (Castagnoli, reflected polynomial 0x82F63B78). Pass a previous
/// result as `crc` to continue a running checksum.
std::uint32_t crc32c(std::span<const std::byte> data, std::uint32_t crc = 0) noexcept;

}  // namespace hcal
