#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace vitalink::wire {

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data,
                                std::uint16_t crc = 0xFFFF);

inline std::uint16_t crc16_ccitt_false(std::string_view text) {
    return crc16_ccitt_false(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace vitalink::wire
