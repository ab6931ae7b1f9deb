#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vitalink/wire/burst.hpp"

namespace vitalink::wire {

// Little-endian packet layout (see docs/packet_layout.md):
//
//   offset  size  field
//        0     4  ts            u32
//        4   272  accel_x[136]  i16
//      276   272  accel_y[136]  i16
//      548   272  accel_z[136]  i16
//      820   248  ir[124]       u16
//     1068   248  red[124]      u16
//     1316     8  temp_wrist[4] u16
//     1324     8  temp_ambient  u16
//     1332     2  crc16         u16, CRC-16/CCITT-FALSE over bytes [0, 1332)
inline constexpr std::size_t kPacketHeaderBytes = 4;
inline constexpr std::size_t kPacketPayloadBytes =
    kPacketHeaderBytes + 2 * (3 * kAccelSamples + 2 * kPpgSamples + 2 * kTempSamples);
inline constexpr std::size_t kPacketBytes = kPacketPayloadBytes + 2;

std::vector<std::uint8_t> encode(const SensorBurst& burst);

/// Inverse of encode. The device id is supplied by the caller because the
/// packet does not carry it.
SensorBurst decode(std::span<const std::uint8_t> bytes, std::string device_id = {});

}  // namespace vitalink::wire
