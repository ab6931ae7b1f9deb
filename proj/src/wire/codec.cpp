#include "vitalink/wire/codec.hpp"

#include <cstdio>

#include "vitalink/error.hpp"
#include "vitalink/wire/crc16.hpp"

namespace vitalink::wire {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t& pos) {
    const auto v = static_cast<std::uint16_t>(in[pos] | (in[pos + 1] << 8));
    pos += 2;
    return v;
}

template <typename T>
void put_channel(std::vector<std::uint8_t>& out, const std::vector<T>& channel) {
    for (T sample : channel) {
        put_u16(out, static_cast<std::uint16_t>(sample));
    }
}

template <typename T>
std::vector<T> get_channel(std::span<const std::uint8_t> in, std::size_t& pos, std::size_t n) {
    std::vector<T> channel(n);
    for (auto& sample : channel) {
        sample = static_cast<T>(get_u16(in, pos));
    }
    return channel;
}

}  // namespace

std::vector<std::uint8_t> encode(const SensorBurst& burst) {
    validate(burst);
    std::vector<std::uint8_t> out;
    out.reserve(kPacketBytes);
    put_u32(out, burst.ts);
    put_channel(out, burst.accel_x);
    put_channel(out, burst.accel_y);
    put_channel(out, burst.accel_z);
    put_channel(out, burst.ir);
    put_channel(out, burst.red);
    put_channel(out, burst.temp_wrist);
    put_channel(out, burst.temp_ambient);
    put_u16(out, crc16_ccitt_false(out));
    return out;
}

SensorBurst decode(std::span<const std::uint8_t> bytes, std::string device_id) {
    if (bytes.size() < kPacketBytes) {
        throw TruncatedPacket("got " + std::to_string(bytes.size()) + " bytes, packet is " +
                              std::to_string(kPacketBytes));
    }
    if (bytes.size() > kPacketBytes) {
        throw LengthMismatch("got " + std::to_string(bytes.size()) + " bytes, packet is " +
                             std::to_string(kPacketBytes));
    }
    std::size_t pos = kPacketPayloadBytes;
    const std::uint16_t stored = get_u16(bytes, pos);
    const std::uint16_t computed = crc16_ccitt_false(bytes.first(kPacketPayloadBytes));
    if (stored != computed) {
        char msg[48];
        std::snprintf(msg, sizeof msg, "stored 0x%04X, computed 0x%04X", stored, computed);
        throw ChecksumMismatch(msg);
    }

    SensorBurst b;
    b.ts = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
    pos = kPacketHeaderBytes;
    b.accel_x = get_channel<std::int16_t>(bytes, pos, kAccelSamples);
    b.accel_y = get_channel<std::int16_t>(bytes, pos, kAccelSamples);
    b.accel_z = get_channel<std::int16_t>(bytes, pos, kAccelSamples);
    b.ir = get_channel<std::uint16_t>(bytes, pos, kPpgSamples);
    b.red = get_channel<std::uint16_t>(bytes, pos, kPpgSamples);
    b.temp_wrist = get_channel<std::uint16_t>(bytes, pos, kTempSamples);
    b.temp_ambient = get_channel<std::uint16_t>(bytes, pos, kTempSamples);
    b.device_id = std::move(device_id);
    return b;
}

}  // namespace vitalink::wire
