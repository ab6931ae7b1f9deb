#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "vitalink/wire/burst.hpp"

namespace vitalink::wire {

enum class DeviceState { Reset, Scan, Collect, Transmit };

std::string_view to_string(DeviceState state);

struct DeviceConfig {
    double accel_rate_hz = 34.4;
    double ppg_rate_hz = 31.0;
    double temp_rate_hz = 1.0;
    double window_s = 4.0;
    double connection_window_s = 3.5;
    double inter_sample_delay_ms = 1.0;
    int baud = 9600;
    double scan_s = 0.0;  // advertising time before Collect
    std::uint32_t start_ts = 1'700'000'000;
    std::string device_id = "band-0001";

    /// Throws ConfigError if a rate is non-positive or the PPG window does not
    /// hold exactly one burst worth of samples.
    void validate() const;
};

/// Produces the burst collected during one cycle. Receives the cycle index and
/// the burst timestamp; the returned burst's ts and device id are overwritten.
using SignalSource = std::function<SensorBurst(std::size_t cycle, std::uint32_t ts)>;

/// Whether the phone is in range during a given cycle's Transmit phase.
using UplinkPresence = std::function<bool(std::size_t cycle)>;

struct StateSpan {
    DeviceState state;
    double start_s;  // relative to simulation start
    double duration_s;
};

struct CycleReport {
    std::size_t cycle = 0;
    std::vector<StateSpan> trace;
    std::vector<std::uint8_t> packet;                   // collected this cycle
    std::vector<std::vector<std::uint8_t>> delivered;  // oldest first
    std::size_t buffered_after = 0;
    double transmit_s = 0.0;
    bool uplink = true;
};

/// Timing model of the four-state acquisition loop. Transmit holds the
/// connection window open, then streams every queued packet over the UART
/// (10 bits per byte) with a fixed delay after each sample.
class DeviceSimulator {
public:
    explicit DeviceSimulator(DeviceConfig config);

    /// Time to hand `packets` queued packets to the BLE module once a
    /// central is connected, including the connection window.
    double transmit_seconds(std::size_t packets) const;

    /// Transmit time for a packet of arbitrary size carrying `samples` samples.
    double transmit_seconds_for(std::size_t packet_bytes, std::size_t samples) const;

    CycleReport step(const SignalSource& source, bool uplink_present);

    std::vector<CycleReport> run(const SignalSource& source, std::size_t n_cycles,
                                 const UplinkPresence& uplink = {});

    const DeviceConfig& config() const { return config_; }
    std::size_t buffered() const { return fifo_.size(); }
    double elapsed_s() const { return clock_s_; }

private:
    DeviceConfig config_;
    std::deque<std::vector<std::uint8_t>> fifo_;
    std::size_t cycle_ = 0;
    double clock_s_ = 0.0;
};

}  // namespace vitalink::wire
