#include "vitalink/wire/device_simulator.hpp"

#include <cmath>

#include "vitalink/error.hpp"
#include "vitalink/wire/codec.hpp"

namespace vitalink::wire {

std::string_view to_string(DeviceState state) {
    switch (state) {
        case DeviceState::Reset: return "Reset";
        case DeviceState::Scan: return "Scan";
        case DeviceState::Collect: return "Collect";
        case DeviceState::Transmit: return "Transmit";
    }
    return "?";
}

void DeviceConfig::validate() const {
    if (!(accel_rate_hz > 0 && ppg_rate_hz > 0 && temp_rate_hz > 0)) {
        throw ConfigError("sampling rates must be positive");
    }
    if (!(window_s > 0) || !(connection_window_s >= 0) || !(inter_sample_delay_ms >= 0) ||
        !(scan_s >= 0) || baud <= 0) {
        throw ConfigError("timing parameters out of range");
    }
    if (std::abs(window_s * ppg_rate_hz - static_cast<double>(kPpgSamples)) > 1e-9) {
        throw ConfigError("window_s * ppg_rate_hz must equal " + std::to_string(kPpgSamples));
    }
}

DeviceSimulator::DeviceSimulator(DeviceConfig config) : config_(std::move(config)) {
    config_.validate();
}

double DeviceSimulator::transmit_seconds_for(std::size_t packet_bytes, std::size_t samples) const {
    const double uart_s = static_cast<double>(packet_bytes) * 10.0 / config_.baud;
    const double pacing_s = static_cast<double>(samples) * config_.inter_sample_delay_ms / 1000.0;
    return uart_s + pacing_s;
}

double DeviceSimulator::transmit_seconds(std::size_t packets) const {
    return config_.connection_window_s +
           static_cast<double>(packets) * transmit_seconds_for(kPacketBytes, sample_count());
}

CycleReport DeviceSimulator::step(const SignalSource& source, bool uplink_present) {
    CycleReport report;
    report.cycle = cycle_;
    report.uplink = uplink_present;

    report.trace.push_back({DeviceState::Reset, clock_s_, 0.0});
    report.trace.push_back({DeviceState::Scan, clock_s_, config_.scan_s});
    clock_s_ += config_.scan_s;

    const auto ts = config_.start_ts + static_cast<std::uint32_t>(std::floor(clock_s_));
    SensorBurst burst = source ? source(cycle_, ts) : SensorBurst::zeroed();
    burst.ts = ts;
    burst.device_id = config_.device_id;
    report.trace.push_back({DeviceState::Collect, clock_s_, config_.window_s});
    clock_s_ += config_.window_s;

    report.packet = encode(burst);
    fifo_.push_back(report.packet);

    if (uplink_present) {
        report.transmit_s = transmit_seconds(fifo_.size());
        while (!fifo_.empty()) {
            report.delivered.push_back(std::move(fifo_.front()));
            fifo_.pop_front();
        }
    } else {
        // The connection window expires with nothing sent.
        report.transmit_s = config_.connection_window_s;
    }
    report.trace.push_back({DeviceState::Transmit, clock_s_, report.transmit_s});
    clock_s_ += report.transmit_s;

    report.buffered_after = fifo_.size();
    ++cycle_;
    return report;
}

std::vector<CycleReport> DeviceSimulator::run(const SignalSource& source, std::size_t n_cycles,
                                              const UplinkPresence& uplink) {
    if (n_cycles == 0) {
        throw ConfigError("n_cycles must be at least 1");
    }
    std::vector<CycleReport> reports;
    reports.reserve(n_cycles);
    for (std::size_t i = 0; i < n_cycles; ++i) {
        const bool present = uplink ? uplink(cycle_) : true;
        reports.push_back(step(source, present));
    }
    return reports;
}

}  // namespace vitalink::wire
