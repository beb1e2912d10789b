#pragma once

// Telemetry encoders: CSV files and "RTB1" UDP datagrams.
//
// Datagram layout (little-endian, 92 bytes):
//   offset 0   4 bytes  magic "RTB1" (0x52 0x54 0x42 0x31)
//   offset 4   uint32   sequence number, starting at 0
//   offset 8   10 x f64 t, v, theta, theta_dot, beta, beta_cmd, omega_w,
//                       u_gamma, v_hope, theta_hope
//   offset 88  f32      ff_saturated (0.0/1.0)

#include <rotunsim/sim.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace rotunsim {

inline constexpr std::string_view kCsvHeader =
    "t,v,theta,theta_dot,beta,beta_cmd,omega_w,u_gamma,v_hope,theta_hope,ff_saturated";

inline constexpr std::size_t kTelemetryFieldCount = 11;
inline constexpr std::size_t kDatagramSize = 4 + 4 + (kTelemetryFieldCount - 1) * 8 + 4;
inline constexpr std::array<std::uint8_t, 4> kDatagramMagic{0x52, 0x54, 0x42, 0x31};

using Datagram = std::array<std::uint8_t, kDatagramSize>;

/// Record fields in header order, ff_saturated as 0.0 / 1.0.
std::array<double, kTelemetryFieldCount> telemetry_fields(const TelemetryRecord& record);

/// One CSV data line (9 significant digits, no trailing newline).
std::string format_csv_row(const TelemetryRecord& record);

void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

Datagram encode_datagram(std::uint32_t sequence, const TelemetryRecord& record);

struct DecodedDatagram {
    std::uint32_t sequence = 0;
    std::array<double, kTelemetryFieldCount> fields{};
};

/// nullopt on wrong length or magic.
std::optional<DecodedDatagram> decode_datagram(const std::uint8_t* data, std::size_t size);

/// Best-effort, non-blocking UDP sender. Failures are reported once on the
/// warning stream and never interrupt the caller.
class UdpPublisher {
public:
    /// `endpoint` is "host:port".
    UdpPublisher(const std::string& endpoint, std::ostream& warnings);
    ~UdpPublisher();

    UdpPublisher(const UdpPublisher&) = delete;
    UdpPublisher& operator=(const UdpPublisher&) = delete;

    /// Sends the next datagram; returns false if it was not handed to the OS.
    bool publish(const TelemetryRecord& record);

    std::uint32_t next_sequence() const { return sequence_; }
    bool ready() const { return fd_ >= 0; }

private:
    void warn(const std::string& message);

    int fd_ = -1;
    std::uint32_t sequence_ = 0;
    std::ostream* warnings_;
    bool warned_ = false;
    std::array<std::uint8_t, 128> address_{};  // sockaddr_storage-sized
    unsigned address_len_ = 0;
};

/// Publishes every record of a finished trajectory.
void publish_udp(const Trajectory& traj, UdpPublisher& publisher);

/// Splits "host:port"; throws DomainError on a malformed endpoint.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace rotunsim
