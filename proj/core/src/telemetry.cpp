#include <rotunsim/telemetry.hpp>

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <charconv>
#include <cstdio>
#include <cerrno>
#include <cstring>
#include <fstream>

namespace rotunsim {

std::array<double, kTelemetryFieldCount> telemetry_fields(const TelemetryRecord& r) {
    return {r.t,       r.v,       r.theta,   r.theta_dot,  r.beta,
            r.beta_cmd, r.omega_w, r.u_gamma, r.v_hope, r.theta_hope,
            r.ff_saturated ? 1.0 : 0.0};
}

std::string format_csv_row(const TelemetryRecord& record) {
    std::string line;
    char buf[32];
    const auto fields = telemetry_fields(record);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        std::snprintf(buf, sizeof buf, "%.9g", fields[i]);
        line += buf;
    }
    return line;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : traj.records) out << format_csv_row(r) << '\n';
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    write_csv(traj, out);
    if (!out) throw DomainError("write to '" + path.string() + "' failed");
}

namespace {

void put_u32(std::uint8_t* dst, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) dst[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void put_u64(std::uint8_t* dst, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) dst[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

constexpr std::size_t kFlagOffset = 8 + 8 * (kTelemetryFieldCount - 1);

std::uint64_t get_u64(const std::uint8_t* src) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | src[i];
    return v;
}

}  // namespace

Datagram encode_datagram(std::uint32_t sequence, const TelemetryRecord& record) {
    Datagram d{};
    std::memcpy(d.data(), kDatagramMagic.data(), kDatagramMagic.size());
    put_u32(d.data() + 4, sequence);
    const auto fields = telemetry_fields(record);
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
        put_u64(d.data() + 8 + 8 * i, std::bit_cast<std::uint64_t>(fields[i]));
    }
    put_u32(d.data() + kFlagOffset, std::bit_cast<std::uint32_t>(static_cast<float>(fields.back())));
    return d;
}

std::optional<DecodedDatagram> decode_datagram(const std::uint8_t* data, std::size_t size) {
    if (size != kDatagramSize || std::memcmp(data, kDatagramMagic.data(), 4) != 0) {
        return std::nullopt;
    }
    DecodedDatagram out;
    for (int i = 3; i >= 0; --i) out.sequence = (out.sequence << 8) | data[4 + i];
    for (std::size_t i = 0; i + 1 < kTelemetryFieldCount; ++i) {
        out.fields[i] = std::bit_cast<double>(get_u64(data + 8 + 8 * i));
    }
    std::uint32_t flag = 0;
    for (int i = 3; i >= 0; --i) flag = (flag << 8) | data[kFlagOffset + i];
    out.fields.back() = std::bit_cast<float>(flag);
    return out;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
        throw DomainError("endpoint must be host:port, got '" + endpoint + "'");
    }
    const std::string_view port_text(endpoint.data() + colon + 1, endpoint.size() - colon - 1);
    unsigned port = 0;
    const auto [ptr, ec] =
        std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port == 0 ||
        port > 65535) {
        throw DomainError("bad UDP port in '" + endpoint + "'");
    }
    std::string host = endpoint.substr(0, colon);
    if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
    }
    return {host, static_cast<std::uint16_t>(port)};
}

UdpPublisher::UdpPublisher(const std::string& endpoint, std::ostream& warnings)
    : warnings_(&warnings) {
    const auto [host, port] = parse_endpoint(endpoint);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
        warn("cannot resolve '" + host + "': " + ::gai_strerror(rc));
        return;
    }
    for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (ai->ai_addrlen <= address_.size()) {
            std::memcpy(address_.data(), ai->ai_addr, ai->ai_addrlen);
            address_len_ = ai->ai_addrlen;
            fd_ = fd;
            break;
        }
        ::close(fd);
    }
    ::freeaddrinfo(found);
    if (fd_ < 0) warn("cannot open a UDP socket for '" + endpoint + "'");
}

UdpPublisher::~UdpPublisher() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpPublisher::warn(const std::string& message) {
    if (warned_) return;
    warned_ = true;
    *warnings_ << "warning: telemetry: " << message << '\n';
}

bool UdpPublisher::publish(const TelemetryRecord& record) {
    const Datagram d = encode_datagram(sequence_++, record);
    if (fd_ < 0) return false;
    const auto sent =
        ::sendto(fd_, d.data(), d.size(), MSG_DONTWAIT,
                 reinterpret_cast<const sockaddr*>(address_.data()), address_len_);
    if (sent != static_cast<ssize_t>(d.size())) {
        warn(std::string("send failed: ") + std::strerror(errno));
        return false;
    }
    return true;
}

void publish_udp(const Trajectory& traj, UdpPublisher& publisher) {
    for (const auto& r : traj.records) publisher.publish(r);
}

}  // namespace rotunsim
