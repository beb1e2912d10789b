#include <rotunsim/telemetry.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>

using namespace rotunsim;

namespace {

Scenario zero_run(double duration) {
    Scenario s;
    s.name = "zero";
    s.duration = duration;
    s.timeline = {{0.0, 0.0, 0.0}};
    return s;
}

Scenario busy_run() {
    Scenario s = zero_run(2.0);
    s.timeline = {{0.0, 2.0, 0.0}, {0.5, 2.0, 0.2}};
    s.disturbances = {{DisturbanceKind::band_noise, 0.0, 2.0, 200.0, 5.0}};
    return s;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Reads a little-endian f64 at `offset`, independently of the encoder.
double le_double(const std::uint8_t* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
}

}  // namespace

TEST(Csv, HeaderAndRowCount) {
    std::ostringstream out;
    write_csv(run(zero_run(1.0), SimConfig{}), out);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows.front(),
              "t,v,theta,theta_dot,beta,beta_cmd,omega_w,u_gamma,v_hope,theta_hope,ff_saturated");
    EXPECT_EQ(rows.front(), kCsvHeader);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), 10);
    }
}

TEST(Csv, SameSeedSameBytes) {
    test_util::TempDir dir;
    write_csv(run(busy_run(), SimConfig{}), dir / "a.csv");
    write_csv(run(busy_run(), SimConfig{}), dir / "b.csv");
    const std::string a = test_util::slurp(dir / "a.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, test_util::slurp(dir / "b.csv"));
}

TEST(Csv, RowValuesAreNineDigits) {
    TelemetryRecord r;
    r.t = 0.01;
    r.theta = 1.0 / 3.0;
    r.ff_saturated = true;
    EXPECT_EQ(format_csv_row(r), "0.01,0,0.333333333,0,0,0,0,0,0,0,1");
}

TEST(Datagram, LayoutIsFixed) {
    TelemetryRecord r;
    r.t = 1.5;
    r.theta = -0.25;
    r.u_gamma = 12.0;
    r.ff_saturated = true;
    const Datagram d = encode_datagram(0, r);
    EXPECT_EQ(d.size(), 92u);
    EXPECT_EQ(std::memcmp(d.data(), "RTB1", 4), 0);
    EXPECT_EQ(d[4] | d[5] << 8 | d[6] << 16 | d[7] << 24, 0);
    EXPECT_EQ(le_double(&d[8]), 1.5);
    EXPECT_EQ(le_double(&d[8 + 2 * 8]), -0.25);
    EXPECT_EQ(le_double(&d[8 + 7 * 8]), 12.0);
    std::uint32_t flag = 0;
    for (int i = 3; i >= 0; --i) flag = (flag << 8) | d[88 + i];
    EXPECT_EQ(std::bit_cast<float>(flag), 1.0f);

    const Datagram d7 = encode_datagram(0x01020304, r);
    EXPECT_EQ(d7[4], 0x04);
    EXPECT_EQ(d7[7], 0x01);
}

TEST(Datagram, DecodeRejectsGarbage) {
    const Datagram d = encode_datagram(3, TelemetryRecord{});
    EXPECT_TRUE(decode_datagram(d.data(), d.size()).has_value());
    EXPECT_FALSE(decode_datagram(d.data(), d.size() - 1).has_value());
    Datagram bad = d;
    bad[0] = 'X';
    EXPECT_FALSE(decode_datagram(bad.data(), bad.size()).has_value());
}

TEST(Datagram, AgreesWithCsvRows) {
    // Both encoders carry the same record values; CSV rounds to 9 digits.
    const Trajectory traj = run(busy_run(), SimConfig{});
    for (std::size_t i = 0; i < traj.records.size(); i += 17) {
        const Datagram d = encode_datagram(static_cast<std::uint32_t>(i), traj.records[i]);
        const auto decoded = decode_datagram(d.data(), d.size());
        ASSERT_TRUE(decoded);
        EXPECT_EQ(decoded->sequence, i);
        const std::string row = format_csv_row(traj.records[i]);
        std::size_t start = 0;
        for (std::size_t f = 0; f < kTelemetryFieldCount; ++f) {
            const std::size_t end = std::min(row.find(',', start), row.size());
            double value = 0.0;
            std::from_chars(row.data() + start, row.data() + end, value);
            const double exact = decoded->fields[f];
            EXPECT_NEAR(value, exact, 1e-8 * std::max(1.0, std::abs(exact))) << "field " << f;
            start = end + 1;
        }
    }
}

TEST(Udp, LoopbackDeliversEveryRecordInOrder) {
    const int rx = ::socket(AF_INET, SOCK_DGRAM, 0);
    ASSERT_GE(rx, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ASSERT_EQ(::bind(rx, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    socklen_t len = sizeof addr;
    ASSERT_EQ(::getsockname(rx, reinterpret_cast<sockaddr*>(&addr), &len), 0);
    int buf = 1 << 20;
    ::setsockopt(rx, SOL_SOCKET, SO_RCVBUF, &buf, sizeof buf);
    timeval tv{1, 0};
    ::setsockopt(rx, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);

    const Trajectory traj = run(zero_run(1.0), SimConfig{});
    std::ostringstream warnings;
    UdpPublisher pub("127.0.0.1:" + std::to_string(ntohs(addr.sin_port)), warnings);
    ASSERT_TRUE(pub.ready());
    std::size_t received = 0;
    for (const auto& r : traj.records) {
        ASSERT_TRUE(pub.publish(r));
        std::uint8_t data[256];
        const ssize_t n = ::recv(rx, data, sizeof data, 0);
        ASSERT_EQ(n, 92);
        const auto d = decode_datagram(data, static_cast<std::size_t>(n));
        ASSERT_TRUE(d);
        EXPECT_EQ(d->sequence, received);
        EXPECT_EQ(d->fields[0], r.t);
        ++received;
    }
    ::close(rx);
    EXPECT_EQ(received, 101u);
    EXPECT_EQ(pub.next_sequence(), 101u);
    EXPECT_TRUE(warnings.str().empty());
}

TEST(Udp, UnresolvableEndpointWarnsOnceAndContinues) {
    std::ostringstream warnings;
    UdpPublisher pub("no-such-host.invalid:9999", warnings);
    const Trajectory traj = run(zero_run(0.1), SimConfig{});
    EXPECT_NO_THROW(publish_udp(traj, pub));
    const std::string w = warnings.str();
    EXPECT_FALSE(w.empty());
    EXPECT_EQ(std::count(w.begin(), w.end(), '\n'), 1);
}

TEST(Udp, EndpointParsing) {
    EXPECT_EQ(parse_endpoint("127.0.0.1:5005"), std::make_pair(std::string("127.0.0.1"), std::uint16_t{5005}));
    EXPECT_EQ(parse_endpoint("[::1]:7").first, "::1");
    EXPECT_THROW(parse_endpoint("localhost"), DomainError);
    EXPECT_THROW(parse_endpoint("localhost:99999"), DomainError);
    EXPECT_THROW(parse_endpoint(":80"), DomainError);
}
