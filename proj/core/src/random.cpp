#include <rotunsim/random.hpp>

#include <cmath>
#include <numbers>

namespace rotunsim::rng {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

double uniform_open(std::uint64_t bits) {
    // 52 high bits centred in their cell: the largest value is 1 - 2^-53,
    // which is exactly representable, so 1.0 cannot come back.
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t base = counter * 2;
    const double u1 = uniform_open(hash3(seed, stream, base));
    const double u2 = uniform_open(hash3(seed, stream, base + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rotunsim::rng
