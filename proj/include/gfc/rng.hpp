#pragma once

// Deterministic, platform-independent random streams.
//
// Every random quantity in the library is drawn from a SplitMix64 stream
// keyed by (global seed) XOR (stable per-module tag), so a single 64-bit
// seed reproduces all experiments bit-exactly regardless of platform,
// thread count or standard-library version.

#include <cstdint>
#include <cmath>
#include <string_view>

namespace gfc {

constexpr std::uint64_t stream_tag(std::string_view name) {
    // FNV-1a, 64 bit
    std::uint64_t h = 1469598103934665603ull;
    for (char c : name) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    Rng(std::uint64_t seed, std::string_view module) : state_(seed ^ stream_tag(module)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one value per call, the sibling is discarded for simplicity
    double normal() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace gfc
