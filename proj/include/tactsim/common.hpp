#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tactsim {

// Error taxonomy mirrored by the C API status codes.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class OverloadError : public std::runtime_error {
public:
    explicit OverloadError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic counter-based RNG stream. Streams are derived from a master
// seed and a label so that e.g. traffic noise and action sampling never share
// draws, and schemes run against identical traffic realizations.
class RngStream {
public:
    RngStream() : state_(0) {}
    RngStream(std::uint64_t master_seed, std::string_view label)
        : state_(master_seed ^ fnv1a64(label)) {
        // burn-in decorrelates adjacent seeds
        for (int i = 0; i < 4; ++i) (void)splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline double clamp_interval(double x, double lo, double hi) {
    if (x < lo) return lo;
    if (x > hi) return hi;
    return x;
}

}  // namespace tactsim
