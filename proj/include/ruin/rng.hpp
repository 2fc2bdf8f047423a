#pragma once

#include <cstdint>

namespace ruin {

// Counter-based stream: the n-th output is a pure function of
// (seed, stream_id, n). Streams cost nothing to construct, so the Monte
// Carlo drivers give every trial its own stream_id; results then cannot
// depend on how trials are scheduled across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_(mix(mix(seed + kGolden) ^ mix(stream_id ^ kStreamSalt))),
          counter_(0) {}

    std::uint64_t next_u64() noexcept { return mix(key_ + ++counter_ * kGolden); }

    // Uniform on the open interval (0,1); never 0 or 1, so log-based
    // quantile transforms are safe.
    double next_unit() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t counter() const noexcept { return counter_; }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kStreamSalt = 0x6a09e667f3bcc909ULL;

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace ruin
