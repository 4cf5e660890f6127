#pragma once

#include <cstdint>

namespace mermin {

// Counter-based random substreams. Each (seed, stream) pair yields an
// independent deterministic sequence, so shot k can be drawn on any thread
// and still produce the same bits as a serial run.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(mix(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Stream id shared by one shot of one sampling domain (experiment, setting
// combination, ...). Shot indices stay below 2^32 in practice.
inline std::uint64_t shot_stream(std::uint32_t domain, std::uint64_t shot_index) {
    return (static_cast<std::uint64_t>(domain) << 32) | shot_index;
}

} // namespace mermin
