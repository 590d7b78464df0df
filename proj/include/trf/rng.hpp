#pragma once

#include <array>
#include <cstdint>

namespace trf {

// Finalizer of the splitmix64 generator; a cheap bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives the key for one logical substream.  Every random draw in the
// library comes from a stream keyed by (seed, replication, stream), so a
// simulation replica is reproducible in isolation no matter which thread
// runs it or in what order replicas execute.
inline std::uint64_t substream_key(std::uint64_t seed,
                                   std::uint64_t replication,
                                   std::uint64_t stream) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = mix64(seed + golden);
    x = mix64(x + golden * (replication + 1));
    x = mix64(x + golden * (stream + 1));
    return x;
}

// xoshiro256++ with a ziggurat normal sampler.  The hot loops draw tens of
// millions of normals per fit, which rules out the distribution adaptors in
// <random> (they are several times slower and their sequences are not
// pinned by the standard anyway, which would undermine bit-reproducible
// outputs across library versions).
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) {
        std::uint64_t sm = key;
        constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
        for (auto& w : s_) {
            sm += golden;
            w = mix64(sm);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1; // keep state nonzero
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1); safe as a log() argument.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace trf
