#pragma once

// Counter-based randomness. Every draw is a pure function of (seed, counter),
// so replicas, tree nodes and trajectory steps get the same value no matter in
// which order they are visited.

#include <cstdint>

namespace boundrat::rng {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of stream `counter` derived from `master`. Distinct counters give
/// distinct streams and adding replicas never changes earlier ones.
constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t counter) {
    return mix64(mix64(master) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Incremental hash of a path through the history tree.
class PathHash {
public:
    constexpr explicit PathHash(std::uint64_t seed) : state_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    constexpr PathHash extend(std::uint32_t world, std::uint32_t percept) const {
        PathHash next = *this;
        next.state_ = mix64(state_ ^ (0x100000001b3ULL * (1 + world + (std::uint64_t{percept} << 32))));
        return next;
    }

    /// Draw attached to (node, tag), e.g. tag = action id.
    constexpr std::uint64_t draw(std::uint64_t tag) const {
        return mix64(state_ ^ mix64(tag + 0x2545f4914f6cdd1dULL));
    }

    constexpr std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace boundrat::rng
