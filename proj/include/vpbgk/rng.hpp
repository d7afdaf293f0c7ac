#pragma once

#include <cmath>
#include <cstdint>

namespace vpbgk {

// Counter-based random number streams.
//
// Every random draw in the simulation is addressed, not consumed: a stream is
// keyed by (master_seed, purpose, step) and the m-th variate of that stream is
// a pure function of the key and the index m. This buys three properties the
// rest of the code depends on:
//
//   * runs are bit-identical for a fixed master seed, independent of how the
//     particle loop is split across threads;
//   * the collision draws (keep/resample uniform, resampling normal pair) at a
//     given step are shared across all collocation nodes, because the node
//     index is deliberately absent from the key — particle m sees the same
//     eta_m and xi_m in every node simulation (common random numbers);
//   * initial-condition base draws are node-independent for the same reason,
//     so particle m corresponds across nodes and only scale factors that
//     depend on the random parameter differ.
//
// The generator is the splitmix64 output function applied to an affine
// counter walk, i.e. an ordinary splitmix64 sequence with random access.

enum class StreamPurpose : std::uint64_t {
    InitPosition = 1,
    InitVelocity = 2,
    CollisionKeep = 3,   // eta_m ~ U[0,1), compared against exp(-nu*h)
    CollisionNormal = 4, // xi_m, 2D standard normal pair via Box-Muller
    Generic = 100,       // tests and helper tooling
};

namespace detail {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// A single addressable stream. Cheap to construct; carries only the mixed key.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t step)
        : base_(derive(master_seed, static_cast<std::uint64_t>(purpose), step)) {}

    std::uint64_t bits(std::uint64_t index) const {
        return detail::mix64(base_ + (index + 1) * detail::kGamma);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    // 2D standard normal via Box-Muller; consumes counter slots 2i and 2i+1.
    // Box-Muller is used instead of a library sampler so the exact variates
    // are reproducible and independent of the standard library in use.
    void normal_pair(std::uint64_t index, double& g0, double& g1) const {
        const double u1 = 1.0 - uniform(2 * index); // in (0,1], log-safe
        const double u2 = uniform(2 * index + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        g0 = r * std::cos(t);
        g1 = r * std::sin(t);
    }

private:
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t step) {
        std::uint64_t h = detail::mix64(seed + detail::kGamma);
        h = detail::mix64(h ^ (purpose * 0xbf58476d1ce4e5b9ULL));
        h = detail::mix64(h ^ (step * 0x94d049bb133111ebULL));
        return h;
    }

    std::uint64_t base_;
};

// Deterministic RNG policy: one master seed, streams derived per purpose and
// per time step. Collision streams are shared across collocation nodes.
struct RngPolicy {
    std::uint64_t master_seed = 0;

    RandomStream stream(StreamPurpose purpose, std::uint64_t step = 0) const {
        return RandomStream(master_seed, purpose, step);
    }
};

} // namespace vpbgk
