#pragma once

#include <cmath>
#include <cstdint>

namespace repsig {

// Finalizer of the splitmix64 step sequence.
inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Stateless stream keying: the same (seed, stream) pair always yields the
// same key, so replications can be assigned to threads in any order without
// changing their draws.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64_finalize(
        splitmix64_finalize(seed + kGoldenGamma * (stream + 1)) + kGoldenGamma);
}

// Counter-based generator: output n is a pure function of (key, n), which
// makes every draw reproducible independent of execution interleaving.
// uniform01 is strictly inside (0, 1) so log transforms never see 0.
class CounterRng {
 public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(derive_key(seed, stream)) {}

    std::uint64_t next_u64() {
        return splitmix64_finalize(key_ + kGoldenGamma * ++counter_);
    }

    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the polar form of Box-Muller is avoided: the
    // trigonometric form consumes exactly two uniforms per pair, keeping the
    // draw count deterministic.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform01()));
        const double angle = 6.283185307179586 * uniform01();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

 private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace repsig
