#pragma once

#include <cstdint>
#include <random>

namespace edcp {

// Deterministic seedable generator. All randomness in the library flows
// through injected Rng instances; there is no global state. Bounded sampling
// is implemented here (rather than with std::uniform_int_distribution, whose
// output is not specified portably) so that a seed reproduces the exact same
// stream on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound) {
        // rejection sampling on the top range to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 bits of entropy.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform_real() < p; }

    // Derives an independent child stream; the splitting rule is fixed so a
    // master seed determines every per-trial stream.
    Rng split(std::uint64_t index) {
        std::uint64_t base = engine_();
        return Rng(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    }

    // Stateless derivation: does not advance this generator. Used to hand out
    // per-trial seeds indexed by trial number.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        return splitmix(master ^ (0xbf58476d1ce4e5b9ULL * (index + 1)));
    }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace edcp
