#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tribegames {

// Seeded generator for the randomised sweeps. Draws go through the raw
// engine so that a recorded seed reproduces the exact instance stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    // uniform over [0, n)
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    // uniform over [lo, hi]
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }

    bool chance(int num, int den) { return below(den) < num; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(below(static_cast<int>(items.size())))];
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace tribegames
