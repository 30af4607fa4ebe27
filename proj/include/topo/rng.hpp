#ifndef TOPO_RNG_HPP
#define TOPO_RNG_HPP

#include <cstdint>
#include <random>

namespace topo {

// Deterministic random source.  We draw from mt19937_64 directly and do our
// own rejection sampling: the standard distribution objects are not pinned
// across library implementations, and byte-identical corpus generation for a
// given seed is part of the output contract.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(uint64_t seed) : eng(seed) {}

    uint64_t next_u64() { return eng(); }

    // Uniform in [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            uint64_t v = eng();
            if (v < limit) return v % n;
        }
    }

    // Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + (int64_t)below((uint64_t)(hi - lo + 1));
    }
};

}

#endif
