#pragma once
// Deterministic splittable RNG (splitmix64 core). Every stochastic element of
// the toolkit draws from this so runs are reproducible bit-for-bit.
#include <cmath>
#include <cstdint>

namespace dd {

struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z          = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z          = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // independent stream for a labeled subtask
    Rng split(uint64_t salt) {
        Rng r(state ^ (salt * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
        r.next();
        return r;
    }

    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        // Box-Muller; fresh pair each call keeps the stream position simple
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    long binomial(long n, double p) {
        if (p <= 0) return 0;
        if (p >= 1) return n;
        long k = 0;
        for (long i = 0; i < n; ++i)
            if (uniform() < p) ++k;
        return k;
    }
};

}  // namespace dd
