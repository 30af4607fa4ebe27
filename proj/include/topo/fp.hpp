#ifndef TOPO_FP_HPP
#define TOPO_FP_HPP

#include <cstdint>

#include "topo/error.hpp"

namespace topo {

// Scalar arithmetic in the prime field F_p.  Elements are canonical residues
// in [0, p).  p is capped below 2^16 so products fit comfortably in int64.

inline bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline void require_prime(int64_t p) {
    if (p < 2 || p >= (1 << 16) || !is_prime(p))
        throw SchemaError("p must be a prime < 2^16, got " + std::to_string(p));
}

inline int64_t fp_norm(int64_t a, int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

inline int64_t fp_add(int64_t a, int64_t b, int64_t p) { return (a + b) % p; }
inline int64_t fp_sub(int64_t a, int64_t b, int64_t p) { return fp_norm(a - b, p); }
inline int64_t fp_mul(int64_t a, int64_t b, int64_t p) { return (a * b) % p; }

// Inverse by extended Euclid; requires a != 0 mod p.
inline int64_t fp_inv(int64_t a, int64_t p) {
    a = fp_norm(a, p);
    if (a == 0) throw InvariantError("fp_inv of 0");
    int64_t r0 = p, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1; r0 = r1; r1 = r2;
        int64_t t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    return fp_norm(t0, p);
}

}

#endif
