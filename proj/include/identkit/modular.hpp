#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace identkit {

// Arithmetic in Z/pZ for 64-bit moduli, plus exact integer rank.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    const std::uint64_t s = a + b; // a, b < m < 2^63, so no wrap-around
    return s >= m ? s - m : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : a + (m - b);
}

inline std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m) {
    if (v >= 0) {
        return static_cast<std::uint64_t>(v) % m;
    }
    const std::uint64_t r = static_cast<std::uint64_t>(-(v + 1)) % m; // avoids overflow at INT64_MIN
    return m - 1 - r;
}

std::uint64_t reduce_integer(const boost::multiprecision::cpp_int &v, std::uint64_t m);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Uniformly random prime in the open interval (2^61, 2^62).
std::uint64_t random_prime_61_62(std::mt19937_64 &rng);

/// Rank over Z/pZ of a dense row-major matrix whose entries are already reduced.
std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p);

/// Exact rank over the rationals via fraction-free (Bareiss) elimination.
std::size_t exact_rank(std::vector<std::vector<boost::multiprecision::cpp_int>> rows);

/// splitmix64 finalizer, used to derive independent RNG streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace identkit
