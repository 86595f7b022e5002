#include "identkit/modular.hpp"

#include <utility>

namespace identkit {

using boost::multiprecision::cpp_int;

std::uint64_t reduce_integer(const cpp_int &v, std::uint64_t m) {
    cpp_int r = v % m; // sign follows the dividend
    if (r < 0) {
        r += m;
    }
    return r.convert_to<std::uint64_t>();
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    // m is prime here
    return pow_mod(a, m - 2, m);
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) {
            return n == p;
        }
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

std::uint64_t random_prime_61_62(std::mt19937_64 &rng) {
    constexpr std::uint64_t lo = (1ULL << 61) + 1;
    constexpr std::uint64_t hi = (1ULL << 62) - 1;
    std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    while (true) {
        const std::uint64_t candidate = dist(rng) | 1ULL;
        if (candidate < hi && is_prime_u64(candidate)) {
            return candidate;
        }
    }
}

std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p) {
    if (rows.empty()) {
        return 0;
    }
    const std::size_t cols = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        const std::uint64_t inv = inv_mod(rows[rank][c], p);
        for (std::size_t k = c; k < cols; ++k) {
            rows[rank][k] = mul_mod(rows[rank][k], inv, p);
        }
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const std::uint64_t f = rows[r][c];
            if (f == 0) {
                continue;
            }
            for (std::size_t k = c; k < cols; ++k) {
                rows[r][k] = sub_mod(rows[r][k], mul_mod(f, rows[rank][k], p), p);
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t exact_rank(std::vector<std::vector<cpp_int>> rows) {
    if (rows.empty()) {
        return 0;
    }
    const std::size_t cols = rows.front().size();
    std::size_t rank = 0;
    cpp_int prev_pivot = 1;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        const cpp_int &pv = rows[rank][c];
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                rows[r][k] = (pv * rows[r][k] - rows[r][c] * rows[rank][k]) / prev_pivot;
            }
            rows[r][c] = 0;
        }
        prev_pivot = pv;
        ++rank;
    }
    return rank;
}

} // namespace identkit
