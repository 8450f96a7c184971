#include "loforge/field.hpp"

#include <stdexcept>
#include <string>

namespace loforge {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) noexcept {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (!miller_rabin_witness(n, a, d, r)) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p) {
    if (p < 3) throw std::invalid_argument("modulus must be an odd prime >= 3, got " + std::to_string(p));
    if (p > kMaxModulus) throw std::invalid_argument("modulus exceeds 2^61: " + std::to_string(p));
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
}

Residue PrimeModulus::reduce(std::int64_t x) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = x % m;
    if (r < 0) r += m;
    return static_cast<Residue>(r);
}

Residue PrimeModulus::add(Residue a, Residue b) const noexcept {
    Residue s = a + b;  // both < 2^61, no overflow
    return s >= p_ ? s - p_ : s;
}

Residue PrimeModulus::sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
}

Residue PrimeModulus::mul(Residue a, Residue b) const noexcept { return mulmod(a, b, p_); }

Residue PrimeModulus::pow(Residue base, std::uint64_t exp) const noexcept { return powmod(base, exp, p_); }

Residue PrimeModulus::inv(Residue a) const {
    if (a % p_ == 0) throw std::domain_error("zero has no inverse");
    return powmod(a, p_ - 2, p_);
}

std::int64_t PrimeModulus::centered(Residue a) const noexcept {
    return a <= p_ / 2 ? static_cast<std::int64_t>(a) : -static_cast<std::int64_t>(p_ - a);
}

PrimeModulus find_prime(std::uint64_t target) {
    std::uint64_t candidate = target < 3 ? 3 : target;
    while (!is_prime(candidate)) ++candidate;
    return PrimeModulus(candidate);
}

mpq_class torus_norm(Residue x, const PrimeModulus& p) {
    const std::uint64_t m = p.value();
    const std::uint64_t r = x % m;
    const std::uint64_t dist = r <= m - r ? r : m - r;
    mpq_class q(mpz_class(std::to_string(dist)), mpz_class(std::to_string(m)));
    q.canonicalize();
    return q;
}

double torus_norm_value(Residue x, const PrimeModulus& p) noexcept {
    const std::uint64_t m = p.value();
    const std::uint64_t r = x % m;
    const std::uint64_t dist = r <= m - r ? r : m - r;
    return static_cast<double>(dist) / static_cast<double>(m);
}

}  // namespace loforge
