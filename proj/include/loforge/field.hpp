#pragma once

// Prime-field plumbing shared by every other module.

#include <cstdint>
#include <gmpxx.h>

namespace loforge {

using Residue = std::uint64_t;

/// Largest modulus we accept; keeps every product inside unsigned __int128.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 61;

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

/// An odd prime p with 3 <= p <= 2^61. Checked at construction.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t p);

    std::uint64_t value() const noexcept { return p_; }
    operator std::uint64_t() const noexcept { return p_; }

    Residue reduce(std::int64_t x) const noexcept;
    Residue add(Residue a, Residue b) const noexcept;
    Residue sub(Residue a, Residue b) const noexcept;
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Residue mul(Residue a, Residue b) const noexcept;
    Residue pow(Residue base, std::uint64_t exp) const noexcept;
    /// Inverse of a non-zero residue (Fermat).
    Residue inv(Residue a) const;

    /// Signed view in {-(p-1)/2, ..., (p-1)/2}. Storage stays canonical.
    std::int64_t centered(Residue a) const noexcept;

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    std::uint64_t p_;
};

/// Smallest prime that is >= target and >= 3.
PrimeModulus find_prime(std::uint64_t target);

/// ||x/p||_T, the distance of x/p to the nearest integer, as an exact rational.
mpq_class torus_norm(Residue x, const PrimeModulus& p);

/// Same quantity in double precision, for the Fourier hot loops.
double torus_norm_value(Residue x, const PrimeModulus& p) noexcept;

}  // namespace loforge
