#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "loforge/field.hpp"

namespace loforge {

/// An n x n symmetric matrix with entries in {-1, +1}, stored as the
/// row-major upper triangle (diagonal included). Bit 1 encodes -1.
class SymmetricSignMatrix {
public:
    SymmetricSignMatrix(std::size_t n, std::vector<std::uint64_t> words);
    /// Requires triangle_size(n) <= 64; bit t of `index` is triangle entry t.
    static SymmetricSignMatrix from_index(std::size_t n, std::uint64_t index);
    /// Throws unless `rows` is square, symmetric and +-1 valued.
    static SymmetricSignMatrix from_rows(const std::vector<std::vector<int>>& rows);

    static constexpr std::size_t triangle_size(std::size_t n) noexcept { return n * (n + 1) / 2; }

    std::size_t size() const noexcept { return n_; }
    int operator()(std::size_t i, std::size_t j) const noexcept;
    std::span<const std::uint64_t> words() const noexcept { return words_; }
    /// Dense row-major copy.
    std::vector<int> dense() const;
    SymmetricSignMatrix negated() const;

    friend bool operator==(const SymmetricSignMatrix&, const SymmetricSignMatrix&) = default;

private:
    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

/// Index of (i, j), i <= j, in the row-major upper triangle.
constexpr std::size_t triangle_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
    return i * n - i * (i - 1) / 2 + (j - i);
}

/// Counter-based generator: the matrix for (seed, index) depends on nothing else.
SymmetricSignMatrix random_sign_matrix(std::size_t n, std::uint64_t seed, std::uint64_t index);
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t word) noexcept;

/// Exact integer determinant by fraction-free (Bareiss) elimination.
/// Uses 128-bit integers while the Hadamard bound allows, GMP beyond.
mpz_class det_exact(const SymmetricSignMatrix& m);
/// Bareiss over GMP integers for an arbitrary dense integer matrix.
mpz_class bareiss_determinant(std::vector<mpz_class> a, std::size_t n);

std::size_t rank_mod_p(const SymmetricSignMatrix& m, const PrimeModulus& p);
std::size_t rank_mod_p(std::span<const std::int64_t> dense, std::size_t n, const PrimeModulus& p);

enum class SingularityRegime {
    hadamard_modular,  ///< det mod (2^61 - 1), exact since |det| <= n^{n/2} < 2^61 - 1
    bareiss,           ///< exact Bareiss determinant
    multi_prime,       ///< rank over five random ~2^60 primes; one-sided error
};

std::string_view to_string(SingularityRegime r) noexcept;

/// Largest n with n^{n/2} < 2^61 - 1.
inline constexpr std::size_t kHadamardModularMaxN = 25;

/// det(M) == 0, exact. Dense entries in {-1, +1}, row-major, n <= kHadamardModularMaxN.
bool singular_hadamard_modular(const std::int8_t* dense, std::size_t n) noexcept;

/// Largest n for which 64-bit Bareiss on a +-1 matrix cannot overflow: every
/// intermediate is a minor, so products stay below n^n < 2^63.
inline constexpr std::size_t kSmallBareissMaxN = 15;

/// det(M) == 0 by 64-bit Bareiss. Dense entries in {-1, +1}, n <= kSmallBareissMaxN.
bool singular_small_bareiss(const std::int8_t* dense, std::size_t n) noexcept;

struct SingularityVerdict {
    bool singular = false;
    SingularityRegime regime = SingularityRegime::hadamard_modular;
};

/// Exact route for a dense +-1 matrix with n <= 24: 64-bit Bareiss up to n = 15,
/// elimination modulo 2^61 - 1 beyond.
SingularityVerdict singular_dense(const std::int8_t* dense, std::size_t n) noexcept;

/// Exact for n <= 24; above that, rank deficiency modulo five primes derived from seed.
SingularityVerdict decide_singular(const SymmetricSignMatrix& m, std::uint64_t seed);

}  // namespace loforge
