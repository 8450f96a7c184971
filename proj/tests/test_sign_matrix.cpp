#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "loforge/sign_matrix.hpp"
#include "oracle.hpp"

using namespace loforge;

namespace {

std::vector<std::vector<int>> rows_of(const SymmetricSignMatrix& m) {
    std::vector<std::vector<int>> rows(m.size(), std::vector<int>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) rows[i][j] = m(i, j);
    }
    return rows;
}

std::vector<std::int8_t> dense8(const SymmetricSignMatrix& m) {
    const auto d = m.dense();
    return {d.begin(), d.end()};
}

}  // namespace

TEST_CASE("triangle indexing is row-major over the upper triangle") {
    const std::size_t n = 5;
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) CHECK(triangle_index(n, i, j) == t++);
    }
    CHECK(t == SymmetricSignMatrix::triangle_size(n));
}

TEST_CASE("from_index, symmetry and negation") {
    const auto m = SymmetricSignMatrix::from_index(3, 0b000001);
    CHECK(m(0, 0) == -1);
    CHECK(m(1, 1) == 1);
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
        const auto a = SymmetricSignMatrix::from_index(3, idx);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == a(j, i));
        }
        CHECK(SymmetricSignMatrix::from_rows(rows_of(a)) == a);
        CHECK(a.negated().negated() == a);
    }
    CHECK_THROWS(SymmetricSignMatrix::from_rows({{1, 1}, {-1, 1}}));
    CHECK_THROWS(SymmetricSignMatrix::from_rows({{1, 0}, {0, 1}}));
    CHECK_THROWS(SymmetricSignMatrix::from_index(11, 0));
}

TEST_CASE("determinant matches cofactor expansion for n <= 6") {
    std::mt19937_64 rng(67);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int t = 0; t < 300; ++t) {
            const auto m = random_sign_matrix(n, rng(), t);
            CHECK(det_exact(m) == mpz_class(static_cast<long>(oracle::cofactor_det(rows_of(m)))));
        }
    }
}

TEST_CASE("det of -M is (-1)^n det M") {
    for (std::size_t n = 1; n <= 9; ++n) {
        const auto m = random_sign_matrix(n, 5, n);
        const mpz_class sign = n % 2 ? -1 : 1;
        CHECK(det_exact(m.negated()) == sign * det_exact(m));
    }
}

TEST_CASE("128-bit and GMP Bareiss agree across the switch-over") {
    for (std::size_t n : {20u, 24u, 25u, 30u}) {
        for (std::uint64_t idx = 0; idx < 5; ++idx) {
            const auto m = random_sign_matrix(n, 71, idx);
            const auto d = m.dense();
            std::vector<mpz_class> big(d.begin(), d.end());
            CHECK(det_exact(m) == bareiss_determinant(big, n));
        }
    }
}

TEST_CASE("every 2x2 and 3x3 case: singular iff det = 0 iff rank deficient") {
    const PrimeModulus big((std::uint64_t{1} << 61) - 1);
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::uint64_t total = std::uint64_t{1} << SymmetricSignMatrix::triangle_size(n);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const auto m = SymmetricSignMatrix::from_index(n, idx);
            const bool zero = det_exact(m) == 0;
            CHECK(singular_hadamard_modular(dense8(m).data(), n) == zero);
            CHECK(singular_small_bareiss(dense8(m).data(), n) == zero);
            CHECK((rank_mod_p(m, big) < n) == zero);
        }
    }
}

TEST_CASE("fast singularity tests agree with GMP Bareiss on 10^5 random matrices") {
    std::uint64_t disagreements = 0;
    std::uint64_t singular = 0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const std::size_t n = 1 + i % 15;
        const auto m = random_sign_matrix(n, 73, i);
        const auto d = m.dense();
        const bool zero = bareiss_determinant(std::vector<mpz_class>(d.begin(), d.end()), n) == 0;
        singular += zero;
        if (singular_hadamard_modular(dense8(m).data(), n) != zero) ++disagreements;
        if (singular_small_bareiss(dense8(m).data(), n) != zero) ++disagreements;
    }
    CHECK(disagreements == 0);
    CHECK(singular > 0);
}

TEST_CASE("64-bit Bareiss at its size limit on structured singular inputs") {
    // Rows 0 and 1 are made equal: singular at every size.
    for (std::size_t n = 2; n <= kSmallBareissMaxN; ++n) {
        for (std::uint64_t idx = 0; idx < 50; ++idx) {
            auto d = random_sign_matrix(n, 83, idx).dense();
            std::vector<std::vector<int>> rows(n, std::vector<int>(n));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) rows[i][j] = d[i * n + j];
            }
            for (std::size_t j = 0; j < n; ++j) rows[1][j] = rows[0][j];
            for (std::size_t i = 0; i < n; ++i) rows[i][1] = rows[i][0];
            const auto m = SymmetricSignMatrix::from_rows(rows);
            CHECK(singular_small_bareiss(dense8(m).data(), n));
        }
    }
}

TEST_CASE("decide_singular regimes") {
    CHECK(decide_singular(random_sign_matrix(8, 1, 0), 1).regime == SingularityRegime::bareiss);
    const auto mid = random_sign_matrix(20, 1, 0);
    const auto mid_verdict = decide_singular(mid, 1);
    CHECK(mid_verdict.regime == SingularityRegime::hadamard_modular);
    CHECK(mid_verdict.singular == (det_exact(mid) == 0));
    // Two equal rows force singularity at any size.
    std::vector<std::vector<int>> rows(30, std::vector<int>(30, 1));
    const auto ones = SymmetricSignMatrix::from_rows(rows);
    const auto v = decide_singular(ones, 9);
    CHECK(v.regime == SingularityRegime::multi_prime);
    CHECK(v.singular);
    // A random 30x30 matrix is non-singular with overwhelming probability; the
    // multi-prime test must agree with Bareiss whenever det != 0.
    for (std::uint64_t idx = 0; idx < 5; ++idx) {
        const auto m = random_sign_matrix(30, 77, idx);
        CHECK(decide_singular(m, 3).singular == (det_exact(m) == 0));
    }
}

TEST_CASE("counter-based generator is a pure function of (seed, index)") {
    CHECK(random_sign_matrix(10, 1, 2) == random_sign_matrix(10, 1, 2));
    CHECK_FALSE(random_sign_matrix(10, 1, 2) == random_sign_matrix(10, 1, 3));
    CHECK_FALSE(random_sign_matrix(10, 1, 2) == random_sign_matrix(10, 2, 2));
    CHECK(counter_hash(5, 6, 7) == counter_hash(5, 6, 7));
}

TEST_CASE("random entries are balanced") {
    std::uint64_t minus = 0;
    std::uint64_t total = 0;
    for (std::uint64_t idx = 0; idx < 2000; ++idx) {
        const auto m = random_sign_matrix(10, 79, idx);
        for (std::size_t i = 0; i < 10; ++i) {
            for (std::size_t j = i; j < 10; ++j) {
                minus += m(i, j) == -1;
                ++total;
            }
        }
    }
    const double frac = double(minus) / double(total);
    CHECK(frac > 0.49);
    CHECK(frac < 0.51);
}
