#include "loforge/sign_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "loforge/rational.hpp"

namespace loforge {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mul_m61(std::uint64_t a, std::uint64_t b) noexcept {
    const u128 x = static_cast<u128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) + static_cast<std::uint64_t>(x >> 61);
    r = (r & kMersenne61) + (r >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
}

inline std::uint64_t sub_m61(std::uint64_t a, std::uint64_t b) noexcept {
    return a >= b ? a - b : a + kMersenne61 - b;
}

inline std::uint64_t splitmix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class T>
T bareiss(std::vector<T> a, std::size_t n) {
    T prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r * n + k] == 0) ++r;
            if (r == n) return T(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
            sign = -sign;
        }
        const T pivot = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const T lead = a[i * n + k];
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i * n + j] = (a[i * n + j] * pivot - lead * a[k * n + j]) / prev;
            }
        }
        prev = pivot;
    }
    const T det = a[(n - 1) * n + (n - 1)];
    return sign < 0 ? T(-det) : det;
}

mpz_class from_i128(i128 x) {
    const bool negative = x < 0;
    u128 mag = negative ? static_cast<u128>(-(x + 1)) + 1 : static_cast<u128>(x);
    mpz_class out = to_mpz(static_cast<std::uint64_t>(mag >> 64));
    out <<= 64;
    out += to_mpz(static_cast<std::uint64_t>(mag));
    return negative ? mpz_class(-out) : out;
}

}  // namespace

// ---------------------------------------------------------------------------

SymmetricSignMatrix::SymmetricSignMatrix(std::size_t n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
    if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
    const std::size_t bits = triangle_size(n);
    const std::size_t need = (bits + 63) / 64;
    if (words_.size() != need) throw std::invalid_argument("wrong number of triangle words");
    if (bits % 64 != 0) words_.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
}

SymmetricSignMatrix SymmetricSignMatrix::from_index(std::size_t n, std::uint64_t index) {
    if (triangle_size(n) > 64) throw std::invalid_argument("from_index needs n(n+1)/2 <= 64");
    return SymmetricSignMatrix(n, {index});
}

SymmetricSignMatrix SymmetricSignMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    std::vector<std::uint64_t> words((triangle_size(n) + 63) / 64, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::invalid_argument("matrix is not square");
        for (std::size_t j = 0; j < n; ++j) {
            if (rows[i][j] != 1 && rows[i][j] != -1) throw std::invalid_argument("entries must be +1 or -1");
            if (rows[i][j] != rows[j][i]) throw std::invalid_argument("matrix is not symmetric");
            if (j >= i && rows[i][j] == -1) {
                const std::size_t t = triangle_index(n, i, j);
                words[t / 64] |= std::uint64_t{1} << (t % 64);
            }
        }
    }
    return SymmetricSignMatrix(n, std::move(words));
}

int SymmetricSignMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    const std::size_t t = triangle_index(n_, i, j);
    return (words_[t / 64] >> (t % 64) & 1) ? -1 : 1;
}

std::vector<int> SymmetricSignMatrix::dense() const {
    std::vector<int> out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] = (*this)(i, j);
    }
    return out;
}

SymmetricSignMatrix SymmetricSignMatrix::negated() const {
    std::vector<std::uint64_t> flipped(words_);
    for (auto& w : flipped) w = ~w;
    return SymmetricSignMatrix(n_, std::move(flipped));
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t word) noexcept {
    std::uint64_t h = splitmix(seed ^ 0xD1B54A32D192ED03ULL);
    h = splitmix(h ^ index);
    return splitmix(h ^ (word * 0xA0761D6478BD642FULL));
}

SymmetricSignMatrix random_sign_matrix(std::size_t n, std::uint64_t seed, std::uint64_t index) {
    std::vector<std::uint64_t> words((SymmetricSignMatrix::triangle_size(n) + 63) / 64);
    for (std::size_t w = 0; w < words.size(); ++w) words[w] = counter_hash(seed, index, w);
    return SymmetricSignMatrix(n, std::move(words));
}

mpz_class bareiss_determinant(std::vector<mpz_class> a, std::size_t n) {
    if (a.size() != n * n) throw std::invalid_argument("dense matrix has wrong size");
    if (n == 0) return 1;
    return bareiss<mpz_class>(std::move(a), n);
}

mpz_class det_exact(const SymmetricSignMatrix& m) {
    const std::size_t n = m.size();
    const auto dense = m.dense();
    if (n <= 24) {
        // Every Bareiss intermediate is a minor, bounded by 24^12 < 2^56.
        std::vector<i128> a(dense.begin(), dense.end());
        return from_i128(bareiss<i128>(std::move(a), n));
    }
    std::vector<mpz_class> a;
    a.reserve(dense.size());
    for (int x : dense) a.emplace_back(x);
    return bareiss<mpz_class>(std::move(a), n);
}

std::size_t rank_mod_p(std::span<const std::int64_t> dense, std::size_t n, const PrimeModulus& p) {
    if (dense.size() % n != 0) throw std::invalid_argument("dense matrix has wrong size");
    const std::size_t cols = n;
    const std::size_t rows = dense.size() / n;
    std::vector<Residue> a(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) a[i] = p.reduce(dense[i]);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(a[rank * cols + j], a[pivot * cols + j]);
        const Residue inv = p.inv(a[rank * cols + c]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const Residue f = p.mul(a[i * cols + c], inv);
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                a[i * cols + j] = p.sub(a[i * cols + j], p.mul(f, a[rank * cols + j]));
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_mod_p(const SymmetricSignMatrix& m, const PrimeModulus& p) {
    const auto dense = m.dense();
    const std::vector<std::int64_t> wide(dense.begin(), dense.end());
    return rank_mod_p(wide, m.size(), p);
}

std::string_view to_string(SingularityRegime r) noexcept {
    switch (r) {
        case SingularityRegime::hadamard_modular: return "hadamard_modular";
        case SingularityRegime::bareiss: return "bareiss";
        case SingularityRegime::multi_prime: return "multi_prime";
    }
    return "unknown";
}

bool singular_hadamard_modular(const std::int8_t* dense, std::size_t n) noexcept {
    // Division-free elimination modulo 2^61 - 1: each row update multiplies by a
    // non-zero pivot, so det is zero mod P iff the eliminated form has a zero pivot.
    std::uint64_t a[kHadamardModularMaxN * kHadamardModularMaxN];
    for (std::size_t i = 0; i < n * n; ++i) a[i] = dense[i] > 0 ? 1 : kMersenne61 - 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t r = k;
        while (r < n && a[r * n + k] == 0) ++r;
        if (r == n) return true;
        if (r != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
        }
        const std::uint64_t pivot = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::uint64_t lead = a[i * n + k];
            if (lead == 0) continue;
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i * n + j] = sub_m61(mul_m61(a[i * n + j], pivot), mul_m61(lead, a[k * n + j]));
            }
        }
    }
    return false;
}

bool singular_small_bareiss(const std::int8_t* dense, std::size_t n) noexcept {
    std::int64_t a[kSmallBareissMaxN * kSmallBareissMaxN];
    for (std::size_t i = 0; i < n * n; ++i) a[i] = dense[i];
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r * n + k] == 0) ++r;
            if (r == n) return true;
            for (std::size_t j = k; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
        }
        const std::int64_t pivot = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::int64_t lead = a[i * n + k];
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] = (a[i * n + j] * pivot - lead * a[k * n + j]) / prev;
        }
        prev = pivot;
    }
    return a[n * n - 1] == 0;
}

SingularityVerdict singular_dense(const std::int8_t* dense, std::size_t n) noexcept {
    if (n <= kSmallBareissMaxN) return {singular_small_bareiss(dense, n), SingularityRegime::bareiss};
    return {singular_hadamard_modular(dense, n), SingularityRegime::hadamard_modular};
}

SingularityVerdict decide_singular(const SymmetricSignMatrix& m, std::uint64_t seed) {
    const std::size_t n = m.size();
    if (n <= 24) {
        std::int8_t dense[kHadamardModularMaxN * kHadamardModularMaxN];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = static_cast<std::int8_t>(m(i, j));
        }
        return singular_dense(dense, n);
    }
    for (std::uint64_t j = 0; j < 5; ++j) {
        const std::uint64_t offset = counter_hash(seed, ~std::uint64_t{0}, j) % (std::uint64_t{1} << 59);
        const PrimeModulus p = find_prime((std::uint64_t{1} << 60) + offset);
        if (rank_mod_p(m, p) == n) return {false, SingularityRegime::multi_prime};
    }
    return {true, SingularityRegime::multi_prime};
}

}  // namespace loforge
