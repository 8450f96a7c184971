#pragma once

// The lazy signed walk X_mu(v) = eps_1 v_1 + ... + eps_n v_n over Z_p, where
// P(eps = +1) = P(eps = -1) = mu/2 and P(eps = 0) = 1 - mu.
//
// WalkDistribution is the single source of truth: rho() and neighbourhood()
// are read off it, never recomputed through a second formula.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "loforge/field.hpp"

namespace loforge {

using IndexSet = std::vector<std::size_t>;

enum class Arithmetic { exact, floating };

std::string_view to_string(Arithmetic mode) noexcept;
Arithmetic parse_arithmetic(std::string_view text);

/// exact when p*n <= 1e7, floating otherwise.
Arithmetic default_arithmetic(std::uint64_t p, std::size_t n) noexcept;

class WalkParams {
public:
    /// mu must lie in (0, 1]; exact mode additionally needs den(mu) <= 2^16.
    explicit WalkParams(mpq_class mu, Arithmetic mode = Arithmetic::exact);

    const mpq_class& mu() const noexcept { return mu_; }
    double mu_value() const noexcept { return mu_.get_d(); }
    Arithmetic mode() const noexcept { return mode_; }
    bool exact() const noexcept { return mode_ == Arithmetic::exact; }

    WalkParams with_mode(Arithmetic mode) const { return WalkParams(mu_, mode); }
    WalkParams with_mu(const mpq_class& mu) const { return WalkParams(mu, mode_); }

    /// One exact step with mu = a/b multiplies the denominator by 2b and
    /// weighs (stay, left, right) as (2(b - a), a, a).
    unsigned long stay_weight() const noexcept { return stay_; }
    unsigned long move_weight() const noexcept { return move_; }
    unsigned long scale() const noexcept { return scale_; }

    /// 1 - mu/2, the per-step contraction used by the greedy process.
    mpq_class contraction() const { return 1 - mu_ / 2; }

private:
    mpq_class mu_;
    Arithmetic mode_;
    unsigned long stay_ = 0;
    unsigned long move_ = 0;
    unsigned long scale_ = 0;
};

/// A probability that is either an exact rational or a double.
/// Mixed comparisons fall back to double.
class Probability {
public:
    Probability(mpq_class q) : exact_(std::move(q)), is_exact_(true) {}  // NOLINT(implicit)
    Probability(double x) : value_(x), is_exact_(false) {}               // NOLINT(implicit)

    bool is_exact() const noexcept { return is_exact_; }
    const mpq_class& exact() const;
    double value() const { return is_exact_ ? exact_.get_d() : value_; }
    long double long_value() const;
    std::string str() const;

    Probability operator*(const mpq_class& factor) const;

    friend bool operator==(const Probability& a, const Probability& b);
    friend std::partial_ordering operator<=>(const Probability& a, const Probability& b);

private:
    mpq_class exact_;
    double value_ = 0.0;
    bool is_exact_;
};

/// A finite vector over Z_p with its support size cached.
class ZpVector {
public:
    ZpVector(PrimeModulus p, std::vector<Residue> entries);
    static ZpVector from_signed(PrimeModulus p, std::span<const std::int64_t> values);

    const PrimeModulus& modulus() const noexcept { return p_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t support() const noexcept { return support_; }
    bool is_zero() const noexcept { return support_ == 0; }
    std::span<const Residue> entries() const noexcept { return entries_; }
    Residue operator[](std::size_t i) const { return entries_[i]; }

    ZpVector concat(const ZpVector& other) const;
    /// k concatenated copies; k >= 1.
    ZpVector power(std::size_t k) const;
    /// (v_i) for i in indices, in the order given. Indices are 0-based.
    ZpVector restrict(std::span<const std::size_t> indices) const;

    friend bool operator==(const ZpVector&, const ZpVector&) = default;

private:
    PrimeModulus p_;
    std::vector<Residue> entries_;
    std::size_t support_ = 0;
};

/// The law of X_mu(v) on Z_p.
class WalkDistribution {
public:
    static WalkDistribution point_mass(PrimeModulus p, WalkParams params);
    /// Rebuilds a distribution from explicit probabilities (deserialization).
    static WalkDistribution from_exact(PrimeModulus p, WalkParams params, std::size_t length,
                                       std::span<const mpq_class> probabilities);
    static WalkDistribution from_values(PrimeModulus p, WalkParams params, std::size_t length,
                                        std::vector<double> probabilities);

    /// Law after one more increment eps * step.
    WalkDistribution extended(Residue step) const;
    /// P(X + eps * step = x), without materializing the extension.
    Probability extended_at(Residue step, Residue x) const;

    const PrimeModulus& modulus() const noexcept { return p_; }
    const WalkParams& params() const noexcept { return params_; }
    bool is_exact() const noexcept { return params_.exact(); }
    std::size_t length() const noexcept { return length_; }

    Probability at(Residue x) const;
    double value_at(Residue x) const;
    std::vector<Probability> probabilities() const;

    /// Exact representation: P(x) = numerators()[x] / denominator().
    const std::vector<mpz_class>& numerators() const;
    const mpz_class& denominator() const;
    const std::vector<double>& values() const;

    Probability max() const;
    std::vector<Residue> argmax() const;
    bool symmetric() const;
    bool normalized() const;

    friend bool operator==(const WalkDistribution& a, const WalkDistribution& b);

private:
    WalkDistribution(PrimeModulus p, WalkParams params) : p_(p), params_(std::move(params)) {}

    PrimeModulus p_;
    WalkParams params_;
    std::size_t length_ = 0;
    std::vector<mpz_class> numer_;
    mpz_class denom_{1};
    std::vector<double> values_;
};

/// Exact law of X_mu(v) by n three-point convolution steps, O(n p).
WalkDistribution distribution(const ZpVector& v, const WalkParams& params);

/// rho_mu(v) = max_x P(X_mu(v) = x). For mu <= 1/2 the maximum is checked to
/// sit at 0; a failure throws std::logic_error.
Probability rho(const ZpVector& v, const WalkParams& params);
Probability rho_of(const WalkDistribution& dist);

/// {x : P(X = x) > P(X = 0) / 2}, strict, no epsilon in float mode. Sorted.
std::vector<Residue> neighbourhood(const ZpVector& w, const WalkParams& params);
std::vector<Residue> neighbourhood_of(const WalkDistribution& dist);

/// f_{mu,v}(xi) = prod_i ((1 - mu) + mu cos(2 pi v_i xi / p)). Float mode only.
double fourier_eval(const ZpVector& v, const WalkParams& params, Residue xi);

/// (1/p) sum_xi f_{mu,v}(xi), with compensated summation.
double rho_via_fourier(const ZpVector& v, const WalkParams& params);

/// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace loforge
