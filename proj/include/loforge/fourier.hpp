#pragma once

// Executable checks for the Fourier-side inequalities behind the tensor-power
// decrement of the concentration function, plus the structural laws of rho_mu.
//
// Notation: G = f_{mu,v}, F = f_{mu,v^k} = G^k, g = E_xi G = rho_mu(v).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "loforge/report.hpp"
#include "loforge/walk.hpp"

namespace loforge {

/// mu ||x/p||^2 <= -log(1 - mu + mu c_p(x)) <= 32 mu ||x/p||^2 at each x.
/// Two reports per residue (lower, upper). mu in (0, 1/4].
std::vector<InequalityReport> verify_cos_log_bounds(const PrimeModulus& p, const mpq_class& mu,
                                                    std::span<const Residue> xs);

/// a <= -log(1-a) <= 3a/2 on a grid over [0, 1/4] and
/// x^2 <= 1 - cos(2 pi x) <= 20 x^2 on a grid over [-1/2, 1/2].
std::vector<InequalityReport> verify_elementary_bounds(std::size_t grid_points = 10000);

/// G(xi)^k for every xi in Z_p. Works in log space once len(v) * k > 1000.
std::vector<double> fourier_profile(const ZpVector& v, double mu, std::size_t k);

/// max(1, floor(sqrt(mu k) / 8)).
std::size_t sumset_summands(double mu, std::size_t k);

struct LevelSetPair {
    std::uint64_t p = 0;
    double alpha = 0.0;
    std::size_t k = 1;
    std::size_t ell = 1;
    std::vector<Residue> A;  ///< {xi : F(xi) > alpha}
    std::vector<Residue> B;  ///< {xi : G(xi) > alpha}
    std::vector<double> F;
    std::vector<double> G;
    double g = 0.0;          ///< E_xi G
};

LevelSetPair level_sets(const ZpVector& v, std::size_t k, const WalkParams& params, double alpha);

struct SumsetInclusion {
    InequalityReport report;                ///< lhs = |ellA \ B|, rhs = 0
    std::optional<Residue> witness;          ///< a sum landing outside B
    std::vector<Residue> witness_summands;
};

/// ell-fold sumset A + ... + A and its containment in B.
SumsetInclusion check_sumset_inclusion(const LevelSetPair& pair);

/// A + B in Z_p, sorted.
std::vector<Residue> sumset(std::span<const Residue> A, std::span<const Residue> B, const PrimeModulus& p);

/// |A + B| >= min(|A| + |B| - 1, p). Throws std::invalid_argument on empty input.
InequalityReport cauchy_davenport_check(std::span<const Residue> A, std::span<const Residue> B, const PrimeModulus& p);

/// rho_mu(v^k) <= (rho_mu(v)^{(k-1)/k} + 8/sqrt(mu k)) rho_mu(v) + 1/p.
InequalityReport verify_tensor_bound(const ZpVector& v, std::size_t k, const WalkParams& params);

/// rho_mu(v^k) <= 64 k^{-1/5} rho_mu(v) + 1/p (first report, decides pass/fail),
/// followed by the (mu k)^{-1/5} and (mu k)^{-1/4} variants. Needs |v| != 0.
std::vector<InequalityReport> verify_amplified_bound(const ZpVector& v, std::size_t k, const WalkParams& params);

/// rho_mu(v) <= rho_mu(v_T) and rho_1(v) <= rho_mu(v_T).
std::vector<InequalityReport> check_monotonicity(const ZpVector& v, std::span<const std::size_t> T,
                                                 const WalkParams& params);
/// rho_1(v) <= rho_mu(v).
InequalityReport check_mu_monotonicity(const ZpVector& v, const WalkParams& params);
/// rho_mu(w_1 ... w_k) <= max_j rho_mu(w_j^k), mu in (0, 1/2).
InequalityReport check_holder(std::span<const ZpVector> blocks, const WalkParams& params);
/// |N_mu(w)| rho_mu(w) <= 2.
InequalityReport check_neighbourhood_size(const ZpVector& w, const WalkParams& params);
/// rho_mu(v) <= 64 / sqrt(mu |v|) + 1/p for v != 0.
InequalityReport check_spread(const ZpVector& v, const WalkParams& params);

/// Runs every structural law on each sample vector. Subsets and block splits
/// are enumerated for short vectors and drawn from `seed` otherwise.
std::vector<InequalityReport> verify_structural_laws(std::span<const ZpVector> sample, const WalkParams& params,
                                                     std::uint64_t seed);

/// Layer-cake check on the range F > g.
struct LevelSetIntegral {
    long double excess_sum = 0.0L;  ///< E_xi[(F - g) 1(F > g)]
    long double quadrature = 0.0L;  ///< int_g^1 |A_t| / p dt over the exact step function
    long double tail_mass = 0.0L;   ///< E_xi[F 1(F > g)]
    long double boundary = 0.0L;    ///< g |A_g| / p, the gap between tail_mass and quadrature
};

LevelSetIntegral level_set_integral(const LevelSetPair& pair);

/// |B_alpha| < p for alpha > g.
bool markov_gate(const LevelSetPair& pair, double alpha);

}  // namespace loforge
