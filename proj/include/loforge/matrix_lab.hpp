#pragma once

// Experiments on uniformly random symmetric +-1 matrices: exhaustive
// singularity censuses, seeded Monte Carlo, and toy-scale exact evaluation of
// the union-bound sum Q_n(beta) together with its partition by signature.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "loforge/inverse_lo.hpp"
#include "loforge/report.hpp"
#include "loforge/sign_matrix.hpp"
#include "loforge/walk.hpp"

namespace loforge {

/// Raised when an exhaustive request exceeds the feasibility gate.
class InfeasibleRequest : public std::runtime_error {
public:
    InfeasibleRequest(const std::string& what, long double cost) : std::runtime_error(what), cost_(cost) {}
    long double cost() const noexcept { return cost_; }

private:
    long double cost_;
};

inline constexpr std::size_t kCensusMaxN = 7;
inline constexpr long double kExhaustiveBudget = 1e9L;

struct CensusResult {
    std::size_t n = 0;
    mpz_class total;
    std::uint64_t singular_count = 0;
    mpq_class probability;
};

/// Counts singular matrices among all 2^{n(n+1)/2} symmetric sign matrices.
/// Refuses n > 7.
CensusResult singular_census(std::size_t n, unsigned workers);

struct MonteCarloEstimate {
    std::size_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    SingularityRegime regime = SingularityRegime::hadamard_modular;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score interval for hits/trials.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kWilsonZ99);

MonteCarloEstimate montecarlo_singularity(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers);

/// Vector with base-p digits of `index`, least significant first.
ZpVector vector_from_index(const PrimeModulus& p, std::size_t n, std::uint64_t index);

/// max_w P(M v = w) over uniform symmetric sign matrices of size len(v), exact.
mpq_class max_image_probability(const ZpVector& v);

enum class Membership { rho_1, rho_mu };
std::string_view to_string(Membership m) noexcept;

struct ExactQResult {
    std::size_t n = 0;
    std::uint64_t p = 0;
    mpq_class mu;
    mpq_class beta;
    Membership membership = Membership::rho_1;
    std::vector<ZpVector> V;
    mpq_class Q;
};

/// p^n * 2^{n(n+1)/2}; the work of one exhaustive pass.
long double exhaustive_cost(std::size_t n, std::uint64_t p);

/// Q_n(beta) = sum over v != 0 with rho(v) >= beta of max_w P(M v = w).
ExactQResult exact_Q(std::size_t n, const PrimeModulus& p, const WalkParams& params, const mpq_class& beta,
                     Membership membership, unsigned workers);

/// P(exists v in V with M v = 0), by enumerating matrices.
mpq_class kernel_event_probability(std::size_t n, std::span<const ZpVector> V);

struct FiberRecord {
    Signature sig;
    std::uint64_t size = 0;
    Probability rho_w1{mpq_class(1)};
    Probability rho_w2{mpq_class(1)};
    mpq_class bound;  ///< (2/rho(w1))^{n-|S|} (2/rho(w2))^{|S|-|T'|}
    bool holds = false;
    std::string gate_failure;
};

struct FiberCensus {
    std::size_t n = 0;
    std::uint64_t p = 0;
    std::size_t k = 0;
    std::uint64_t vectors = 0;
    std::vector<FiberRecord> fibers;  ///< sorted by signature key
    bool partition_ok = false;
    bool all_hold = false;
};

/// Partitions Z_p^n \ {0} by signature, checks each fiber against its count
/// bound and every signature against its counting gates. Vectors with
/// rho_mu(v) >= beta must also have rho_mu(w1) >= beta.
FiberCensus fiber_census(std::size_t n, const PrimeModulus& p, const WalkParams& params, std::size_t k,
                         const mpq_class& beta, unsigned workers);

/// max_w P(Mv = w) <= rho_1(v_{T'})^{|S|-|T'|} rho_1(v_S)^{n-|S|} <= the same with rho_mu.
/// Three reports: the rho_1 bound, the rho_mu bound, and rho_1-form <= rho_mu-form.
std::vector<InequalityReport> verify_row_reveal_bound(const ZpVector& v, const Signature& sig, const WalkParams& params);

struct CompareRow {
    std::size_t n = 0;
    double estimate = 0.0;
    std::string source;  ///< "census" or "montecarlo"
    double conjecture = 0.0;      ///< n^2 2^{-n+1}
    double theorem_bound = 0.0;   ///< exp(-2^{-13} sqrt(n log n))
    double ratio_conjecture = 0.0;
    double ratio_theorem = 0.0;
};

double conjecture_curve(std::size_t n);
double theorem_bound_curve(std::size_t n);

std::vector<CompareRow> conjecture_compare(std::size_t n_lo, std::size_t n_hi, std::uint64_t trials, std::uint64_t seed,
                                           unsigned workers, std::size_t census_max_n = 6);

}  // namespace loforge
