#pragma once

// Greedy short-subvector selection, its k-fold iteration, the rough inverse
// Littlewood-Offord certificate and the signature map used to partition the
// union bound.
//
// All index sets are 0-based positions into the input vector.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "loforge/walk.hpp"

namespace loforge {

/// How the integer length budget d is derived.
enum class DBudget {
    from_rho,  ///< d = ceil((2/mu) log(1/rho_mu(v)))
    from_p,    ///< d = ceil((2/mu) log p), the union-bound convention
};

std::string_view to_string(DBudget budget) noexcept;

std::size_t length_budget(const Probability& rho_v, const WalkParams& params, std::uint64_t p,
                          DBudget budget = DBudget::from_rho);

struct GreedyDecomposition {
    IndexSet T;                          ///< selection order
    std::vector<Probability> rho_trace;  ///< rho_mu(v_{T_t}) for t = 1..|T|
    Probability terminal_rho{mpq_class(1)};

    IndexSet sorted() const;
};

/// Seeds with the first non-zero entry, then repeatedly appends the smallest
/// index i with rho_mu(v_T v_i) <= (1 - mu/2) rho_mu(v_T). mu must lie in (0, 1/4].
GreedyDecomposition greedy_decompose(const ZpVector& v, const WalkParams& params);

/// Post-hoc audit of a greedy run: both forms of the stopping rule, the trace
/// ratios and the length bound. Empty string when everything checks out.
std::string audit_greedy(const ZpVector& v, const WalkParams& params, const GreedyDecomposition& g);

struct IteratedDecomposition {
    std::vector<IndexSet> blocks;  ///< T_1..T_k, each sorted
    IndexSet S;                    ///< union of blocks, sorted
    IndexSet T;                    ///< the block maximizing rho_mu(v_{T_j}^k)
    std::size_t selected = 0;      ///< index j of T in blocks
    std::size_t k = 0;
    std::size_t d = 0;
    DBudget budget = DBudget::from_rho;
    bool hypothesis_met = false;   ///< k*d <= n
    Probability rho_S{mpq_class(1)};
    Probability rho_T_power{mpq_class(1)};
    bool inequality_holds = false;  ///< rho_mu(v_S) <= rho_mu(v_T^k)

    std::string outcome() const;
};

/// Runs the greedy process on v_{A_j}, A_1 = [n], A_{j+1} = A_j \ T_j, k times.
/// The procedure always runs; hypothesis_met records whether k*d <= n.
IteratedDecomposition iterated_decompose(const ZpVector& v, const WalkParams& params, std::size_t k,
                                         DBudget budget = DBudget::from_rho);

struct InverseLOCertificate {
    enum class Status { certified, violated, vacuous };

    Status status = Status::vacuous;
    std::string vacuous_reason;
    std::size_t k = 0;
    std::size_t d = 0;
    DBudget budget = DBudget::from_rho;
    Probability rho_v{mpq_class(1)};
    IndexSet T;
    IndexSet S;
    std::vector<Residue> neighbourhood;
    IndexSet exceptions;
    long double bound_rhs = 0.0L;  ///< 256 k^{-1/5} / rho_mu(v)
    bool holds = false;
};

std::string_view to_string(InverseLOCertificate::Status status) noexcept;

/// Checks |v| >= k d and rho_mu(v) >= 2/p; when they hold, builds T from the
/// iterated decomposition and checks the exception count and |N_mu(v_T)|.
InverseLOCertificate certify_inverse_lo(const ZpVector& v, const WalkParams& params, std::size_t k,
                                        DBudget budget = DBudget::from_rho);

struct Signature {
    IndexSet S;
    IndexSet T;
    IndexSet Tprime;
    ZpVector w1;  ///< v_T
    ZpVector w2;  ///< v_{T'}

    friend bool operator==(const Signature&, const Signature&) = default;
    std::string key() const;
};

struct SignatureResult {
    Signature sig;
    IteratedDecomposition iterated;
    std::size_t d = 0;
    bool hypothesis_met = false;
    std::string invariant_failure;  ///< empty when every counting gate holds
};

/// f(v) = (S, T, T', v_T, v_{T'}) where T' is the greedy set of v_S.
SignatureResult signature(const ZpVector& v, const WalkParams& params, std::size_t k,
                          DBudget budget = DBudget::from_rho);

}  // namespace loforge
