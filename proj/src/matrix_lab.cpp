#include "loforge/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "loforge/parallel.hpp"
#include "loforge/rational.hpp"

namespace loforge {

namespace {

struct TrianglePos {
    std::uint8_t i;
    std::uint8_t j;
};

std::vector<TrianglePos> triangle_positions(std::size_t n) {
    std::vector<TrianglePos> pos;
    pos.reserve(SymmetricSignMatrix::triangle_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) pos.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)});
    }
    return pos;
}

// Decodes up to 64 triangle bits into a dense +-1 matrix.
inline void fill_dense(std::uint64_t bits, std::size_t n, const std::vector<TrianglePos>& pos, std::int8_t* out) {
    for (std::size_t t = 0; t < pos.size(); ++t) {
        const std::int8_t s = (bits >> t & 1) ? -1 : 1;
        out[pos[t].i * n + pos[t].j] = s;
        out[pos[t].j * n + pos[t].i] = s;
    }
}

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= base;
    return r;
}

void require_feasible(std::size_t n, std::uint64_t p, const char* what) {
    const long double cost = exhaustive_cost(n, p);
    if (cost > kExhaustiveBudget) {
        std::ostringstream os;
        os << what << ": exhaustive pass over p^n * 2^{n(n+1)/2} = " << static_cast<double>(cost)
           << " cases exceeds the budget of " << static_cast<double>(kExhaustiveBudget);
        throw InfeasibleRequest(os.str(), cost);
    }
}

// Tally of M v over all symmetric sign matrices, indexed by base-p digits of M v.
std::vector<std::uint32_t> image_counts(const ZpVector& v) {
    const std::size_t n = v.size();
    const std::uint64_t p = v.modulus().value();
    const std::size_t tri = SymmetricSignMatrix::triangle_size(n);
    if (tri > 32) throw std::invalid_argument("matrix enumeration limited to n(n+1)/2 <= 32");
    const auto pos = triangle_positions(n);
    std::vector<std::uint32_t> counts(ipow(p, n), 0);
    std::vector<std::uint64_t> plus(n);
    std::vector<std::uint64_t> minus(n);
    for (std::size_t j = 0; j < n; ++j) {
        plus[j] = v[j];
        minus[j] = v[j] == 0 ? 0 : p - v[j];
    }
    std::int8_t dense[64];
    const std::uint64_t matrices = std::uint64_t{1} << tri;
    for (std::uint64_t idx = 0; idx < matrices; ++idx) {
        fill_dense(idx, n, pos, dense);
        std::uint64_t key = 0;
        for (std::size_t i = n; i-- > 0;) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < n; ++j) s += dense[i * n + j] > 0 ? plus[j] : minus[j];
            key = key * p + s % p;
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Census and Monte Carlo

CensusResult singular_census(std::size_t n, unsigned workers) {
    if (n == 0) throw std::invalid_argument("census needs n >= 1");
    if (n > kCensusMaxN) {
        throw InfeasibleRequest("census is exhaustive and limited to n <= 7; use montecarlo for n = " + std::to_string(n),
                                std::ldexp(1.0L, static_cast<int>(SymmetricSignMatrix::triangle_size(n))));
    }
    const std::size_t tri = SymmetricSignMatrix::triangle_size(n);
    const std::uint64_t total = std::uint64_t{1} << tri;
    const auto pos = triangle_positions(n);
    std::vector<std::uint64_t> per_chunk(256, 0);
    parallel_chunks(total, workers, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
        std::int8_t dense[kCensusMaxN * kCensusMaxN];
        std::uint64_t count = 0;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            fill_dense(idx, n, pos, dense);
            if (singular_small_bareiss(dense, n)) ++count;
        }
        per_chunk[chunk] = count;
    });
    CensusResult out;
    out.n = n;
    out.total = to_mpz(total);
    for (auto c : per_chunk) out.singular_count += c;
    out.probability = mpq_class(to_mpz(out.singular_count), out.total);
    out.probability.canonicalize();
    return out;
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MonteCarloEstimate montecarlo_singularity(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n == 0) throw std::invalid_argument("montecarlo needs n >= 1");
    if (trials == 0) throw std::invalid_argument("montecarlo needs trials >= 1");
    const std::size_t tri = SymmetricSignMatrix::triangle_size(n);
    const auto pos = tri <= 64 ? triangle_positions(n) : std::vector<TrianglePos>{};
    std::vector<std::uint64_t> per_chunk(256, 0);
    parallel_chunks(trials, workers, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t count = 0;
        std::int8_t dense[kHadamardModularMaxN * kHadamardModularMaxN];
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (tri <= 64) {
                fill_dense(counter_hash(seed, i, 0), n, pos, dense);
                if (singular_dense(dense, n).singular) ++count;
            } else if (decide_singular(random_sign_matrix(n, seed, i), seed).singular) {
                ++count;
            }
        }
        per_chunk[chunk] = count;
    });
    MonteCarloEstimate out;
    out.n = n;
    out.trials = trials;
    out.seed = seed;
    for (auto c : per_chunk) out.hits += c;
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
    std::tie(out.ci_lo, out.ci_hi) = wilson_interval(out.hits, trials);
    out.regime = n <= kSmallBareissMaxN ? SingularityRegime::bareiss
                 : n <= 24                ? SingularityRegime::hadamard_modular
                                          : SingularityRegime::multi_prime;
    return out;
}

// ---------------------------------------------------------------------------
// Exact union-bound machinery

ZpVector vector_from_index(const PrimeModulus& p, std::size_t n, std::uint64_t index) {
    std::vector<Residue> entries(n);
    for (std::size_t i = 0; i < n; ++i) {
        entries[i] = index % p.value();
        index /= p.value();
    }
    return ZpVector(p, std::move(entries));
}

mpq_class max_image_probability(const ZpVector& v) {
    if (v.empty()) return mpq_class(1);
    const auto counts = image_counts(v);
    const std::uint32_t top = *std::max_element(counts.begin(), counts.end());
    mpq_class q(to_mpz(top), to_mpz(std::uint64_t{1} << SymmetricSignMatrix::triangle_size(v.size())));
    q.canonicalize();
    return q;
}

std::string_view to_string(Membership m) noexcept { return m == Membership::rho_1 ? "rho_1" : "rho_mu"; }

long double exhaustive_cost(std::size_t n, std::uint64_t p) {
    return std::pow(static_cast<long double>(p), static_cast<long double>(n)) *
           std::ldexp(1.0L, static_cast<int>(SymmetricSignMatrix::triangle_size(n)));
}

ExactQResult exact_Q(std::size_t n, const PrimeModulus& p, const WalkParams& params, const mpq_class& beta,
                     Membership membership, unsigned workers) {
    if (n == 0) throw std::invalid_argument("exact_Q needs n >= 1");
    require_feasible(n, p.value(), "exact_Q");
    const WalkParams member_params = membership == Membership::rho_1 ? WalkParams(mpq_class(1)) : params.with_mode(Arithmetic::exact);
    const std::uint64_t count = ipow(p.value(), n);

    std::vector<std::vector<std::pair<std::uint64_t, mpq_class>>> per_chunk(256);
    parallel_chunks(count - 1, workers, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t idx = lo + 1; idx < hi + 1; ++idx) {
            const ZpVector v = vector_from_index(p, n, idx);
            if (rho(v, member_params) < Probability(beta)) continue;
            per_chunk[chunk].emplace_back(idx, max_image_probability(v));
        }
    });

    ExactQResult out;
    out.n = n;
    out.p = p.value();
    out.mu = params.mu();
    out.beta = beta;
    out.membership = membership;
    out.Q = 0;
    for (const auto& chunk : per_chunk) {
        for (const auto& [idx, term] : chunk) {
            out.V.push_back(vector_from_index(p, n, idx));
            out.Q += term;
        }
    }
    out.Q.canonicalize();
    return out;
}

mpq_class kernel_event_probability(std::size_t n, std::span<const ZpVector> V) {
    const std::size_t tri = SymmetricSignMatrix::triangle_size(n);
    if (tri > 32) throw std::invalid_argument("matrix enumeration limited to n(n+1)/2 <= 32");
    const auto pos = triangle_positions(n);
    const std::uint64_t matrices = std::uint64_t{1} << tri;
    std::uint64_t hits = 0;
    std::int8_t dense[64];
    for (std::uint64_t idx = 0; idx < matrices; ++idx) {
        fill_dense(idx, n, pos, dense);
        for (const auto& v : V) {
            const auto& p = v.modulus();
            bool zero = true;
            for (std::size_t i = 0; i < n && zero; ++i) {
                Residue s = 0;
                for (std::size_t j = 0; j < n; ++j) s = dense[i * n + j] > 0 ? p.add(s, v[j]) : p.sub(s, v[j]);
                zero = s == 0;
            }
            if (zero) {
                ++hits;
                break;
            }
        }
    }
    mpq_class q(to_mpz(hits), to_mpz(matrices));
    q.canonicalize();
    return q;
}

FiberCensus fiber_census(std::size_t n, const PrimeModulus& p, const WalkParams& params, std::size_t k,
                         const mpq_class& beta, unsigned workers) {
    require_feasible(n, p.value(), "fiber_census");
    const std::uint64_t count = ipow(p.value(), n);
    const WalkParams exact_params = params.with_mode(Arithmetic::exact);

    struct Entry {
        std::string key;
        Signature sig;
        std::string failure;
    };
    std::vector<std::vector<Entry>> per_chunk(256);
    parallel_chunks(count - 1, workers, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t idx = lo + 1; idx < hi + 1; ++idx) {
            const ZpVector v = vector_from_index(p, n, idx);
            auto res = signature(v, exact_params, k);
            std::string failure = res.invariant_failure;
            if (rho(v, exact_params) >= Probability(beta) && rho(res.sig.w1, exact_params) < Probability(beta)) {
                failure += "rho(w1) below beta for v in V; ";
            }
            per_chunk[chunk].push_back({res.sig.key(), std::move(res.sig), std::move(failure)});
        }
    });

    std::map<std::string, FiberRecord> fibers;
    FiberCensus out;
    out.n = n;
    out.p = p.value();
    out.k = k;
    for (auto& chunk : per_chunk) {
        for (auto& e : chunk) {
            ++out.vectors;
            auto [it, inserted] = fibers.try_emplace(e.key, FiberRecord{e.sig, 0, mpq_class(1), mpq_class(1), 0, false, {}});
            ++it->second.size;
            it->second.gate_failure += e.failure;
        }
    }

    out.all_hold = true;
    std::uint64_t covered = 0;
    for (auto& [key, rec] : fibers) {
        const auto& s = rec.sig;
        rec.rho_w1 = rho(s.w1, exact_params);
        rec.rho_w2 = rho(s.w2, exact_params);
        const mpq_class base1 = 2 / rec.rho_w1.exact();
        const mpq_class base2 = 2 / rec.rho_w2.exact();
        rec.bound = pow(base1, n - s.S.size()) * pow(base2, s.S.size() - s.Tprime.size());
        rec.holds = mpq_class(to_mpz(rec.size)) <= rec.bound && rec.gate_failure.empty();
        out.all_hold = out.all_hold && rec.holds;
        covered += rec.size;
        out.fibers.push_back(rec);
    }
    out.partition_ok = covered == count - 1;
    return out;
}

std::vector<InequalityReport> verify_row_reveal_bound(const ZpVector& v, const Signature& sig, const WalkParams& params) {
    const std::size_t n = v.size();
    if (n > 5) throw InfeasibleRequest("row-reveal check enumerates 2^{n(n+1)/2} matrices; limited to n <= 5",
                                       std::ldexp(1.0L, static_cast<int>(SymmetricSignMatrix::triangle_size(n))));
    const mpq_class lhs = max_image_probability(v);
    const ZpVector vT = v.restrict(sig.Tprime);
    const ZpVector vS = v.restrict(sig.S);
    const std::size_t e1 = sig.S.size() - sig.Tprime.size();
    const std::size_t e2 = n - sig.S.size();
    const WalkParams one(mpq_class(1));
    const WalkParams mu_params = params.with_mode(Arithmetic::exact);
    const mpq_class rhs1 = pow(rho(vT, one).exact(), e1) * pow(rho(vS, one).exact(), e2);
    const mpq_class rhs_mu = pow(rho(vT, mu_params).exact(), e1) * pow(rho(vS, mu_params).exact(), e2);

    std::ostringstream inst;
    inst << "p=" << v.modulus().value() << " v=(";
    for (std::size_t i = 0; i < n; ++i) inst << (i ? "," : "") << v[i];
    inst << ") " << sig.key();
    std::vector<InequalityReport> out;
    out.push_back(compare_le("row_reveal_rho1", inst.str(), lhs, rhs1));
    out.push_back(compare_le("row_reveal_rho_mu", inst.str(), lhs, rhs_mu));
    out.push_back(compare_le("row_reveal_mu_monotone", inst.str(), rhs1, rhs_mu));
    return out;
}

// ---------------------------------------------------------------------------
// Comparison table

double conjecture_curve(std::size_t n) {
    const double nn = static_cast<double>(n);
    return nn * nn * std::ldexp(1.0, 1 - static_cast<int>(n));
}

double theorem_bound_curve(std::size_t n) {
    const double nn = static_cast<double>(n);
    return std::exp(-std::ldexp(1.0, -13) * std::sqrt(nn * std::log(nn)));
}

std::vector<CompareRow> conjecture_compare(std::size_t n_lo, std::size_t n_hi, std::uint64_t trials, std::uint64_t seed,
                                           unsigned workers, std::size_t census_max_n) {
    if (n_lo == 0 || n_hi < n_lo) throw std::invalid_argument("n range must satisfy 1 <= lo <= hi");
    std::vector<CompareRow> rows;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        CompareRow row;
        row.n = n;
        if (n <= std::min(census_max_n, kCensusMaxN)) {
            row.estimate = singular_census(n, workers).probability.get_d();
            row.source = "census";
        } else {
            row.estimate = montecarlo_singularity(n, trials, seed, workers).estimate;
            row.source = "montecarlo";
        }
        row.conjecture = conjecture_curve(n);
        row.theorem_bound = theorem_bound_curve(n);
        row.ratio_conjecture = row.estimate / row.conjecture;
        row.ratio_theorem = row.estimate / row.theorem_bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace loforge
