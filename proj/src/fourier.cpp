#include "loforge/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "loforge/rational.hpp"

namespace loforge {

namespace {

std::string describe(const ZpVector& v) {
    std::ostringstream os;
    os << "p=" << v.modulus().value() << " v=(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

void require_mu_quarter(const mpq_class& mu) {
    if (mu <= 0 || mu > mpq_class(1, 4)) throw std::invalid_argument("mu must lie in (0, 1/4], got " + to_string(mu));
}

// 1 - cos(2 pi r / p) via 2 sin^2(pi r / p), which keeps small angles accurate.
long double one_minus_cos(Residue r, std::uint64_t p) {
    const long double s = std::sin(std::numbers::pi_v<long double> * static_cast<long double>(r) / static_cast<long double>(p));
    return 2.0L * s * s;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

}  // namespace

std::vector<InequalityReport> verify_cos_log_bounds(const PrimeModulus& p, const mpq_class& mu,
                                                    std::span<const Residue> xs) {
    require_mu_quarter(mu);
    const long double m = to_long_double(mu);
    std::vector<InequalityReport> out;
    out.reserve(2 * xs.size());
    for (Residue x : xs) {
        const Residue r = x % p.value();
        const long double t = static_cast<long double>(torus_norm_value(r, p));
        const long double norm2 = t * t;
        const long double mid = -std::log1p(-m * one_minus_cos(r, p.value()));
        std::ostringstream inst;
        inst << "p=" << p.value() << " mu=" << to_string(mu) << " x=" << r;
        out.push_back(compare_le("cos_log_lower", inst.str(), m * norm2, mid));
        out.push_back(compare_le("cos_log_upper", inst.str(), mid, 32.0L * m * norm2));
    }
    return out;
}

std::vector<InequalityReport> verify_elementary_bounds(std::size_t grid_points) {
    std::vector<InequalityReport> out;
    out.reserve(4 * grid_points);
    const long double steps = static_cast<long double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const long double a = 0.25L * static_cast<long double>(i) / steps;
        const long double mid = -std::log1p(-a);
        const std::string inst = "a=" + format_number(a);
        out.push_back(compare_le("log_lower", inst, a, mid));
        out.push_back(compare_le("log_upper", inst, mid, 1.5L * a));
    }
    for (std::size_t i = 0; i < grid_points; ++i) {
        const long double x = -0.5L + static_cast<long double>(i) / steps;
        const long double s = std::sin(std::numbers::pi_v<long double> * x);
        const long double mid = 2.0L * s * s;
        const std::string inst = "x=" + format_number(x);
        out.push_back(compare_le("cos_lower", inst, x * x, mid));
        out.push_back(compare_le("cos_upper", inst, mid, 20.0L * x * x));
    }
    return out;
}

std::vector<double> fourier_profile(const ZpVector& v, double mu, std::size_t k) {
    const auto& p = v.modulus();
    const std::uint64_t m = p.value();
    std::vector<double> cosines(m);
    for (std::uint64_t r = 0; r < m; ++r) cosines[r] = std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m));
    const bool log_space = static_cast<long double>(v.size()) * static_cast<long double>(k) > 1000.0L;
    std::vector<double> out(m);
    for (Residue xi = 0; xi < m; ++xi) {
        if (log_space) {
            double log_g = 0.0;
            for (Residue x : v.entries()) log_g += std::log((1.0 - mu) + mu * cosines[p.mul(x, xi)]);
            out[xi] = std::exp(static_cast<double>(k) * log_g);
        } else {
            double g = 1.0;
            for (Residue x : v.entries()) g *= (1.0 - mu) + mu * cosines[p.mul(x, xi)];
            out[xi] = std::pow(g, static_cast<double>(k));
        }
    }
    return out;
}

std::size_t sumset_summands(double mu, std::size_t k) {
    const double raw = std::floor(std::sqrt(mu * static_cast<double>(k)) / 8.0);
    return raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
}

LevelSetPair level_sets(const ZpVector& v, std::size_t k, const WalkParams& params, double alpha) {
    require_mu_quarter(params.mu());
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    LevelSetPair pair;
    pair.p = v.modulus().value();
    pair.alpha = alpha;
    pair.k = k;
    const double mu = params.mu_value();
    pair.ell = sumset_summands(mu, k);
    pair.G = fourier_profile(v, mu, 1);
    pair.F = fourier_profile(v, mu, k);
    CompensatedSum total;
    for (Residue xi = 0; xi < pair.p; ++xi) {
        total.add(pair.G[xi]);
        if (pair.F[xi] > alpha) pair.A.push_back(xi);
        if (pair.G[xi] > alpha) pair.B.push_back(xi);
    }
    pair.g = total.value() / static_cast<double>(pair.p);
    return pair;
}

std::vector<Residue> sumset(std::span<const Residue> A, std::span<const Residue> B, const PrimeModulus& p) {
    std::vector<char> hit(p.value(), 0);
    for (Residue a : A) {
        for (Residue b : B) hit[p.add(a % p.value(), b % p.value())] = 1;
    }
    std::vector<Residue> out;
    for (Residue x = 0; x < p.value(); ++x) {
        if (hit[x]) out.push_back(x);
    }
    return out;
}

SumsetInclusion check_sumset_inclusion(const LevelSetPair& pair) {
    SumsetInclusion result;
    const PrimeModulus p(pair.p);
    std::ostringstream inst;
    inst << "p=" << pair.p << " k=" << pair.k << " alpha=" << pair.alpha << " ell=" << pair.ell << " |A|=" << pair.A.size()
         << " |B|=" << pair.B.size();

    std::vector<char> in_B(pair.p, 0);
    for (Residue b : pair.B) in_B[b] = 1;

    // layers[j][x] holds the last summand used to reach x with j+1 summands.
    constexpr Residue kUnreached = ~Residue{0};
    std::vector<std::vector<Residue>> layers;
    std::vector<Residue> current(pair.p, kUnreached);
    for (Residue a : pair.A) current[a] = a;
    layers.push_back(current);
    for (std::size_t j = 1; j < pair.ell; ++j) {
        std::vector<Residue> next(pair.p, kUnreached);
        for (Residue x = 0; x < pair.p; ++x) {
            if (current[x] == kUnreached) continue;
            for (Residue a : pair.A) {
                const Residue y = p.add(x, a);
                if (next[y] == kUnreached) next[y] = a;
            }
        }
        current = std::move(next);
        layers.push_back(current);
    }

    std::size_t outside = 0;
    for (Residue x = 0; x < pair.p; ++x) {
        if (current[x] == kUnreached || in_B[x]) continue;
        if (outside++ == 0) {
            result.witness = x;
            Residue y = x;
            for (std::size_t j = layers.size(); j-- > 0;) {
                const Residue a = layers[j][y];
                result.witness_summands.push_back(a);
                y = p.sub(y, a);
            }
            std::reverse(result.witness_summands.begin(), result.witness_summands.end());
        }
    }
    result.report = compare_le("sumset_inclusion", inst.str(), mpq_class(static_cast<long>(outside)), mpq_class(0));
    return result;
}

InequalityReport cauchy_davenport_check(std::span<const Residue> A, std::span<const Residue> B, const PrimeModulus& p) {
    if (A.empty() || B.empty()) throw std::invalid_argument("Cauchy-Davenport needs non-empty sets");
    const auto sum = sumset(A, B, p);
    const std::uint64_t floor = std::min<std::uint64_t>(A.size() + B.size() - 1, p.value());
    std::ostringstream inst;
    inst << "p=" << p.value() << " |A|=" << A.size() << " |B|=" << B.size();
    return compare_le("cauchy_davenport", inst.str(), mpq_class(to_mpz(floor)), mpq_class(to_mpz(sum.size())));
}

InequalityReport verify_tensor_bound(const ZpVector& v, std::size_t k, const WalkParams& params) {
    require_mu_quarter(params.mu());
    if (k == 0) throw std::invalid_argument("k must be positive");
    const Probability r = rho(v, params);
    const Probability lhs = rho(v.power(k), params);
    const long double rv = r.long_value();
    const long double kk = static_cast<long double>(k);
    const long double mu = to_long_double(params.mu());
    const long double rhs = (std::pow(rv, (kk - 1.0L) / kk) + 8.0L / std::sqrt(mu * kk)) * rv +
                            1.0L / static_cast<long double>(v.modulus().value());
    auto rep = compare_le("tensor_decrement", describe(v) + " k=" + std::to_string(k), lhs.long_value(), rhs);
    if (lhs.is_exact()) rep.lhs_exact = lhs.str();
    return rep;
}

std::vector<InequalityReport> verify_amplified_bound(const ZpVector& v, std::size_t k, const WalkParams& params) {
    require_mu_quarter(params.mu());
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (v.is_zero()) throw std::invalid_argument("amplified bound needs a vector with non-zero support");
    const Probability r = rho(v, params);
    const Probability lhs = rho(v.power(k), params);
    const long double rv = r.long_value();
    const long double kk = static_cast<long double>(k);
    const long double mu = to_long_double(params.mu());
    const long double inv_p = 1.0L / static_cast<long double>(v.modulus().value());
    const std::string inst = describe(v) + " k=" + std::to_string(k);
    std::vector<InequalityReport> out;
    out.push_back(compare_le("amplified_k", inst, lhs.long_value(), 64.0L * std::pow(kk, -0.2L) * rv + inv_p));
    out.push_back(compare_le("amplified_mu_k_fifth", inst, lhs.long_value(), 64.0L * std::pow(mu * kk, -0.2L) * rv + inv_p));
    out.push_back(compare_le("amplified_mu_k_quarter", inst, lhs.long_value(), 64.0L * std::pow(mu * kk, -0.25L) * rv + inv_p));
    if (lhs.is_exact()) {
        for (auto& rep : out) rep.lhs_exact = lhs.str();
    }
    return out;
}

std::vector<InequalityReport> check_monotonicity(const ZpVector& v, std::span<const std::size_t> T,
                                                 const WalkParams& params) {
    const ZpVector sub = v.restrict(T);
    const Probability r_sub = rho(sub, params);
    std::ostringstream inst;
    inst << describe(v) << " T={";
    for (std::size_t i = 0; i < T.size(); ++i) inst << (i ? "," : "") << T[i];
    inst << "}";
    std::vector<InequalityReport> out;
    out.push_back(compare_le("monotone_subvector", inst.str(), rho(v, params), r_sub));
    out.push_back(compare_le("monotone_rho1_vs_sub", inst.str(), rho(v, params.with_mu(mpq_class(1))), r_sub));
    return out;
}

InequalityReport check_mu_monotonicity(const ZpVector& v, const WalkParams& params) {
    return compare_le("monotone_in_mu", describe(v) + " mu=" + to_string(params.mu()),
                      rho(v, params.with_mu(mpq_class(1))), rho(v, params));
}

InequalityReport check_holder(std::span<const ZpVector> blocks, const WalkParams& params) {
    if (blocks.empty()) throw std::invalid_argument("Holder law needs at least one block");
    if (params.mu() >= mpq_class(1, 2)) throw std::invalid_argument("Holder law needs mu in (0, 1/2)");
    ZpVector joined = blocks.front();
    std::ostringstream inst;
    inst << describe(blocks.front());
    for (std::size_t j = 1; j < blocks.size(); ++j) {
        joined = joined.concat(blocks[j]);
        inst << " | " << describe(blocks[j]);
    }
    std::optional<Probability> best;
    for (const auto& w : blocks) {
        Probability r = rho(w.power(blocks.size()), params);
        if (!best || r > *best) best = r;
    }
    return compare_le("holder_blocks", inst.str(), rho(joined, params), *best);
}

InequalityReport check_neighbourhood_size(const ZpVector& w, const WalkParams& params) {
    const auto dist = distribution(w, params);
    const Probability r = rho_of(dist);
    const auto nbhd = neighbourhood_of(dist);
    const mpq_class size(to_mpz(nbhd.size()));
    const Probability lhs = r.is_exact() ? Probability(mpq_class(size * r.exact())) : Probability(r.value() * size.get_d());
    return compare_le("neighbourhood_size", describe(w), lhs, r.is_exact() ? Probability(mpq_class(2)) : Probability(2.0));
}

InequalityReport check_spread(const ZpVector& v, const WalkParams& params) {
    if (v.is_zero()) throw std::invalid_argument("spread bound needs v != 0");
    const Probability r = rho(v, params);
    const long double mu = to_long_double(params.mu());
    const long double rhs = 64.0L / std::sqrt(mu * static_cast<long double>(v.support())) +
                            1.0L / static_cast<long double>(v.modulus().value());
    auto rep = compare_le("spread", describe(v), r.long_value(), rhs);
    if (r.is_exact()) rep.lhs_exact = r.str();
    return rep;
}

std::vector<InequalityReport> verify_structural_laws(std::span<const ZpVector> sample, const WalkParams& params,
                                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<InequalityReport> out;
    const bool holder_ok = params.mu() < mpq_class(1, 2);
    for (const auto& v : sample) {
        const std::size_t n = v.size();
        if (n <= 6) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                IndexSet T;
                for (std::size_t i = 0; i < n; ++i) {
                    if (mask >> i & 1) T.push_back(i);
                }
                for (auto& r : check_monotonicity(v, T, params)) out.push_back(std::move(r));
            }
        } else {
            for (int trial = 0; trial < 8; ++trial) {
                IndexSet T;
                for (std::size_t i = 0; i < n; ++i) {
                    if (rng() & 1) T.push_back(i);
                }
                for (auto& r : check_monotonicity(v, T, params)) out.push_back(std::move(r));
            }
        }
        out.push_back(check_mu_monotonicity(v, params));
        out.push_back(check_neighbourhood_size(v, params));
        if (!v.is_zero()) out.push_back(check_spread(v, params));
        if (holder_ok && n > 0) {
            const std::vector<ZpVector> same{v, v};
            out.push_back(check_holder(same, params));
            for (std::size_t blocks = 2; blocks <= std::min<std::size_t>(3, n); ++blocks) {
                // Random cut points split v into `blocks` consecutive non-empty pieces.
                IndexSet cuts{0};
                std::vector<std::size_t> pool(n - 1);
                for (std::size_t i = 0; i + 1 < n; ++i) pool[i] = i + 1;
                for (std::size_t c = 0; c + 1 < blocks; ++c) {
                    const std::size_t pick = draw(rng, pool.size());
                    cuts.push_back(pool[pick]);
                    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
                }
                std::sort(cuts.begin(), cuts.end());
                cuts.push_back(n);
                std::vector<ZpVector> pieces;
                for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                    IndexSet idx;
                    for (std::size_t i = cuts[c]; i < cuts[c + 1]; ++i) idx.push_back(i);
                    pieces.push_back(v.restrict(idx));
                }
                out.push_back(check_holder(pieces, params));
            }
        }
    }
    return out;
}

LevelSetIntegral level_set_integral(const LevelSetPair& pair) {
    const long double g = pair.g;
    const long double p = static_cast<long double>(pair.p);
    std::vector<long double> above;
    for (double f : pair.F) {
        if (f > pair.g) above.push_back(f);
    }
    std::sort(above.begin(), above.end(), std::greater<>());
    LevelSetIntegral out;
    for (long double f : above) {
        out.excess_sum += f - g;
        out.tail_mass += f;
    }
    out.excess_sum /= p;
    out.tail_mass /= p;
    // |A_t| = j on [f_{j+1}, f_j); the last interval ends at g.
    for (std::size_t j = 0; j < above.size(); ++j) {
        const long double hi = above[j];
        const long double lo = j + 1 < above.size() ? above[j + 1] : g;
        out.quadrature += static_cast<long double>(j + 1) * (hi - lo);
    }
    out.quadrature /= p;
    out.boundary = g * static_cast<long double>(above.size()) / p;
    return out;
}

bool markov_gate(const LevelSetPair& pair, double alpha) {
    std::size_t count = 0;
    for (double x : pair.G) {
        if (x > alpha) ++count;
    }
    return count < pair.p;
}

}  // namespace loforge
