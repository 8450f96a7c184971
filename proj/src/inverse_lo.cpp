#include "loforge/inverse_lo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "loforge/rational.hpp"

namespace loforge {

namespace {

long double log_inverse(const Probability& prob) {
    if (prob.is_exact()) {
        const mpq_class& q = prob.exact();
        long en = 0;
        long ed = 0;
        const long double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
        const long double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
        // log(den/num) computed from mantissas and binary exponents.
        return std::log(md) - std::log(mn) + static_cast<long double>(ed - en) * std::log(2.0L);
    }
    return -std::log(static_cast<long double>(prob.value()));
}

IndexSet map_indices(const IndexSet& local, const IndexSet& global_of_local) {
    IndexSet out;
    out.reserve(local.size());
    for (std::size_t i : local) out.push_back(global_of_local[i]);
    std::sort(out.begin(), out.end());
    return out;
}

void check_greedy_mu(const WalkParams& params) {
    if (params.mu() > mpq_class(1, 4)) {
        throw std::invalid_argument("greedy decomposition needs mu in (0, 1/4], got " + to_string(params.mu()));
    }
}

std::string join(const IndexSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out;
}

}  // namespace

std::string_view to_string(DBudget budget) noexcept {
    return budget == DBudget::from_rho ? "ceil((2/mu)log(1/rho_mu(v)))" : "ceil((2/mu)log(p))";
}

std::size_t length_budget(const Probability& rho_v, const WalkParams& params, std::uint64_t p, DBudget budget) {
    const long double scale = 2.0L / static_cast<long double>(params.mu_value());
    const long double log_term =
        budget == DBudget::from_rho ? log_inverse(rho_v) : std::log(static_cast<long double>(p));
    if (log_term <= 0.0L) return 0;
    return static_cast<std::size_t>(std::ceil(scale * log_term));
}

IndexSet GreedyDecomposition::sorted() const {
    IndexSet out = T;
    std::sort(out.begin(), out.end());
    return out;
}

GreedyDecomposition greedy_decompose(const ZpVector& v, const WalkParams& params) {
    check_greedy_mu(params);
    GreedyDecomposition g;
    const std::size_t n = v.size();
    std::size_t seed = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] != 0) {
            seed = i;
            break;
        }
    }
    if (seed == n) return g;

    const mpq_class contraction = params.contraction();
    std::vector<bool> taken(n, false);
    auto dist = WalkDistribution::point_mass(v.modulus(), params).extended(v[seed]);
    taken[seed] = true;
    g.T.push_back(seed);
    g.rho_trace.push_back(rho_of(dist));

    for (;;) {
        const Probability threshold = g.rho_trace.back() * contraction;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            // With mu <= 1/2 the extended law peaks at 0, so its value there is rho.
            if (dist.extended_at(v[i], 0) <= threshold) {
                pick = i;
                break;
            }
        }
        if (pick == n) break;
        dist = dist.extended(v[pick]);
        taken[pick] = true;
        g.T.push_back(pick);
        g.rho_trace.push_back(rho_of(dist));
    }
    g.terminal_rho = g.rho_trace.back();
    return g;
}

std::string audit_greedy(const ZpVector& v, const WalkParams& params, const GreedyDecomposition& g) {
    std::ostringstream err;
    const mpq_class c = params.contraction();
    const ZpVector vT = v.restrict(g.T);
    const auto base = distribution(vT, params);
    const Probability rho_T = rho_of(base);
    const auto nbhd = neighbourhood_of(base);
    std::vector<bool> in_T(v.size(), false);
    for (std::size_t i : g.T) in_T[i] = true;

    for (std::size_t i = 0; i < v.size(); ++i) {
        if (in_T[i]) continue;
        const std::vector<Residue> single{v[i]};
        const Probability extended = rho(vT.concat(ZpVector(v.modulus(), single)), params);
        const bool stop_rule = extended > rho_T * c;
        const bool in_nbhd = std::binary_search(nbhd.begin(), nbhd.end(), v[i]);
        if (!stop_rule) err << "index " << i << " still satisfies the step inequality; ";
        if (!in_nbhd) err << "v_" << i << " not in N(v_T); ";
    }

    Probability prev(mpq_class(1));
    if (!params.exact()) prev = Probability(1.0);
    for (std::size_t t = 0; t < g.rho_trace.size(); ++t) {
        const auto& r = g.rho_trace[t];
        if (!(r < prev)) err << "trace not strictly decreasing at " << t << "; ";
        if (r > prev * c) err << "trace ratio above 1-mu/2 at " << t << "; ";
        prev = r;
    }
    if (!g.T.empty()) {
        const Probability cap = params.exact() ? Probability(pow(c, g.T.size()))
                                               : Probability(std::pow(c.get_d(), static_cast<double>(g.T.size())));
        if (g.terminal_rho > cap) err << "terminal rho above (1-mu/2)^|T|; ";
    }
    const Probability rho_v = rho(v, params);
    const std::size_t budget = length_budget(rho_v, params, v.modulus().value());
    if (g.T.size() > budget + 1) err << "|T|=" << g.T.size() << " exceeds ceil((2/mu)log(1/rho))+1=" << budget + 1 << "; ";
    return err.str();
}

std::string IteratedDecomposition::outcome() const {
    if (!hypothesis_met) return "vacuous: k*d > n";
    return inequality_holds ? "holds" : "violated";
}

IteratedDecomposition iterated_decompose(const ZpVector& v, const WalkParams& params, std::size_t k, DBudget budget) {
    check_greedy_mu(params);
    if (k == 0) throw std::invalid_argument("k must be positive");
    IteratedDecomposition out;
    out.k = k;
    out.budget = budget;
    out.d = length_budget(rho(v, params), params, v.modulus().value(), budget);
    out.hypothesis_met = k * out.d <= v.size();

    IndexSet active(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) active[i] = i;
    for (std::size_t j = 0; j < k; ++j) {
        const auto g = greedy_decompose(v.restrict(active), params);
        IndexSet block = map_indices(g.T, active);
        IndexSet rest;
        std::set_difference(active.begin(), active.end(), block.begin(), block.end(), std::back_inserter(rest));
        active = std::move(rest);
        out.S.insert(out.S.end(), block.begin(), block.end());
        out.blocks.push_back(std::move(block));
    }
    std::sort(out.S.begin(), out.S.end());

    std::optional<Probability> best;
    for (std::size_t j = 0; j < out.blocks.size(); ++j) {
        const auto& block = out.blocks[j];
        Probability r = block.empty() ? (params.exact() ? Probability(mpq_class(1)) : Probability(1.0))
                                      : rho(v.restrict(block).power(k), params);
        if (!best || r > *best) {
            best = r;
            out.selected = j;
        }
    }
    out.T = out.blocks[out.selected];
    out.rho_T_power = *best;
    out.rho_S = rho(v.restrict(out.S), params);
    out.inequality_holds = out.rho_S <= out.rho_T_power;
    return out;
}

std::string_view to_string(InverseLOCertificate::Status status) noexcept {
    switch (status) {
        case InverseLOCertificate::Status::certified: return "certified";
        case InverseLOCertificate::Status::violated: return "violated";
        case InverseLOCertificate::Status::vacuous: return "vacuous";
    }
    return "unknown";
}

InverseLOCertificate certify_inverse_lo(const ZpVector& v, const WalkParams& params, std::size_t k, DBudget budget) {
    check_greedy_mu(params);
    if (k == 0) throw std::invalid_argument("k must be positive");
    InverseLOCertificate cert;
    cert.k = k;
    cert.budget = budget;
    cert.rho_v = rho(v, params);
    cert.d = length_budget(cert.rho_v, params, v.modulus().value(), budget);
    const std::uint64_t p = v.modulus().value();
    cert.bound_rhs = 256.0L * std::pow(static_cast<long double>(k), -0.2L) / cert.rho_v.long_value();

    if (v.support() < k * cert.d) {
        cert.vacuous_reason = "support " + std::to_string(v.support()) + " below k*d = " + std::to_string(k * cert.d);
        return cert;
    }
    const Probability two_over_p = params.exact() ? Probability(mpq_class(2, p)) : Probability(2.0 / static_cast<double>(p));
    if (cert.rho_v < two_over_p) {
        cert.vacuous_reason = "rho below 2/p";
        return cert;
    }

    const auto it = iterated_decompose(v, params, k, budget);
    cert.T = it.T;
    cert.S = it.S;
    cert.neighbourhood = neighbourhood(v.restrict(cert.T), params);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::binary_search(cert.neighbourhood.begin(), cert.neighbourhood.end(), v[i])) cert.exceptions.push_back(i);
    }
    cert.holds = cert.exceptions.size() <= k * cert.d &&
                 static_cast<long double>(cert.neighbourhood.size()) <= cert.bound_rhs;
    cert.status = cert.holds ? InverseLOCertificate::Status::certified : InverseLOCertificate::Status::violated;
    return cert;
}

std::string Signature::key() const {
    std::ostringstream os;
    auto vec = [](const ZpVector& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(w[i]);
        }
        return s;
    };
    os << "S=" << join(S) << ";T=" << join(T) << ";T'=" << join(Tprime) << ";w1=" << vec(w1) << ";w2=" << vec(w2);
    return os.str();
}

SignatureResult signature(const ZpVector& v, const WalkParams& params, std::size_t k, DBudget budget) {
    auto it = iterated_decompose(v, params, k, budget);
    const auto g = greedy_decompose(v.restrict(it.S), params);
    IndexSet tprime = map_indices(g.T, it.S);
    SignatureResult out{
        Signature{it.S, it.T, tprime, v.restrict(it.T), v.restrict(tprime)},
        it,
        it.d,
        it.hypothesis_met,
        {},
    };

    std::ostringstream err;
    const auto& s = out.sig;
    const std::size_t d = it.d;
    if (s.S.size() > k * d) err << "|S| > k*d; ";
    if (s.w1.support() > d) err << "|w1| > d; ";
    if (s.w2.support() > d) err << "|w2| > d; ";
    if (s.S.size() > s.Tprime.size() && s.w2.is_zero()) err << "w2 is zero while S\\T' is non-empty; ";
    if (!s.w2.empty()) {
        const mpq_class c = params.contraction();
        const Probability r2 = rho(s.w2, params);
        const Probability cap = params.exact() ? Probability(pow(c, s.w2.size()))
                                               : Probability(std::pow(c.get_d(), static_cast<double>(s.w2.size())));
        if (r2 > cap) err << "rho(w2) above (1-mu/2)^len(w2); ";
    }
    if (!std::includes(s.S.begin(), s.S.end(), s.T.begin(), s.T.end())) err << "T not inside S; ";
    if (!std::includes(s.S.begin(), s.S.end(), s.Tprime.begin(), s.Tprime.end())) err << "T' not inside S; ";
    out.invariant_failure = err.str();
    return out;
}

}  // namespace loforge
