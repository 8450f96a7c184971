#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "loforge/inverse_lo.hpp"
#include "loforge/rational.hpp"
#include "oracle.hpp"

using namespace loforge;

namespace {

ZpVector vec(std::uint64_t p, std::vector<std::int64_t> xs) { return ZpVector::from_signed(PrimeModulus(p), xs); }

/// Textbook greedy on the brute-force law: first non-zero entry, then the
/// smallest index passing the contraction test, until none does.
IndexSet oracle_greedy(const std::vector<std::int64_t>& v, const mpq_class& mu, std::int64_t p) {
    IndexSet T;
    std::vector<std::int64_t> vT;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] % p != 0) {
            T.push_back(i);
            vT.push_back(v[i]);
            break;
        }
    }
    if (T.empty()) return T;
    const mpq_class c = 1 - mu / 2;
    for (;;) {
        const mpq_class current = oracle::brute_force_rho(vT, mu, p);
        bool extended = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (std::find(T.begin(), T.end(), i) != T.end()) continue;
            auto trial = vT;
            trial.push_back(v[i]);
            if (oracle::brute_force_rho(trial, mu, p) <= c * current) {
                T.push_back(i);
                vT = std::move(trial);
                extended = true;
                break;
            }
        }
        if (!extended) return T;
    }
}

std::vector<std::int64_t> random_vector(std::mt19937_64& rng, std::size_t n, std::uint64_t p) {
    std::vector<std::int64_t> xs(n);
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
    return xs;
}

}  // namespace

TEST_CASE("greedy matches the brute-force greedy") {
    std::mt19937_64 rng(23);
    for (const char* m : {"1/8", "1/4", "1/5"}) {
        const mpq_class mu = parse_rational(m);
        for (int t = 0; t < 150; ++t) {
            const std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7, 11}[rng() % 4];
            const auto xs = random_vector(rng, rng() % 8, p);
            const auto g = greedy_decompose(vec(p, xs), WalkParams(mu));
            CHECK(g.T == oracle_greedy(xs, mu, static_cast<std::int64_t>(p)));
            CHECK(audit_greedy(vec(p, xs), WalkParams(mu), g).empty());
        }
    }
}

TEST_CASE("greedy on the zero vector selects nothing") {
    const auto g = greedy_decompose(vec(5, {0, 0, 0}), WalkParams(mpq_class(1, 4)));
    CHECK(g.T.empty());
    CHECK(g.terminal_rho == Probability(mpq_class(1)));
    CHECK(audit_greedy(vec(5, {0, 0, 0}), WalkParams(mpq_class(1, 4)), g).empty());
}

TEST_CASE("greedy rejects mu above 1/4") {
    CHECK_THROWS_AS(greedy_decompose(vec(5, {1}), WalkParams(mpq_class(1, 3))), std::invalid_argument);
}

TEST_CASE("greedy seeds with the first non-zero entry") {
    const auto g = greedy_decompose(vec(7, {0, 0, 3, 1}), WalkParams(mpq_class(1, 4)));
    REQUIRE_FALSE(g.T.empty());
    CHECK(g.T.front() == 2);
}

TEST_CASE("greedy trace and length bound on random inputs, float mode included") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 100; ++t) {
        const std::uint64_t p = 31;
        const auto xs = random_vector(rng, 1 + rng() % 20, p);
        for (auto mode : {Arithmetic::exact, Arithmetic::floating}) {
            const WalkParams params(mpq_class(1, 4), mode);
            const auto g = greedy_decompose(vec(p, xs), params);
            CHECK(audit_greedy(vec(p, xs), params, g).empty());
            const auto d = length_budget(rho(vec(p, xs), params), params, p);
            CHECK(g.T.size() <= d);
        }
    }
}

TEST_CASE("length budget conventions") {
    const WalkParams params(mpq_class(1, 4));
    CHECK(length_budget(Probability(mpq_class(1)), params, 5) == 0);
    // (2/mu) log 2 = 8 * 0.693... = 5.545 -> 6
    CHECK(length_budget(Probability(mpq_class(1, 2)), params, 5) == 6);
    CHECK(length_budget(Probability(mpq_class(1, 2)), params, 5, DBudget::from_p) ==
          static_cast<std::size_t>(std::ceil(8 * std::log(5.0))));
    // A tiny exact rho must not underflow through a double conversion.
    const mpq_class tiny = pow(mpq_class(1, 2), 3000);
    CHECK(length_budget(Probability(tiny), params, 5) == static_cast<std::size_t>(std::ceil(8 * 3000 * std::log(2.0))));
}

TEST_CASE("iterated decomposition satisfies the tensor inequality exactly") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = std::vector<std::uint64_t>{5, 7, 11}[rng() % 3];
        const auto xs = random_vector(rng, rng() % 12, p);
        const std::size_t k = 1 + rng() % 3;
        const auto it = iterated_decompose(vec(p, xs), WalkParams(mpq_class(1, 4)), k);
        CHECK(it.inequality_holds);
        CHECK(it.blocks.size() == k);
        // Blocks are disjoint and their union is S.
        std::set<std::size_t> all;
        std::size_t total = 0;
        for (const auto& b : it.blocks) {
            all.insert(b.begin(), b.end());
            total += b.size();
        }
        CHECK(all.size() == total);
        CHECK(IndexSet(all.begin(), all.end()) == it.S);
        CHECK(it.hypothesis_met == (k * it.d <= xs.size()));
        // T maximizes rho(v_{T_j}^k), ties to the smallest j.
        for (std::size_t j = 0; j < it.blocks.size(); ++j) {
            const Probability r = it.blocks[j].empty() ? Probability(mpq_class(1))
                                                        : rho(vec(p, xs).restrict(it.blocks[j]).power(k),
                                                              WalkParams(mpq_class(1, 4)));
            if (j < it.selected) CHECK(r < it.rho_T_power);
            else CHECK(r <= it.rho_T_power);
        }
    }
}

TEST_CASE("first block of the iteration is the plain greedy set") {
    const auto v = vec(7, {1, 2, 3, 1, 2, 3, 1, 2});
    const WalkParams params(mpq_class(1, 4));
    const auto it = iterated_decompose(v, params, 2);
    CHECK(it.blocks[0] == greedy_decompose(v, params).sorted());
}

TEST_CASE("certificate is vacuous when the hypotheses fail") {
    const WalkParams params(mpq_class(1, 4));
    const auto short_v = certify_inverse_lo(vec(101, {1, 2}), params, 2);
    CHECK(short_v.status == InverseLOCertificate::Status::vacuous);
    CHECK(short_v.vacuous_reason.find("support") != std::string::npos);
}

TEST_CASE("certificate on long vectors with few distinct values") {
    // Entries drawn from {1, 2, -1, -2} over a large prime keep rho well above 2/p.
    std::mt19937_64 rng(37);
    const WalkParams params(mpq_class(1, 4), Arithmetic::floating);
    int certified = 0;
    for (int t = 0; t < 20; ++t) {
        std::vector<std::int64_t> xs(400);
        for (auto& x : xs) x = std::vector<std::int64_t>{1, 2, -1, -2}[rng() % 4];
        const auto cert = certify_inverse_lo(vec(1009, xs), params, 1 + rng() % 3);
        CHECK(cert.status != InverseLOCertificate::Status::violated);
        if (cert.status == InverseLOCertificate::Status::certified) {
            ++certified;
            CHECK(cert.exceptions.size() <= cert.k * cert.d);
        }
    }
    CHECK(certified > 0);
}

TEST_CASE("signature invariants and determinism") {
    std::mt19937_64 rng(41);
    const WalkParams params(mpq_class(1, 4));
    for (int t = 0; t < 200; ++t) {
        const auto xs = random_vector(rng, 1 + rng() % 6, 5);
        const auto s = signature(vec(5, xs), params, 1 + rng() % 2);
        CHECK(s.invariant_failure.empty());
        CHECK(s.sig.w1 == vec(5, xs).restrict(s.sig.T));
        CHECK(s.sig.w2 == vec(5, xs).restrict(s.sig.Tprime));
        CHECK(std::is_sorted(s.sig.Tprime.begin(), s.sig.Tprime.end()));
        const auto again = signature(vec(5, xs), params, s.iterated.k);
        CHECK(again.sig == s.sig);
        CHECK(again.sig.key() == s.sig.key());
    }
}
