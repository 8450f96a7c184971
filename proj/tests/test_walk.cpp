#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "loforge/rational.hpp"
#include "loforge/walk.hpp"
#include "oracle.hpp"

using namespace loforge;

namespace {

ZpVector vec(std::uint64_t p, std::vector<std::int64_t> xs) { return ZpVector::from_signed(PrimeModulus(p), xs); }

std::vector<std::int64_t> as_signed(const ZpVector& v) { return {v.entries().begin(), v.entries().end()}; }

}  // namespace

TEST_CASE("distribution of (1,2) at p=5, mu=1/4") {
    const auto d = distribution(vec(5, {1, 2}), WalkParams(mpq_class(1, 4)));
    const std::vector<mpq_class> want{mpq_class(9, 16), mpq_class(7, 64), mpq_class(7, 64), mpq_class(7, 64),
                                      mpq_class(7, 64)};
    for (Residue x = 0; x < 5; ++x) CHECK(d.at(x).exact() == want[x]);
}

TEST_CASE("rho of (1,1)") {
    CHECK(rho(vec(5, {1, 1}), WalkParams(mpq_class(1, 4))).exact() == mpq_class(19, 32));
    CHECK(rho(vec(7, {1, 1}), WalkParams(mpq_class(1, 4))).exact() == mpq_class(19, 32));
    CHECK(rho(vec(5, {1, 1}), WalkParams(mpq_class(1))).exact() == mpq_class(1, 2));
}

TEST_CASE("exact DP matches 3^n enumeration") {
    std::mt19937_64 rng(3);
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL}) {
        for (const char* m : {"1/8", "1/4", "1/3", "1/2", "3/4", "1"}) {
            const mpq_class mu = parse_rational(m);
            for (int t = 0; t < 12; ++t) {
                const std::size_t n = rng() % 6;
                std::vector<std::int64_t> xs(n);
                for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
                const auto d = distribution(vec(p, xs), WalkParams(mu));
                const auto want = oracle::brute_force_distribution(xs, mu, static_cast<std::int64_t>(p));
                for (Residue x = 0; x < p; ++x) CHECK(d.at(x).exact() == want[x]);
                CHECK(d.length() == n);
            }
        }
    }
}

TEST_CASE("float mode tracks exact mode") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::uint64_t p = 13;
        std::vector<std::int64_t> xs(1 + rng() % 10);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        const WalkParams exact(mpq_class(1, 4));
        const auto de = distribution(vec(p, xs), exact);
        const auto df = distribution(vec(p, xs), exact.with_mode(Arithmetic::floating));
        for (Residue x = 0; x < p; ++x) CHECK(df.value_at(x) == doctest::Approx(de.value_at(x)).epsilon(1e-13));
        CHECK(df.normalized());
        CHECK(df.symmetric());
    }
}

TEST_CASE("distribution invariants: normalized, symmetric, mode at zero for mu <= 1/2") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7, 11, 31}[rng() % 5];
        std::vector<std::int64_t> xs(rng() % 8);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        const mpq_class mu(1 + static_cast<long>(rng() % 8), 16);
        const auto d = distribution(vec(p, xs), WalkParams(mu));
        CHECK(d.normalized());
        CHECK(d.symmetric());
        const auto am = d.argmax();
        CHECK(std::find(am.begin(), am.end(), Residue{0}) != am.end());
        CHECK(rho_of(d) == d.at(0));
    }
}

TEST_CASE("rho is invariant under permutation, sign flips and zero padding") {
    std::mt19937_64 rng(9);
    const WalkParams params(mpq_class(1, 4));
    for (int t = 0; t < 100; ++t) {
        const std::uint64_t p = 11;
        std::vector<std::int64_t> xs(1 + rng() % 6);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        const auto r = rho(vec(p, xs), params);
        auto ys = xs;
        std::shuffle(ys.begin(), ys.end(), rng);
        for (auto& y : ys) {
            if (rng() % 2) y = -y;
        }
        CHECK(rho(vec(p, ys), params) == r);
        ys.push_back(0);
        CHECK(rho(vec(p, ys), params) == r);
        // Scaling by a unit is an automorphism of Z_p.
        auto zs = xs;
        for (auto& z : zs) z *= 3;
        CHECK(rho(vec(p, zs), params) == r);
    }
}

TEST_CASE("appending an entry never increases rho") {
    std::mt19937_64 rng(13);
    const WalkParams params(mpq_class(1, 4));
    for (int t = 0; t < 100; ++t) {
        std::vector<std::int64_t> xs(rng() % 6);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 7);
        const auto r = rho(vec(7, xs), params);
        xs.push_back(static_cast<std::int64_t>(rng() % 7));
        CHECK(rho(vec(7, xs), params) <= r);
    }
}

TEST_CASE("extended_at agrees with the materialized extension") {
    const WalkParams params(mpq_class(1, 4));
    const auto d = distribution(vec(7, {1, 3, 2}), params);
    for (Residue s = 0; s < 7; ++s) {
        const auto e = d.extended(s);
        for (Residue x = 0; x < 7; ++x) CHECK(d.extended_at(s, x) == e.at(x));
    }
}

TEST_CASE("neighbourhood uses a strict comparison") {
    // Zero vector: only 0 carries mass.
    CHECK(neighbourhood(vec(5, {0}), WalkParams(mpq_class(1, 4))) == std::vector<Residue>{0});
    // mu = 1, v = (1) over Z_5: P(1) = P(4) = 1/2, P(0) = 0 -> everything with mass counts.
    CHECK(neighbourhood(vec(5, {1}), WalkParams(mpq_class(1))) == std::vector<Residue>{1, 4});
    // mu = 1/2, v = (1): P(0) = 1/2, P(+-1) = 1/4 = P(0)/2, excluded by strictness.
    CHECK(neighbourhood(vec(5, {1}), WalkParams(mpq_class(1, 2))) == std::vector<Residue>{0});
    // Brute-force definition on random inputs.
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::int64_t> xs(1 + rng() % 4);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 11);
        const auto d = oracle::brute_force_distribution(xs, mpq_class(1, 4), 11);
        std::vector<Residue> want;
        for (Residue x = 0; x < 11; ++x) {
            if (2 * d[x] > d[0]) want.push_back(x);
        }
        CHECK(neighbourhood(vec(11, xs), WalkParams(mpq_class(1, 4))) == want);
    }
}

TEST_CASE("Fourier expression reproduces rho") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7, 13, 101}[rng() % 5];
        std::vector<std::int64_t> xs(rng() % 12);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        const WalkParams params(mpq_class(1 + static_cast<long>(rng() % 4), 8));
        const double f = rho_via_fourier(vec(p, xs), params.with_mode(Arithmetic::floating));
        CHECK(std::abs(f - rho(vec(p, xs), params).value()) <= 1e-12);
    }
    CHECK_THROWS(fourier_eval(vec(5, {1}), WalkParams(mpq_class(1, 4)), 1));
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(WalkParams(mpq_class(0)), std::invalid_argument);
    CHECK_THROWS_AS(WalkParams(mpq_class(5, 4)), std::invalid_argument);
    CHECK_THROWS_AS(WalkParams(mpq_class(1, 100000)), std::invalid_argument);
    CHECK_NOTHROW(WalkParams(mpq_class(1, 100000), Arithmetic::floating));
    const WalkParams w(mpq_class(1, 4));
    CHECK(w.contraction() == mpq_class(7, 8));
    CHECK(w.stay_weight() == 6);
    CHECK(w.move_weight() == 1);
    CHECK(w.scale() == 8);
    CHECK(default_arithmetic(101, 1000) == Arithmetic::exact);
    CHECK(default_arithmetic(100003, 1000) == Arithmetic::floating);
}

TEST_CASE("vector operations") {
    const auto v = vec(5, {1, 0, -1});
    CHECK(v.support() == 2);
    CHECK(v[2] == 4);
    CHECK(v.power(3).size() == 9);
    CHECK(v.power(3).support() == 6);
    CHECK_THROWS(v.power(0));
    const std::vector<std::size_t> idx{2, 0};
    CHECK(as_signed(v.restrict(idx)) == std::vector<std::int64_t>{4, 1});
    const std::vector<std::size_t> bad{3};
    CHECK_THROWS_AS(v.restrict(bad), std::out_of_range);
    CHECK_THROWS(ZpVector(PrimeModulus(5), {5}));
    CHECK(v.concat(v) == v.power(2));
}

TEST_CASE("mode at zero fails for mu > 1/2 only through the max") {
    // mu = 1, v = (1): the law lives on {+-1}; rho is 1/2 and is not at 0.
    const auto d = distribution(vec(5, {1}), WalkParams(mpq_class(1)));
    CHECK(rho_of(d).exact() == mpq_class(1, 2));
    CHECK(d.at(0).exact() == 0);
}
