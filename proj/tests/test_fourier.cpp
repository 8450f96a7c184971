#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "loforge/fourier.hpp"
#include "loforge/rational.hpp"
#include "oracle.hpp"

using namespace loforge;

namespace {

ZpVector vec(std::uint64_t p, std::vector<std::int64_t> xs) { return ZpVector::from_signed(PrimeModulus(p), xs); }

std::vector<Residue> naive_sumset(const std::vector<Residue>& A, const std::vector<Residue>& B, std::uint64_t p) {
    std::set<Residue> s;
    for (Residue a : A) {
        for (Residue b : B) s.insert((a + b) % p);
    }
    return {s.begin(), s.end()};
}

std::vector<Residue> random_set(std::mt19937_64& rng, std::uint64_t p, std::size_t max_size) {
    std::set<Residue> s;
    const std::size_t want = 1 + rng() % max_size;
    while (s.size() < want) s.insert(rng() % p);
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("cos/log bounds hold for every residue at small primes") {
    for (std::uint64_t pv : {3ULL, 5ULL, 7ULL, 101ULL, 499ULL}) {
        const PrimeModulus p(pv);
        std::vector<Residue> xs(pv);
        for (Residue x = 0; x < pv; ++x) xs[x] = x;
        for (const char* m : {"1/64", "1/8", "1/4"}) {
            const auto reports = verify_cos_log_bounds(p, parse_rational(m), xs);
            CHECK(reports.size() == 2 * pv);
            CHECK(all_hold(reports));
        }
    }
}

TEST_CASE("elementary bounds hold on the grid") {
    const auto reports = verify_elementary_bounds(2000);
    CHECK_FALSE(reports.empty());
    CHECK(all_hold(reports));
}

TEST_CASE("level sets of (1,1) at p=5, k=4, alpha=1/2") {
    const auto pair = level_sets(vec(5, {1, 1}), 4, WalkParams(mpq_class(1, 4), Arithmetic::floating), 0.5);
    CHECK(pair.A == std::vector<Residue>{0});
    CHECK(pair.B == std::vector<Residue>{0, 1, 4});
    CHECK(pair.ell == 1);
    CHECK(pair.g == doctest::Approx(19.0 / 32.0).epsilon(1e-14));
    // F is G^k pointwise.
    for (std::size_t x = 0; x < 5; ++x) CHECK(pair.F[x] == doctest::Approx(std::pow(pair.G[x], 4)).epsilon(1e-12));
}

TEST_CASE("Fourier profile: direct and log-space evaluation agree") {
    // len * k crosses 1000 between the two calls.
    const auto v = vec(101, {1, 5, 17, 40});
    const auto direct = fourier_profile(v, 0.25, 200);
    const auto logspace = fourier_profile(v, 0.25, 300);
    for (std::size_t x = 0; x < 101; ++x) {
        const double want = std::pow(direct[x], 1.5);
        CHECK(logspace[x] == doctest::Approx(want).epsilon(1e-9));
    }
    // Independent product formula.
    for (Residue xi = 0; xi < 101; ++xi) {
        double g = 1.0;
        for (Residue x : v.entries()) g *= 0.75 + 0.25 * std::cos(2 * std::numbers::pi * double(x * xi) / 101.0);
        CHECK(direct[xi] == doctest::Approx(std::pow(g, 200)).epsilon(1e-9).scale(0));
    }
}

TEST_CASE("summand count") {
    CHECK(sumset_summands(0.25, 4) == 1);
    CHECK(sumset_summands(0.25, 1024) == 2);  // sqrt(256)/8 = 2
    CHECK(sumset_summands(0.25, 2304) == 3);  // sqrt(576)/8 = 3
}

TEST_CASE("sumset matches the naive double loop") {
    std::mt19937_64 rng(43);
    const PrimeModulus p(101);
    for (int t = 0; t < 200; ++t) {
        const auto A = random_set(rng, 101, 30);
        const auto B = random_set(rng, 101, 30);
        CHECK(sumset(A, B, p) == naive_sumset(A, B, 101));
    }
}

TEST_CASE("Cauchy-Davenport on random pairs") {
    std::mt19937_64 rng(47);
    const PrimeModulus p(101);
    for (int t = 0; t < 2000; ++t) {
        const auto A = random_set(rng, 101, 60);
        const auto B = random_set(rng, 101, 60);
        const auto r = cauchy_davenport_check(A, B, p);
        CHECK(r.holds);
        CHECK(r.exact_decision);
    }
    const std::vector<Residue> empty;
    const std::vector<Residue> one{1};
    CHECK_THROWS_AS(cauchy_davenport_check(empty, one, p), std::invalid_argument);
}

TEST_CASE("Cauchy-Davenport is tight on arithmetic progressions") {
    const PrimeModulus p(101);
    std::vector<Residue> A, B;
    for (Residue i = 0; i < 10; ++i) A.push_back(i);
    for (Residue i = 0; i < 7; ++i) B.push_back(i);
    const auto r = cauchy_davenport_check(A, B, p);
    CHECK(r.holds);
    CHECK(r.slack() == 0);
}

TEST_CASE("sumset inclusion on random level-set instances") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = std::vector<std::uint64_t>{11, 31, 101}[rng() % 3];
        std::vector<std::int64_t> xs(1 + rng() % 6);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        const std::size_t k = 1 + rng() % 4096;
        const double alpha = 0.05 + 0.9 * double(rng() % 1000) / 1000.0;
        const auto pair = level_sets(vec(p, xs), k, WalkParams(mpq_class(1, 4), Arithmetic::floating), alpha);
        const auto inc = check_sumset_inclusion(pair);
        CHECK(inc.report.holds);
        CHECK_FALSE(inc.witness.has_value());
    }
}

TEST_CASE("tensor bound on (1,1), k=4, p=7 uses the exact left side") {
    const auto r = verify_tensor_bound(vec(7, {1, 1}), 4, WalkParams(mpq_class(1, 4)));
    REQUIRE(r.lhs_exact.has_value());
    CHECK(*r.lhs_exact == "2428499/8388608");
    CHECK(r.holds);
    CHECK(r.law == "tensor_decrement");
}

TEST_CASE("tensor bound exhaustively at p=5, n <= 3, k <= 8") {
    const WalkParams params(mpq_class(1, 4));
    for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < n; ++i) count *= 5;
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::vector<std::int64_t> xs;
            for (std::size_t c = idx, i = 0; i < n; ++i, c /= 5) xs.push_back(static_cast<std::int64_t>(c % 5));
            for (std::size_t k = 1; k <= 8; ++k) CHECK(verify_tensor_bound(vec(5, xs), k, params).holds);
        }
    }
}

TEST_CASE("amplified bound: exact left side at small k, float at large k") {
    const auto small = verify_amplified_bound(vec(11, {1}), 4, WalkParams(mpq_class(1, 4)));
    REQUIRE(small.size() == 3);
    CHECK(*small[0].lhs_exact == "867/2048");
    CHECK(small[0].law == "amplified_k");
    CHECK(all_hold(small));
    const auto large = verify_amplified_bound(vec(11, {1}), 64, WalkParams(mpq_class(1, 4), Arithmetic::floating));
    CHECK(static_cast<double>(large[0].lhs) == doctest::Approx(0.10453305547666351).epsilon(1e-12));
    CHECK(all_hold(large));
    CHECK_THROWS(verify_amplified_bound(vec(11, {0}), 4, WalkParams(mpq_class(1, 4))));
}

TEST_CASE("structural laws hold on a random sample") {
    std::mt19937_64 rng(59);
    std::vector<ZpVector> sample;
    for (int t = 0; t < 30; ++t) {
        const std::uint64_t p = std::vector<std::uint64_t>{5, 7, 13}[rng() % 3];
        std::vector<std::int64_t> xs(1 + rng() % 9);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
        sample.push_back(vec(p, xs));
    }
    const auto reports = verify_structural_laws(sample, WalkParams(mpq_class(1, 4)), 99);
    CHECK(reports.size() > sample.size() * 4);
    for (const auto& r : reports) {
        INFO(r.law << " " << r.instance);
        CHECK(r.holds);
    }
}

TEST_CASE("neighbourhood size law against brute force") {
    const auto w = vec(7, {1, 2});
    const auto r = check_neighbourhood_size(w, WalkParams(mpq_class(1, 4)));
    const auto d = oracle::brute_force_distribution({1, 2}, mpq_class(1, 4), 7);
    std::size_t count = 0;
    for (const auto& q : d) count += (2 * q > d[0]);
    CHECK(static_cast<double>(r.lhs) == doctest::Approx(mpq_class(count * d[0]).get_d()));
    CHECK(r.holds);
}

TEST_CASE("layer-cake: quadrature equals the excess, the tail differs by the boundary term") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::int64_t> xs(1 + rng() % 5);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 31);
        const auto pair = level_sets(vec(31, xs), 1 + rng() % 16, WalkParams(mpq_class(1, 4), Arithmetic::floating), 0.5);
        const auto li = level_set_integral(pair);
        CHECK(static_cast<double>(li.quadrature) == doctest::Approx(static_cast<double>(li.excess_sum)).epsilon(1e-12));
        CHECK(static_cast<double>(li.tail_mass) ==
              doctest::Approx(static_cast<double>(li.quadrature + li.boundary)).epsilon(1e-12));
    }
}

TEST_CASE("Markov gate: above the mean, G cannot exceed alpha everywhere") {
    const auto pair = level_sets(vec(13, {1, 3}), 2, WalkParams(mpq_class(1, 4), Arithmetic::floating), 0.5);
    CHECK(markov_gate(pair, pair.g + 1e-9));
    CHECK(markov_gate(pair, 0.99));
}
