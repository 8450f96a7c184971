#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "loforge/serialize.hpp"

using namespace loforge;

TEST_CASE("vector round trip") {
    const std::vector<std::int64_t> xs{1, -2, 0, 7};
    const auto v = ZpVector::from_signed(PrimeModulus(11), xs);
    const auto j = to_json(v);
    CHECK(j.dump() == R"({"entries":[1,9,0,7],"p":11})");
    CHECK(vector_from_json(j) == v);
    CHECK(vector_from_json(nlohmann::json::parse(j.dump())) == v);
}

TEST_CASE("exact distribution round trip") {
    const std::vector<std::int64_t> xs{1, 2};
    const auto d = distribution(ZpVector::from_signed(PrimeModulus(5), xs), WalkParams(mpq_class(1, 4)));
    const auto j = to_json(d);
    CHECK(j["probabilities"][0] == "9/16");
    CHECK(j["mu"] == "1/4");
    CHECK(j["mode"] == "exact");
    CHECK(distribution_from_json(nlohmann::json::parse(j.dump())) == d);
}

TEST_CASE("float distribution round trip is bit-exact") {
    const std::vector<std::int64_t> xs{1, 3, 5, 7, 9};
    const auto d = distribution(ZpVector::from_signed(PrimeModulus(13), xs),
                                WalkParams(mpq_class(1, 3), Arithmetic::floating));
    const auto back = distribution_from_json(nlohmann::json::parse(to_json(d).dump()));
    CHECK(back == d);
    CHECK(back.values() == d.values());
}

TEST_CASE("report formats") {
    std::vector<InequalityReport> reports{compare_le("law_a", "x=1", mpq_class(1, 3), mpq_class(1, 2)),
                                          compare_le("law_b", "x=2", 2.0L, 1.0L)};
    CHECK(reports[0].holds);
    CHECK(reports[0].exact_decision);
    CHECK_FALSE(reports[1].holds);
    std::ostringstream jl;
    write_jsonl(jl, reports);
    std::istringstream lines(jl.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("law"));
        CHECK(j.contains("holds"));
        ++count;
    }
    CHECK(count == 2);
    std::ostringstream csv;
    write_csv_summary(csv, reports);
    CHECK(csv.str().rfind("instance_id,law,instance,lhs,rhs,slack,holds\n", 0) == 0);
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("number formatting round-trips doubles") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 0.10453305547666351}) CHECK(std::stod(format_number(x)) == x);
}
