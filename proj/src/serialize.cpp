#include "loforge/serialize.hpp"

#include <stdexcept>

#include "loforge/rational.hpp"

namespace loforge {

using nlohmann::json;

namespace {

json index_array(IndexSet s) {
    std::sort(s.begin(), s.end());
    return json(s);
}

}  // namespace

json to_json(const ZpVector& v) {
    return json{{"p", v.modulus().value()}, {"entries", std::vector<Residue>(v.entries().begin(), v.entries().end())}};
}

ZpVector vector_from_json(const json& j) {
    const PrimeModulus p(j.at("p").get<std::uint64_t>());
    return ZpVector(p, j.at("entries").get<std::vector<Residue>>());
}

json to_json(const WalkDistribution& d) {
    json probs = json::array();
    if (d.is_exact()) {
        for (Residue x = 0; x < d.modulus().value(); ++x) probs.push_back(d.at(x).str());
    } else {
        for (double x : d.values()) probs.push_back(x);
    }
    return json{{"p", d.modulus().value()},
                {"mu", to_string(d.params().mu(), true)},
                {"mode", to_string(d.params().mode())},
                {"length", d.length()},
                {"probabilities", probs}};
}

WalkDistribution distribution_from_json(const json& j) {
    const PrimeModulus p(j.at("p").get<std::uint64_t>());
    const WalkParams params(parse_rational(j.at("mu").get<std::string>()),
                            parse_arithmetic(j.at("mode").get<std::string>()));
    const std::size_t length = j.value("length", std::size_t{0});
    const auto& probs = j.at("probabilities");
    if (params.exact()) {
        std::vector<mpq_class> q;
        q.reserve(probs.size());
        for (const auto& x : probs) q.push_back(parse_rational(x.get<std::string>()));
        return WalkDistribution::from_exact(p, params, length, q);
    }
    return WalkDistribution::from_values(p, params, length, probs.get<std::vector<double>>());
}

json to_json(const Probability& p) {
    if (p.is_exact()) return to_string(p.exact(), true);
    return p.value();
}

json to_json(const GreedyDecomposition& g) {
    json trace = json::array();
    for (const auto& r : g.rho_trace) trace.push_back(to_json(r));
    return json{{"T", index_array(g.T)}, {"selection_order", g.T}, {"rho_trace", trace},
                {"terminal_rho", to_json(g.terminal_rho)}};
}

json to_json(const IteratedDecomposition& it) {
    json blocks = json::array();
    for (const auto& b : it.blocks) blocks.push_back(index_array(b));
    return json{{"blocks", blocks},
                {"S", index_array(it.S)},
                {"T", index_array(it.T)},
                {"selected_block", it.selected},
                {"k", it.k},
                {"d", it.d},
                {"d_convention", std::string(to_string(it.budget))},
                {"hypothesis_met", it.hypothesis_met},
                {"rho_S", to_json(it.rho_S)},
                {"rho_T_power", to_json(it.rho_T_power)},
                {"inequality_holds", it.inequality_holds},
                {"outcome", it.outcome()}};
}

json to_json(const InverseLOCertificate& c) {
    json j{{"status", std::string(to_string(c.status))},
           {"k", c.k},
           {"d", c.d},
           {"d_convention", std::string(to_string(c.budget))},
           {"rho_v", to_json(c.rho_v)},
           {"bound_rhs", static_cast<double>(c.bound_rhs)},
           {"holds", c.holds}};
    if (c.status == InverseLOCertificate::Status::vacuous) {
        j["vacuous_reason"] = c.vacuous_reason;
    } else {
        j["T"] = index_array(c.T);
        j["S"] = index_array(c.S);
        j["neighbourhood"] = c.neighbourhood;
        j["neighbourhood_size"] = c.neighbourhood.size();
        j["exceptions"] = index_array(c.exceptions);
        j["exception_count"] = c.exceptions.size();
        j["exception_budget"] = c.k * c.d;
    }
    return j;
}

json to_json(const Signature& s) {
    return json{{"S", index_array(s.S)}, {"T", index_array(s.T)}, {"Tprime", index_array(s.Tprime)},
                {"w1", to_json(s.w1)}, {"w2", to_json(s.w2)}};
}

json to_json(const SignatureResult& s) {
    return json{{"signature", to_json(s.sig)},
                {"d", s.d},
                {"d_convention", std::string(to_string(s.iterated.budget))},
                {"hypothesis_met", s.hypothesis_met},
                {"invariants_hold", s.invariant_failure.empty()},
                {"invariant_failure", s.invariant_failure}};
}

json to_json(const LevelSetPair& pair) {
    return json{{"p", pair.p}, {"alpha", pair.alpha}, {"k", pair.k}, {"ell", pair.ell},
                {"A", pair.A}, {"B", pair.B}, {"g", pair.g}};
}

json to_json(const CensusResult& c) {
    return json{{"n", c.n},
                {"total", c.total.get_str()},
                {"singular", c.singular_count},
                {"probability", to_string(c.probability, true)}};
}

json to_json(const MonteCarloEstimate& m) {
    return json{{"n", m.n},         {"trials", m.trials}, {"hits", m.hits},   {"estimate", m.estimate},
                {"ci_lo", m.ci_lo}, {"ci_hi", m.ci_hi},   {"seed", m.seed},   {"regime", std::string(to_string(m.regime))}};
}

json to_json(const ExactQResult& q) {
    return json{{"n", q.n},
                {"p", q.p},
                {"mu", to_string(q.mu, true)},
                {"beta", to_string(q.beta, true)},
                {"membership", std::string(to_string(q.membership))},
                {"V_size", q.V.size()},
                {"Q", to_string(q.Q, true)}};
}

json to_json(const FiberCensus& f) {
    json fibers = json::array();
    for (const auto& r : f.fibers) {
        json rec{{"signature", to_json(r.sig)},
                 {"size", r.size},
                 {"rho_w1", to_json(r.rho_w1)},
                 {"rho_w2", to_json(r.rho_w2)},
                 {"bound", to_string(r.bound, true)},
                 {"holds", r.holds}};
        if (!r.gate_failure.empty()) rec["gate_failure"] = r.gate_failure;
        fibers.push_back(std::move(rec));
    }
    return json{{"n", f.n},
                {"p", f.p},
                {"k", f.k},
                {"vectors", f.vectors},
                {"fiber_count", f.fibers.size()},
                {"partition_ok", f.partition_ok},
                {"all_hold", f.all_hold},
                {"fibers", fibers}};
}

}  // namespace loforge
