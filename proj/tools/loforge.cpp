// loforge: command-line front end for the walk engine, the inverse
// Littlewood-Offord machinery, the Fourier verifiers and the matrix lab.
//
// Exit status: 0 on completion, 2 when a verified inequality fails, 1 on
// usage errors and infeasible requests.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loforge/fourier.hpp"
#include "loforge/inverse_lo.hpp"
#include "loforge/matrix_lab.hpp"
#include "loforge/parallel.hpp"
#include "loforge/rational.hpp"
#include "loforge/report.hpp"
#include "loforge/serialize.hpp"

using namespace loforge;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string subcommand;
    std::uint64_t p = 5;
    std::string n;
    std::string mu = "1/4";
    std::string mode = "auto";
    std::size_t k = 1;
    std::string beta = "auto";
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000;
    std::optional<unsigned> workers;
    std::string output;
    std::string format;
    bool paper_ref = false;
    std::string alpha = "1/2";
    std::string suite = "all";
    std::string membership = "rho_1";
    std::string budget = "rho";
};

struct Report {
    json config;   ///< resolved inputs; hashed
    json body = json::object();
    std::string text;
    std::vector<InequalityReport> reports;
    std::string csv;  ///< tabular form when the command has one
    bool red = false;
};

const std::map<std::string, std::string>& formula_notes() {
    static const std::map<std::string, std::string> notes{
        {"rho", "rho_mu(v) = max_x P(X_mu(v) = x), X_mu(v) = sum_i eps_i v_i over Z_p with P(eps = +-1) = mu/2, "
                "P(eps = 0) = 1 - mu; for mu <= 1/2 the maximum sits at x = 0"},
        {"dist", "law of X_mu(v) on Z_p by n three-point convolutions"},
        {"nbhd", "neighbourhood N_mu(w) = {x : P(X_mu(w) = x) > P(X_mu(w) = 0)/2}, with |N_mu(w)| rho_mu(w) <= 2"},
        {"decompose", "greedy short subvector: grow T while some v_i gives rho_mu(v_T v_i) <= (1 - mu/2) rho_mu(v_T); "
                      "then v_i lies in N_mu(v_T) for i outside T and |T| <= ceil((2/mu) log(1/rho_mu(v))) + 1"},
        {"iterate", "k rounds of the greedy process on the remaining coordinates; rho_mu(v_S) <= rho_mu(v_T^k) "
                    "for the block T maximizing rho_mu(v_{T_j}^k)"},
        {"certify", "if |v| >= kd and rho_mu(v) >= 2/p then all but kd coordinates lie in N_mu(v_T) with "
                    "|N_mu(v_T)| <= 256 k^{-1/5} / rho_mu(v)"},
        {"signature", "f(v) = (S, T, T', v_T, v_T') with T' the greedy set of v_S"},
        {"levelsets", "A = {xi : F(xi) > alpha}, B = {xi : G(xi) > alpha} with G = f_{mu,v}, F = G^k; "
                      "the ell-fold sumset of A lies in B for ell = max(1, floor(sqrt(mu k)/8))"},
        {"verify", "cos: mu ||x/p||^2 <= -log(1 - mu + mu cos(2 pi x/p)) <= 32 mu ||x/p||^2; "
                   "tensor: rho_mu(v^k) <= (rho^{(k-1)/k} + 8/sqrt(mu k)) rho + 1/p; "
                   "amplified: rho_mu(v^k) <= 64 k^{-1/5} rho + 1/p; sumset: ell A inside B; "
                   "cauchy-davenport: |A + B| >= min(|A| + |B| - 1, p); structural: monotonicity, Holder "
                   "across blocks, neighbourhood size, spread"},
        {"census", "exact count of singular matrices among all 2^{n(n+1)/2} symmetric +-1 matrices"},
        {"montecarlo", "seeded estimate of P(det M_n = 0) with a 99% Wilson interval"},
        {"exactq", "Q_n(beta) = sum over v != 0 with rho(v) >= beta of max_w P(M_n v = w), and "
                   "P(exists v in V: M_n v = 0) <= Q_n(beta)"},
        {"fibers", "partition of Z_p^n \\ {0} by signature; each fiber has at most "
                   "(2/rho(w1))^{n-|S|} (2/rho(w2))^{|S|-|T'|} elements"},
        {"rowbound", "max_w P(M v = w) <= rho_1(v_T')^{|S|-|T'|} rho_1(v_S)^{n-|S|} <= the same with rho_mu"},
        {"compare", "singularity probability against n^2 2^{1-n} and exp(-2^{-13} sqrt(n log n))"},
    };
    return notes;
}

// ---------------------------------------------------------------------------
// Input helpers

std::vector<std::int64_t> parse_list(const std::string& text) {
    std::vector<std::int64_t> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad vector entry '" + item + "'");
        }
    }
    return out;
}

std::size_t parse_count(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size() || v < 1) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + " must be a positive integer, got '" + text + "'");
    }
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto n = parse_count(text, "--n");
        return {n, n};
    }
    return {parse_count(text.substr(0, dots), "--n"), parse_count(text.substr(dots + 2), "--n")};
}

mpq_class parse_rational_arg(const std::string& text, const char* what) {
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

struct Resolved {
    PrimeModulus p;
    WalkParams params;
};

Resolved resolve(const Options& o, Report& r, std::size_t length_hint) {
    const PrimeModulus p(o.p);
    const mpq_class mu = parse_rational_arg(o.mu, "--mu");
    const Arithmetic mode = o.mode == "auto" ? default_arithmetic(o.p, length_hint) : parse_arithmetic(o.mode);
    WalkParams params(mu, mode);
    r.config["p"] = o.p;
    r.config["mu"] = to_string(mu, true);
    r.config["mode"] = std::string(to_string(mode));
    return {p, params};
}

ZpVector vector_arg(const Options& o, const PrimeModulus& p, Report& r) {
    const auto xs = parse_list(o.n);
    r.config["v"] = xs;
    return ZpVector::from_signed(p, xs);
}

DBudget budget_arg(const Options& o, Report& r) {
    if (o.budget != "rho" && o.budget != "p") throw UsageError("--budget must be 'rho' or 'p'");
    r.config["budget"] = o.budget;
    return o.budget == "rho" ? DBudget::from_rho : DBudget::from_p;
}

std::string join(const std::vector<std::size_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s;
}

std::string join_residues(const std::vector<Residue>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s;
}

void add_reports(Report& r, std::vector<InequalityReport> reps) {
    for (auto& x : reps) {
        r.red = r.red || !x.holds;
        r.reports.push_back(std::move(x));
    }
}

std::string summarize(const std::vector<InequalityReport>& reps) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_law;
    for (const auto& x : reps) {
        auto& [total, bad] = by_law[x.law];
        ++total;
        bad += !x.holds;
    }
    std::ostringstream os;
    for (const auto& [law, counts] : by_law) {
        os << law << ": " << counts.first << " checked, " << counts.second << " violated\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Walk commands

void cmd_rho(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto v = vector_arg(o, p, r);
    const auto d = distribution(v, params);
    const Probability value = rho_of(d);
    r.body["rho"] = to_json(value);
    r.body["argmax"] = d.argmax();
    if (params.mu() <= mpq_class(1, 2)) r.body["rho_fourier"] = rho_via_fourier(v, params);
    r.text = value.str() + "\n";
}

void cmd_dist(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto d = distribution(vector_arg(o, p, r), params);
    r.body = to_json(d);
    for (Residue x = 0; x < p.value(); ++x) r.text += std::to_string(x) + "\t" + d.at(x).str() + "\n";
}

void cmd_nbhd(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto v = vector_arg(o, p, r);
    const auto nb = neighbourhood(v, params);
    r.body["neighbourhood"] = nb;
    r.body["size"] = nb.size();
    r.body["rho"] = to_json(rho(v, params));
    add_reports(r, {check_neighbourhood_size(v, params)});
    r.text = join_residues(nb) + "\n";
}

void cmd_decompose(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto v = vector_arg(o, p, r);
    const auto g = greedy_decompose(v, params);
    const auto audit = audit_greedy(v, params, g);
    r.body = to_json(g);
    r.body["audit"] = audit.empty() ? "ok" : audit;
    r.body["budget_d"] = length_budget(rho(v, params), params, p.value());
    r.red = !audit.empty();
    std::ostringstream os;
    os << "T = {" << join(g.sorted()) << "} (selection order " << join(g.T) << ")\n";
    os << "rho trace:";
    for (const auto& x : g.rho_trace) os << " " << x.str();
    os << "\naudit: " << (audit.empty() ? "ok" : audit) << "\n";
    r.text = os.str();
}

void cmd_iterate(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size() * o.k);
    const auto v = vector_arg(o, p, r);
    r.config["k"] = o.k;
    const auto it = iterated_decompose(v, params, o.k, budget_arg(o, r));
    r.body = to_json(it);
    r.red = !it.inequality_holds;
    std::ostringstream os;
    for (std::size_t j = 0; j < it.blocks.size(); ++j) os << "T_" << j + 1 << " = {" << join(it.blocks[j]) << "}\n";
    os << "S = {" << join(it.S) << "}, T = T_" << it.selected + 1 << ", d = " << it.d << "\n";
    os << "rho(v_S) = " << it.rho_S.str() << " <= rho(v_T^k) = " << it.rho_T_power.str() << ": "
       << (it.inequality_holds ? "holds" : "VIOLATED") << "\n";
    if (!it.hypothesis_met) os << "note: k*d > n, the length hypothesis is not met\n";
    r.text = os.str();
}

void cmd_certify(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size() * o.k);
    const auto v = vector_arg(o, p, r);
    r.config["k"] = o.k;
    const auto c = certify_inverse_lo(v, params, o.k, budget_arg(o, r));
    r.body = to_json(c);
    r.red = c.status == InverseLOCertificate::Status::violated;
    std::ostringstream os;
    os << "status: " << to_string(c.status);
    if (c.status == InverseLOCertificate::Status::vacuous) {
        os << " (" << c.vacuous_reason << ")\n";
    } else {
        os << "\nT = {" << join(c.T) << "}, |N(v_T)| = " << c.neighbourhood.size() << " <= "
           << format_number(c.bound_rhs) << ", exceptions = " << c.exceptions.size() << " <= " << c.k * c.d << "\n";
    }
    r.text = os.str();
}

void cmd_signature(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size() * o.k);
    const auto v = vector_arg(o, p, r);
    r.config["k"] = o.k;
    const auto s = signature(v, params, o.k, budget_arg(o, r));
    r.body = to_json(s);
    r.red = !s.invariant_failure.empty();
    r.text = s.sig.key() + "\n" + (s.invariant_failure.empty() ? "" : "invariants: " + s.invariant_failure + "\n");
}

void cmd_levelsets(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto v = vector_arg(o, p, r);
    const mpq_class alpha = parse_rational_arg(o.alpha, "--alpha");
    r.config["k"] = o.k;
    r.config["alpha"] = to_string(alpha, true);
    const auto pair = level_sets(v, o.k, params.with_mode(Arithmetic::floating), alpha.get_d());
    const auto inc = check_sumset_inclusion(pair);
    const auto li = level_set_integral(pair);
    r.body = to_json(pair);
    r.body["sumset_inclusion"] = to_json(inc.report);
    if (inc.witness) r.body["witness"] = {{"sum", *inc.witness}, {"summands", inc.witness_summands}};
    r.body["markov_gate"] = markov_gate(pair, pair.alpha);
    r.body["layer_cake"] = {{"excess", static_cast<double>(li.excess_sum)},
                            {"integral", static_cast<double>(li.quadrature)},
                            {"tail_mass", static_cast<double>(li.tail_mass)},
                            {"boundary_term", static_cast<double>(li.boundary)}};
    add_reports(r, {inc.report});
    std::ostringstream os;
    os << "A = {" << join_residues(pair.A) << "}\nB = {" << join_residues(pair.B) << "}\nell = " << pair.ell
       << ", g = " << format_number(pair.g) << "\nsumset inclusion: " << (inc.report.holds ? "holds" : "VIOLATED")
       << "\n";
    r.text = os.str();
}

// ---------------------------------------------------------------------------
// Verifier suites

std::vector<InequalityReport> suite_cos(const PrimeModulus& p) {
    std::vector<Residue> xs(p.value());
    for (Residue x = 0; x < p.value(); ++x) xs[x] = x;
    std::vector<InequalityReport> out;
    for (const mpq_class& mu : {mpq_class(1, 64), mpq_class(1, 32), mpq_class(1, 16), mpq_class(1, 8),
                                mpq_class(3, 16), mpq_class(1, 4)}) {
        auto part = verify_cos_log_bounds(p, mu, xs);
        out.insert(out.end(), part.begin(), part.end());
    }
    auto elem = verify_elementary_bounds();
    out.insert(out.end(), elem.begin(), elem.end());
    return out;
}

std::vector<std::int64_t> draw_vector(std::mt19937_64& rng, std::size_t n, std::uint64_t p, bool nonzero) {
    std::vector<std::int64_t> xs(n);
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % p);
    if (nonzero && std::all_of(xs.begin(), xs.end(), [](std::int64_t x) { return x == 0; })) {
        xs[0] = 1 + static_cast<std::int64_t>(rng() % (p - 1));
    }
    return xs;
}

std::vector<InequalityReport> suite_tensor(const PrimeModulus& p, const Options& o, const mpq_class& mu, bool amplified,
                                           std::mt19937_64& rng) {
    std::vector<InequalityReport> out;
    for (std::uint64_t t = 0; t < o.trials; ++t) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t k = 1 + rng() % 8;
        const auto v = ZpVector::from_signed(p, draw_vector(rng, n, p.value(), amplified));
        const Arithmetic mode = o.mode == "auto" ? default_arithmetic(p.value(), n * k) : parse_arithmetic(o.mode);
        const WalkParams params(mu, mode);
        if (amplified) {
            auto part = verify_amplified_bound(v, k, params);
            out.insert(out.end(), part.begin(), part.end());
        } else {
            out.push_back(verify_tensor_bound(v, k, params));
        }
    }
    return out;
}

std::vector<InequalityReport> suite_sumset(const PrimeModulus& p, const Options& o, const mpq_class& mu,
                                           std::mt19937_64& rng) {
    std::vector<InequalityReport> out;
    const WalkParams params(mu, Arithmetic::floating);
    for (std::uint64_t t = 0; t < o.trials; ++t) {
        const auto v = ZpVector::from_signed(p, draw_vector(rng, 1 + rng() % 6, p.value(), false));
        const std::size_t k = 1 + rng() % 20000;
        const double alpha = 0.01 + 0.98 * static_cast<double>(rng() % 10000) / 10000.0;
        out.push_back(check_sumset_inclusion(level_sets(v, k, params, alpha)).report);
    }
    return out;
}

std::vector<InequalityReport> suite_cauchy_davenport(const PrimeModulus& p, const Options& o, std::mt19937_64& rng) {
    std::vector<InequalityReport> out;
    for (std::uint64_t t = 0; t < o.trials; ++t) {
        std::set<Residue> a, b;
        const std::size_t na = 1 + rng() % p.value(), nb = 1 + rng() % p.value();
        while (a.size() < na) a.insert(rng() % p.value());
        while (b.size() < nb) b.insert(rng() % p.value());
        const std::vector<Residue> A(a.begin(), a.end()), B(b.begin(), b.end());
        out.push_back(cauchy_davenport_check(A, B, p));
    }
    return out;
}

std::vector<InequalityReport> suite_structural(const PrimeModulus& p, const Options& o, const mpq_class& mu,
                                               std::mt19937_64& rng) {
    std::vector<ZpVector> sample;
    for (std::uint64_t t = 0; t < o.trials; ++t) {
        sample.push_back(ZpVector::from_signed(p, draw_vector(rng, 1 + rng() % 8, p.value(), false)));
    }
    const Arithmetic mode = o.mode == "auto" ? default_arithmetic(p.value(), 64) : parse_arithmetic(o.mode);
    return verify_structural_laws(sample, WalkParams(mu, mode), o.seed);
}

void cmd_verify(const Options& o, Report& r) {
    static const std::map<std::string, std::vector<std::string>> suites{
        {"cos", {"cos"}},
        {"tensor", {"tensor"}},
        {"amplified", {"amplified"}},
        {"structural", {"structural"}},
        {"sumset", {"sumset"}},
        {"cauchy-davenport", {"cauchy-davenport"}},
        {"fourier", {"cos", "tensor", "amplified", "sumset", "cauchy-davenport"}},
        {"all", {"cos", "tensor", "amplified", "sumset", "cauchy-davenport", "structural"}},
    };
    const auto found = suites.find(o.suite);
    if (found == suites.end()) {
        throw UsageError("unknown suite '" + o.suite +
                         "'; expected cos, tensor, amplified, structural, sumset, cauchy-davenport, fourier or all");
    }
    const PrimeModulus p(o.p);
    const mpq_class mu = parse_rational_arg(o.mu, "--mu");
    r.config["p"] = o.p;
    r.config["mu"] = to_string(mu, true);
    r.config["mode"] = o.mode;
    r.config["suite"] = o.suite;
    r.config["seed"] = o.seed;
    r.config["trials"] = o.trials;
    std::uint64_t stream = 0;
    for (const auto& name : found->second) {
        // Each suite draws from its own stream so suites compose without shifting each other.
        std::seed_seq seq{o.seed, ++stream};
        std::mt19937_64 rng(seq);
        if (name == "cos") add_reports(r, suite_cos(p));
        if (name == "tensor") add_reports(r, suite_tensor(p, o, mu, false, rng));
        if (name == "amplified") add_reports(r, suite_tensor(p, o, mu, true, rng));
        if (name == "sumset") add_reports(r, suite_sumset(p, o, mu, rng));
        if (name == "cauchy-davenport") add_reports(r, suite_cauchy_davenport(p, o, rng));
        if (name == "structural") add_reports(r, suite_structural(p, o, mu, rng));
    }
    std::size_t violated = 0;
    for (const auto& x : r.reports) violated += !x.holds;
    r.body["checked"] = r.reports.size();
    r.body["violated"] = violated;
    r.text = summarize(r.reports);
}

// ---------------------------------------------------------------------------
// Matrix commands

std::size_t size_arg(const Options& o, Report& r) {
    const auto n = parse_count(o.n, "--n");
    r.config["n"] = n;
    return n;
}

void cmd_census(const Options& o, Report& r, unsigned workers) {
    const auto c = singular_census(size_arg(o, r), workers);
    r.body = to_json(c);
    r.text = std::to_string(c.singular_count) + "/" + c.total.get_str() + "\n";
    r.csv = "n,singular,total,probability\n" + std::to_string(c.n) + "," + std::to_string(c.singular_count) + "," +
            c.total.get_str() + "," + to_string(c.probability, true) + "\n";
}

void cmd_montecarlo(const Options& o, Report& r, unsigned workers) {
    const auto n = size_arg(o, r);
    r.config["seed"] = o.seed;
    r.config["trials"] = o.trials;
    const auto m = montecarlo_singularity(n, o.trials, o.seed, workers);
    r.body = to_json(m);
    std::ostringstream os;
    os << format_number(m.estimate) << " [" << format_number(m.ci_lo) << ", " << format_number(m.ci_hi) << "] ("
       << m.hits << "/" << m.trials << ", " << to_string(m.regime) << ")\n";
    r.text = os.str();
    r.csv = "n,trials,hits,estimate,ci_lo,ci_hi,seed\n" + std::to_string(n) + "," + std::to_string(m.trials) + "," +
            std::to_string(m.hits) + "," + format_number(m.estimate) + "," + format_number(m.ci_lo) + "," +
            format_number(m.ci_hi) + "," + std::to_string(m.seed) + "\n";
}

mpq_class beta_arg(const Options& o, std::size_t n, Report& r) {
    mpq_class beta;
    if (o.beta == "auto") {
        beta = mpq_class(static_cast<unsigned long>(n), static_cast<unsigned long>(o.p));
        beta.canonicalize();
        r.config["beta_source"] = "auto = n/p";
    } else {
        beta = parse_rational_arg(o.beta, "--beta");
    }
    r.config["beta"] = to_string(beta, true);
    return beta;
}

void cmd_exactq(const Options& o, Report& r, unsigned workers) {
    const auto n = size_arg(o, r);
    auto [p, params] = resolve(o, r, n);
    const mpq_class beta = beta_arg(o, n, r);
    if (o.membership != "rho_1" && o.membership != "rho_mu") throw UsageError("--membership must be rho_1 or rho_mu");
    const Membership m = o.membership == "rho_1" ? Membership::rho_1 : Membership::rho_mu;
    r.config["membership"] = o.membership;
    const auto q = exact_Q(n, p, params, beta, m, workers);
    r.body = to_json(q);
    std::ostringstream os;
    os << "beta = " << to_string(beta, true) << (o.beta == "auto" ? " (auto = n/p)" : "") << "\n";
    os << "|V| = " << q.V.size() << "\nQ = " << to_string(q.Q, true) << "\n";
    const long double kernel_cost =
        std::ldexp(1.0L, static_cast<int>(SymmetricSignMatrix::triangle_size(n))) * static_cast<long double>(q.V.size());
    if (SymmetricSignMatrix::triangle_size(n) <= 32 && kernel_cost <= kExhaustiveBudget) {
        const mpq_class kernel = kernel_event_probability(n, q.V);
        r.body["kernel_event_probability"] = to_string(kernel, true);
        add_reports(r, {compare_le("kernel_event_le_Q", "n=" + std::to_string(n) + " p=" + std::to_string(o.p), kernel, q.Q)});
        os << "P(exists v in V: Mv = 0) = " << to_string(kernel, true) << " <= Q: "
           << (r.reports.back().holds ? "holds" : "VIOLATED") << "\n";
    }
    r.text = os.str();
}

void cmd_fibers(const Options& o, Report& r, unsigned workers) {
    const auto n = size_arg(o, r);
    auto [p, params] = resolve(o, r, n);
    const mpq_class beta = beta_arg(o, n, r);
    r.config["k"] = o.k;
    const auto f = fiber_census(n, p, params, o.k, beta, workers);
    r.body = to_json(f);
    r.red = !f.all_hold || !f.partition_ok;
    std::ostringstream os;
    os << f.vectors << " vectors in " << f.fibers.size() << " fibers; partition "
       << (f.partition_ok ? "ok" : "BROKEN") << "; fiber bounds " << (f.all_hold ? "hold" : "VIOLATED") << "\n";
    r.text = os.str();
    std::ostringstream csv;
    csv << "signature,size,bound,holds\n";
    for (const auto& rec : f.fibers) {
        csv << '"' << rec.sig.key() << "\"," << rec.size << "," << to_string(rec.bound, true) << ","
            << (rec.holds ? "true" : "false") << "\n";
    }
    r.csv = csv.str();
}

void cmd_rowbound(const Options& o, Report& r) {
    const auto xs = parse_list(o.n);
    auto [p, params] = resolve(o, r, xs.size());
    const auto v = vector_arg(o, p, r);
    r.config["k"] = o.k;
    const auto s = signature(v, params.with_mode(Arithmetic::exact), o.k, budget_arg(o, r));
    r.body["signature"] = to_json(s.sig);
    r.body["max_image_probability"] = to_string(max_image_probability(v), true);
    add_reports(r, verify_row_reveal_bound(v, s.sig, params));
    r.text = summarize(r.reports);
}

void cmd_compare(const Options& o, Report& r, unsigned workers) {
    const auto [lo, hi] = parse_range(o.n);
    r.config["n"] = o.n;
    r.config["seed"] = o.seed;
    r.config["trials"] = o.trials;
    const auto rows = conjecture_compare(lo, hi, o.trials, o.seed, workers);
    json arr = json::array();
    std::ostringstream csv;
    csv << "n,estimate,source,conjecture,theorem_bound,ratio_conjecture,ratio_theorem\n";
    for (const auto& row : rows) {
        arr.push_back({{"n", row.n},
                       {"estimate", row.estimate},
                       {"source", row.source},
                       {"conjecture", row.conjecture},
                       {"theorem_bound", row.theorem_bound},
                       {"ratio_conjecture", row.ratio_conjecture},
                       {"ratio_theorem", row.ratio_theorem}});
        csv << row.n << "," << format_number(row.estimate) << "," << row.source << "," << format_number(row.conjecture)
            << "," << format_number(row.theorem_bound) << "," << format_number(row.ratio_conjecture) << ","
            << format_number(row.ratio_theorem) << "\n";
    }
    r.body["rows"] = arr;
    r.csv = csv.str();
    r.text = r.csv;
}

// ---------------------------------------------------------------------------
// Output

json header_of(const Options& o, const Report& r, unsigned workers) {
    json hashed = r.config;
    hashed["subcommand"] = o.subcommand;
    json h{{"tool", "loforge"}, {"subcommand", o.subcommand}, {"config", r.config}, {"workers", workers},
           {"input_sha256", sha256_hex(hashed.dump())}};
    return h;
}

void emit(std::ostream& os, const std::string& format, const Options& o, const Report& r, unsigned workers) {
    const json header = header_of(o, r, workers);
    if (format == "text") {
        os << r.text;
    } else if (format == "json") {
        json body = r.body;
        if (!r.reports.empty()) {
            json reps = json::array();
            for (const auto& x : r.reports) reps.push_back(to_json(x));
            body["reports"] = reps;
        }
        os << json{{"header", header}, {"body", body}}.dump(2) << "\n";
    } else if (format == "jsonl") {
        os << json{{"header", header}}.dump() << "\n";
        if (r.reports.empty()) {
            os << r.body.dump() << "\n";
        } else {
            write_jsonl(os, r.reports);
        }
    } else if (format == "csv") {
        for (const auto& [key, value] : header["config"].items()) os << "# " << key << "=" << value.dump() << "\n";
        os << "# input_sha256=" << header["input_sha256"].get<std::string>() << "\n";
        if (!r.reports.empty()) {
            write_csv_summary(os, r.reports);
        } else if (!r.csv.empty()) {
            os << r.csv;
        } else {
            os << "key,value\n";
            for (const auto& [key, value] : r.body.items()) os << key << "," << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    } else {
        throw UsageError("--format must be text, json, jsonl or csv");
    }
}

std::string default_format(const std::string& sub) {
    if (sub == "verify") return "jsonl";
    if (sub == "compare") return "csv";
    return "text";
}

int run(const Options& o) {
    if (o.paper_ref) {
        std::cout << o.subcommand << ": " << formula_notes().at(o.subcommand) << "\n";
        return 0;
    }
    const unsigned workers = resolve_workers(o.workers);
    Report r;
    r.config = json::object();
    const auto& s = o.subcommand;
    if (s == "rho") cmd_rho(o, r);
    else if (s == "dist") cmd_dist(o, r);
    else if (s == "nbhd") cmd_nbhd(o, r);
    else if (s == "decompose") cmd_decompose(o, r);
    else if (s == "iterate") cmd_iterate(o, r);
    else if (s == "certify") cmd_certify(o, r);
    else if (s == "signature") cmd_signature(o, r);
    else if (s == "levelsets") cmd_levelsets(o, r);
    else if (s == "verify") cmd_verify(o, r);
    else if (s == "census") cmd_census(o, r, workers);
    else if (s == "montecarlo") cmd_montecarlo(o, r, workers);
    else if (s == "exactq") cmd_exactq(o, r, workers);
    else if (s == "fibers") cmd_fibers(o, r, workers);
    else if (s == "rowbound") cmd_rowbound(o, r);
    else if (s == "compare") cmd_compare(o, r, workers);

    const std::string format = o.format.empty() ? default_format(s) : o.format;
    if (o.output.empty()) {
        emit(std::cout, format, o, r, workers);
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + o.output);
        emit(out, format, o, r, workers);
        if (!out) throw std::runtime_error("write to " + o.output + " failed");
        std::cout << r.text;
    }
    return r.red ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and verified computations for the lazy signed walk over Z_p and random symmetric sign matrices"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--p", o.p, "prime modulus");
    app.add_option("--n,--v", o.n, "vector as a comma list, or a size (census, montecarlo, exactq, fibers), or lo..hi (compare)");
    app.add_option("--mu", o.mu, "laziness parameter as a/b")->capture_default_str();
    app.add_option("--mode", o.mode, "exact, float or auto")->capture_default_str();
    app.add_option("--k", o.k, "number of blocks or tensor power")->capture_default_str();
    app.add_option("--beta", o.beta, "threshold as a/b, or auto = n/p")->capture_default_str();
    app.add_option("--seed", o.seed, "random seed")->capture_default_str();
    app.add_option("--trials", o.trials, "number of random trials")->capture_default_str();
    app.add_option("--workers", o.workers, "worker threads (default: LO_FORGE_WORKERS, then all cores)");
    app.add_option("--output", o.output, "write the report to this file");
    app.add_option("--format", o.format, "text, json, jsonl or csv");
    app.add_flag("--paper-ref", o.paper_ref, "print the formula the subcommand implements");
    app.add_option("--alpha", o.alpha, "level-set threshold as a/b")->capture_default_str();
    app.add_option("--suite", o.suite, "verify suite: cos, tensor, amplified, structural, sumset, cauchy-davenport, fourier, all")
        ->capture_default_str();
    app.add_option("--membership", o.membership, "exactq membership: rho_1 or rho_mu")->capture_default_str();
    app.add_option("--budget", o.budget, "length budget d from 'rho' (log 1/rho) or 'p' (log p)")->capture_default_str();
    for (const auto& [name, note] : formula_notes()) app.add_subcommand(name, note.substr(0, note.find(';')));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    o.subcommand = app.get_subcommands().front()->get_name();

    try {
        return run(o);
    } catch (const InfeasibleRequest& e) {
        std::cerr << "infeasible: " << e.what() << "\nestimated cost: " << format_number(e.cost()) << " operations\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
