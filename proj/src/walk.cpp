#include "loforge/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loforge/rational.hpp"

namespace loforge {

std::string_view to_string(Arithmetic mode) noexcept {
    return mode == Arithmetic::exact ? "exact" : "float";
}

Arithmetic parse_arithmetic(std::string_view text) {
    if (text == "exact") return Arithmetic::exact;
    if (text == "float") return Arithmetic::floating;
    throw std::invalid_argument("mode must be exact or float, got " + std::string(text));
}

Arithmetic default_arithmetic(std::uint64_t p, std::size_t n) noexcept {
    const long double work = static_cast<long double>(p) * static_cast<long double>(n);
    return work <= 1e7L ? Arithmetic::exact : Arithmetic::floating;
}

// ---------------------------------------------------------------------------
// WalkParams

WalkParams::WalkParams(mpq_class mu, Arithmetic mode) : mu_(std::move(mu)), mode_(mode) {
    mu_.canonicalize();
    if (mu_ <= 0 || mu_ > 1) throw std::invalid_argument("mu must lie in (0, 1], got " + to_string(mu_));
    if (mode_ == Arithmetic::exact) {
        if (mu_.get_den() > 65536) {
            throw std::invalid_argument("exact mode needs mu with denominator <= 2^16, got " + to_string(mu_));
        }
        const unsigned long a = mu_.get_num().get_ui();
        const unsigned long b = mu_.get_den().get_ui();
        stay_ = 2 * (b - a);
        move_ = a;
        scale_ = 2 * b;
    }
}

// ---------------------------------------------------------------------------
// Probability

const mpq_class& Probability::exact() const {
    if (!is_exact_) throw std::logic_error("probability is not exact");
    return exact_;
}

long double Probability::long_value() const {
    return is_exact_ ? to_long_double(exact_) : static_cast<long double>(value_);
}

std::string Probability::str() const {
    if (is_exact_) return to_string(exact_, true);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
}

Probability Probability::operator*(const mpq_class& factor) const {
    if (is_exact_) return Probability(mpq_class(exact_ * factor));
    return Probability(value_ * factor.get_d());
}

bool operator==(const Probability& a, const Probability& b) {
    if (a.is_exact_ && b.is_exact_) return a.exact_ == b.exact_;
    return a.value() == b.value();
}

std::partial_ordering operator<=>(const Probability& a, const Probability& b) {
    if (a.is_exact_ && b.is_exact_) {
        const int c = cmp(a.exact_, b.exact_);
        return c < 0 ? std::partial_ordering::less
             : c > 0 ? std::partial_ordering::greater
                     : std::partial_ordering::equivalent;
    }
    return a.long_value() <=> b.long_value();
}

// ---------------------------------------------------------------------------
// ZpVector

ZpVector::ZpVector(PrimeModulus p, std::vector<Residue> entries) : p_(p), entries_(std::move(entries)) {
    for (Residue x : entries_) {
        if (x >= p_.value()) {
            throw std::invalid_argument("entry " + std::to_string(x) + " is not a canonical residue mod " +
                                        std::to_string(p_.value()));
        }
        if (x != 0) ++support_;
    }
}

ZpVector ZpVector::from_signed(PrimeModulus p, std::span<const std::int64_t> values) {
    std::vector<Residue> entries;
    entries.reserve(values.size());
    for (std::int64_t x : values) entries.push_back(p.reduce(x));
    return ZpVector(p, std::move(entries));
}

ZpVector ZpVector::concat(const ZpVector& other) const {
    if (!(other.p_ == p_)) throw std::invalid_argument("concat across different moduli");
    std::vector<Residue> out(entries_);
    out.insert(out.end(), other.entries_.begin(), other.entries_.end());
    return ZpVector(p_, std::move(out));
}

ZpVector ZpVector::power(std::size_t k) const {
    if (k == 0) throw std::invalid_argument("tensor power needs k >= 1");
    std::vector<Residue> out;
    out.reserve(entries_.size() * k);
    for (std::size_t r = 0; r < k; ++r) out.insert(out.end(), entries_.begin(), entries_.end());
    return ZpVector(p_, std::move(out));
}

ZpVector ZpVector::restrict(std::span<const std::size_t> indices) const {
    std::vector<Residue> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= entries_.size()) {
            throw std::out_of_range("index " + std::to_string(i) + " outside vector of length " +
                                    std::to_string(entries_.size()));
        }
        out.push_back(entries_[i]);
    }
    return ZpVector(p_, std::move(out));
}

// ---------------------------------------------------------------------------
// WalkDistribution

WalkDistribution WalkDistribution::point_mass(PrimeModulus p, WalkParams params) {
    WalkDistribution d(p, std::move(params));
    const std::size_t size = p.value();
    if (d.is_exact()) {
        d.numer_.assign(size, mpz_class(0));
        d.numer_[0] = 1;
        d.denom_ = 1;
    } else {
        d.values_.assign(size, 0.0);
        d.values_[0] = 1.0;
    }
    return d;
}

WalkDistribution WalkDistribution::from_exact(PrimeModulus p, WalkParams params, std::size_t length,
                                              std::span<const mpq_class> probabilities) {
    if (!params.exact()) throw std::invalid_argument("from_exact needs exact params");
    if (probabilities.size() != p.value()) throw std::invalid_argument("probability vector length != p");
    WalkDistribution d(p, std::move(params));
    d.length_ = length;
    mpz_class common(1);
    for (const auto& q : probabilities) {
        if (q < 0) throw std::invalid_argument("negative probability");
        mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
    }
    d.denom_ = common;
    d.numer_.reserve(probabilities.size());
    for (const auto& q : probabilities) d.numer_.push_back(q.get_num() * (common / q.get_den()));
    return d;
}

WalkDistribution WalkDistribution::from_values(PrimeModulus p, WalkParams params, std::size_t length,
                                               std::vector<double> probabilities) {
    if (params.exact()) throw std::invalid_argument("from_values needs float params");
    if (probabilities.size() != p.value()) throw std::invalid_argument("probability vector length != p");
    WalkDistribution d(p, std::move(params));
    d.length_ = length;
    d.values_ = std::move(probabilities);
    return d;
}

WalkDistribution WalkDistribution::extended(Residue step) const {
    const std::uint64_t m = p_.value();
    step %= m;
    WalkDistribution out(p_, params_);
    out.length_ = length_ + 1;
    if (is_exact()) {
        const unsigned long stay = params_.stay_weight();
        const unsigned long move = params_.move_weight();
        out.numer_.resize(m);
        out.denom_ = denom_ * params_.scale();
        for (std::uint64_t x = 0; x < m; ++x) {
            mpz_class& acc = out.numer_[x];
            mpz_mul_ui(acc.get_mpz_t(), numer_[x].get_mpz_t(), stay);
            mpz_addmul_ui(acc.get_mpz_t(), numer_[p_.sub(x, step)].get_mpz_t(), move);
            mpz_addmul_ui(acc.get_mpz_t(), numer_[p_.add(x, step)].get_mpz_t(), move);
        }
    } else {
        const double mu = params_.mu_value();
        const double stay = 1.0 - mu;
        const double half = mu / 2.0;
        out.values_.resize(m);
        for (std::uint64_t x = 0; x < m; ++x) {
            out.values_[x] = stay * values_[x] + half * (values_[p_.sub(x, step)] + values_[p_.add(x, step)]);
        }
    }
    return out;
}

Probability WalkDistribution::extended_at(Residue step, Residue x) const {
    step %= p_.value();
    const Residue left = p_.sub(x, step);
    const Residue right = p_.add(x, step);
    if (is_exact()) {
        mpz_class acc;
        mpz_mul_ui(acc.get_mpz_t(), numer_[x].get_mpz_t(), params_.stay_weight());
        mpz_addmul_ui(acc.get_mpz_t(), numer_[left].get_mpz_t(), params_.move_weight());
        mpz_addmul_ui(acc.get_mpz_t(), numer_[right].get_mpz_t(), params_.move_weight());
        mpq_class q(acc, denom_ * params_.scale());
        q.canonicalize();
        return q;
    }
    const double mu = params_.mu_value();
    return (1.0 - mu) * values_[x] + (mu / 2.0) * (values_[left] + values_[right]);
}

Probability WalkDistribution::at(Residue x) const {
    if (x >= p_.value()) throw std::out_of_range("residue outside Z_p");
    if (is_exact()) {
        mpq_class q(numer_[x], denom_);
        q.canonicalize();
        return q;
    }
    return values_[x];
}

double WalkDistribution::value_at(Residue x) const { return at(x).value(); }

std::vector<Probability> WalkDistribution::probabilities() const {
    std::vector<Probability> out;
    out.reserve(p_.value());
    for (Residue x = 0; x < p_.value(); ++x) out.push_back(at(x));
    return out;
}

const std::vector<mpz_class>& WalkDistribution::numerators() const {
    if (!is_exact()) throw std::logic_error("float distribution has no numerators");
    return numer_;
}

const mpz_class& WalkDistribution::denominator() const {
    if (!is_exact()) throw std::logic_error("float distribution has no denominator");
    return denom_;
}

const std::vector<double>& WalkDistribution::values() const {
    if (is_exact()) throw std::logic_error("exact distribution stores numerators, not doubles");
    return values_;
}

std::vector<Residue> WalkDistribution::argmax() const {
    std::vector<Residue> best;
    const std::uint64_t m = p_.value();
    if (is_exact()) {
        const mpz_class* top = &numer_[0];
        for (std::uint64_t x = 0; x < m; ++x) {
            const int c = cmp(numer_[x], *top);
            if (c > 0) {
                top = &numer_[x];
                best.clear();
            }
            if (c >= 0) best.push_back(x);
        }
    } else {
        double top = values_[0];
        for (std::uint64_t x = 0; x < m; ++x) {
            if (values_[x] > top) {
                top = values_[x];
                best.clear();
            }
            if (values_[x] >= top) best.push_back(x);
        }
    }
    return best;
}

Probability WalkDistribution::max() const { return at(argmax().front()); }

bool WalkDistribution::symmetric() const {
    const std::uint64_t m = p_.value();
    for (std::uint64_t x = 1; x < m; ++x) {
        if (is_exact() ? numer_[x] != numer_[m - x] : values_[x] != values_[m - x]) return false;
    }
    return true;
}

bool WalkDistribution::normalized() const {
    if (is_exact()) {
        mpz_class total(0);
        for (const auto& z : numer_) {
            if (z < 0) return false;
            total += z;
        }
        return total == denom_;
    }
    CompensatedSum total;
    for (double x : values_) {
        if (x < 0.0) return false;
        total.add(x);
    }
    return std::abs(total.value() - 1.0) <= 1e-12;
}

bool operator==(const WalkDistribution& a, const WalkDistribution& b) {
    if (!(a.p_ == b.p_) || a.params_.mu() != b.params_.mu() || a.params_.mode() != b.params_.mode()) return false;
    if (a.is_exact()) {
        for (std::size_t x = 0; x < a.numer_.size(); ++x) {
            if (a.numer_[x] * b.denom_ != b.numer_[x] * a.denom_) return false;
        }
        return true;
    }
    return a.values_ == b.values_;
}

// ---------------------------------------------------------------------------
// Free operations

WalkDistribution distribution(const ZpVector& v, const WalkParams& params) {
    auto d = WalkDistribution::point_mass(v.modulus(), params);
    for (Residue x : v.entries()) d = d.extended(x);
    return d;
}

Probability rho_of(const WalkDistribution& dist) {
    Probability top = dist.max();
    if (dist.params().mu() <= mpq_class(1, 2)) {
        // The lazy walk with mu <= 1/2 is most likely found at 0.
        if (dist.at(0) < top) throw std::logic_error("rho: maximum of the lazy walk is not attained at 0");
    }
    return top;
}

Probability rho(const ZpVector& v, const WalkParams& params) { return rho_of(distribution(v, params)); }

std::vector<Residue> neighbourhood_of(const WalkDistribution& dist) {
    std::vector<Residue> out;
    const std::uint64_t m = dist.modulus().value();
    if (dist.is_exact()) {
        const auto& num = dist.numerators();
        for (std::uint64_t x = 0; x < m; ++x) {
            if (2 * num[x] > num[0]) out.push_back(x);
        }
    } else {
        const auto& val = dist.values();
        for (std::uint64_t x = 0; x < m; ++x) {
            if (2.0 * val[x] > val[0]) out.push_back(x);
        }
    }
    return out;
}

std::vector<Residue> neighbourhood(const ZpVector& w, const WalkParams& params) {
    return neighbourhood_of(distribution(w, params));
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

namespace {

std::vector<double> cosine_table(const PrimeModulus& p) {
    const std::uint64_t m = p.value();
    std::vector<double> table(m);
    for (std::uint64_t r = 0; r < m; ++r) {
        table[r] = std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m));
    }
    return table;
}

double product_at(const ZpVector& v, double mu, Residue xi, const std::vector<double>& cosines) {
    const auto& p = v.modulus();
    double prod = 1.0;
    for (Residue x : v.entries()) prod *= (1.0 - mu) + mu * cosines[p.mul(x, xi)];
    return prod;
}

}  // namespace

double fourier_eval(const ZpVector& v, const WalkParams& params, Residue xi) {
    if (params.exact()) throw std::domain_error("fourier_eval is float-only; cosines are irrational");
    const auto& p = v.modulus();
    xi %= p.value();
    const double mu = params.mu_value();
    double prod = 1.0;
    for (Residue x : v.entries()) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(p.mul(x, xi)) / static_cast<double>(p.value());
        prod *= (1.0 - mu) + mu * std::cos(angle);
    }
    return prod;
}

double rho_via_fourier(const ZpVector& v, const WalkParams& params) {
    // The average is P(X = 0), which is rho only while the mode sits at 0.
    if (params.mu() > mpq_class(1, 2)) throw std::domain_error("rho_via_fourier needs mu <= 1/2");
    const auto& p = v.modulus();
    const auto cosines = cosine_table(p);
    const double mu = params.mu_value();
    CompensatedSum total;
    for (Residue xi = 0; xi < p.value(); ++xi) total.add(product_at(v, mu, xi, cosines));
    return total.value() / static_cast<double>(p.value());
}

}  // namespace loforge
