#include "loforge/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace loforge {

mpq_class parse_rational(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    const auto slash = s.find('/');
    auto parse_int = [&](const std::string& part) {
        if (part.empty()) throw std::invalid_argument("malformed rational: " + s);
        std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (start == part.size()) throw std::invalid_argument("malformed rational: " + s);
        for (std::size_t i = start; i < part.size(); ++i) {
            if (part[i] < '0' || part[i] > '9') throw std::invalid_argument("malformed rational: " + s);
        }
        return mpz_class(part[0] == '+' ? part.substr(1) : part);
    };
    mpz_class num = parse_int(s.substr(0, slash));
    mpz_class den = slash == std::string::npos ? mpz_class(1) : parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const mpq_class& q, bool force_den) {
    if (!force_den && q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const mpz_class& z) { return z.get_str(); }

mpz_class to_mpz(std::uint64_t x) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
    return z;
}

mpq_class rational(std::int64_t num, std::int64_t den) {
    mpq_class q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
    q.canonicalize();
    return q;
}

long double to_long_double(const mpq_class& q) {
    // Scale through mpf-free route: exponent-aware division keeps tiny values representable.
    if (q == 0) return 0.0L;
    long exp_num = 0;
    long exp_den = 0;
    const double mn = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
    return std::ldexp(static_cast<long double>(mn) / static_cast<long double>(md),
                      static_cast<int>(exp_num - exp_den));
}

mpq_class pow(const mpq_class& q, unsigned long e) {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace loforge
