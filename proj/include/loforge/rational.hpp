#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace loforge {

/// Parses "a/b" or "a" into a canonical rational. Throws std::invalid_argument.
mpq_class parse_rational(std::string_view text);

/// Canonical "num/den" form; integers print as "num/1" only when force_den is set.
std::string to_string(const mpq_class& q, bool force_den = false);
std::string to_string(const mpz_class& z);

mpz_class to_mpz(std::uint64_t x);
mpq_class rational(std::int64_t num, std::int64_t den);
long double to_long_double(const mpq_class& q);

/// q^e for non-negative integer e.
mpq_class pow(const mpq_class& q, unsigned long e);

}  // namespace loforge
