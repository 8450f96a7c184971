#pragma once

// Inequality reports and the machine-readable output formats shared by the
// verifier suites and the CLI.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "loforge/walk.hpp"

namespace loforge {

struct InequalityReport {
    std::string law;
    std::string instance;
    long double lhs = 0.0L;
    long double rhs = 0.0L;
    std::optional<std::string> lhs_exact;
    std::optional<std::string> rhs_exact;
    bool holds = false;
    /// Set when an exact comparison decided `holds`.
    bool exact_decision = false;
    std::string note;

    long double slack() const noexcept { return rhs - lhs; }
};

/// lhs <= rhs, exactly when both sides are exact rationals.
InequalityReport compare_le(std::string law, std::string instance, const Probability& lhs, const Probability& rhs);
/// lhs <= rhs with zero tolerance; the slack is reported, never absorbed.
InequalityReport compare_le(std::string law, std::string instance, long double lhs, long double rhs);
InequalityReport compare_le(std::string law, std::string instance, const mpq_class& lhs, const mpq_class& rhs);

bool all_hold(std::span<const InequalityReport> reports) noexcept;

nlohmann::json to_json(const InequalityReport& r);

/// One report per line.
void write_jsonl(std::ostream& os, std::span<const InequalityReport> reports);
/// instance_id,law,instance,lhs,rhs,slack,holds
void write_csv_summary(std::ostream& os, std::span<const InequalityReport> reports);

/// Shortest round-trip decimal for a long double reduced to double.
std::string format_number(long double x);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

}  // namespace loforge
