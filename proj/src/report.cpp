#include "loforge/report.hpp"

#include <cstdio>

#include <openssl/evp.h>

#include "loforge/rational.hpp"

namespace loforge {

InequalityReport compare_le(std::string law, std::string instance, const Probability& lhs, const Probability& rhs) {
    InequalityReport r;
    r.law = std::move(law);
    r.instance = std::move(instance);
    r.lhs = lhs.long_value();
    r.rhs = rhs.long_value();
    if (lhs.is_exact()) r.lhs_exact = to_string(lhs.exact(), true);
    if (rhs.is_exact()) r.rhs_exact = to_string(rhs.exact(), true);
    r.exact_decision = lhs.is_exact() && rhs.is_exact();
    r.holds = lhs <= rhs;
    return r;
}

InequalityReport compare_le(std::string law, std::string instance, long double lhs, long double rhs) {
    InequalityReport r;
    r.law = std::move(law);
    r.instance = std::move(instance);
    r.lhs = lhs;
    r.rhs = rhs;
    r.holds = lhs <= rhs;
    return r;
}

InequalityReport compare_le(std::string law, std::string instance, const mpq_class& lhs, const mpq_class& rhs) {
    return compare_le(std::move(law), std::move(instance), Probability(lhs), Probability(rhs));
}

bool all_hold(std::span<const InequalityReport> reports) noexcept {
    for (const auto& r : reports) {
        if (!r.holds) return false;
    }
    return true;
}

std::string format_number(long double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
    return buf;
}

nlohmann::json to_json(const InequalityReport& r) {
    nlohmann::json j;
    j["law"] = r.law;
    j["instance"] = r.instance;
    j["lhs"] = static_cast<double>(r.lhs);
    j["rhs"] = static_cast<double>(r.rhs);
    j["slack"] = static_cast<double>(r.slack());
    j["holds"] = r.holds;
    if (r.lhs_exact) j["lhs_exact"] = *r.lhs_exact;
    if (r.rhs_exact) j["rhs_exact"] = *r.rhs_exact;
    j["exact_decision"] = r.exact_decision;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

void write_jsonl(std::ostream& os, std::span<const InequalityReport> reports) {
    for (const auto& r : reports) os << to_json(r).dump() << '\n';
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv_summary(std::ostream& os, std::span<const InequalityReport> reports) {
    os << "instance_id,law,instance,lhs,rhs,slack,holds\n";
    std::size_t id = 0;
    for (const auto& r : reports) {
        os << id++ << ',' << csv_field(r.law) << ',' << csv_field(r.instance) << ',' << format_number(r.lhs) << ','
           << format_number(r.rhs) << ',' << format_number(r.slack()) << ',' << (r.holds ? "true" : "false") << '\n';
    }
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace loforge
