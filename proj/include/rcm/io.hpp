#pragma once

// Text formats shared by the CLI and the tests: shortest round-trip number
// formatting, config digests, EstimateRecord CSV, certification JSON lines.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "diagrams.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace rcm {

using json = nlohmann::json;

inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// nlohmann objects keep keys sorted, so dump() is canonical.
inline std::string config_digest(const json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

inline std::string estimate_csv_header(int d) {
    std::string h = "quantity,lambda";
    for (int a = 1; a <= d; ++a) h += ",x" + std::to_string(a);
    return h + ",value,stderr,n,config_digest\n";
}

inline std::string estimate_csv_row(const EstimateRecord& r, int d) {
    std::string s = r.quantity + "," + num(r.lambda);
    for (int a = 0; a < d; ++a) s += "," + (a < static_cast<int>(r.x.size()) ? num(r.x[a]) : std::string("0"));
    return s + "," + num(r.value) + "," + num(r.std_error) + "," + std::to_string(r.n) + "," + r.config_digest + "\n";
}

inline std::string estimate_csv(const std::vector<EstimateRecord>& rows, int d) {
    std::string out = estimate_csv_header(d);
    for (const auto& r : rows) out += estimate_csv_row(r, d);
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return inf;
    if (s == "-inf") return -inf;
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw config_error("bad number in CSV: " + s);
    return v;
}

inline std::vector<EstimateRecord> parse_estimate_csv(const std::string& text, int& d) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw config_error("empty CSV");
    const auto head = split_csv_line(line);
    d = static_cast<int>(head.size()) - 6;
    if (d < 1 || head[0] != "quantity" || line + "\n" != estimate_csv_header(d))
        throw config_error("CSV header does not match the estimate contract");
    std::vector<EstimateRecord> rows;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != head.size()) throw config_error("CSV row has wrong column count");
        EstimateRecord r;
        r.quantity = c[0];
        r.lambda = parse_double(c[1]);
        for (int a = 0; a < d; ++a) r.x.push_back(parse_double(c[2 + a]));
        r.value = parse_double(c[2 + d]);
        r.std_error = parse_double(c[3 + d]);
        r.n = std::stoull(c[4 + d]);
        r.config_digest = c[5 + d];
        rows.push_back(r);
    }
    return rows;
}

inline json number_or_string(double x) {
    if (std::isfinite(x)) return x;
    return num(x);
}

inline json certification_json(const Certification& c) {
    json params = {{"a", c.a},        {"b", c.b}, {"p", number_or_string(c.p)}, {"lambda", c.lambda},
                   {"d", c.d},        {"n", c.n}, {"L", c.L},                   {"kernel", c.kernel}};
    return json{{"case_id", c.case_id},
                {"paper_anchor", c.anchor},
                {"lhs_name", c.lhs_name},
                {"rhs_expr", c.rhs_expr},
                {"lhs", number_or_string(c.lhs)},
                {"rhs", number_or_string(c.rhs)},
                {"holds", c.holds},
                {"params", params},
                {"scan_resolution", c.scan_resolution}};
}

inline std::string certification_jsonl(const std::vector<Certification>& certs) {
    std::string out;
    for (const auto& c : certs) out += certification_json(c).dump() + "\n";
    return out;
}

}  // namespace rcm
