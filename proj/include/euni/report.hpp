#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace euni {

using json = nlohmann::ordered_json;

/// One checked inequality: measured <= bound.
struct Case {
    std::string id;
    json inputs = json::object();
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    double slack = 0.0;  // bound - measured
};

struct Provenance {
    std::string config_hash;
    std::uint64_t sieve_limit = 0;
    std::uint64_t seed = 0;
};

struct Summary {
    std::size_t total = 0;
    std::size_t passed = 0;
    double max_ratio = 0.0;
};

class Report {
public:
    Report() = default;
    explicit Report(std::string suite) : suite_(std::move(suite)) {}

    const std::string& suite() const { return suite_; }
    const std::vector<Case>& cases() const { return cases_; }
    Provenance& provenance() { return prov_; }
    const Provenance& provenance() const { return prov_; }

    /// Free-form diagnostics that do not affect pass/fail.
    json& notes() { return notes_; }
    const json& notes() const { return notes_; }

    /// Record measured <= bound*(1 - rel_cushion).
    Case& check(std::string id, double measured, double bound, json inputs = json::object(),
                double rel_cushion = 0.0)
    {
        Case c;
        c.id = std::move(id);
        c.inputs = std::move(inputs);
        c.measured = measured;
        c.bound = bound;
        c.slack = bound - measured;
        c.pass = std::isfinite(measured) && measured <= bound * (1.0 - rel_cushion);
        cases_.push_back(std::move(c));
        return cases_.back();
    }

    /// Record a boolean outcome with its own measured/bound pair.
    Case& record(std::string id, bool pass, double measured, double bound, json inputs = json::object())
    {
        Case c;
        c.id = std::move(id);
        c.inputs = std::move(inputs);
        c.measured = measured;
        c.bound = bound;
        c.slack = bound - measured;
        c.pass = pass;
        cases_.push_back(std::move(c));
        return cases_.back();
    }

    void merge(const Report& other)
    {
        cases_.insert(cases_.end(), other.cases_.begin(), other.cases_.end());
        if (!other.notes_.is_null() && !other.notes_.empty()) notes_[other.suite_] = other.notes_;
    }

    Summary summary() const
    {
        Summary s;
        s.total = cases_.size();
        for (const auto& c : cases_) {
            if (c.pass) ++s.passed;
            if (c.bound > 0 && std::isfinite(c.measured)) s.max_ratio = std::max(s.max_ratio, c.measured / c.bound);
        }
        return s;
    }

    bool all_passed() const
    {
        return std::all_of(cases_.begin(), cases_.end(), [](const Case& c) { return c.pass; });
    }

    /// Worst case by measured/bound.
    const Case* worst() const
    {
        const Case* w = nullptr;
        double best = -1.0;
        for (const auto& c : cases_) {
            double r = c.bound > 0 ? c.measured / c.bound : (c.pass ? 0.0 : INFINITY);
            if (!c.pass) r = std::max(r, 1.0 + 1e-300);
            if (r > best) { best = r; w = &c; }
        }
        return w;
    }

private:
    std::string suite_;
    std::vector<Case> cases_;
    Provenance prov_;
    json notes_ = json::object();
};

inline json finite_or_string(double v)
{
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json to_json(const Report& r)
{
    json j;
    j["schema"] = 1;
    j["suite"] = r.suite();
    json cases = json::array();
    for (const auto& c : r.cases()) {
        json jc;
        jc["id"] = c.id;
        jc["inputs"] = c.inputs;
        jc["measured"] = finite_or_string(c.measured);
        jc["bound"] = finite_or_string(c.bound);
        jc["pass"] = c.pass;
        jc["slack"] = finite_or_string(c.slack);
        cases.push_back(std::move(jc));
    }
    j["cases"] = std::move(cases);
    auto s = r.summary();
    j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"max_ratio", finite_or_string(s.max_ratio)}};
    j["provenance"] = {{"config_hash", r.provenance().config_hash},
                       {"sieve_limit", r.provenance().sieve_limit},
                       {"seed", r.provenance().seed}};
    if (!r.notes().empty()) j["notes"] = r.notes();
    return j;
}

/// 64-bit FNV-1a, hex encoded. Used to name report files by configuration.
inline std::string fnv1a_hex(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) { h ^= ch; h *= 1099511628211ull; }
    static const char* d = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) { out[i] = d[h & 15]; h >>= 4; }
    return out;
}

}  // namespace euni
