#pragma once

/**
 * @file serialize.hpp
 * @brief JSON form of bound tables. table_from_json(table_to_json(t)) == t.
 */

#include "mcat/invariants.hpp"

#include <json.hpp>

#include <string>

namespace mcat {

using json = nlohmann::ordered_json;

inline json bound_to_json(int v) { return v == kUnbounded ? json("inf") : json(v); }

inline int bound_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return kUnbounded;
    return j.get<int>();
}

inline Basis parse_basis(const std::string& s) {
    for (Basis b : {Basis::Certificate, Basis::Literature, Basis::Metadata, Basis::Derived})
        if (basis_name(b) == s) return b;
    throw std::invalid_argument("unknown basis '" + s + "'");
}

inline json step_to_json(const Step& s) {
    json j;
    j["value"] = bound_to_json(s.value);
    j["rule"] = s.rule;
    j["anchor"] = s.anchor;
    j["basis"] = basis_name(s.basis);
    if (!s.detail.empty()) j["detail"] = s.detail;
    if (!s.witness.empty()) j["witness"] = s.witness;
    if (!s.premises.empty()) {
        json ps = json::array();
        for (const auto& p : s.premises)
            ps.push_back({{"table", p.table},
                          {"column", p.column},
                          {"side", p.side == Side::Lower ? "lower" : "upper"},
                          {"step", p.step}});
        j["premises"] = std::move(ps);
    }
    return j;
}

inline Step step_from_json(const json& j, Side side) {
    Step s;
    s.side = side;
    s.value = bound_from_json(j.at("value"));
    s.rule = j.at("rule").get<std::string>();
    s.anchor = j.at("anchor").get<std::string>();
    s.basis = parse_basis(j.at("basis").get<std::string>());
    s.detail = j.value("detail", std::string());
    s.witness = j.value("witness", std::string());
    if (j.contains("premises"))
        for (const auto& p : j.at("premises"))
            s.premises.push_back({p.at("table").get<std::string>(), p.at("column").get<int>(),
                                  p.at("side").get<std::string>() == "lower" ? Side::Lower : Side::Upper,
                                  p.at("step").get<std::size_t>()});
    return s;
}

inline json table_to_json(const BoundTable& t) {
    json j;
    j["id"] = t.id;
    j["invariant"] = invariant_name(t.invariant);
    j["target"] = t.target;
    j["max_m"] = t.max_m;
    json entries = json::array();
    for (int c = 0; c <= t.max_m; ++c) {
        const Entry& e = t.entries[c];
        json je;
        const Cap m = t.cap_of(c);
        je["m"] = m ? json(*m) : json("inf");
        je["lo"] = e.value.lo;
        je["hi"] = bound_to_json(e.value.hi);
        je["exact"] = e.value.exact();
        json lower = json::array(), upper = json::array();
        for (const auto& s : e.lower) lower.push_back(step_to_json(s));
        for (const auto& s : e.upper) upper.push_back(step_to_json(s));
        je["lower"] = std::move(lower);
        je["upper"] = std::move(upper);
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline BoundTable table_from_json(const json& j) {
    BoundTable t;
    t.id = j.at("id").get<std::string>();
    const auto inv = parse_invariant(j.at("invariant").get<std::string>());
    if (!inv) throw std::invalid_argument("unknown invariant in table json");
    t.invariant = *inv;
    t.target = j.at("target").get<std::string>();
    t.max_m = j.at("max_m").get<int>();
    for (const auto& je : j.at("entries")) {
        Entry e;
        e.value.lo = je.at("lo").get<int>();
        e.value.hi = bound_from_json(je.at("hi"));
        for (const auto& s : je.at("lower")) e.lower.push_back(step_from_json(s, Side::Lower));
        for (const auto& s : je.at("upper")) e.upper.push_back(step_from_json(s, Side::Upper));
        t.entries.push_back(std::move(e));
    }
    if (static_cast<int>(t.entries.size()) != t.max_m + 1)
        throw std::invalid_argument("table json has " + std::to_string(t.entries.size()) + " entries, expected " +
                                    std::to_string(t.max_m + 1));
    return t;
}

} // namespace mcat
