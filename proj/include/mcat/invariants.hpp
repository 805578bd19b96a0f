#pragma once

/**
 * @file invariants.hpp
 * @brief Bound tables for cat_m, TC^m, secat_m, D_m and H*D_m.
 *
 * Every table has one column per m = 1..M and a final column for the
 * classical invariant (m = inf). Entries start at [0, inf); cup-length
 * certificates, metadata and literature axioms then seed bounds, and the
 * inequality rules below are applied until nothing narrows. Every change
 * is recorded as a Step that points at the steps it was derived from, so
 * each bound can be traced back to its axioms.
 */

#include "mcat/cuplength.hpp"
#include "mcat/spaces.hpp"

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcat {

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

enum class Invariant { Cat, Tc, Secat, Dm, Hdm };

inline std::string invariant_name(Invariant inv) {
    switch (inv) {
    case Invariant::Cat: return "cat";
    case Invariant::Tc: return "tc";
    case Invariant::Secat: return "secat";
    case Invariant::Dm: return "dm";
    case Invariant::Hdm: return "hdm";
    }
    return "?";
}

inline std::optional<Invariant> parse_invariant(const std::string& s) {
    for (Invariant inv : {Invariant::Cat, Invariant::Tc, Invariant::Secat, Invariant::Dm, Invariant::Hdm})
        if (invariant_name(inv) == s) return inv;
    return std::nullopt;
}

enum class Side { Lower, Upper };

/// What a bound ultimately rests on.
enum class Basis {
    Certificate, ///< an explicit nonzero cup product
    Literature,  ///< a published value supplied with the model
    Metadata,    ///< connectivity, dimension, vanishing or map flags
    Derived,     ///< an inequality applied to other bounds
};

inline std::string basis_name(Basis b) {
    switch (b) {
    case Basis::Certificate: return "certificate";
    case Basis::Literature: return "literature";
    case Basis::Metadata: return "metadata";
    case Basis::Derived: return "derived";
    }
    return "?";
}

struct RuleInfo {
    const char* id;
    const char* statement;
};

namespace rules {
inline constexpr RuleInfo kInit{"init", "invariants are nonnegative"};
inline constexpr RuleInfo kCup{"cup", "a nonzero product of k+1 admissible classes of degree <= m gives X_m >= k+1"};
inline constexpr RuleInfo kMonotone{"monotone", "X_n <= X_m for n <= m"};
inline constexpr RuleInfo kClassical{"classical", "X_m <= X"};
inline constexpr RuleInfo kConnectivity{"connectivity", "cat_m(X) = 0 for m <= conn(X)"};
inline constexpr RuleInfo kSecatCat{"secat-cat", "secat_m(p) <= cat_m(B)"};
inline constexpr RuleInfo kContractibleTotal{"contractible-total", "secat_m(p) = cat_m(B) when E is contractible"};
inline constexpr RuleInfo kLiterature{"literature", "published value of the classical invariant"};
inline constexpr RuleInfo kDimRecovery{"dim-recovery", "X <= X_m + floor(h/(m+1))"};
inline constexpr RuleInfo kSkeletal{"skeletal", "X <= max{X_(k-1), 2} (TC: max{TC^(2k-1), 2})"};
inline constexpr RuleInfo kStable{"stable", "X_m = X once m reaches the dimension (2*hdim for TC)"};
inline constexpr RuleInfo kPiVanishing{"pi-vanishing", "X_m = X when the relevant homotopy groups vanish from m on"};
inline constexpr RuleInfo kProduct{"product", "X_m of a product is at most the sum over the factors"};
inline constexpr RuleInfo kDistCatTc{"dist-cat-tc", "D_m(f,g) <= min{cat_m(X), TC^m(Y)}"};
inline constexpr RuleInfo kHdmDm{"hdm-dm", "H*D_m(f,g) <= D_m(f,g)"};
inline constexpr RuleInfo kDimConn{"dim-conn", "D_m(f,g) < (hdim X + 1)/(conn Y + 1) when pi_(k+1)(Y) = 0 for k >= m"};
inline constexpr RuleInfo kTriangle{"triangle", "D_m(f,g) <= D_m(f,h) + D_m(h,g)"};
inline constexpr RuleInfo kCatTc{"cat-tc", "cat_m(X) <= TC^m(X)"};
inline constexpr RuleInfo kTcTwoCat{"tc-2cat", "TC^m(X) <= 2 cat_m(X)"};
inline constexpr RuleInfo kTcSquare{"tc-square", "TC^m(X) <= cat_m(X x X)"};
inline constexpr RuleInfo kHSpace{"h-space", "TC^m(X) = cat_m(X) for an H-space with division"};
inline constexpr RuleInfo kConstantMap{"constant-map", "D_m(c, id) = cat_m(X) and D_m(c, f) <= cat_m(Y)"};
inline constexpr RuleInfo kHomotopic{"homotopic", "D_m(f,g) = 0 when f and g are homotopic"};
} // namespace rules

/// Reference to one recorded step: table id, column, side, index in history.
struct Premise {
    std::string table;
    int column = 0;
    Side side = Side::Lower;
    std::size_t step = 0;

    friend bool operator==(const Premise&, const Premise&) = default;
};

struct Step {
    Side side = Side::Lower;
    int value = 0;
    std::string rule;
    std::string anchor;
    std::string detail;
    Basis basis = Basis::Derived;
    std::vector<Premise> premises;
    std::string witness; ///< rendered certificate, empty unless rule is "cup"
    std::shared_ptr<const CupLengthCertificate> certificate;

    friend bool operator==(const Step& a, const Step& b) {
        return a.side == b.side && a.value == b.value && a.rule == b.rule && a.anchor == b.anchor &&
               a.detail == b.detail && a.basis == b.basis && a.premises == b.premises && a.witness == b.witness;
    }
};

struct Interval {
    int lo = 0;
    int hi = kUnbounded;

    bool exact() const { return lo == hi; }
    bool valid() const { return lo <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::string bound_to_string(int v) { return v == kUnbounded ? std::string("inf") : std::to_string(v); }

struct Entry {
    Interval value;
    std::vector<Step> lower; ///< history of lower-bound steps; the last is current
    std::vector<Step> upper;

    friend bool operator==(const Entry&, const Entry&) = default;
};

struct BoundTable {
    std::string id;
    Invariant invariant = Invariant::Cat;
    std::string target;
    int max_m = 1;
    std::vector<Entry> entries; ///< columns m = 1..max_m, then inf

    /// Column index of m (nullopt = inf). Throws for m outside 1..max_m.
    int column(Cap m) const {
        if (!m) return max_m;
        if (*m < 1 || *m > max_m)
            throw std::out_of_range("m = " + std::to_string(*m) + " outside 1.." + std::to_string(max_m));
        return *m - 1;
    }
    Cap cap_of(int column) const { return column == max_m ? Cap{} : Cap{column + 1}; }
    const Entry& at(Cap m) const { return entries.at(column(m)); }
    Entry& at(Cap m) { return entries.at(column(m)); }

    friend bool operator==(const BoundTable&, const BoundTable&) = default;
};

inline std::string table_id(Invariant inv, const std::string& target) { return invariant_name(inv) + ":" + target; }

/// Raised when propagation drives an interval empty.
class InconsistentModel : public std::runtime_error {
public:
    InconsistentModel(const std::string& cell, std::string lower_chain, std::string upper_chain)
        : std::runtime_error("InconsistentModel: " + cell + " has lower bound above upper bound\nlower bound chain:\n" +
                             lower_chain + "upper bound chain:\n" + upper_chain),
          lower_chain_(std::move(lower_chain)), upper_chain_(std::move(upper_chain)) {}

    const std::string& lower_chain() const { return lower_chain_; }
    const std::string& upper_chain() const { return upper_chain_; }

private:
    std::string lower_chain_;
    std::string upper_chain_;
};

/// Named models a computation runs over. Map keys become table targets.
struct Bundle {
    std::map<std::string, SpaceModel> spaces;
    std::map<std::string, FibrationModel> fibrations;
    std::map<std::string, MapPairModel> maps;
};

struct Options {
    std::optional<int> max_m; ///< default: largest 2*hdim over all spaces
    bool literature = true;   ///< false drops every literature axiom
};

struct TableSet {
    int max_m = 1;
    std::map<std::string, BoundTable> tables;

    const BoundTable& get(const std::string& id) const {
        const auto it = tables.find(id);
        if (it == tables.end()) throw std::out_of_range("no table '" + id + "'");
        return it->second;
    }
    const BoundTable& get(Invariant inv, const std::string& target) const { return get(table_id(inv, target)); }

    /// Rendered derivation of the current bound on one side of a cell.
    std::string chain(const std::string& id, int column, Side side) const {
        std::ostringstream os;
        std::set<std::tuple<std::string, int, int, std::size_t>> seen;
        const Entry& e = get(id).entries.at(column);
        const auto& hist = side == Side::Lower ? e.lower : e.upper;
        if (!hist.empty()) walk(os, Premise{id, column, side, hist.size() - 1}, 1, seen);
        return os.str();
    }

private:
    void walk(std::ostringstream& os, const Premise& p, int depth,
              std::set<std::tuple<std::string, int, int, std::size_t>>& seen) const {
        const BoundTable& t = get(p.table);
        const Entry& e = t.entries.at(p.column);
        const Step& s = (p.side == Side::Lower ? e.lower : e.upper).at(p.step);
        os << std::string(2 * depth, ' ') << p.table << "[m=" << cap_to_string(t.cap_of(p.column)) << "] "
           << (p.side == Side::Lower ? ">= " : "<= ") << bound_to_string(s.value) << "  " << s.rule << " ("
           << basis_name(s.basis) << ")";
        if (!s.detail.empty()) os << ": " << s.detail;
        os << "\n";
        if (!s.witness.empty()) os << std::string(2 * depth + 4, ' ') << "witness " << s.witness << "\n";
        if (!seen.insert({p.table, p.column, static_cast<int>(p.side), p.step}).second) return;
        for (const auto& q : s.premises) walk(os, q, depth + 1, seen);
    }
};

// ---------------------------------------------------------------------------
// Cohomological lower bounds

inline CupLengthResult cat_lower(const SpaceModel& x, Cap cap) {
    return capped_cuplength(Subspace::positive_degrees(x.algebra), cap);
}

/// Zero-divisor cup-length; needs field coefficients.
inline CupLengthResult tc_lower(const SpaceModel& x, Cap cap) {
    return capped_cuplength(cup_kernel(x.algebra), cap);
}

inline CupLengthResult secat_lower(const FibrationModel& p, Cap cap) { return capped_cuplength(kernel(p.pstar), cap); }

/// Classes of H(X) whose products bound D_m from below: the (f,g)-image of
/// the zero divisors of H(Y) (fields only) and the image of f* - g*.
struct DistanceGenerators {
    std::optional<Subspace> zero_divisor_image;
    Subspace difference_image;
};

inline DistanceGenerators distance_generators(const MapPairModel& pair) {
    DistanceGenerators out{std::nullopt, image_difference(pair.fstar, pair.gstar)};
    const GradedAlgebra& y = pair.codomain.algebra;
    if (y.coeff().is_field()) {
        const TensorProduct sq = tensor_square(y);
        out.zero_divisor_image = pushforward_span(pair_morphism(pair.fstar, pair.gstar, sq), cup_kernel(y, sq));
    }
    return out;
}

inline CupLengthResult hdm_lower(const MapPairModel& pair, Cap cap) {
    return capped_cuplength(image_difference(pair.fstar, pair.gstar), cap);
}

inline CupLengthResult dm_lower(const MapPairModel& pair, Cap cap) {
    const DistanceGenerators g = distance_generators(pair);
    CupLengthResult best = capped_cuplength(g.difference_image, cap);
    if (g.zero_divisor_image) {
        CupLengthResult a = capped_cuplength(*g.zero_divisor_image, cap);
        if (a.length > best.length) best = std::move(a);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Propagation

namespace detail {

inline bool same_metadata(const SpaceModel& a, const SpaceModel& b) {
    return a.algebra.same_structure(b.algebra) && a.conn == b.conn && a.hdim == b.hdim &&
           a.pi_vanish_from == b.pi_vanish_from && a.h_space_with_division == b.h_space_with_division &&
           a.known_cat == b.known_cat && a.known_tc == b.known_tc && a.factors.size() == b.factors.size() &&
           static_cast<bool>(a.square) == static_cast<bool>(b.square);
}

inline int sat_add(int a, int b) { return (a == kUnbounded || b == kUnbounded) ? kUnbounded : a + b; }

class Engine {
public:
    Engine(const Bundle& bundle, const Options& options) : options_(options) {
        for (const auto& [key, x] : bundle.spaces) register_space(x, key);
        for (const auto& [key, p] : bundle.fibrations) register_fibration(p, key);
        for (const auto& [key, pair] : bundle.maps) {
            MapEntry e{key, &pair, register_space(pair.domain, pair.domain.name), register_space(pair.codomain, pair.codomain.name)};
            maps_.push_back(e);
        }
        set_.max_m = choose_max_m();
        for (const auto& s : spaces_) {
            add_table(Invariant::Cat, s.key);
            add_table(Invariant::Tc, s.key);
        }
        for (const auto& f : fibrations_) add_table(Invariant::Secat, f.key);
        for (const auto& m : maps_) {
            add_table(Invariant::Dm, m.key);
            add_table(Invariant::Hdm, m.key);
        }
        for (const auto& m : maps_)
            for (const auto& [a, b] : m.model->triangles)
                for (const std::string& name : {a, b})
                    if (!bundle.maps.count(name))
                        throw AlgebraError(ErrorCode::InvalidSpec,
                                           "map pair '" + m.key + "': triangle names unknown map pair '" + name + "'");
    }

    TableSet run() {
        seed();
        build_constraints();
        for (std::size_t round = 0;; ++round) {
            changed_ = false;
            for (const auto& c : constraints_) c();
            if (!changed_) break;
            if (round > 100000) throw std::logic_error("bound propagation did not settle");
        }
        return std::move(set_);
    }

private:
    struct SpaceEntry {
        std::string key;
        const SpaceModel* model;
        std::vector<std::string> factor_keys;
        std::optional<std::string> square_key;
    };
    struct FibrationEntry {
        std::string key;
        const FibrationModel* model;
        std::string base_key;
        std::vector<std::string> factor_keys;
    };
    struct MapEntry {
        std::string key;
        const MapPairModel* model;
        std::string domain_key;
        std::string codomain_key;
    };
    struct Cell {
        std::string table;
        int column;
    };

    std::string register_space(const SpaceModel& x, const std::string& name) {
        for (const auto& s : spaces_)
            if (s.key == name && same_metadata(*s.model, x)) return s.key;
        std::string key = name;
        for (int n = 2; std::any_of(spaces_.begin(), spaces_.end(), [&](const SpaceEntry& s) { return s.key == key; }); ++n)
            key = name + "#" + std::to_string(n);
        const std::size_t slot = spaces_.size();
        spaces_.push_back({key, &x, {}, std::nullopt});
        std::vector<std::string> factors;
        for (const auto& f : x.factors) factors.push_back(register_space(f, f.name));
        std::optional<std::string> square;
        if (x.square) square = register_space(*x.square, x.square->name.empty() ? key + "^2" : x.square->name);
        spaces_[slot].factor_keys = std::move(factors);
        spaces_[slot].square_key = std::move(square);
        return key;
    }

    std::string register_fibration(const FibrationModel& p, const std::string& name) {
        std::string key = name;
        for (int n = 2; std::any_of(fibrations_.begin(), fibrations_.end(),
                                    [&](const FibrationEntry& f) { return f.key == key; });
             ++n)
            key = name + "#" + std::to_string(n);
        const std::size_t slot = fibrations_.size();
        fibrations_.push_back({key, &p, register_space(p.base, p.base.name), {}});
        std::vector<std::string> factors;
        for (const auto& f : p.factors) factors.push_back(register_fibration(f, f.name));
        fibrations_[slot].factor_keys = std::move(factors);
        return key;
    }

    int choose_max_m() const {
        if (options_.max_m) {
            if (*options_.max_m < 1) throw AlgebraError(ErrorCode::InvalidSpec, "max-m must be >= 1");
            return *options_.max_m;
        }
        int m = 1;
        bool any = false;
        for (const auto& s : spaces_)
            if (s.model->hdim) {
                any = true;
                m = std::max(m, 2 * *s.model->hdim);
            }
        if (!any && !spaces_.empty())
            throw AlgebraError(ErrorCode::InvalidSpec, "no space declares hdim; pass an explicit max-m");
        return m;
    }

    void add_table(Invariant inv, const std::string& target) {
        BoundTable t;
        t.id = table_id(inv, target);
        t.invariant = inv;
        t.target = target;
        t.max_m = set_.max_m;
        t.entries.resize(set_.max_m + 1);
        for (auto& e : t.entries) {
            Step s;
            s.side = Side::Lower;
            s.value = 0;
            s.rule = rules::kInit.id;
            s.anchor = rules::kInit.statement;
            s.basis = Basis::Metadata;
            e.lower.push_back(std::move(s));
        }
        set_.tables.emplace(t.id, std::move(t));
    }

    int M() const { return set_.max_m; }
    int inf() const { return set_.max_m; }
    std::vector<int> all_columns() const {
        std::vector<int> c;
        for (int i = 0; i <= M(); ++i) c.push_back(i);
        return c;
    }
    static std::string m_label(int column, int max_m) { return column == max_m ? "inf" : std::to_string(column + 1); }

    Entry& entry(const Cell& c) { return set_.tables.at(c.table).entries.at(c.column); }
    int lo(const Cell& c) { return entry(c).value.lo; }
    int hi(const Cell& c) { return entry(c).value.hi; }
    Premise premise(const Cell& c, Side side) {
        Entry& e = entry(c);
        return {c.table, c.column, side, (side == Side::Lower ? e.lower.size() : e.upper.size()) - 1};
    }

    void tighten(const Cell& c, Side side, int value, const RuleInfo& rule, Basis basis, std::vector<Premise> premises,
                 std::string detail = {}, std::shared_ptr<const CupLengthCertificate> cert = {}) {
        Entry& e = entry(c);
        if (side == Side::Lower ? value <= e.value.lo : value >= e.value.hi) return;
        Step s;
        s.side = side;
        s.value = value;
        s.rule = rule.id;
        s.anchor = rule.statement;
        s.detail = std::move(detail);
        s.basis = basis;
        s.premises = std::move(premises);
        if (cert) s.witness = cert->to_string();
        s.certificate = std::move(cert);
        if (side == Side::Lower) {
            e.value.lo = value;
            e.lower.push_back(std::move(s));
        } else {
            e.value.hi = value;
            e.upper.push_back(std::move(s));
        }
        changed_ = true;
        if (e.value.lo > e.value.hi) {
            const std::string cell = c.table + "[m=" + m_label(c.column, M()) + "]";
            throw InconsistentModel(cell, set_.chain(c.table, c.column, Side::Lower),
                                    set_.chain(c.table, c.column, Side::Upper));
        }
    }

    // A <= B + k
    void le_plus(Cell a, Cell b, int k, const RuleInfo& rule, std::string detail = {}) {
        constraints_.push_back([this, a, b, k, &rule, detail] {
            if (hi(b) != kUnbounded) tighten(a, Side::Upper, hi(b) + k, rule, Basis::Derived, {premise(b, Side::Upper)}, detail);
            if (lo(a) - k > 0) tighten(b, Side::Lower, lo(a) - k, rule, Basis::Derived, {premise(a, Side::Lower)}, detail);
        });
    }
    void le(Cell a, Cell b, const RuleInfo& rule, std::string detail = {}) { le_plus(a, b, 0, rule, std::move(detail)); }
    void eq(Cell a, Cell b, const RuleInfo& rule, std::string detail = {}) {
        le(a, b, rule, detail);
        le(b, a, rule, detail);
    }

    // A <= k * B
    void le_times(Cell a, Cell b, int k, const RuleInfo& rule) {
        constraints_.push_back([this, a, b, k, &rule] {
            if (hi(b) != kUnbounded) tighten(a, Side::Upper, k * hi(b), rule, Basis::Derived, {premise(b, Side::Upper)});
            if (lo(a) > 0) tighten(b, Side::Lower, (lo(a) + k - 1) / k, rule, Basis::Derived, {premise(a, Side::Lower)});
        });
    }

    // A <= sum of Bs
    void le_sum(Cell a, std::vector<Cell> bs, const RuleInfo& rule, std::string detail = {}) {
        constraints_.push_back([this, a, bs, &rule, detail] {
            int total = 0;
            std::vector<Premise> ps;
            for (const auto& b : bs) {
                total = sat_add(total, hi(b));
                if (hi(b) != kUnbounded) ps.push_back(premise(b, Side::Upper));
            }
            if (total != kUnbounded) tighten(a, Side::Upper, total, rule, Basis::Derived, ps, detail);
            for (std::size_t j = 0; j < bs.size(); ++j) {
                int others = 0;
                std::vector<Premise> qs{premise(a, Side::Lower)};
                for (std::size_t i = 0; i < bs.size(); ++i) {
                    if (i == j) continue;
                    others = sat_add(others, hi(bs[i]));
                    if (hi(bs[i]) != kUnbounded) qs.push_back(premise(bs[i], Side::Upper));
                }
                if (others != kUnbounded && lo(a) - others > 0)
                    tighten(bs[j], Side::Lower, lo(a) - others, rule, Basis::Derived, qs, detail);
            }
        });
    }

    // A <= max{B, c}
    void le_max_const(Cell a, Cell b, int c, const RuleInfo& rule, std::string detail = {}) {
        constraints_.push_back([this, a, b, c, &rule, detail] {
            if (hi(b) != kUnbounded) tighten(a, Side::Upper, std::max(hi(b), c), rule, Basis::Derived, {premise(b, Side::Upper)}, detail);
            if (lo(a) > c) tighten(b, Side::Lower, lo(a), rule, Basis::Derived, {premise(a, Side::Lower)}, detail);
        });
    }

    /// Rules shared by every table: monotone in m and capped by the classical value.
    void chain_rules(const std::string& id) {
        for (int c = 0; c < M(); ++c) {
            le(Cell{id, c}, Cell{id, c + 1}, rules::kMonotone);
            if (c + 1 < M()) le(Cell{id, c}, Cell{id, inf()}, rules::kClassical);
        }
    }

    /// dim-recovery, skeletal and stable rules for a dimension-like h.
    /// `skeletal_column` is the m of max{X_m, 2}; `stable_from` the first
    /// stabilized m.
    void dimension_rules(const std::string& id, int h, int skeletal_m, int stable_from, const std::string& what) {
        for (int c = 0; c < M(); ++c) {
            const int m = c + 1;
            const int slack = h / (m + 1);
            le_plus(Cell{id, inf()}, Cell{id, c}, slack, rules::kDimRecovery, what + " = " + std::to_string(h));
            if (m >= stable_from) eq(Cell{id, c}, Cell{id, inf()}, rules::kStable, what + " = " + std::to_string(h));
        }
        if (skeletal_m >= 1 && skeletal_m <= M())
            le_max_const(Cell{id, inf()}, Cell{id, skeletal_m - 1}, 2, rules::kSkeletal,
                         "m = " + std::to_string(skeletal_m));
    }

    void cup_seed(const std::string& id, const Subspace& gens, int top) {
        if (top < 1) return;
        const std::vector<CupLengthResult> profile = cuplength_profile(gens, top);
        for (int c = 0; c <= M(); ++c) {
            const int eff = c == inf() ? top : std::min(c + 1, top);
            const CupLengthResult& r = profile[eff - 1];
            if (r.length == 0) continue;
            tighten(Cell{id, c}, Side::Lower, r.length, rules::kCup, Basis::Certificate, {},
                    "cap " + m_label(c, M()), std::make_shared<const CupLengthCertificate>(*r.certificate));
        }
    }

    void literature(const std::string& id, const std::optional<int>& value, const std::string& what) {
        if (!value || !options_.literature) return;
        tighten(Cell{id, inf()}, Side::Lower, *value, rules::kLiterature, Basis::Literature, {}, what);
        tighten(Cell{id, inf()}, Side::Upper, *value, rules::kLiterature, Basis::Literature, {}, what);
    }

    void seed() {
        for (const auto& s : spaces_) {
            const SpaceModel& x = *s.model;
            const std::string cat = table_id(Invariant::Cat, s.key), tc = table_id(Invariant::Tc, s.key);
            cup_seed(cat, Subspace::positive_degrees(x.algebra), x.algebra.top_degree());
            if (x.algebra.coeff().is_field()) {
                const TensorProduct sq = tensor_square(x.algebra);
                cup_seed(tc, cup_kernel(x.algebra, sq), sq.algebra.top_degree());
            }
            for (int c = 0; c < M() && c + 1 <= x.conn; ++c)
                tighten(Cell{cat, c}, Side::Upper, 0, rules::kConnectivity, Basis::Metadata, {},
                        "conn = " + (x.conn >= kContractible ? std::string("contractible") : std::to_string(x.conn)));
            literature(cat, x.known_cat, "known cat = " + (x.known_cat ? std::to_string(*x.known_cat) : ""));
            literature(tc, x.known_tc, "known TC = " + (x.known_tc ? std::to_string(*x.known_tc) : ""));
        }
        for (const auto& f : fibrations_) {
            const std::string id = table_id(Invariant::Secat, f.key);
            cup_seed(id, kernel(f.model->pstar), f.model->base.algebra.top_degree());
            literature(id, f.model->known_secat,
                       "known secat = " + (f.model->known_secat ? std::to_string(*f.model->known_secat) : ""));
        }
        for (const auto& m : maps_) {
            const MapPairModel& pair = *m.model;
            const std::string dm = table_id(Invariant::Dm, m.key), hdm = table_id(Invariant::Hdm, m.key);
            const DistanceGenerators g = distance_generators(pair);
            const int top = pair.domain.algebra.top_degree();
            cup_seed(hdm, g.difference_image, top);
            cup_seed(dm, g.difference_image, top);
            if (g.zero_divisor_image) cup_seed(dm, *g.zero_divisor_image, top);
            literature(dm, pair.known_d, "known D = " + (pair.known_d ? std::to_string(*pair.known_d) : ""));
            if (pair.homotopic)
                for (int c = 0; c <= M(); ++c)
                    tighten(Cell{dm, c}, Side::Upper, 0, rules::kHomotopic, Basis::Metadata, {}, "declared homotopic");
            const SpaceModel& y = pair.codomain;
            if (pair.domain.hdim && y.pi_vanish_from) {
                const long long num = *pair.domain.hdim + 1;
                const long long den = static_cast<long long>(y.conn) + 1;
                const int bound = static_cast<int>((num + den - 1) / den - 1);
                for (int c = 0; c < M(); ++c)
                    if (*y.pi_vanish_from <= c + 2)
                        tighten(Cell{dm, c}, Side::Upper, bound, rules::kDimConn, Basis::Metadata, {},
                                "hdim X = " + std::to_string(*pair.domain.hdim) + ", conn Y = " + std::to_string(y.conn));
            }
        }
    }

    void build_constraints() {
        for (const auto& s : spaces_) {
            const SpaceModel& x = *s.model;
            const std::string cat = table_id(Invariant::Cat, s.key), tc = table_id(Invariant::Tc, s.key);
            chain_rules(cat);
            chain_rules(tc);
            if (x.hdim) {
                dimension_rules(cat, *x.hdim, *x.hdim - 1, *x.hdim, "hdim");
                dimension_rules(tc, 2 * *x.hdim, 2 * *x.hdim - 1, 2 * *x.hdim, "2*hdim");
            }
            if (x.pi_vanish_from)
                for (int c = 0; c < M(); ++c)
                    if (*x.pi_vanish_from <= c + 2) {
                        const std::string d = "pi_j(X) = 0 for j >= " + std::to_string(*x.pi_vanish_from);
                        eq(Cell{cat, c}, Cell{cat, inf()}, rules::kPiVanishing, d);
                        eq(Cell{tc, c}, Cell{tc, inf()}, rules::kPiVanishing, d);
                    }
            if (!s.factor_keys.empty())
                for (int c = 0; c <= M(); ++c) {
                    std::vector<Cell> cats, tcs;
                    for (const auto& k : s.factor_keys) {
                        cats.push_back(Cell{table_id(Invariant::Cat, k), c});
                        tcs.push_back(Cell{table_id(Invariant::Tc, k), c});
                    }
                    le_sum(Cell{cat, c}, cats, rules::kProduct);
                    le_sum(Cell{tc, c}, tcs, rules::kProduct);
                }
            for (int c = 0; c <= M(); ++c) {
                le(Cell{cat, c}, Cell{tc, c}, rules::kCatTc);
                le_times(Cell{tc, c}, Cell{cat, c}, 2, rules::kTcTwoCat);
                if (s.square_key) le(Cell{tc, c}, Cell{table_id(Invariant::Cat, *s.square_key), c}, rules::kTcSquare);
                if (x.h_space_with_division) eq(Cell{tc, c}, Cell{cat, c}, rules::kHSpace);
            }
        }
        for (const auto& f : fibrations_) {
            const FibrationModel& p = *f.model;
            const std::string id = table_id(Invariant::Secat, f.key), base = table_id(Invariant::Cat, f.base_key);
            chain_rules(id);
            for (int c = 0; c <= M(); ++c) {
                if (p.total_contractible)
                    eq(Cell{id, c}, Cell{base, c}, rules::kContractibleTotal);
                else
                    le(Cell{id, c}, Cell{base, c}, rules::kSecatCat);
            }
            if (p.base.hdim) dimension_rules(id, *p.base.hdim, *p.base.hdim - 1, *p.base.hdim, "hdim B");
            if (p.fiber_pi_vanish_from)
                for (int c = 0; c < M(); ++c)
                    if (*p.fiber_pi_vanish_from <= c + 1)
                        eq(Cell{id, c}, Cell{id, inf()}, rules::kPiVanishing,
                           "pi_k(F) = 0 for k >= " + std::to_string(*p.fiber_pi_vanish_from));
            if (!f.factor_keys.empty())
                for (int c = 0; c <= M(); ++c) {
                    std::vector<Cell> parts;
                    for (const auto& k : f.factor_keys) parts.push_back(Cell{table_id(Invariant::Secat, k), c});
                    le_sum(Cell{id, c}, parts, rules::kProduct);
                }
        }
        for (const auto& me : maps_) {
            const MapPairModel& pair = *me.model;
            const std::string dm = table_id(Invariant::Dm, me.key), hdm = table_id(Invariant::Hdm, me.key);
            const std::string catx = table_id(Invariant::Cat, me.domain_key);
            const std::string caty = table_id(Invariant::Cat, me.codomain_key);
            const std::string tcy = table_id(Invariant::Tc, me.codomain_key);
            chain_rules(dm);
            chain_rules(hdm);
            if (pair.domain.hdim) dimension_rules(dm, *pair.domain.hdim, *pair.domain.hdim - 1, *pair.domain.hdim, "hdim X");
            if (pair.codomain.pi_vanish_from)
                for (int c = 0; c < M(); ++c)
                    if (*pair.codomain.pi_vanish_from <= c + 2)
                        eq(Cell{dm, c}, Cell{dm, inf()}, rules::kPiVanishing,
                           "pi_j(Y) = 0 for j >= " + std::to_string(*pair.codomain.pi_vanish_from));
            const bool constant = pair.f_kind == MapKind::Constant || pair.g_kind == MapKind::Constant;
            const bool identity = pair.f_kind == MapKind::Identity || pair.g_kind == MapKind::Identity;
            for (int c = 0; c <= M(); ++c) {
                le(Cell{dm, c}, Cell{catx, c}, rules::kDistCatTc);
                le(Cell{dm, c}, Cell{tcy, c}, rules::kDistCatTc);
                le(Cell{hdm, c}, Cell{dm, c}, rules::kHdmDm);
                if (constant && identity) eq(Cell{dm, c}, Cell{catx, c}, rules::kConstantMap, "pair (constant, identity)");
                if (constant) le(Cell{dm, c}, Cell{caty, c}, rules::kConstantMap, "one map is constant");
                for (const auto& [a, b] : pair.triangles)
                    le_sum(Cell{dm, c}, {Cell{table_id(Invariant::Dm, a), c}, Cell{table_id(Invariant::Dm, b), c}},
                           rules::kTriangle, "through " + a + ", " + b);
            }
        }
    }

    Options options_;
    TableSet set_;
    std::vector<SpaceEntry> spaces_;
    std::vector<FibrationEntry> fibrations_;
    std::vector<MapEntry> maps_;
    std::vector<std::function<void()>> constraints_;
    bool changed_ = false;
};

} // namespace detail

/// Computes every table of the bundle: cat and TC for each space (factors
/// and squares included), secat for each fibration, D and H*D for each
/// map pair. Throws InconsistentModel when the bounds contradict.
inline TableSet compute_tables(const Bundle& bundle, const Options& options = {}) {
    detail::Engine engine(bundle, options);
    return engine.run();
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_entry(const Entry& e) {
    if (e.value.exact()) return "= " + std::to_string(e.value.lo);
    return "[" + std::to_string(e.value.lo) + ", " + bound_to_string(e.value.hi) + "]";
}

/// Plain-text table. Columns outside [from, to] are skipped (inf always
/// shown); with `certificates` the witnesses behind each lower bound are
/// printed underneath.
inline std::string render_table(const TableSet& set, const std::string& id, int from = 1,
                                std::optional<int> to = std::nullopt, bool certificates = false) {
    const BoundTable& t = set.get(id);
    std::ostringstream os;
    os << t.id << "\n";
    for (int c = 0; c <= t.max_m; ++c) {
        const Cap m = t.cap_of(c);
        if (m && (*m < from || (to && *m > *to))) continue;
        const Entry& e = t.entries[c];
        std::string cell = render_entry(e);
        std::string label = "m=" + cap_to_string(m);
        os << "  " << label << std::string(label.size() < 7 ? 7 - label.size() : 1, ' ') << cell
           << std::string(cell.size() < 10 ? 10 - cell.size() : 1, ' ') << "lo " << e.lower.back().rule;
        if (!e.upper.empty()) os << ", hi " << e.upper.back().rule;
        os << "\n";
        if (certificates && e.value.lo > 0) {
            std::set<std::string> shown;
            std::vector<Premise> todo{{t.id, c, Side::Lower, e.lower.size() - 1}};
            while (!todo.empty()) {
                const Premise p = todo.back();
                todo.pop_back();
                const Step& s = set.get(p.table).entries.at(p.column).lower.at(p.step);
                if (!s.witness.empty() && shown.insert(p.table + s.witness).second)
                    os << "      witness (" << p.table << ", " << s.detail << "): " << s.witness << "\n";
                for (const auto& q : s.premises)
                    if (q.side == Side::Lower) todo.push_back(q);
            }
        }
    }
    return os.str();
}

} // namespace mcat
