#pragma once

/**
 * @file cuplength.hpp
 * @brief Degree-capped cup-length of a homogeneous subspace, with explicit
 * witnesses, plus an exhaustive search used as a test oracle.
 *
 * The capped cup-length of S (cap m) is the largest L such that L classes
 * of S, each homogeneous of positive degree at most m, have a nonzero
 * product. Any such product expands into products of canonical spanning
 * elements, so it is enough to track V_1 = span(B), V_{t+1} = span(V_t * B)
 * where B is the spanning set filtered by the cap. Each V_t is kept as a
 * basis of actual products, which makes the witness a walk up the chain.
 */

#include "mcat/algebra.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace mcat {

/// A cap of std::nullopt means unbounded (the classical invariant).
using Cap = std::optional<int>;

inline std::string cap_to_string(Cap cap) { return cap ? std::to_string(*cap) : std::string("inf"); }

struct CupLengthQuery {
    Subspace generators;
    Cap cap;
};

struct CupLengthCertificate {
    std::vector<Element> factors;
    Element product;

    /// Re-multiplies the factors and checks every stored claim.
    bool verify(Cap cap = std::nullopt) const {
        if (factors.empty()) return false;
        Element acc = factors.front();
        for (std::size_t i = 1; i < factors.size(); ++i) acc = multiply(acc, factors[i]);
        if (!(acc == product) || product.is_zero()) return false;
        for (const auto& f : factors) {
            const auto d = f.degree();
            if (!d || *d <= 0) return false;
            if (cap && *d > *cap) return false;
        }
        return true;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? " . " : "") << "(" << factors[i].to_string() << ")";
        os << " = " << product.to_string();
        return os.str();
    }
};

struct CupLengthResult {
    int length = 0;
    std::optional<CupLengthCertificate> certificate;
};

/// Spanning elements of positive degree, at most the cap.
inline std::vector<Element> capped_spanning_set(const Subspace& s, Cap cap) {
    std::vector<Element> out;
    for (auto& e : s.spanning_elements(cap))
        if (*e.degree() > 0) out.push_back(std::move(e));
    return out;
}

namespace detail {

/// Right multiplication by a fixed homogeneous element s, one matrix per
/// source degree d (rows: degree d+|s| basis, columns: degree d basis).
struct RightMultiplier {
    int degree = 0;
    std::vector<Matrix> by_degree;
    std::vector<bool> nonzero;

    RightMultiplier(const GradedAlgebra& a, const Element& s) : degree(*s.degree()) {
        const Vector w = s.component(degree);
        const int top = a.top_degree();
        by_degree.resize(top + 1);
        nonzero.assign(top + 1, false);
        for (int d = 0; d + degree <= top; ++d) {
            Matrix m(a.dim(d + degree), zero_vector(a.dim(d)));
            for (std::size_t j = 0; j < a.dim(d); ++j) {
                const std::size_t gj = a.global_index(d, j);
                for (std::size_t i = 0; i < w.size(); ++i) {
                    if (w[i] == 0) continue;
                    const Vector& p = a.product(gj, a.global_index(degree, i));
                    for (std::size_t k = 0; k < p.size(); ++k)
                        if (p[k] != 0) m[k][j] += w[i] * p[k];
                }
            }
            for (auto& row : m)
                for (auto& x : row) {
                    x = a.coeff().normalize(x);
                    if (x != 0) nonzero[d] = true;
                }
            by_degree[d] = std::move(m);
        }
    }
};

} // namespace detail

inline CupLengthResult capped_cuplength(const Subspace& generators, Cap cap) {
    const std::vector<Element> base = capped_spanning_set(generators, cap);
    if (base.empty()) return {};
    const GradedAlgebra& a = generators.algebra();
    const CoefficientDomain& dom = a.coeff();
    const int top = a.top_degree();

    std::vector<detail::RightMultiplier> right;
    right.reserve(base.size());
    for (const auto& s : base) right.emplace_back(a, s);

    struct Node {
        int degree;
        Vector value;
        int parent; // index into the previous level, -1 on level 1
        int factor; // index into base
    };
    std::vector<std::vector<Node>> levels;
    levels.emplace_back();
    for (std::size_t i = 0; i < base.size(); ++i)
        levels.back().push_back({*base[i].degree(), base[i].component(*base[i].degree()), -1, static_cast<int>(i)});

    while (true) {
        const auto& cur = levels.back();
        std::vector<Node> next;
        std::map<int, IncrementalEchelon> echelons;
        for (std::size_t v = 0; v < cur.size(); ++v) {
            const int dv = cur[v].degree;
            for (std::size_t s = 0; s < base.size(); ++s) {
                const int d = dv + right[s].degree;
                if (d > top || !right[s].nonzero[dv]) continue;
                auto it = echelons.try_emplace(d, dom).first;
                if (it->second.rank() == a.dim(d)) continue; // V_{t+1} already fills degree d
                Vector p = apply(right[s].by_degree[dv], cur[v].value, dom);
                if (is_zero(p)) continue;
                if (it->second.insert(p)) next.push_back({d, std::move(p), static_cast<int>(v), static_cast<int>(s)});
            }
        }
        if (next.empty()) break;
        levels.push_back(std::move(next));
    }

    CupLengthCertificate cert;
    cert.product = Element::homogeneous(a, levels.back().front().degree, levels.back().front().value);
    std::vector<Element> reversed;
    int idx = 0;
    for (std::size_t t = levels.size(); t-- > 0;) {
        const Node& n = levels[t][idx];
        reversed.push_back(base[n.factor]);
        idx = n.parent;
    }
    cert.factors.assign(reversed.rbegin(), reversed.rend());
    return {static_cast<int>(levels.size()), std::move(cert)};
}

inline CupLengthResult capped_cuplength(const CupLengthQuery& q) { return capped_cuplength(q.generators, q.cap); }

/// capped_cuplength for every cap 1..max_cap (index cap-1). The length is
/// monotone in the cap, so when two caps give the same length every cap in
/// between does too, and the smaller cap's witness serves for all of them.
inline std::vector<CupLengthResult> cuplength_profile(const Subspace& generators, int max_cap) {
    std::vector<std::optional<CupLengthResult>> memo(max_cap);
    auto at = [&](int c) -> const CupLengthResult& {
        if (!memo[c - 1]) memo[c - 1] = capped_cuplength(generators, c);
        return *memo[c - 1];
    };
    std::vector<std::pair<int, int>> todo;
    if (max_cap >= 1) todo.emplace_back(1, max_cap);
    while (!todo.empty()) {
        const auto [lo, hi] = todo.back();
        todo.pop_back();
        if (hi - lo <= 1) {
            at(lo);
            at(hi);
            continue;
        }
        if (at(lo).length == at(hi).length) {
            for (int c = lo + 1; c < hi; ++c) memo[c - 1] = at(lo);
            continue;
        }
        const int mid = lo + (hi - lo) / 2;
        todo.emplace_back(lo, mid);
        todo.emplace_back(mid, hi);
    }
    std::vector<CupLengthResult> out;
    for (auto& r : memo) out.push_back(std::move(*r));
    return out;
}

/// Exhaustive search over explicit products, for cross-checking
/// capped_cuplength on small algebras. Over F2 the candidate factors are
/// all nonzero homogeneous elements of the subspace; otherwise they are the
/// spanning elements. Products are explored breadth-first by value.
inline int brute_force_cuplength(const Subspace& generators, Cap cap, int max_len, std::size_t guard = 14) {
    const GradedAlgebra& a = generators.algebra();
    if (a.total_dimension() > guard)
        throw AlgebraError(ErrorCode::SizeGuardExceeded, "algebra has " + std::to_string(a.total_dimension()) +
                                                             " basis elements, guard is " + std::to_string(guard));
    std::vector<Element> candidates;
    const CoefficientDomain& dom = a.coeff();
    if (dom.kind() == CoefficientDomain::Kind::PrimeField && dom.characteristic() == 2) {
        for (int d = 1; d <= a.top_degree(); ++d) {
            if (cap && d > *cap) break;
            const Matrix& rows = generators.rows(d);
            const std::size_t k = rows.size();
            for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
                Vector v = zero_vector(a.dim(d));
                for (std::size_t r = 0; r < k; ++r)
                    if (mask & (std::size_t{1} << r))
                        for (std::size_t j = 0; j < v.size(); ++j) v[j] += rows[r][j];
                candidates.push_back(Element::homogeneous(a, d, std::move(v)));
            }
        }
    } else {
        candidates = capped_spanning_set(generators, cap);
    }

    std::vector<Element> frontier;
    for (const auto& c : candidates)
        if (!c.is_zero()) frontier.push_back(c);
    int best = 0;
    for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        best = len;
        if (len == max_len) break;
        std::set<std::string> seen;
        std::vector<Element> next;
        for (const auto& v : frontier)
            for (const auto& c : candidates) {
                Element p = multiply(v, c);
                if (p.is_zero()) continue;
                if (seen.insert(std::to_string(*p.degree()) + ":" + p.to_string()).second) next.push_back(std::move(p));
            }
        frontier = std::move(next);
    }
    return best;
}

} // namespace mcat
