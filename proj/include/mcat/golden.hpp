#pragma once

/**
 * @file golden.hpp
 * @brief Built-in reference bundles with their expected tables, used by
 * `mcat paper-suite` and the acceptance tests.
 */

#include "mcat/invariants.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace mcat {

struct Expectation {
    std::string table;
    std::function<Interval(Cap)> expected; ///< expected interval at m (nullopt = inf)
};

struct GoldenCase {
    std::string name;
    std::string claim; ///< the mathematical statement being reproduced
    std::function<Bundle()> build;
    std::vector<Expectation> expect;
    Options options;
};

struct GoldenResult {
    std::string name;
    bool passed = false;
    std::vector<std::string> diffs;
};

namespace golden {

inline Interval exact(int v) { return {v, v}; }

/// Value for a product of spheres: cat is the number i of spheres with
/// n_i <= m; TC adds the number of even spheres among them.
inline int sphere_product_value(const std::vector<int>& dims, Cap m, bool tc) {
    int v = 0;
    for (int n : dims)
        if (!m || n <= *m) v += (tc && n % 2 == 0) ? 2 : 1;
    return v;
}

inline std::string dims_name(const std::vector<int>& dims) {
    std::string s;
    for (int n : dims) s += (s.empty() ? "S" : "xS") + std::to_string(n);
    return s;
}

inline SpaceModel sphere_product(const std::vector<int>& dims) {
    std::vector<SpaceModel> spheres;
    for (int n : dims) spheres.push_back(sphere(n, CoefficientDomain::rationals()));
    SpaceModel x = product(spheres);
    x.name = dims_name(dims);
    return x;
}

/// H*(U(2); Z) as Künneth product of S^1 and S^3, with the pullback of the
/// inversion map (x1 -> -x1, x3 -> -x3, hence x1*x3 -> x1*x3).
inline MapPairModel u2_identity_inversion() {
    const CoefficientDomain z = CoefficientDomain::integers();
    SpaceModel g = product({sphere(1, z), sphere(3, z)});
    g.name = "U2";
    g.h_space_with_division = true;
    const GradedAlgebra& a = g.algebra;
    std::vector<Element> inv;
    for (std::size_t i = 0; i < a.total_dimension(); ++i) {
        const Element e = Element::basis(a, i);
        inv.push_back(a.degree_of(i) % 2 == 1 ? -e : e);
    }
    MapPairModel pair = map_pair("idinv", g, g, identity_morphism(a), RingMorphism::from_images(a, a, inv));
    pair.f_kind = MapKind::Identity;
    return pair;
}

} // namespace golden

inline std::vector<GoldenCase> golden_cases() {
    using golden::exact;
    std::vector<GoldenCase> cases;

    for (int n = 2; n <= 8; ++n) {
        cases.push_back({"rp-cat-" + std::to_string(n), "cat_m(RP^n) = n for all m",
                         [n] {
                             Bundle b;
                             b.spaces.emplace("RP", real_projective(n));
                             return b;
                         },
                         {{"cat:RP", [n](Cap) { return exact(n); }}},
                         {}});
    }
    for (const std::vector<int>& dims : {std::vector<int>{2, 4}, std::vector<int>{1, 3}, std::vector<int>{3, 5, 6}}) {
        cases.push_back({"sphere-product-cat-" + golden::dims_name(dims), "cat_m(S^n1 x ... x S^nk) = #{i : n_i <= m}",
                         [dims] {
                             Bundle b;
                             b.spaces.emplace("X", golden::sphere_product(dims));
                             return b;
                         },
                         {{"cat:X", [dims](Cap m) { return exact(golden::sphere_product_value(dims, m, false)); }}},
                         {}});
    }
    for (int n = 1; n <= 3; ++n) {
        cases.push_back({"cp-tc-" + std::to_string(n), "TC^1(CP^n) = 0 and TC^m(CP^n) = 2n for m >= 2",
                         [n] {
                             Bundle b;
                             b.spaces.emplace("CP", complex_projective(n));
                             return b;
                         },
                         {{"tc:CP", [n](Cap m) { return exact(m && *m == 1 ? 0 : 2 * n); }},
                          {"cat:CP", [n](Cap m) { return exact(m && *m == 1 ? 0 : n); }}},
                         {}});
    }
    for (const std::vector<int>& dims : {std::vector<int>{2, 4}, std::vector<int>{1, 3}}) {
        cases.push_back({"sphere-product-tc-" + golden::dims_name(dims), "TC^m(S^n1 x ... x S^nk) = i + l(i)",
                         [dims] {
                             Bundle b;
                             b.spaces.emplace("X", golden::sphere_product(dims));
                             return b;
                         },
                         {{"tc:X", [dims](Cap m) { return exact(golden::sphere_product_value(dims, m, true)); }}},
                         {}});
    }
    for (int n : {2, 4, 3, 7}) {
        const int tc = (n == 3 || n == 7) ? n : 2 * n - 1;
        cases.push_back({"rp-tc-" + std::to_string(n), "TC^m(RP^n) = TC(RP^n) for n = 3, 7 and n a power of 2",
                         [n] {
                             Bundle b;
                             b.spaces.emplace("RP", real_projective(n));
                             return b;
                         },
                         {{"tc:RP", [tc](Cap) { return exact(tc); }}},
                         {}});
    }
    for (const auto& [rank, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}, {2, 4}, {1, 5}}) {
        cases.push_back({"moore-" + std::to_string(rank) + "-" + std::to_string(n),
                         "cat_m(M) = 0 (m < n), 1 (m >= n); TC^m(M) = 2 for n even, in [1,2] for n odd",
                         [rank, n] {
                             Bundle b;
                             b.spaces.emplace("M", moore(rank, n, CoefficientDomain::rationals()));
                             return b;
                         },
                         {{"cat:M", [n](Cap m) { return exact(!m || *m >= n ? 1 : 0); }},
                          {"tc:M", [n](Cap m) {
                               if (m && *m < n) return exact(0);
                               return n % 2 == 0 ? exact(2) : Interval{1, 2};
                           }}},
                         {}});
    }
    for (int g = 1; g <= 3; ++g) {
        const int tc = g == 1 ? 2 : 4;
        cases.push_back({"surface-orientable-" + std::to_string(g), "cat_m(Sigma_g) = 2, TC^m(Sigma_g) = 2 (g = 1) or 4",
                         [g] {
                             Bundle b;
                             b.spaces.emplace("S", orientable_surface(g));
                             return b;
                         },
                         {{"cat:S", [](Cap) { return exact(2); }}, {"tc:S", [tc](Cap) { return exact(tc); }}},
                         {}});
    }
    for (int h = 2; h <= 4; ++h) {
        cases.push_back({"surface-nonorientable-" + std::to_string(h), "cat_m(N_h) = 2, TC^m(N_h) = 4",
                         [h] {
                             Bundle b;
                             b.spaces.emplace("N", nonorientable_surface(h));
                             return b;
                         },
                         {{"cat:N", [](Cap) { return exact(2); }}, {"tc:N", [](Cap) { return exact(4); }}},
                         {}});
    }
    for (int n = 2; n <= 6; ++n) {
        cases.push_back({"covering-secat-" + std::to_string(n), "secat_m(S^n -> RP^n) = n for all m",
                         [n] {
                             Bundle b;
                             b.fibrations.emplace("p", covering_map(n));
                             return b;
                         },
                         {{"secat:p", [n](Cap) { return exact(n); }}},
                         {}});
    }
    for (int n = 1; n <= 3; ++n) {
        cases.push_back({"hopf-secat-" + std::to_string(n), "secat_1 = 0 and secat_m = n for m >= 2 (S^1 -> S^(2n+1) -> CP^n)",
                         [n] {
                             Bundle b;
                             b.fibrations.emplace("p", hopf_fibration(n));
                             return b;
                         },
                         {{"secat:p", [n](Cap m) { return exact(m && *m == 1 ? 0 : n); }}},
                         {}});
    }
    for (int n = 2; n <= 3; ++n) {
        const int tc = n % 2 == 0 ? 2 : 1;
        cases.push_back({"free-path-secat-" + std::to_string(n),
                         "secat_m(P(S^n) -> S^n x S^n) = 0 for m <= n-1, while secat = TC(S^n)",
                         [n] {
                             Bundle b;
                             b.fibrations.emplace("p", free_path_fibration(sphere(n, CoefficientDomain::rationals())));
                             return b;
                         },
                         {{"secat:p", [n, tc](Cap m) { return exact(m && *m < n ? 0 : tc); }}},
                         {}});
    }
    cases.push_back({"u2-identity-inversion",
                     "H*D_m(id, I; Z) = 1, 1, 2, ... and D_m(id, I) = 1, 1, 2, ... on U(2)",
                     [] {
                         Bundle b;
                         MapPairModel pair = golden::u2_identity_inversion();
                         b.spaces.emplace("U2", pair.domain);
                         b.maps.emplace("idinv", std::move(pair));
                         return b;
                     },
                     {{"dm:idinv", [](Cap m) { return exact(m && *m < 3 ? 1 : 2); }},
                      {"hdm:idinv", [](Cap m) { return exact(m && *m < 3 ? 1 : 2); }}},
                     {}});
    cases.push_back({"point", "all invariants of a point vanish",
                     [] {
                         Bundle b;
                         b.spaces.emplace("pt", point(CoefficientDomain::rationals()));
                         return b;
                     },
                     {{"cat:pt", [](Cap) { return exact(0); }}, {"tc:pt", [](Cap) { return exact(0); }}},
                     {}});
    return cases;
}

/// Runs one case; `mutate` may alter the bundle first (negative controls).
inline GoldenResult run_golden(const GoldenCase& c, const std::function<void(Bundle&)>& mutate = {}) {
    GoldenResult r{c.name, true, {}};
    Bundle b = c.build();
    if (mutate) mutate(b);
    TableSet set;
    try {
        set = compute_tables(b, c.options);
    } catch (const std::exception& e) {
        r.passed = false;
        r.diffs.push_back(std::string("error: ") + e.what());
        return r;
    }
    for (const auto& ex : c.expect) {
        const auto it = set.tables.find(ex.table);
        if (it == set.tables.end()) {
            r.passed = false;
            r.diffs.push_back(ex.table + ": table missing");
            continue;
        }
        const BoundTable& t = it->second;
        for (int col = 0; col <= t.max_m; ++col) {
            const Cap m = t.cap_of(col);
            const Interval want = ex.expected(m);
            const Interval got = t.entries[col].value;
            if (!(want == got)) {
                r.passed = false;
                r.diffs.push_back(ex.table + "[m=" + cap_to_string(m) + "]: expected " + render_entry(Entry{want, {}, {}}) +
                                  ", got " + render_entry(t.entries[col]));
            }
        }
    }
    return r;
}

} // namespace mcat
