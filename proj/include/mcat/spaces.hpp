#pragma once

/**
 * @file spaces.hpp
 * @brief Cohomology models of spaces, fibrations and pairs of maps, with
 * the homotopy metadata the bound rules consume, plus the built-in
 * constructors (spheres, projective spaces, Moore spaces, surfaces,
 * products, standard fibrations).
 *
 * Literature values (known_cat, known_tc, known_secat, known_d) are kept
 * apart from the algebra so that they can be switched off as a group.
 */

#include "mcat/algebra.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mcat {

/// Connectivity of a contractible space.
inline constexpr int kContractible = 1 << 20;

struct SpaceModel {
    std::string name;
    GradedAlgebra algebra;
    int conn = 0;                      ///< space is conn-connected
    std::optional<int> hdim;           ///< homotopy dimension, absent = unknown
    std::optional<int> pi_vanish_from; ///< pi_j = 0 for all j >= this
    bool h_space_with_division = false;
    std::optional<int> known_cat;
    std::optional<int> known_tc;
    std::vector<SpaceModel> factors;    ///< declared product structure
    std::shared_ptr<const SpaceModel> square; ///< optional model of X x X
};

struct FibrationModel {
    std::string name;
    SpaceModel base;
    GradedAlgebra total_algebra;
    RingMorphism pstar;
    bool total_contractible = false;
    std::optional<int> fiber_pi_vanish_from; ///< pi_k(F) = 0 for all k >= this
    std::optional<int> known_secat;
    std::vector<FibrationModel> factors; ///< declared product fibration
};

/// How a map of a pair is known to the engine beyond its pullback.
enum class MapKind { General, Identity, Constant };

struct MapPairModel {
    std::string name;
    SpaceModel domain;   ///< X
    SpaceModel codomain; ///< Y
    RingMorphism fstar;  ///< H(Y) -> H(X)
    RingMorphism gstar;
    MapKind f_kind = MapKind::General;
    MapKind g_kind = MapKind::General;
    bool homotopic = false;
    std::optional<int> known_d;
    /// Mediators h: pairs of map-pair names (f,h) and (h,g) in the same bundle.
    std::vector<std::pair<std::string, std::string>> triangles;
};

/// Metadata sanity that does not need the rule engine.
inline void validate(const SpaceModel& x) {
    if (!x.algebra.valid()) throw AlgebraError(ErrorCode::InvalidSpec, "space '" + x.name + "' has no algebra");
    if (x.conn < 0) throw AlgebraError(ErrorCode::InvalidSpec, "space '" + x.name + "': conn must be >= 0");
    if (x.hdim && *x.hdim < x.algebra.top_degree())
        throw AlgebraError(ErrorCode::InvalidSpec, "space '" + x.name + "': hdim " + std::to_string(*x.hdim) +
                                                       " is below the top degree " +
                                                       std::to_string(x.algebra.top_degree()));
    if (x.known_cat && *x.known_cat < 0) throw AlgebraError(ErrorCode::InvalidSpec, "space '" + x.name + "': known_cat < 0");
    if (x.known_tc && *x.known_tc < 0) throw AlgebraError(ErrorCode::InvalidSpec, "space '" + x.name + "': known_tc < 0");
    for (const auto& f : x.factors) {
        validate(f);
        if (!(f.algebra.coeff() == x.algebra.coeff()))
            throw AlgebraError(ErrorCode::CoefficientMismatch, "factor '" + f.name + "' of '" + x.name + "'");
    }
    if (x.square) {
        validate(*x.square);
        if (!(x.square->algebra.coeff() == x.algebra.coeff()))
            throw AlgebraError(ErrorCode::CoefficientMismatch, "square model of '" + x.name + "'");
    }
}

inline void validate(const FibrationModel& p) {
    validate(p.base);
    if (!p.pstar.source().same_structure(p.base.algebra) || !p.pstar.target().same_structure(p.total_algebra))
        throw AlgebraError(ErrorCode::MorphismMismatch, "fibration '" + p.name + "': p* must map H(B) to H(E)");
    for (const auto& f : p.factors) validate(f);
}

inline void validate(const MapPairModel& pair) {
    validate(pair.domain);
    validate(pair.codomain);
    for (const RingMorphism* m : {&pair.fstar, &pair.gstar})
        if (!m->source().same_structure(pair.codomain.algebra) || !m->target().same_structure(pair.domain.algebra))
            throw AlgebraError(ErrorCode::MorphismMismatch, "map pair '" + pair.name + "': f*, g* must map H(Y) to H(X)");
}

// ---------------------------------------------------------------------------
// Constructors

inline SpaceModel point(const CoefficientDomain& coeff) {
    SpaceModel x;
    x.name = "pt";
    x.algebra = point_algebra(coeff);
    x.conn = kContractible;
    x.hdim = 0;
    x.pi_vanish_from = 1;
    x.known_cat = 0;
    x.known_tc = 0;
    return x;
}

inline SpaceModel sphere(int n, const CoefficientDomain& coeff) {
    if (n < 1) throw AlgebraError(ErrorCode::InvalidSpec, "sphere dimension must be >= 1");
    SpaceModel x;
    x.name = "S^" + std::to_string(n);
    AlgebraSpec spec;
    spec.coeff = coeff;
    spec.basis.assign(n + 1, {});
    spec.basis[0] = {"1"};
    spec.basis[n] = {"x" + std::to_string(n)};
    x.algebra = make_algebra(spec);
    x.conn = n - 1;
    x.hdim = n;
    if (n == 1) x.pi_vanish_from = 2;
    x.known_cat = 1;
    x.known_tc = n % 2 == 1 ? 1 : 2;
    return x;
}

/// RP^n over F2. Literature TC only where it is settled: n in {1,3,7}
/// (value n) and n a power of two (value 2n-1).
inline SpaceModel real_projective(int n) {
    if (n < 2) throw AlgebraError(ErrorCode::InvalidSpec, "real_projective needs n >= 2");
    SpaceModel x;
    x.name = "RP^" + std::to_string(n);
    x.algebra = truncated_polynomial(CoefficientDomain::prime_field(2), "x", 1, n);
    x.conn = 0;
    x.hdim = n;
    x.known_cat = n;
    if (n == 3 || n == 7) {
        x.known_tc = n;
    } else if ((n & (n - 1)) == 0) {
        x.known_tc = 2 * n - 1;
    }
    return x;
}

inline SpaceModel complex_projective(int n) {
    if (n < 1) throw AlgebraError(ErrorCode::InvalidSpec, "complex_projective needs n >= 1");
    SpaceModel x;
    x.name = "CP^" + std::to_string(n);
    x.algebra = truncated_polynomial(CoefficientDomain::rationals(), "u", 2, n);
    x.conn = 1;
    x.hdim = 2 * n;
    x.known_cat = n;
    x.known_tc = 2 * n;
    return x;
}

/// Torsion-free Moore space M(Z^r, n) with field coefficients.
inline SpaceModel moore(int rank, int n, const CoefficientDomain& coeff) {
    if (rank < 1 || n < 2) throw AlgebraError(ErrorCode::InvalidSpec, "moore needs rank >= 1 and n >= 2");
    if (!coeff.is_field()) throw AlgebraError(ErrorCode::UnsupportedCoefficients, "moore constructor takes field coefficients");
    SpaceModel x;
    x.name = "M(" + std::to_string(rank) + "," + std::to_string(n) + ")";
    AlgebraSpec spec;
    spec.coeff = coeff;
    spec.basis.assign(n + 1, {});
    spec.basis[0] = {"1"};
    for (int i = 1; i <= rank; ++i) spec.basis[n].push_back("a" + std::to_string(i));
    x.algebra = make_algebra(spec);
    x.conn = n - 1;
    x.hdim = n;
    x.known_cat = 1;
    return x;
}

/// Closed orientable surface of genus g over Q.
inline SpaceModel orientable_surface(int g) {
    if (g < 1) throw AlgebraError(ErrorCode::InvalidSpec, "orientable_surface needs g >= 1");
    SpaceModel x;
    x.name = "Sigma_" + std::to_string(g);
    AlgebraSpec spec;
    spec.coeff = CoefficientDomain::rationals();
    spec.basis = {{"1"}, {}, {"w"}};
    for (int i = 1; i <= g; ++i) {
        spec.basis[1].push_back("a" + std::to_string(i));
        spec.basis[1].push_back("b" + std::to_string(i));
    }
    for (int i = 1; i <= g; ++i) {
        const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
        spec.products.push_back({a, b, {{"w", Scalar(1)}}});
        spec.products.push_back({b, a, {{"w", Scalar(-1)}}});
    }
    x.algebra = make_algebra(spec);
    x.conn = 0;
    x.hdim = 2;
    x.pi_vanish_from = 2;
    x.known_cat = 2;
    x.known_tc = g == 1 ? 2 : 4;
    return x;
}

/// Closed non-orientable surface N_h = #h RP^2 over F2.
inline SpaceModel nonorientable_surface(int h) {
    if (h < 2) throw AlgebraError(ErrorCode::InvalidSpec, "nonorientable_surface needs h >= 2");
    SpaceModel x;
    x.name = "N_" + std::to_string(h);
    AlgebraSpec spec;
    spec.coeff = CoefficientDomain::prime_field(2);
    spec.basis = {{"1"}, {}, {"w"}};
    for (int i = 1; i <= h; ++i) spec.basis[1].push_back("x" + std::to_string(i));
    for (int i = 1; i <= h; ++i) {
        const std::string xi = "x" + std::to_string(i);
        spec.products.push_back({xi, xi, {{"w", Scalar(1)}}});
    }
    x.algebra = make_algebra(spec);
    x.conn = 0;
    x.hdim = 2;
    x.pi_vanish_from = 2;
    x.known_cat = 2;
    x.known_tc = 4;
    return x;
}

inline GradedAlgebra rename_basis(const GradedAlgebra& a, const std::string& suffix) {
    std::vector<std::vector<std::string>> names;
    std::vector<Vector> products;
    for (int d = 0; d <= a.top_degree(); ++d) {
        names.push_back(a.names(d));
        if (d > 0)
            for (auto& n : names.back()) n += suffix;
    }
    const std::size_t n = a.total_dimension();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) products.push_back(a.product(i, j));
    return GradedAlgebra::from_structure(a.coeff(), std::move(names), std::move(products));
}

/// Declared product X_1 x ... x X_r. Basis names of the factors are kept
/// unless two factors share a name, in which case factor i's names get
/// the suffix "_i".
inline SpaceModel product(const std::vector<SpaceModel>& models) {
    if (models.empty()) throw AlgebraError(ErrorCode::InvalidSpec, "product of no spaces");
    if (models.size() == 1) return models.front();
    for (const auto& m : models)
        if (!(m.algebra.coeff() == models.front().algebra.coeff()))
            throw AlgebraError(ErrorCode::CoefficientMismatch,
                               "product mixes " + models.front().algebra.coeff().name() + " and " + m.algebra.coeff().name());
    std::set<std::string> seen;
    bool clash = false;
    for (const auto& m : models)
        for (int d = 1; d <= m.algebra.top_degree(); ++d)
            for (const auto& n : m.algebra.names(d))
                if (!seen.insert(n).second) clash = true;

    SpaceModel x;
    GradedAlgebra acc;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const GradedAlgebra a = clash ? rename_basis(models[i].algebra, "_" + std::to_string(i + 1)) : models[i].algebra;
        acc = i == 0 ? a : kunneth_product(acc, a).algebra;
        x.name += (i == 0 ? "" : "x") + models[i].name;
    }
    x.algebra = acc;
    x.conn = models.front().conn;
    bool all_hdim = true, all_pi = true;
    int hdim = 0, pi = 0;
    for (const auto& m : models) {
        x.conn = std::min(x.conn, m.conn);
        if (m.hdim) hdim += *m.hdim; else all_hdim = false;
        if (m.pi_vanish_from) pi = std::max(pi, *m.pi_vanish_from); else all_pi = false;
    }
    if (all_hdim) x.hdim = hdim;
    if (all_pi) x.pi_vanish_from = pi;
    x.factors = models;
    return x;
}

/// Pullback along a constant map X -> Y: the augmentation H(Y) -> H(X).
inline RingMorphism constant_map_pullback(const SpaceModel& y, const SpaceModel& x) {
    return augmentation(y.algebra, x.algebra);
}

/// Pullback along the diagonal X -> X x X, where `xx` is product({x, x}).
inline RingMorphism diagonal_pullback(const SpaceModel& x, const SpaceModel& xx) {
    const TensorProduct square = tensor_square(x.algebra);
    if (!square.algebra.same_structure(xx.algebra))
        throw AlgebraError(ErrorCode::AlgebraMismatch, "'" + xx.name + "' is not the square of '" + x.name + "'");
    const RingMorphism mu = pair_morphism(identity_morphism(x.algebra), identity_morphism(x.algebra), square);
    std::vector<Element> images;
    for (std::size_t g = 0; g < xx.algebra.total_dimension(); ++g) images.push_back(mu.image_of(g));
    return RingMorphism::unchecked(xx.algebra, x.algebra, images);
}

/// Universal cover S^n -> RP^n over F2; the fibre is discrete.
inline FibrationModel covering_map(int n) {
    FibrationModel p;
    p.name = "S^" + std::to_string(n) + "->RP^" + std::to_string(n);
    p.base = real_projective(n);
    p.total_algebra = sphere(n, CoefficientDomain::prime_field(2)).algebra;
    p.pstar = augmentation(p.base.algebra, p.total_algebra);
    p.fiber_pi_vanish_from = 1;
    return p;
}

/// Hopf fibration S^1 -> S^{2n+1} -> CP^n.
inline FibrationModel hopf_fibration(int n) {
    FibrationModel p;
    p.name = "S^" + std::to_string(2 * n + 1) + "->CP^" + std::to_string(n);
    p.base = complex_projective(n);
    p.total_algebra = sphere(2 * n + 1, CoefficientDomain::rationals()).algebra;
    p.pstar = augmentation(p.base.algebra, p.total_algebra);
    p.fiber_pi_vanish_from = 2;
    return p;
}

/// Free path fibration PX -> X x X; PX is modelled by H(X) and p* by the
/// diagonal pullback. Its secat is TC(X), so a literature TC carries over.
inline FibrationModel free_path_fibration(const SpaceModel& x) {
    FibrationModel p;
    p.name = "P(" + x.name + ")";
    p.base = product({x, x});
    p.total_algebra = x.algebra;
    p.pstar = diagonal_pullback(x, p.base);
    p.known_secat = x.known_tc;
    return p;
}

inline MapPairModel map_pair(std::string name, const SpaceModel& x, const SpaceModel& y, RingMorphism fstar,
                             RingMorphism gstar) {
    MapPairModel pair;
    pair.name = std::move(name);
    pair.domain = x;
    pair.codomain = y;
    pair.fstar = std::move(fstar);
    pair.gstar = std::move(gstar);
    validate(pair);
    return pair;
}

} // namespace mcat
