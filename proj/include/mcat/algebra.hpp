#pragma once

/**
 * @file algebra.hpp
 * @brief Finite graded-commutative algebras, their elements, ring
 * morphisms and graded subspaces.
 *
 * An algebra is given by an ordered basis per degree and structure
 * constants for every pair of basis elements. Everything is immutable
 * after construction and shares its data through a const shared_ptr, so
 * copies are cheap and values can be handed across threads.
 */

#include "mcat/coeff.hpp"
#include "mcat/linalg.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcat {

/// (-1)^(a*b)
inline int koszul_sign(int a, int b) { return ((a * b) % 2 == 0) ? 1 : -1; }

/// Construction input for make_algebra. basis[d] lists the names of the
/// degree-d basis elements in order; basis[0] must hold exactly the unit.
/// Products not listed are zero, except that listing x*y also determines
/// y*x through the sign law when y*x is not listed itself.
struct AlgebraSpec {
    struct Product {
        std::string left;
        std::string right;
        std::vector<std::pair<std::string, Scalar>> result;
    };

    CoefficientDomain coeff;
    std::vector<std::vector<std::string>> basis;
    std::vector<Product> products;
};

class GradedAlgebra {
public:
    struct Data {
        CoefficientDomain coeff;
        std::vector<std::vector<std::string>> basis;
        std::vector<std::size_t> offset; // global index of first element of each degree
        std::vector<int> degree_of;
        std::vector<std::size_t> local_of;
        std::unordered_map<std::string, std::size_t> index_of;
        std::vector<Vector> products; // total*total; empty when the degree exceeds top
    };

    GradedAlgebra() = default;

    /// Builds an algebra from raw structure constants without running the
    /// law checks; callers are responsible for validity (see validate()).
    static GradedAlgebra from_structure(CoefficientDomain coeff,
                                        std::vector<std::vector<std::string>> basis,
                                        std::vector<Vector> products) {
        auto data = std::make_shared<Data>();
        data->coeff = coeff;
        data->basis = std::move(basis);
        std::size_t total = 0;
        for (std::size_t d = 0; d < data->basis.size(); ++d) {
            data->offset.push_back(total);
            for (std::size_t i = 0; i < data->basis[d].size(); ++i) {
                data->degree_of.push_back(static_cast<int>(d));
                data->local_of.push_back(i);
                const auto [it, fresh] = data->index_of.emplace(data->basis[d][i], total);
                if (!fresh)
                    throw AlgebraError(ErrorCode::InvalidSpec,
                                       "duplicate basis name '" + data->basis[d][i] + "'");
                ++total;
            }
        }
        if (products.size() != total * total)
            throw AlgebraError(ErrorCode::InvalidSpec, "structure constant table has wrong size");
        data->products = std::move(products);
        GradedAlgebra a;
        a.data_ = std::move(data);
        return a;
    }

    bool valid() const noexcept { return data_ != nullptr; }
    const CoefficientDomain& coeff() const { return data_->coeff; }
    int top_degree() const { return static_cast<int>(data_->basis.size()) - 1; }
    std::size_t dim(int d) const {
        if (d < 0 || d > top_degree()) return 0;
        return data_->basis[d].size();
    }
    std::size_t total_dimension() const { return data_->degree_of.size(); }
    const std::vector<std::string>& names(int d) const { return data_->basis.at(d); }
    const std::string& name(std::size_t global) const {
        return data_->basis[data_->degree_of[global]][data_->local_of[global]];
    }
    int degree_of(std::size_t global) const { return data_->degree_of[global]; }
    std::size_t local_of(std::size_t global) const { return data_->local_of[global]; }
    std::size_t global_index(int d, std::size_t local) const { return data_->offset[d] + local; }
    std::optional<std::size_t> find(const std::string& name) const {
        const auto it = data_->index_of.find(name);
        if (it == data_->index_of.end()) return std::nullopt;
        return it->second;
    }
    /// x_i * x_j as a coefficient vector in degree |x_i|+|x_j|.
    const Vector& product(std::size_t i, std::size_t j) const {
        return data_->products[i * total_dimension() + j];
    }

    bool same_object(const GradedAlgebra& other) const { return data_ == other.data_; }

    /// Equal coefficients, ranks and structure constants; names ignored.
    bool same_structure(const GradedAlgebra& other) const {
        if (data_ == other.data_) return true;
        if (!(coeff() == other.coeff()) || top_degree() != other.top_degree()) return false;
        for (int d = 0; d <= top_degree(); ++d)
            if (dim(d) != other.dim(d)) return false;
        return data_->products == other.data_->products;
    }

    friend bool operator==(const GradedAlgebra& a, const GradedAlgebra& b) {
        return a.same_structure(b) && a.data_->basis == b.data_->basis;
    }

private:
    std::shared_ptr<const Data> data_;
};

/// Possibly inhomogeneous element: degree -> coefficient vector, holding
/// only nonzero components.
class Element {
public:
    Element() = default;
    explicit Element(GradedAlgebra algebra) : algebra_(std::move(algebra)) {}

    Element(GradedAlgebra algebra, std::map<int, Vector> components) : algebra_(std::move(algebra)) {
        for (auto& [d, v] : components) {
            if (v.size() != algebra_.dim(d))
                throw AlgebraError(ErrorCode::InvalidSpec, "component of wrong size in degree " + std::to_string(d));
            for (auto& x : v) x = algebra_.coeff().normalize(x);
            if (!mcat::is_zero(v)) components_.emplace(d, std::move(v));
        }
    }

    static Element homogeneous(const GradedAlgebra& a, int d, Vector v) {
        std::map<int, Vector> c;
        c.emplace(d, std::move(v));
        return Element(a, std::move(c));
    }

    static Element unit(const GradedAlgebra& a) { return homogeneous(a, 0, Vector{Scalar(1)}); }

    static Element basis(const GradedAlgebra& a, std::size_t global) {
        const int d = a.degree_of(global);
        Vector v = zero_vector(a.dim(d));
        v[a.local_of(global)] = 1;
        return homogeneous(a, d, std::move(v));
    }

    static Element basis(const GradedAlgebra& a, const std::string& name) {
        const auto g = a.find(name);
        if (!g) throw AlgebraError(ErrorCode::InvalidSpec, "unknown basis element '" + name + "'");
        return basis(a, *g);
    }

    const GradedAlgebra& algebra() const { return algebra_; }
    const std::map<int, Vector>& components() const { return components_; }
    bool is_zero() const { return components_.empty(); }
    bool is_homogeneous() const { return components_.size() == 1; }
    std::optional<int> degree() const {
        if (!is_homogeneous()) return std::nullopt;
        return components_.begin()->first;
    }
    /// Component in degree d (a zero vector when absent).
    Vector component(int d) const {
        const auto it = components_.find(d);
        return it == components_.end() ? zero_vector(algebra_.dim(d)) : it->second;
    }

    Element operator+(const Element& other) const { return combine(other, 1); }
    Element operator-(const Element& other) const { return combine(other, -1); }
    Element operator-() const { return scaled(Scalar(-1)); }

    Element scaled(const Scalar& c) const {
        std::map<int, Vector> out = components_;
        for (auto& [d, v] : out)
            for (auto& x : v) x *= c;
        return Element(algebra_, std::move(out));
    }

    friend bool operator==(const Element& a, const Element& b) {
        return a.algebra_.same_structure(b.algebra_) && a.components_ == b.components_;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [d, v] : components_) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == 0) continue;
                const std::string& n = algebra_.names(d)[i];
                Scalar c = v[i];
                if (!first) {
                    os << (c < 0 ? " - " : " + ");
                    if (c < 0) c = -c;
                } else if (c < 0) {
                    os << "-";
                    c = -c;
                }
                if (c != 1) os << c.str() << "*";
                os << n;
                first = false;
            }
        }
        return os.str();
    }

private:
    Element combine(const Element& other, int sign) const {
        if (!algebra_.same_structure(other.algebra_))
            throw AlgebraError(ErrorCode::AlgebraMismatch, "elements belong to different algebras");
        std::map<int, Vector> out = components_;
        for (const auto& [d, v] : other.components_) {
            auto [it, fresh] = out.emplace(d, zero_vector(v.size()));
            for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += sign * v[i];
        }
        return Element(algebra_, std::move(out));
    }

    GradedAlgebra algebra_;
    std::map<int, Vector> components_;
};

/// Cup product: bilinear extension of the structure constants.
inline Element multiply(const Element& a, const Element& b) {
    const GradedAlgebra& alg = a.algebra();
    if (!alg.same_structure(b.algebra()))
        throw AlgebraError(ErrorCode::AlgebraMismatch, "cannot multiply elements of different algebras");
    std::map<int, Vector> out;
    for (const auto& [da, va] : a.components()) {
        for (const auto& [db, vb] : b.components()) {
            const int d = da + db;
            if (d > alg.top_degree()) continue;
            auto [it, fresh] = out.emplace(d, zero_vector(alg.dim(d)));
            Vector& acc = it->second;
            for (std::size_t i = 0; i < va.size(); ++i) {
                if (va[i] == 0) continue;
                const std::size_t gi = alg.global_index(da, i);
                for (std::size_t j = 0; j < vb.size(); ++j) {
                    if (vb[j] == 0) continue;
                    const Vector& p = alg.product(gi, alg.global_index(db, j));
                    const Scalar c = va[i] * vb[j];
                    for (std::size_t k = 0; k < p.size(); ++k)
                        if (p[k] != 0) acc[k] += c * p[k];
                }
            }
        }
    }
    return Element(alg, std::move(out));
}

/// Re-asserts unit law, graded commutativity and associativity on every
/// basis pair and triple. Throws AlgebraError naming the first offender.
inline void validate(const GradedAlgebra& a) {
    const std::size_t n = a.total_dimension();
    const auto& dom = a.coeff();
    if (a.dim(0) != 1)
        throw AlgebraError(ErrorCode::UnitViolation, "degree-0 component must be spanned by the unit");
    const Element one = Element::unit(a);
    std::vector<Element> basis;
    basis.reserve(n);
    for (std::size_t g = 0; g < n; ++g) basis.push_back(Element::basis(a, g));

    for (std::size_t g = 0; g < n; ++g) {
        if (!(multiply(one, basis[g]) == basis[g]) || !(multiply(basis[g], one) == basis[g]))
            throw AlgebraError(ErrorCode::UnitViolation, "1*" + a.name(g) + " or " + a.name(g) + "*1 differs from " + a.name(g));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const int sign = koszul_sign(a.degree_of(i), a.degree_of(j));
            const Element xy = multiply(basis[i], basis[j]);
            const Element yx = multiply(basis[j], basis[i]);
            if (!(xy == yx.scaled(Scalar(sign))))
                throw AlgebraError(ErrorCode::CommutativityViolation,
                                   "(" + a.name(i) + ", " + a.name(j) + "): " + a.name(i) + "*" + a.name(j) + " = " +
                                       xy.to_string() + " but " + a.name(j) + "*" + a.name(i) + " = " + yx.to_string());
        }
    }
    const int top = a.top_degree();
    for (std::size_t i = a.dim(0); i < n; ++i) {
        for (std::size_t j = a.dim(0); j < n; ++j) {
            if (a.degree_of(i) + a.degree_of(j) > top) continue;
            const Element xy = multiply(basis[i], basis[j]);
            for (std::size_t k = a.dim(0); k < n; ++k) {
                if (a.degree_of(i) + a.degree_of(j) + a.degree_of(k) > top) continue;
                const Element lhs = multiply(xy, basis[k]);
                const Element rhs = multiply(basis[i], multiply(basis[j], basis[k]));
                if (!(lhs == rhs))
                    throw AlgebraError(ErrorCode::AssociativityViolation,
                                       "(" + a.name(i) + ", " + a.name(j) + ", " + a.name(k) + "): (xy)z = " +
                                           lhs.to_string() + " but x(yz) = " + rhs.to_string());
            }
        }
    }
    (void)dom;
}

/// Validated construction from a basis + structure-constant description.
inline GradedAlgebra make_algebra(const AlgebraSpec& spec) {
    auto basis = spec.basis;
    while (basis.size() > 1 && basis.back().empty()) basis.pop_back();
    if (basis.empty() || basis[0].size() != 1)
        throw AlgebraError(ErrorCode::UnitViolation, "degree-0 component must list exactly one element (the unit)");
    const int top = static_cast<int>(basis.size()) - 1;

    std::unordered_map<std::string, std::pair<int, std::size_t>> where;
    std::size_t total = 0;
    for (int d = 0; d <= top; ++d)
        for (std::size_t i = 0; i < basis[d].size(); ++i) {
            if (!where.emplace(basis[d][i], std::make_pair(d, i)).second)
                throw AlgebraError(ErrorCode::InvalidSpec, "duplicate basis name '" + basis[d][i] + "'");
            ++total;
        }
    std::vector<std::size_t> offset(top + 1, 0);
    for (int d = 1; d <= top; ++d) offset[d] = offset[d - 1] + basis[d - 1].size();
    auto global = [&](const std::string& name) {
        const auto it = where.find(name);
        if (it == where.end()) throw AlgebraError(ErrorCode::InvalidSpec, "unknown basis element '" + name + "'");
        return std::make_pair(it->second.first, offset[it->second.first] + it->second.second);
    };
    auto dim = [&](int d) -> std::size_t { return d <= top ? basis[d].size() : 0; };

    std::vector<Vector> table(total * total);
    std::vector<bool> listed(total * total, false);
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j) {
            int di = 0, dj = 0;
            for (int d = 0; d <= top; ++d) {
                if (i >= offset[d] && i < offset[d] + basis[d].size()) di = d;
                if (j >= offset[d] && j < offset[d] + basis[d].size()) dj = d;
            }
            table[i * total + j] = zero_vector(dim(di + dj));
        }

    const std::string& unit_name = basis[0][0];
    for (const auto& p : spec.products) {
        const auto [dl, gl] = global(p.left);
        const auto [dr, gr] = global(p.right);
        Vector v = zero_vector(dim(dl + dr));
        for (const auto& [name, c] : p.result) {
            const auto [dn, gn] = global(name);
            if (dn != dl + dr)
                throw AlgebraError(ErrorCode::InvalidSpec, "product " + p.left + "*" + p.right + " lands in degree " +
                                                               std::to_string(dl + dr) + " but '" + name +
                                                               "' has degree " + std::to_string(dn));
            v[gn - offset[dn]] = spec.coeff.add(v[gn - offset[dn]], c);
        }
        if (dl + dr > top && !is_zero(v))
            throw AlgebraError(ErrorCode::InvalidSpec, "product " + p.left + "*" + p.right + " exceeds top degree");
        if (p.left == unit_name || p.right == unit_name) {
            const std::string& other = p.left == unit_name ? p.right : p.left;
            const auto [dother, gother] = global(other);
            Vector expect = zero_vector(dim(dother));
            expect[gother - offset[dother]] = 1;
            if (v != expect)
                throw AlgebraError(ErrorCode::UnitViolation, "(" + p.left + ", " + p.right + ") does not return " + other);
        }
        table[gl * total + gr] = v;
        listed[gl * total + gr] = true;
    }
    // unit products, then sign-law completion of one-sided listings
    for (std::size_t g = 0; g < total; ++g) {
        int d = 0;
        for (int e = 0; e <= top; ++e)
            if (g >= offset[e] && g < offset[e] + basis[e].size()) d = e;
        Vector v = zero_vector(dim(d));
        v[g - offset[d]] = 1;
        table[0 * total + g] = v;
        table[g * total + 0] = v;
        listed[g] = listed[g * total] = true;
    }
    for (const auto& p : spec.products) {
        const auto [dl, gl] = global(p.left);
        const auto [dr, gr] = global(p.right);
        if (listed[gr * total + gl]) continue;
        Vector v = table[gl * total + gr];
        if (koszul_sign(dl, dr) < 0)
            for (auto& x : v) x = spec.coeff.neg(x);
        table[gr * total + gl] = std::move(v);
        listed[gr * total + gl] = true;
    }
    auto a = GradedAlgebra::from_structure(spec.coeff, std::move(basis), std::move(table));
    validate(a);
    return a;
}

/// Degree-preserving unital algebra map. matrix(d) has one row per target
/// basis element of degree d and one column per source basis element.
class RingMorphism {
public:
    RingMorphism() = default;

    /// Builds from the image of every source basis element (global order)
    /// and validates degree preservation, unitality and multiplicativity.
    static RingMorphism from_images(const GradedAlgebra& source, const GradedAlgebra& target,
                                    const std::vector<Element>& images) {
        RingMorphism f = unchecked(source, target, images);
        f.validate();
        return f;
    }

    /// Same as from_images without the multiplicativity sweep; for maps
    /// that are multiplicative by construction.
    static RingMorphism unchecked(const GradedAlgebra& source, const GradedAlgebra& target,
                                  const std::vector<Element>& images) {
        if (!(source.coeff() == target.coeff()))
            throw AlgebraError(ErrorCode::CoefficientMismatch, "morphism between algebras over " + source.coeff().name() +
                                                                   " and " + target.coeff().name());
        if (images.size() != source.total_dimension())
            throw AlgebraError(ErrorCode::InvalidSpec, "morphism needs one image per source basis element");
        RingMorphism f;
        f.source_ = source;
        f.target_ = target;
        f.matrices_.resize(source.top_degree() + 1);
        for (int d = 0; d <= source.top_degree(); ++d)
            f.matrices_[d] = Matrix(target.dim(d), zero_vector(source.dim(d)));
        for (std::size_t g = 0; g < images.size(); ++g) {
            const Element& img = images[g];
            const int d = source.degree_of(g);
            if (!img.algebra().same_structure(target))
                throw AlgebraError(ErrorCode::AlgebraMismatch, "image of " + source.name(g) + " is not in the target algebra");
            if (img.is_zero()) continue;
            if (img.degree() != d)
                throw AlgebraError(ErrorCode::InvalidSpec, "image of " + source.name(g) + " is not homogeneous of degree " +
                                                               std::to_string(d));
            const Vector v = img.component(d);
            for (std::size_t r = 0; r < v.size(); ++r) f.matrices_[d][r][source.local_of(g)] = v[r];
        }
        return f;
    }

    const GradedAlgebra& source() const { return source_; }
    const GradedAlgebra& target() const { return target_; }
    const Matrix& matrix(int d) const { return matrices_.at(d); }

    Element apply(const Element& x) const {
        if (!x.algebra().same_structure(source_))
            throw AlgebraError(ErrorCode::AlgebraMismatch, "element is not in the morphism's source");
        std::map<int, Vector> out;
        for (const auto& [d, v] : x.components()) {
            if (d > target_.top_degree()) continue;
            out.emplace(d, mcat::apply(matrices_[d], v, source_.coeff()));
        }
        return Element(target_, std::move(out));
    }

    Element image_of(std::size_t global) const { return apply(Element::basis(source_, global)); }

    void validate() const {
        const Element one = Element::unit(target_);
        if (!(apply(Element::unit(source_)) == one))
            throw AlgebraError(ErrorCode::UnitViolation, "morphism does not send the unit to the unit");
        const std::size_t n = source_.total_dimension();
        std::vector<Element> images;
        images.reserve(n);
        for (std::size_t g = 0; g < n; ++g) images.push_back(image_of(g));
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j) {
                const Element lhs = apply(multiply(Element::basis(source_, i), Element::basis(source_, j)));
                const Element rhs = multiply(images[i], images[j]);
                if (!(lhs == rhs))
                    throw AlgebraError(ErrorCode::MultiplicativityViolation,
                                       "(" + source_.name(i) + ", " + source_.name(j) + "): f(xy) = " + lhs.to_string() +
                                           " but f(x)f(y) = " + rhs.to_string());
            }
    }

    friend bool operator==(const RingMorphism& a, const RingMorphism& b) {
        return a.source_.same_structure(b.source_) && a.target_.same_structure(b.target_) && a.matrices_ == b.matrices_;
    }

private:
    GradedAlgebra source_;
    GradedAlgebra target_;
    std::vector<Matrix> matrices_;
};

inline RingMorphism identity_morphism(const GradedAlgebra& a) {
    std::vector<Element> images;
    for (std::size_t g = 0; g < a.total_dimension(); ++g) images.push_back(Element::basis(a, g));
    return RingMorphism::unchecked(a, a, images);
}

/// Unit to unit, every positive-degree class to zero.
inline RingMorphism augmentation(const GradedAlgebra& source, const GradedAlgebra& target) {
    std::vector<Element> images(source.total_dimension(), Element(target));
    images[0] = Element::unit(target);
    return RingMorphism::unchecked(source, target, images);
}

/// Graded subspace: per degree a canonical basis (RREF over a field,
/// Hermite normal form over Z).
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(const GradedAlgebra& a) {
        Subspace s;
        s.algebra_ = a;
        s.rows_.assign(a.top_degree() + 1, Matrix{});
        return s;
    }

    static Subspace from_rows(const GradedAlgebra& a, std::vector<Matrix> rows) {
        Subspace s = zero(a);
        rows.resize(a.top_degree() + 1);
        for (int d = 0; d <= a.top_degree(); ++d) s.rows_[d] = canonical_span(rows[d], a.coeff());
        return s;
    }

    /// Span of homogeneous elements (zero elements are ignored).
    static Subspace span(const GradedAlgebra& a, const std::vector<Element>& elements) {
        std::vector<Matrix> rows(a.top_degree() + 1);
        for (const auto& e : elements) {
            if (!e.algebra().same_structure(a))
                throw AlgebraError(ErrorCode::AlgebraMismatch, "spanning element is not in the algebra");
            if (e.is_zero()) continue;
            if (!e.is_homogeneous())
                throw AlgebraError(ErrorCode::InvalidSpec, "subspace generators must be homogeneous: " + e.to_string());
            rows[*e.degree()].push_back(e.component(*e.degree()));
        }
        return from_rows(a, std::move(rows));
    }

    /// All classes of positive degree.
    static Subspace positive_degrees(const GradedAlgebra& a) {
        std::vector<Matrix> rows(a.top_degree() + 1);
        for (int d = 1; d <= a.top_degree(); ++d) rows[d] = identity_matrix(a.dim(d));
        return from_rows(a, std::move(rows));
    }

    const GradedAlgebra& algebra() const { return algebra_; }
    const Matrix& rows(int d) const { return rows_.at(d); }
    std::size_t dimension(int d) const { return d >= 0 && d < static_cast<int>(rows_.size()) ? rows_[d].size() : 0; }
    bool is_zero() const {
        for (const auto& r : rows_)
            if (!r.empty()) return false;
        return true;
    }

    bool contains(const Element& e) const {
        if (!e.algebra().same_structure(algebra_))
            throw AlgebraError(ErrorCode::SubspaceMismatch, "element is not in the subspace's algebra");
        for (const auto& [d, v] : e.components())
            if (!in_canonical_span(rows_[d], v, algebra_.coeff())) return false;
        return true;
    }

    /// Canonical spanning set, degree ascending, optionally capped.
    std::vector<Element> spanning_elements(std::optional<int> max_degree = std::nullopt) const {
        std::vector<Element> out;
        for (int d = 0; d < static_cast<int>(rows_.size()); ++d) {
            if (max_degree && d > *max_degree) break;
            for (const auto& r : rows_[d]) out.push_back(Element::homogeneous(algebra_, d, r));
        }
        return out;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.algebra_.same_structure(b.algebra_) && a.rows_ == b.rows_;
    }

private:
    GradedAlgebra algebra_;
    std::vector<Matrix> rows_;
};

enum class TensorNaming {
    Juxtaposed, ///< "x", "y", "x*y" (Künneth products of spaces)
    Bar,        ///< "x|1", "1|y", "x|y" (tensor squares)
};

struct TensorProduct {
    GradedAlgebra algebra;
    RingMorphism left;  ///< a -> a⊗1
    RingMorphism right; ///< b -> 1⊗b
};

/// Graded tensor product with Koszul signs:
/// (a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd.
inline TensorProduct kunneth_product(const GradedAlgebra& a, const GradedAlgebra& b,
                                     TensorNaming naming = TensorNaming::Juxtaposed) {
    if (!(a.coeff() == b.coeff()))
        throw AlgebraError(ErrorCode::CoefficientMismatch,
                           "Künneth product of algebras over " + a.coeff().name() + " and " + b.coeff().name());
    const int top = a.top_degree() + b.top_degree();
    // position of (degA, degB) block inside degree degA+degB
    std::vector<std::vector<std::size_t>> block(a.top_degree() + 1, std::vector<std::size_t>(b.top_degree() + 1, 0));
    std::vector<std::vector<std::string>> names(top + 1);
    std::vector<std::pair<std::size_t, std::size_t>> factors; // per global index of the product
    std::vector<std::size_t> offset(top + 1, 0);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_degree(top + 1);
    const std::string unit_a = a.names(0)[0];
    const std::string unit_b = b.names(0)[0];
    for (int d = 0; d <= top; ++d) {
        for (int i = 0; i <= d; ++i) {
            const int j = d - i;
            if (i > a.top_degree() || j > b.top_degree()) continue;
            block[i][j] = names[d].size();
            for (std::size_t x = 0; x < a.dim(i); ++x)
                for (std::size_t y = 0; y < b.dim(j); ++y) {
                    const std::string& nx = a.names(i)[x];
                    const std::string& ny = b.names(j)[y];
                    std::string n;
                    if (naming == TensorNaming::Bar) {
                        n = (i == 0 && j == 0) ? std::string("1") : (i == 0 ? "1" : nx) + "|" + (j == 0 ? "1" : ny);
                    } else if (i == 0 && j == 0) {
                        n = "1";
                    } else if (i == 0) {
                        n = ny;
                    } else if (j == 0) {
                        n = nx;
                    } else {
                        n = nx + "*" + ny;
                    }
                    names[d].push_back(std::move(n));
                    by_degree[d].emplace_back(a.global_index(i, x), b.global_index(j, y));
                }
        }
    }
    for (int d = 1; d <= top; ++d) offset[d] = offset[d - 1] + names[d - 1].size();
    for (int d = 0; d <= top; ++d)
        for (const auto& f : by_degree[d]) factors.push_back(f);
    const std::size_t n = factors.size();
    auto degree_of = [&](std::size_t g) {
        int d = 0;
        while (d < top && g >= offset[d + 1]) ++d;
        return d;
    };
    std::vector<int> deg(n);
    for (std::size_t g = 0; g < n; ++g) deg[g] = degree_of(g);

    std::vector<Vector> table(n * n);
    for (std::size_t g1 = 0; g1 < n; ++g1) {
        for (std::size_t g2 = 0; g2 < n; ++g2) {
            const int d = deg[g1] + deg[g2];
            Vector out = zero_vector(d <= top ? names[d].size() : 0);
            if (d <= top) {
                const auto [x1, y1] = factors[g1];
                const auto [x2, y2] = factors[g2];
                const int sign = koszul_sign(b.degree_of(y1), a.degree_of(x2));
                const Vector& ac = a.product(x1, x2);
                const Vector& bd = b.product(y1, y2);
                const int da = a.degree_of(x1) + a.degree_of(x2);
                const int db = b.degree_of(y1) + b.degree_of(y2);
                if (!ac.empty() && !bd.empty()) {
                    const std::size_t base = block[da][db];
                    for (std::size_t i = 0; i < ac.size(); ++i) {
                        if (ac[i] == 0) continue;
                        for (std::size_t j = 0; j < bd.size(); ++j) {
                            if (bd[j] == 0) continue;
                            out[base + i * bd.size() + j] = a.coeff().normalize(Scalar(sign) * ac[i] * bd[j]);
                        }
                    }
                }
            }
            table[g1 * n + g2] = std::move(out);
        }
    }
    GradedAlgebra prod = GradedAlgebra::from_structure(a.coeff(), std::move(names), std::move(table));

    auto embed = [&](int i, std::size_t x, int j, std::size_t y) {
        const int d = i + j;
        Vector v = zero_vector(prod.dim(d));
        v[block[i][j] + x * b.dim(j) + y] = 1;
        return Element::homogeneous(prod, d, std::move(v));
    };
    std::vector<Element> left_images, right_images;
    for (std::size_t g = 0; g < a.total_dimension(); ++g)
        left_images.push_back(embed(a.degree_of(g), a.local_of(g), 0, 0));
    for (std::size_t g = 0; g < b.total_dimension(); ++g)
        right_images.push_back(embed(0, 0, b.degree_of(g), b.local_of(g)));
    (void)unit_a;
    (void)unit_b;
    return TensorProduct{prod, RingMorphism::unchecked(a, prod, left_images),
                         RingMorphism::unchecked(b, prod, right_images)};
}

inline TensorProduct tensor_square(const GradedAlgebra& a) { return kunneth_product(a, a, TensorNaming::Bar); }

/// (f,g)^*: H(Y)⊗H(Y) -> H(X), a⊗b ↦ f(a)·g(b), realized on a tensor
/// square produced by tensor_square(f.source()).
inline RingMorphism pair_morphism(const RingMorphism& f, const RingMorphism& g, const TensorProduct& square) {
    if (!f.source().same_structure(g.source()) || !f.target().same_structure(g.target()))
        throw AlgebraError(ErrorCode::MorphismMismatch, "f and g must share source and target");
    const GradedAlgebra& y = f.source();
    std::vector<Element> images(square.algebra.total_dimension(), Element(f.target()));
    for (std::size_t i = 0; i < y.total_dimension(); ++i) {
        const Element fi = f.image_of(i);
        for (std::size_t j = 0; j < y.total_dimension(); ++j) {
            // a_i⊗b_j = (a_i⊗1)(1⊗b_j)
            const Element t = multiply(square.left.image_of(i), square.right.image_of(j));
            const auto d = t.degree();
            const Vector v = t.component(*d);
            std::size_t local = 0;
            while (v[local] == 0) ++local;
            images[square.algebra.global_index(*d, local)] = multiply(fi, g.image_of(j));
        }
    }
    return RingMorphism::unchecked(square.algebra, f.target(), images);
}

/// Degreewise exact kernel: Gaussian elimination over fields, Smith normal
/// form over Z.
inline Subspace kernel(const RingMorphism& phi) {
    const GradedAlgebra& src = phi.source();
    std::vector<Matrix> rows(src.top_degree() + 1);
    for (int d = 0; d <= src.top_degree(); ++d)
        rows[d] = kernel_basis(phi.matrix(d), src.dim(d), src.coeff());
    return Subspace::from_rows(src, std::move(rows));
}

/// Kernel of the cup product A⊗A -> A; the result lives in `square`.
inline Subspace cup_kernel(const GradedAlgebra& a, const TensorProduct& square) {
    if (!a.coeff().is_field())
        throw AlgebraError(ErrorCode::UnsupportedCoefficients, "zero divisors need field coefficients, got " + a.coeff().name());
    const RingMorphism id = identity_morphism(a);
    return kernel(pair_morphism(id, id, square));
}

inline Subspace cup_kernel(const GradedAlgebra& a) { return cup_kernel(a, tensor_square(a)); }

/// J(f,g) = im(f - g), degreewise.
inline Subspace image_difference(const RingMorphism& f, const RingMorphism& g) {
    if (!f.source().same_structure(g.source()) || !f.target().same_structure(g.target()))
        throw AlgebraError(ErrorCode::MorphismMismatch, "f and g must share source and target");
    std::vector<Element> gens;
    for (std::size_t i = 0; i < f.source().total_dimension(); ++i) gens.push_back(f.image_of(i) - g.image_of(i));
    return Subspace::span(f.target(), gens);
}

inline Subspace pushforward_span(const RingMorphism& phi, const Subspace& s) {
    if (!s.algebra().same_structure(phi.source()))
        throw AlgebraError(ErrorCode::SubspaceMismatch, "subspace does not live in the morphism's source");
    std::vector<Element> gens;
    for (const auto& e : s.spanning_elements()) gens.push_back(phi.apply(e));
    return Subspace::span(phi.target(), gens);
}

// ---------------------------------------------------------------------------
// Standard algebras

/// coeff[x]/(x^{height+1}) with |x| = degree.
inline GradedAlgebra truncated_polynomial(const CoefficientDomain& coeff, const std::string& x, int degree, int height) {
    AlgebraSpec spec;
    spec.coeff = coeff;
    spec.basis.assign(degree * height + 1, {});
    spec.basis[0] = {"1"};
    auto power_name = [&](int k) { return k == 1 ? x : x + "^" + std::to_string(k); };
    for (int k = 1; k <= height; ++k) spec.basis[k * degree] = {power_name(k)};
    for (int i = 1; i <= height; ++i)
        for (int j = 1; i + j <= height; ++j)
            spec.products.push_back({power_name(i), power_name(j), {{power_name(i + j), Scalar(1)}}});
    return make_algebra(spec);
}

/// Exterior algebra on the given (name, degree) generators; monomials are
/// named by joining generator names with '*', in generator order.
inline GradedAlgebra exterior_algebra(const CoefficientDomain& coeff,
                                      const std::vector<std::pair<std::string, int>>& generators) {
    const std::size_t k = generators.size();
    int top = 0;
    for (const auto& g : generators) top += g.second;
    AlgebraSpec spec;
    spec.coeff = coeff;
    spec.basis.assign(top + 1, {});
    std::vector<std::string> mask_name(std::size_t{1} << k);
    std::vector<int> mask_degree(std::size_t{1} << k, 0);
    for (std::size_t m = 0; m < (std::size_t{1} << k); ++m) {
        std::string n;
        for (std::size_t i = 0; i < k; ++i)
            if (m & (std::size_t{1} << i)) {
                n += (n.empty() ? "" : "*") + generators[i].first;
                mask_degree[m] += generators[i].second;
            }
        mask_name[m] = m == 0 ? "1" : n;
    }
    // basis order: by degree, then by mask value
    for (std::size_t m = 0; m < mask_name.size(); ++m) spec.basis[mask_degree[m]].push_back(mask_name[m]);
    for (std::size_t m1 = 1; m1 < mask_name.size(); ++m1)
        for (std::size_t m2 = 1; m2 < mask_name.size(); ++m2) {
            if (m1 & m2) continue;
            // sign of reordering the concatenated word into generator order
            int sign = 1;
            for (std::size_t i = 0; i < k; ++i) {
                if (!(m2 & (std::size_t{1} << i))) continue;
                for (std::size_t j = i + 1; j < k; ++j)
                    if (m1 & (std::size_t{1} << j)) sign *= koszul_sign(generators[i].second, generators[j].second);
            }
            spec.products.push_back({mask_name[m1], mask_name[m2], {{mask_name[m1 | m2], Scalar(sign)}}});
        }
    return make_algebra(spec);
}

inline GradedAlgebra point_algebra(const CoefficientDomain& coeff) {
    AlgebraSpec spec;
    spec.coeff = coeff;
    spec.basis = {{"1"}};
    return make_algebra(spec);
}

} // namespace mcat
