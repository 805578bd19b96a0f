#include "mcat/algebra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mcat;

namespace {

const CoefficientDomain Q = CoefficientDomain::rationals();
const CoefficientDomain Z = CoefficientDomain::integers();
const CoefficientDomain F2 = CoefficientDomain::prime_field(2);

Element el(const GradedAlgebra& a, const std::string& name) { return Element::basis(a, name); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const AlgebraError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no AlgebraError thrown";
    return ErrorCode::InvalidSpec;
}

GradedAlgebra sphere_algebra(int n, const CoefficientDomain& c, const std::string& x = "a") {
    AlgebraSpec s;
    s.coeff = c;
    s.basis.assign(n + 1, {});
    s.basis[0] = {"1"};
    s.basis[n] = {x};
    return make_algebra(s);
}

// Random graded-commutative algebra assembled from known-good blocks.
GradedAlgebra random_algebra(std::mt19937& rng, const CoefficientDomain& c) {
    auto block = [&](int i) {
        switch (rng() % 3) {
        case 0: {
            // odd generators may only square nontrivially in characteristic 2
            int deg = 1 + rng() % 3;
            if (c.characteristic() != 2 && deg % 2) ++deg;
            return truncated_polynomial(c, "t" + std::to_string(i), deg, 1 + rng() % 3);
        }
        case 1: return exterior_algebra(c, {{"e" + std::to_string(i), 1 + static_cast<int>(rng() % 3)}});
        default: return sphere_algebra(1 + rng() % 4, c, "s" + std::to_string(i));
        }
    };
    GradedAlgebra acc = block(0);
    const int k = 1 + rng() % 2;
    for (int i = 1; i <= k; ++i) acc = kunneth_product(acc, block(i)).algebra;
    return acc;
}

} // namespace

// --- construction and laws -------------------------------------------------

TEST(Algebra, TruncatedPolynomialOverF2) {
    const GradedAlgebra a = truncated_polynomial(F2, "x", 1, 3);
    EXPECT_EQ(a.top_degree(), 3);
    EXPECT_EQ(multiply(el(a, "x"), el(a, "x^2")), el(a, "x^3"));
    EXPECT_TRUE(multiply(el(a, "x^2"), el(a, "x^2")).is_zero());
}

TEST(Algebra, ExteriorSignOverZ) {
    const GradedAlgebra a = exterior_algebra(Z, {{"x1", 1}, {"x3", 3}});
    EXPECT_EQ(multiply(el(a, "x3"), el(a, "x1")), -el(a, "x1*x3"));
    EXPECT_TRUE(multiply(el(a, "x1"), el(a, "x1")).is_zero());
}

TEST(Algebra, OneSidedListingIsCompletedBySignLaw) {
    AlgebraSpec s;
    s.coeff = Q;
    s.basis = {{"1"}, {"x", "y"}, {"w"}};
    s.products = {{"x", "y", {{"w", Scalar(1)}}}};
    const GradedAlgebra a = make_algebra(s);
    EXPECT_EQ(multiply(el(a, "y"), el(a, "x")), -el(a, "w"));
}

TEST(Algebra, CommutativityViolationNamesThePair) {
    AlgebraSpec s;
    s.coeff = Q;
    s.basis = {{"1"}, {"x", "y"}, {"w"}};
    s.products = {{"x", "y", {{"w", Scalar(1)}}}, {"y", "x", {{"w", Scalar(1)}}}};
    try {
        make_algebra(s);
        FAIL();
    } catch (const AlgebraError& e) {
        EXPECT_EQ(e.code(), ErrorCode::CommutativityViolation);
        EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("y"), std::string::npos);
    }
}

TEST(Algebra, OddSquareMustVanishOverQ) {
    AlgebraSpec s;
    s.coeff = Q;
    s.basis = {{"1"}, {"x"}, {"w"}};
    s.products = {{"x", "x", {{"w", Scalar(1)}}}};
    EXPECT_EQ(code_of([&] { make_algebra(s); }), ErrorCode::CommutativityViolation);
    s.coeff = F2; // fine in characteristic 2
    EXPECT_NO_THROW(make_algebra(s));
}

TEST(Algebra, AssociativityViolation) {
    AlgebraSpec s;
    s.coeff = Q;
    s.basis = {{"1"}, {}, {"x", "y"}, {}, {"u"}, {}, {"w"}};
    s.products = {{"x", "y", {{"u", Scalar(1)}}}, {"x", "u", {{"w", Scalar(1)}}}};
    // (x x) y = 0 but x (x y) = x u = w
    EXPECT_EQ(code_of([&] { make_algebra(s); }), ErrorCode::AssociativityViolation);
}

TEST(Algebra, UnitAndShapeChecks) {
    AlgebraSpec s;
    s.coeff = Q;
    s.basis = {{"1", "e"}};
    EXPECT_EQ(code_of([&] { make_algebra(s); }), ErrorCode::UnitViolation);
    s.basis = {{"1"}, {"x"}, {"x"}};
    EXPECT_EQ(code_of([&] { make_algebra(s); }), ErrorCode::InvalidSpec);
}

TEST(Algebra, MultiplyAcrossAlgebrasFails) {
    const GradedAlgebra a = sphere_algebra(2, Q), b = sphere_algebra(3, Q);
    EXPECT_EQ(code_of([&] { multiply(el(a, "a"), el(b, "a")); }), ErrorCode::AlgebraMismatch);
}

TEST(Algebra, ConstructionIsDeterministic) {
    EXPECT_EQ(exterior_algebra(Q, {{"a", 1}, {"b", 2}, {"c", 3}}), exterior_algebra(Q, {{"a", 1}, {"b", 2}, {"c", 3}}));
}

TEST(Algebra, RandomProductsSatisfyTheLaws) {
    std::mt19937 rng(2024);
    for (const auto& c : {Q, Z, F2})
        for (int trial = 0; trial < 12; ++trial) {
            const GradedAlgebra a = random_algebra(rng, c);
            EXPECT_NO_THROW(validate(a)) << "trial " << trial << " over " << c.name();
        }
}

// --- tensor products --------------------------------------------------------

TEST(Tensor, SquareOfS2HasExpectedRanks) {
    const TensorProduct sq = tensor_square(sphere_algebra(2, Q));
    const std::vector<std::size_t> want{1, 0, 2, 0, 1};
    for (int d = 0; d <= 4; ++d) EXPECT_EQ(sq.algebra.dim(d), want[d]);
}

TEST(Tensor, KoszulSignAgreesWithDirectFormula) {
    // oracle: (a⊗b)(c⊗d) = (-1)^{|b||c|} (ac)⊗(bd), with a⊗b = left(a) right(b)
    std::mt19937 rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        GradedAlgebra a = random_algebra(rng, Q), b = random_algebra(rng, Q);
        while (a.total_dimension() > 8) a = random_algebra(rng, Q);
        while (b.total_dimension() > 8) b = random_algebra(rng, Q);
        const TensorProduct t = kunneth_product(a, b, TensorNaming::Bar);
        auto pure = [&](const Element& x, const Element& y) { return multiply(t.left.apply(x), t.right.apply(y)); };
        for (std::size_t i = 0; i < a.total_dimension(); ++i)
            for (std::size_t j = 0; j < b.total_dimension(); ++j)
                for (std::size_t k = 0; k < a.total_dimension(); ++k)
                    for (std::size_t l = 0; l < b.total_dimension(); ++l) {
                        const Element ai = Element::basis(a, i), bj = Element::basis(b, j);
                        const Element ak = Element::basis(a, k), bl = Element::basis(b, l);
                        const Element lhs = multiply(pure(ai, bj), pure(ak, bl));
                        const int sign = koszul_sign(b.degree_of(j), a.degree_of(k));
                        const Element rhs = pure(multiply(ai, ak), multiply(bj, bl)).scaled(sign);
                        ASSERT_EQ(lhs, rhs) << a.name(i) << "|" << b.name(j) << " * " << a.name(k) << "|" << b.name(l);
                    }
    }
}

TEST(Tensor, ZeroDivisorSquares) {
    // |a| = 1: (1⊗a - a⊗1)^2 = 0;  |a| = 2: (1⊗a - a⊗1)^2 = -2 a⊗a
    for (int n : {1, 2}) {
        const GradedAlgebra a = sphere_algebra(n, Q);
        const TensorProduct sq = tensor_square(a);
        const Element z = sq.right.apply(el(a, "a")) - sq.left.apply(el(a, "a"));
        const Element z2 = multiply(z, z);
        if (n == 1) {
            EXPECT_TRUE(z2.is_zero());
        } else {
            EXPECT_EQ(z2, el(sq.algebra, "a|a").scaled(-2));
        }
    }
}

TEST(Tensor, ProductWithPointIsTheSameAlgebra) {
    const GradedAlgebra a = exterior_algebra(Z, {{"x", 1}, {"y", 3}});
    EXPECT_TRUE(kunneth_product(a, point_algebra(Z)).algebra.same_structure(a));
}

TEST(Tensor, ExteriorFactorsIntoSpheres) {
    const GradedAlgebra prod = kunneth_product(sphere_algebra(1, Z, "x"), sphere_algebra(3, Z, "y")).algebra;
    EXPECT_TRUE(prod.same_structure(exterior_algebra(Z, {{"x", 1}, {"y", 3}})));
}

TEST(Tensor, CoefficientMismatch) {
    EXPECT_EQ(code_of([] { kunneth_product(sphere_algebra(2, Q), sphere_algebra(2, Z)); }), ErrorCode::CoefficientMismatch);
}

// --- morphisms and subspaces ------------------------------------------------

TEST(Morphism, NonMultiplicativeMapNamesThePair) {
    const GradedAlgebra cp2 = truncated_polynomial(Q, "u", 2, 2);
    const GradedAlgebra s2s2 = kunneth_product(sphere_algebra(2, Q, "a"), sphere_algebra(2, Q, "b")).algebra;
    std::vector<Element> images(cp2.total_dimension(), Element(s2s2));
    images[0] = Element::unit(s2s2);
    images[*cp2.find("u")] = el(s2s2, "a") + el(s2s2, "b");
    try {
        RingMorphism::from_images(cp2, s2s2, images);
        FAIL();
    } catch (const AlgebraError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MultiplicativityViolation);
        EXPECT_NE(std::string(e.what()).find("(u, u)"), std::string::npos);
    }
    images[*cp2.find("u^2")] = el(s2s2, "a*b").scaled(2);
    EXPECT_NO_THROW(RingMorphism::from_images(cp2, s2s2, images));
}

TEST(Morphism, UnitMustMapToUnit) {
    const GradedAlgebra a = sphere_algebra(2, Q);
    std::vector<Element> images(a.total_dimension(), Element(a));
    EXPECT_EQ(code_of([&] { RingMorphism::from_images(a, a, images); }), ErrorCode::UnitViolation);
}

TEST(Kernel, CoveringMapPullbackOfRP) {
    const GradedAlgebra rp = truncated_polynomial(F2, "x", 1, 4);
    const Subspace k = kernel(augmentation(rp, sphere_algebra(4, F2)));
    EXPECT_TRUE(k.contains(el(rp, "x")));
    EXPECT_TRUE(k.contains(el(rp, "x^4"))); // the sphere's top class is not hit
    EXPECT_EQ(k.dimension(0), 0u);
}

TEST(Kernel, IdentityHasZeroKernel) {
    EXPECT_TRUE(kernel(identity_morphism(exterior_algebra(Z, {{"x", 1}, {"y", 2}}))).is_zero());
}

TEST(Kernel, HopfPullback) {
    const GradedAlgebra cp2 = truncated_polynomial(Q, "u", 2, 2);
    const Subspace k = kernel(augmentation(cp2, sphere_algebra(5, Q)));
    EXPECT_EQ(k, Subspace::span(cp2, {el(cp2, "u"), el(cp2, "u^2")}));
}

TEST(CupKernel, SphereAndProjectivePlane) {
    const GradedAlgebra s2 = sphere_algebra(2, Q);
    const TensorProduct sq = tensor_square(s2);
    const Subspace k = cup_kernel(s2, sq);
    EXPECT_EQ(k.dimension(2), 1u);
    EXPECT_TRUE(k.contains(el(sq.algebra, "1|a") - el(sq.algebra, "a|1")));
    EXPECT_FALSE(k.contains(el(sq.algebra, "1|a")));

    const GradedAlgebra rp2 = truncated_polynomial(F2, "x", 1, 2);
    const TensorProduct sq2 = tensor_square(rp2);
    const Subspace k2 = cup_kernel(rp2, sq2);
    EXPECT_EQ(k2.dimension(1), 1u);
    EXPECT_TRUE(k2.contains(el(sq2.algebra, "1|x") + el(sq2.algebra, "x|1")));
}

TEST(CupKernel, PointAndIntegers) {
    EXPECT_TRUE(cup_kernel(point_algebra(Q)).is_zero());
    EXPECT_EQ(code_of([] { cup_kernel(sphere_algebra(2, Z)); }), ErrorCode::UnsupportedCoefficients);
}

TEST(CupKernel, DimensionIsSquareMinusImage) {
    // mu is onto, so dim ker = dim(A)^2 - dim A in every total count
    std::mt19937 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const GradedAlgebra a = random_algebra(rng, F2);
        const Subspace k = cup_kernel(a);
        std::size_t total = 0;
        for (int d = 0; d <= k.algebra().top_degree(); ++d) total += k.dimension(d);
        const std::size_t n = a.total_dimension();
        EXPECT_EQ(total, n * n - n);
    }
}

TEST(ImageDifference, Examples) {
    const GradedAlgebra u2 = exterior_algebra(Z, {{"x1", 1}, {"x3", 3}});
    const RingMorphism id = identity_morphism(u2);
    std::vector<Element> inv{Element::unit(u2), -el(u2, "x1"), -el(u2, "x3"), el(u2, "x1*x3")};
    const RingMorphism inversion = RingMorphism::from_images(u2, u2, inv);

    EXPECT_TRUE(image_difference(id, id).is_zero());
    const Subspace j = image_difference(id, inversion);
    EXPECT_TRUE(j.contains(el(u2, "x1").scaled(2)));
    EXPECT_FALSE(j.contains(el(u2, "x1")));
    EXPECT_TRUE(j.contains(el(u2, "x3").scaled(2)));
    EXPECT_EQ(j.dimension(4), 0u);

    const GradedAlgebra other = sphere_algebra(2, Z);
    EXPECT_TRUE(image_difference(augmentation(u2, other), augmentation(u2, other)).is_zero());
    EXPECT_EQ(code_of([&] { image_difference(id, augmentation(u2, other)); }), ErrorCode::MorphismMismatch);
}

TEST(Pushforward, ProjectionsGiveTheIdentity) {
    const GradedAlgebra a = exterior_algebra(Q, {{"x", 1}, {"y", 2}});
    const TensorProduct sq = tensor_square(a);
    // (pr1, pr2)^* on H(X x X) is the identity of A⊗A
    const RingMorphism p = pair_morphism(sq.left, sq.right, sq);
    EXPECT_EQ(p, identity_morphism(sq.algebra));
    const Subspace k = cup_kernel(a, sq);
    EXPECT_EQ(pushforward_span(p, k), k);
    EXPECT_TRUE(pushforward_span(augmentation(sq.algebra, a), k).is_zero());
}

TEST(Pushforward, SubspaceMismatch) {
    const GradedAlgebra a = sphere_algebra(2, Q), b = sphere_algebra(3, Q);
    EXPECT_EQ(code_of([&] { pushforward_span(identity_morphism(a), Subspace::positive_degrees(b)); }),
              ErrorCode::SubspaceMismatch);
}
