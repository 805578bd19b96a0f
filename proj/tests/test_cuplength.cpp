#include "mcat/cuplength.hpp"
#include "mcat/spaces.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mcat;

namespace {

const CoefficientDomain Q = CoefficientDomain::rationals();
const CoefficientDomain F2 = CoefficientDomain::prime_field(2);

Subspace all_positive(const SpaceModel& x) { return Subspace::positive_degrees(x.algebra); }

// Small algebras the oracle can afford.
std::vector<SpaceModel> corpus() {
    std::vector<SpaceModel> out;
    for (int n = 2; n <= 6; ++n) out.push_back(real_projective(n));
    for (int n = 1; n <= 3; ++n) out.push_back(complex_projective(n));
    out.push_back(orientable_surface(1));
    out.push_back(orientable_surface(2));
    out.push_back(nonorientable_surface(2));
    out.push_back(nonorientable_surface(3));
    out.push_back(moore(2, 3, Q));
    out.push_back(product({sphere(2, Q), sphere(4, Q)}));
    out.push_back(product({sphere(1, Q), sphere(3, Q)}));
    out.push_back(product({sphere(3, Q), sphere(5, Q), sphere(6, Q)}));
    out.push_back(product({real_projective(2), real_projective(2)}));
    return out;
}

} // namespace

TEST(CupLength, ProjectiveSpaces) {
    const SpaceModel rp4 = real_projective(4);
    for (int m = 1; m <= 4; ++m) EXPECT_EQ(capped_cuplength(all_positive(rp4), m).length, 4);
    const SpaceModel cp3 = complex_projective(3);
    EXPECT_EQ(capped_cuplength(all_positive(cp3), 1).length, 0);
    EXPECT_EQ(capped_cuplength(all_positive(cp3), 2).length, 3);
}

TEST(CupLength, SphereProductIsPiecewise) {
    const SpaceModel x = product({sphere(2, Q), sphere(4, Q)});
    EXPECT_EQ(capped_cuplength(all_positive(x), 1).length, 0);
    EXPECT_EQ(capped_cuplength(all_positive(x), 2).length, 1);
    EXPECT_EQ(capped_cuplength(all_positive(x), 3).length, 1);
    EXPECT_EQ(capped_cuplength(all_positive(x), 4).length, 2);
    EXPECT_EQ(capped_cuplength(all_positive(x), std::nullopt).length, 2);
}

TEST(CupLength, ZeroSubspaceAndPoint) {
    EXPECT_EQ(capped_cuplength(Subspace::zero(sphere(2, Q).algebra), std::nullopt).length, 0);
    const CupLengthResult r = capped_cuplength(all_positive(point(Q)), std::nullopt);
    EXPECT_EQ(r.length, 0);
    EXPECT_FALSE(r.certificate.has_value());
}

TEST(CupLength, ZeroDivisorsOfS2xS4) {
    const SpaceModel x = product({sphere(2, Q), sphere(4, Q)});
    const Subspace z = cup_kernel(x.algebra);
    // even spheres contribute 2 each
    EXPECT_EQ(capped_cuplength(z, std::nullopt).length, 4);
    EXPECT_EQ(capped_cuplength(z, 3).length, 2);
    EXPECT_EQ(brute_force_cuplength(z, std::nullopt, 8, 16), 4);
}

TEST(CupLength, CertificatesVerify) {
    for (const auto& x : corpus())
        for (int m = 1; m <= x.algebra.top_degree(); ++m) {
            const CupLengthResult r = capped_cuplength(all_positive(x), m);
            if (r.length == 0) {
                EXPECT_FALSE(r.certificate.has_value());
                continue;
            }
            ASSERT_TRUE(r.certificate.has_value());
            EXPECT_EQ(r.certificate->factors.size(), static_cast<std::size_t>(r.length));
            EXPECT_TRUE(r.certificate->verify(m)) << x.name << " m=" << m << ": " << r.certificate->to_string();
            for (const auto& f : r.certificate->factors) EXPECT_TRUE(all_positive(x).contains(f));
        }
}

TEST(CupLength, TamperedCertificateFailsVerification) {
    const CupLengthResult r = capped_cuplength(all_positive(real_projective(3)), 1);
    ASSERT_TRUE(r.certificate);
    CupLengthCertificate c = *r.certificate;
    EXPECT_FALSE(c.verify(std::optional<int>(0)));
    c.product = c.product.scaled(0);
    EXPECT_FALSE(c.verify());
}

TEST(CupLength, MonotoneInCap) {
    for (const auto& x : corpus()) {
        int prev = 0;
        for (int m = 1; m <= x.algebra.top_degree(); ++m) {
            const int now = capped_cuplength(all_positive(x), m).length;
            EXPECT_GE(now, prev) << x.name << " m=" << m;
            prev = now;
        }
        EXPECT_EQ(prev, capped_cuplength(all_positive(x), std::nullopt).length);
    }
}

TEST(CupLength, ProfileMatchesPointwise) {
    for (const auto& x : corpus()) {
        const int top = x.algebra.top_degree();
        const auto profile = cuplength_profile(all_positive(x), top);
        for (int m = 1; m <= top; ++m) {
            EXPECT_EQ(profile[m - 1].length, capped_cuplength(all_positive(x), m).length) << x.name << " m=" << m;
            if (profile[m - 1].certificate) {
                EXPECT_TRUE(profile[m - 1].certificate->verify(m));
            }
        }
    }
}

TEST(CupLength, AgreesWithBruteForce) {
    for (const auto& x : corpus()) {
        if (x.algebra.total_dimension() > 12) continue;
        for (int m = 1; m <= x.algebra.top_degree(); ++m) {
            const Subspace s = all_positive(x);
            EXPECT_EQ(capped_cuplength(s, m).length, brute_force_cuplength(s, m, x.algebra.top_degree() + 1, 12))
                << x.name << " m=" << m;
        }
    }
}

TEST(CupLength, InhomogeneousProductsNeverBeatTheCappedValue) {
    // Sums of admissible classes of different degrees: a nonzero product of
    // k of them must not exceed the homogeneous answer.
    std::mt19937 rng(17);
    for (const auto& x : corpus()) {
        const int top = x.algebra.top_degree();
        const Subspace s = all_positive(x);
        for (int m = 1; m <= top; ++m) {
            const auto span = s.spanning_elements(m);
            std::vector<Element> pos;
            for (const auto& e : span)
                if (*e.degree() > 0) pos.push_back(e);
            if (pos.empty()) continue;
            const int best = capped_cuplength(s, m).length;
            for (int trial = 0; trial < 20; ++trial) {
                const int k = 1 + rng() % (top + 1);
                Element acc = Element::unit(x.algebra);
                for (int i = 0; i < k; ++i) {
                    Element u(x.algebra);
                    for (const auto& e : pos)
                        if (rng() % 2) u = u + e.scaled(1 + static_cast<int>(rng() % 3));
                    acc = multiply(acc, u);
                }
                if (!acc.is_zero()) {
                    EXPECT_LE(k, best) << x.name << " m=" << m;
                }
            }
        }
    }
}

TEST(CupLength, SizeGuard) {
    const SpaceModel big = product({orientable_surface(2), orientable_surface(2)});
    try {
        brute_force_cuplength(all_positive(big), std::nullopt, 5);
        FAIL();
    } catch (const AlgebraError& e) {
        EXPECT_EQ(e.code(), ErrorCode::SizeGuardExceeded);
    }
}

TEST(CupLength, Determinism) {
    const SpaceModel x = product({sphere(2, Q), sphere(4, Q)});
    const Subspace z = cup_kernel(x.algebra);
    const auto a = capped_cuplength(z, std::nullopt), b = capped_cuplength(z, std::nullopt);
    ASSERT_TRUE(a.certificate && b.certificate);
    EXPECT_EQ(a.certificate->to_string(), b.certificate->to_string());
}
