#include "oracles.hpp"

#include "photocount/error.hpp"
#include "photocount/simplex.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

using namespace photocount;

TEST(Vertices, EightyPercent) {
    auto const v = vertices(TransformSpec(0.8, 3));
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0].values(), (std::vector<double>{1.0, 0.0, 0.0}));
    EXPECT_NEAR(v[1][0], 0.2, 1e-15);
    EXPECT_NEAR(v[1][1], 0.8, 1e-15);
    EXPECT_EQ(v[1][2], 0.0);
    EXPECT_NEAR(v[2][0], 0.04, 1e-15);
    EXPECT_NEAR(v[2][1], 0.32, 1e-15);
    EXPECT_NEAR(v[2][2], 0.64, 1e-15);
}

TEST(Vertices, UnitEfficiencyIsStandardBasis) {
    auto const v = vertices(TransformSpec(1.0, 3));
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(v[n][m], m == n ? 1.0 : 0.0);
    }
}

TEST(Vertices, FortyPercent) {
    auto const v = vertices(TransformSpec(0.4, 3));
    EXPECT_NEAR(v[1][0], 0.6, 1e-15);
    EXPECT_NEAR(v[1][1], 0.4, 1e-15);
    EXPECT_NEAR(v[2][0], 0.36, 1e-15);
    EXPECT_NEAR(v[2][1], 0.48, 1e-15);
    EXPECT_NEAR(v[2][2], 0.16, 1e-15);
}

TEST(Vertices, AreImagesOfBasisStates) {
    for (double eta : {0.2, 0.5, 0.9}) {
        TransformSpec const spec(eta, 8);
        auto const v = vertices(spec);
        for (std::size_t n = 0; n < 8; ++n) {
            std::vector<double> e(n + 1, 0.0);
            e[n] = 1.0;
            Pmf const image = forward(Pmf(e, 0.0, Origin::user), spec);
            for (std::size_t m = 0; m < 8; ++m) EXPECT_NEAR(v[n][m], image[m], 1e-15);
        }
    }
}

TEST(Contains, WorkedExampleIsOutside) {
    std::vector<double> const q{0.0, 0.0, 1.0};
    SimplexCheck const c = contains(q, TransformSpec(0.5, 3));
    EXPECT_FALSE(c.inside);
    ASSERT_EQ(c.barycentric.size(), 3u);
    EXPECT_NEAR(c.barycentric[0], 1.0, 1e-12);
    EXPECT_NEAR(c.barycentric[1], -4.0, 1e-12);
    EXPECT_NEAR(c.barycentric[2], 4.0, 1e-12);
    ASSERT_EQ(c.violations.size(), 2u);
    EXPECT_EQ(c.violations[0].index, 1u);
    EXPECT_EQ(c.violations[1].index, 2u);
}

TEST(Contains, SharedVertexIsInside) {
    for (double eta : {0.1, 0.5, 1.0}) {
        std::vector<double> const q{1.0, 0.0, 0.0};
        SimplexCheck const c = contains(q, TransformSpec(eta, 3));
        EXPECT_TRUE(c.inside);
        EXPECT_EQ(c.barycentric, q);
        EXPECT_TRUE(c.violations.empty());
    }
}

TEST(Contains, ImagesOfValidStatesAreInside) {
    std::mt19937_64 rng(41);
    for (double eta : {0.2, 0.4, 0.6, 0.8}) {
        for (std::size_t dim : {2u, 3u, 5u, 10u}) {
            TransformSpec const spec(eta, dim);
            for (int trial = 0; trial < 1000; ++trial) {
                Pmf const p(oracle::random_pmf(rng, dim), 0.0, Origin::user);
                auto const q = forward(p, spec).values();
                SimplexCheck const c = contains(q, spec);
                ASSERT_TRUE(c.inside) << eta << ' ' << dim << ' ' << trial;
                double const sb = std::accumulate(c.barycentric.begin(), c.barycentric.end(), 0.0);
                double const sq = std::accumulate(q.begin(), q.end(), 0.0);
                EXPECT_NEAR(sb, sq, 1e-9);
            }
        }
    }
}

TEST(Contains, LastBasisVectorIsOutsideBelowUnitEfficiency) {
    for (double eta : {0.2, 0.4, 0.6, 0.8, 0.99}) {
        for (std::size_t dim : {2u, 3u, 5u, 10u}) {
            std::vector<double> q(dim, 0.0);
            q.back() = 1.0;
            SimplexCheck const c = contains(q, TransformSpec(eta, dim));
            EXPECT_FALSE(c.inside) << eta << ' ' << dim;
            EXPECT_FALSE(c.violations.empty());
        }
    }
    std::vector<double> const q{0.0, 0.0, 1.0};
    EXPECT_TRUE(contains(q, TransformSpec(1.0, 3)).inside);
}

TEST(Contains, InsideIffNoViolations) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        auto const q = oracle::random_pmf(rng, 4);
        SimplexCheck const c = contains(q, TransformSpec(0.7, 4));
        EXPECT_EQ(c.inside, c.violations.empty());
        for (auto const& v : c.violations) {
            EXPECT_EQ(c.barycentric[v.index], v.value);
            EXPECT_TRUE(v.value < -geometric_tolerance || v.value > 1.0 + geometric_tolerance);
        }
    }
}

TEST(Contains, MatchesSolveRoute) {
    std::mt19937_64 rng(43);
    for (double eta : {0.3, 0.6, 0.9}) {
        auto const q = oracle::random_pmf(rng, 8);
        TransformSpec const spec(eta, 8);
        auto const c = contains(q, spec);
        auto const s = inverse_via_solve(q, spec);
        for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(c.barycentric[i], s.values[i], 1e-10);
    }
}

TEST(Contains, Preconditions) {
    std::vector<double> const q{0.5, 0.5};
    try {
        contains(q, TransformSpec(0.5, 3));
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    std::vector<double> const r{0.5, 0.4};
    try {
        contains(r, TransformSpec(0.5, 2));
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
    }
}

TEST(Contraction, Determinant) {
    EXPECT_EQ(contraction_ratio(TransformSpec(1.0, 4)), 1.0);
    EXPECT_NEAR(contraction_ratio(TransformSpec(0.5, 3)), 0.125, 1e-15);
    EXPECT_NEAR(contraction_ratio(TransformSpec(0.8, 3)), 0.512, 1e-15);
    double previous = 0.0;
    for (double eta = 0.1; eta < 1.0; eta += 0.1) {
        double const r = contraction_ratio(TransformSpec(eta, 5));
        EXPECT_GT(r, previous);
        EXPECT_LT(r, 1.0);
        previous = r;
    }
}
