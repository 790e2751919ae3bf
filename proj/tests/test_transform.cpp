#include "oracles.hpp"

#include "photocount/error.hpp"
#include "photocount/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace photocount;
using oracle::Rational;

namespace {

std::vector<Rational> exact_all(std::vector<double> const& v) {
    std::vector<Rational> out;
    for (double x : v) out.push_back(oracle::exact(x));
    return out;
}

double sum(std::vector<double> const& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST(TransformSpec, Validation) {
    try {
        TransformSpec(0.0, 3);
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::EtaZero);
    }
    for (double eta : {-0.5, 1.5, std::nan("")}) {
        try {
            TransformSpec(eta, 3);
            FAIL() << eta;
        } catch (Error const& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
        }
    }
    EXPECT_THROW(TransformSpec(0.5, 0), Error);
}

TEST(Matrix, UnitEfficiencyIsIdentity) {
    TransformMatrix const t = build_matrix(TransformSpec(1.0, 5));
    for (std::size_t m = 0; m < 5; ++m) {
        for (std::size_t n = 0; n < 5; ++n) EXPECT_EQ(t(m, n), m == n ? 1.0 : 0.0);
    }
}

TEST(Matrix, ColumnTwoAtEightyPercent) {
    auto const col = build_matrix(TransformSpec(0.8, 3)).column(2);
    ASSERT_EQ(col.size(), 3u);
    EXPECT_NEAR(col[0], 0.04, 1e-15);
    EXPECT_NEAR(col[1], 0.32, 1e-15);
    EXPECT_NEAR(col[2], 0.64, 1e-15);
}

TEST(Matrix, ColumnsAreBinomialLaws) {
    for (double eta : {0.05, 0.3, 0.5, 0.77, 0.99, 1.0}) {
        for (std::size_t dim : {1u, 2u, 7u, 40u, 150u}) {
            TransformMatrix const t = build_matrix(TransformSpec(eta, dim));
            for (std::size_t n = 0; n < dim; ++n) {
                EXPECT_NEAR(sum(t.column(n)), 1.0, 1e-12) << eta << ' ' << dim << ' ' << n;
                for (std::size_t m = n + 1; m < dim; ++m) EXPECT_EQ(t(m, n), 0.0);
            }
        }
    }
}

TEST(Matrix, EntriesMatchDirectProducts) {
    for (double eta : {0.3, 0.5, 0.8}) {
        auto const ref = oracle::dense_matrix(eta, 30);
        TransformMatrix const t = build_matrix(TransformSpec(eta, 30));
        for (std::size_t m = 0; m < 30; ++m) {
            for (std::size_t n = m; n < 30; ++n) {
                double const r = static_cast<double>(ref[m][n]);
                EXPECT_NEAR(t(m, n), r, 1e-13 * r) << eta << ' ' << m << ' ' << n;
            }
        }
    }
}

TEST(Forward, HalfHalfAtHalfEfficiency) {
    Pmf const q = forward(Pmf({0.5, 0.5}, 0.0, Origin::user), TransformSpec(0.5, 2));
    EXPECT_DOUBLE_EQ(q[0], 0.75);
    EXPECT_DOUBLE_EQ(q[1], 0.25);
}

TEST(Forward, TwoPhotonState) {
    Pmf const q = forward(Pmf({0, 0, 1}, 0.0, Origin::user), TransformSpec(0.4, 3));
    EXPECT_NEAR(q[0], 0.36, 1e-15);
    EXPECT_NEAR(q[1], 0.48, 1e-15);
    EXPECT_NEAR(q[2], 0.16, 1e-15);
}

TEST(Forward, UnitEfficiencyIsExactIdentity) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Pmf const p(oracle::random_pmf(rng, 1 + trial % 20), 0.0, Origin::user);
        Pmf const q = forward(p, TransformSpec(1.0, p.size()));
        EXPECT_EQ(q.values(), p.values());
    }
}

TEST(Forward, PadsToDimAndKeepsTail) {
    Pmf const p({0.5, 0.4999}, 1e-4, Origin::analytic);
    Pmf const q = forward(p, TransformSpec(0.5, 6));
    EXPECT_EQ(q.size(), 6u);
    EXPECT_EQ(q.tail_mass(), 1e-4);
    EXPECT_EQ(q.origin(), Origin::analytic);
    EXPECT_EQ(q[5], 0.0);
}

TEST(Forward, RejectsShortDim) {
    try {
        forward(Pmf({0.5, 0.5}, 0.0, Origin::user), TransformSpec(0.5, 1));
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Forward, MatchesExactRationalArithmetic) {
    std::mt19937_64 rng(5);
    for (double eta : {0.3, 0.5, 0.8}) {
        for (std::size_t dim : {3u, 8u, 25u}) {
            auto const pv = oracle::random_pmf(rng, dim);
            double const tail = 1.0 - sum(pv);
            Pmf const p(pv, std::max(0.0, tail), Origin::user);
            auto const ref = oracle::forward_exact(exact_all(pv), oracle::exact(eta));
            Pmf const q = forward(p, TransformSpec(eta, dim));
            for (std::size_t m = 0; m < dim; ++m) {
                EXPECT_NEAR(q[m], ref[m].convert_to<double>(), 1e-15) << eta << ' ' << m;
            }
            EXPECT_NEAR(sum(q.values()), 1.0, 1e-12);
        }
    }
}

TEST(Inverse, WorkedExampleIsExact) {
    std::vector<double> const q{0.0, 0.0, 1.0};
    SignedDistribution const p = inverse(q, TransformSpec(0.5, 3));
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p.values[0], 1.0, 1e-12);
    EXPECT_NEAR(p.values[1], -4.0, 1e-12);
    EXPECT_NEAR(p.values[2], 4.0, 1e-12);

    auto const exact = oracle::inverse_exact(exact_all(q), Rational(1, 2));
    EXPECT_EQ(exact[0], Rational(1));
    EXPECT_EQ(exact[1], Rational(-4));
    EXPECT_EQ(exact[2], Rational(4));
}

TEST(Inverse, ViaSolveWorkedExamples) {
    std::vector<double> const q{0.0, 0.0, 1.0};
    auto const p = inverse_via_solve(q, TransformSpec(0.5, 3));
    EXPECT_NEAR(p.values[0], 1.0, 1e-12);
    EXPECT_NEAR(p.values[1], -4.0, 1e-12);
    EXPECT_NEAR(p.values[2], 4.0, 1e-12);

    std::vector<double> const q2{0.75, 0.25};
    auto const p2 = inverse_via_solve(q2, TransformSpec(0.5, 2));
    EXPECT_NEAR(p2.values[0], 0.5, 1e-15);
    EXPECT_NEAR(p2.values[1], 0.5, 1e-15);
}

TEST(Inverse, RoundTripSmallExample) {
    Pmf const p({0.1, 0.2, 0.3, 0.4}, 0.0, Origin::user);
    TransformSpec const spec(0.7, 4);
    Pmf const q = forward(p, spec);

    // Reference: dense Gaussian elimination on independently built entries.
    auto const t = oracle::dense_matrix(0.7, 4);
    std::vector<long double> const rhs(q.values().begin(), q.values().end());
    auto const ref = oracle::dense_solve(t, rhs);

    auto const back = inverse(q.values(), spec);
    for (std::size_t n = 0; n < 4; ++n) {
        EXPECT_NEAR(back.values[n], p[n], 1e-10);
        EXPECT_NEAR(back.values[n], static_cast<double>(ref[n]), 1e-10);
    }
}

TEST(Inverse, UnitEfficiencyIsIdentity) {
    std::vector<double> const q{0.1, 0.2, 0.3, 0.4};
    auto const p = inverse(q, TransformSpec(1.0, 4));
    EXPECT_EQ(p.values, q);
    for (bool c : p.converged) EXPECT_TRUE(c);
}

TEST(Inverse, OutputLengthFollowsDim) {
    std::vector<double> const q{0.0, 0.0, 1.0};
    auto const shorter = inverse(q, TransformSpec(0.5, 2));
    ASSERT_EQ(shorter.size(), 2u);
    EXPECT_NEAR(shorter.values[1], -4.0, 1e-12);
    auto const longer = inverse(q, TransformSpec(0.5, 5));
    ASSERT_EQ(longer.size(), 5u);
    EXPECT_EQ(longer.values[4], 0.0);
}

TEST(Inverse, RejectsNonFinite) {
    std::vector<double> const q{0.5, INFINITY};
    try {
        inverse(q, TransformSpec(0.5, 2));
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
    }
}

TEST(Inverse, TermMagnitudesAreRecorded) {
    std::vector<double> const q{0.0, 0.0, 1.0};
    auto const p = inverse(q, TransformSpec(0.5, 3));
    // |a_nm| = (1/eta - 1)^m C(m, n) Q_m with only m = 2 nonzero.
    EXPECT_DOUBLE_EQ(p.max_term_magnitude[0], 1.0);
    EXPECT_DOUBLE_EQ(p.max_term_magnitude[1], 2.0);
    EXPECT_DOUBLE_EQ(p.max_term_magnitude[2], 1.0);
}

// Double evaluation is accurate where the coefficients stay moderate; the
// extended-precision tests cover the rest of the domain.
TEST(Inverse, RoundTripInDoubleAtModerateSize) {
    std::mt19937_64 rng(21);
    struct Case { double eta; std::size_t dim; };
    for (Case c : {Case{0.3, 10}, Case{0.5, 20}, Case{0.8, 60}, Case{1.0, 200}}) {
        TransformSpec const spec(c.eta, c.dim);
        for (int trial = 0; trial < 20; ++trial) {
            Pmf const p(oracle::random_pmf(rng, c.dim), 0.0, Origin::user);
            auto const back = inverse(forward(p, spec).values(), spec);
            for (std::size_t n = 0; n < c.dim; ++n) {
                ASSERT_NEAR(back.values[n], p[n], 1e-9) << c.eta << ' ' << c.dim << ' ' << n;
            }
        }
    }
}

TEST(Inverse, AgreesWithSolveInDoubleAtModerateSize) {
    std::mt19937_64 rng(22);
    struct Case { double eta; std::size_t dim; };
    for (Case c : {Case{0.3, 7}, Case{0.5, 12}, Case{0.8, 34}}) {
        TransformSpec const spec(c.eta, c.dim);
        for (int trial = 0; trial < 20; ++trial) {
            auto const q = oracle::random_pmf(rng, c.dim);
            auto const a = inverse(q, spec);
            auto const b = inverse_via_solve(q, spec);
            for (std::size_t n = 0; n < c.dim; ++n) {
                double const scale = std::max(1.0, std::abs(a.values[n]));
                ASSERT_NEAR(a.values[n], b.values[n], 1e-8 * scale) << c.eta << ' ' << n;
            }
        }
    }
}

TEST(Inverse, NormalizationPreservedWhereRepresentable) {
    std::mt19937_64 rng(23);
    for (double eta : {0.3, 0.5, 0.8}) {
        std::size_t const dim = eta < 0.4 ? 7 : eta < 0.6 ? 12 : 34;
        for (int trial = 0; trial < 50; ++trial) {
            auto const q = oracle::random_pmf(rng, 1 + trial % dim);
            auto const p = inverse(q, TransformSpec(eta, q.size()));
            EXPECT_NEAR(sum(p.values), sum(q), 1e-9) << eta;
        }
    }
}

TEST(Inverse, ConvergedFlagsOnFiniteSupport) {
    // Finite distributions always show terminal decay.
    Pmf const p({0.2, 0.3, 0.5}, 0.0, Origin::user);
    TransformSpec const spec(0.4, 8);
    auto const q = forward(p, spec);
    auto const back = inverse(q.values(), spec);
    for (std::size_t n = 0; n < back.size(); ++n) EXPECT_TRUE(back.converged[n]) << n;
}

TEST(LogBinomial, MatchesExactSmallValues) {
    for (std::size_t n = 0; n < 60; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
            double const ref = std::log(oracle::choose(n, k).convert_to<double>());
            EXPECT_NEAR(log_binomial(n, k), ref, 1e-12 * std::max(1.0, ref));
        }
    }
}
