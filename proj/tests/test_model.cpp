#include "rsgame/error.hpp"
#include "rsgame/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace rsgame;

TEST(Params, BenchmarkIsValid) {
    const auto p = benchmark_params();
    EXPECT_TRUE(violations(p).empty());
    EXPECT_EQ(&validate(p), &p);
    EXPECT_DOUBLE_EQ(p.sigma_of(Regime::two), 4.0);
    EXPECT_DOUBLE_EQ(p.Ktilde_of(Regime::one), 5.0);
    EXPECT_DOUBLE_EQ(p.lambda_of(Regime::two), 5.0);
}

TEST(Params, StrikeOrderViolationIsNamed) {
    auto p = benchmark_params();
    p.K[0] = 10.0;
    try {
        validate(p);
        FAIL() << "expected a validation error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("K(1) < K̃(1) violated"), std::string::npos) << e.what();
    }
}

TEST(Params, EveryViolationListed) {
    auto p = benchmark_params();
    p.r = 0.0;
    p.sigma[1] = -1.0;
    p.lambda[0] = 0.0;
    p.Ktilde[1] = std::numeric_limits<double>::quiet_NaN();
    const auto v = violations(p);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[0], "discount rate must be positive");
    EXPECT_THROW(validate(p), Error);
}

TEST(Params, EqualStrikesRejected) {
    auto p = benchmark_params();
    p.K[1] = p.Ktilde[1];
    EXPECT_EQ(violations(p).size(), 1u);
}

TEST(Regime, Helpers) {
    EXPECT_EQ(other(Regime::one), Regime::two);
    EXPECT_EQ(slot(Regime::two), 1u);
    EXPECT_EQ(regime_from_int(2), Regime::two);
    try {
        regime_from_int(3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(exit_code(e.kind()), 1);
    }
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code(ErrorKind::validation), 1);
    EXPECT_EQ(exit_code(ErrorKind::no_convergence), 2);
    EXPECT_EQ(exit_code(ErrorKind::ordering_violated), 2);
    EXPECT_EQ(exit_code(ErrorKind::singular_matrix), 2);
    EXPECT_EQ(exit_code(ErrorKind::verification), 3);
    EXPECT_EQ(exit_code(ErrorKind::io), 4);
}

TEST(Regions, BoundaryBelongsToStopping) {
    const Thresholds th{0.68, 1.86, 5.79, 8.71};
    const auto r1 = regions(th, Regime::one);
    EXPECT_TRUE(r1.player1.stop.contains(0.68));
    EXPECT_FALSE(r1.player1.cont.contains(0.68));
    EXPECT_TRUE(r1.player1.cont.contains(0.69));
    EXPECT_TRUE(r1.player2.stop.contains(5.79));
    EXPECT_FALSE(r1.player2.cont.contains(5.79));

    const auto r2 = regions(th, Regime::two);
    EXPECT_TRUE(r2.player1.stop.contains(1.86));
    EXPECT_TRUE(r2.player2.cont.contains(8.70));
    EXPECT_FALSE(r2.player2.cont.contains(8.71));
}

TEST(Regions, PartitionTheLine) {
    const Thresholds th{-1.0, 0.5, 2.0, 3.0};
    for (Regime i : kRegimes) {
        const auto r = regions(th, i);
        for (double x = -5.0; x <= 6.0; x += 0.125) {
            EXPECT_NE(r.player1.stop.contains(x), r.player1.cont.contains(x)) << x;
            EXPECT_NE(r.player2.stop.contains(x), r.player2.cont.contains(x)) << x;
        }
    }
}

TEST(Thresholds, OrderAndArrays) {
    Thresholds th{1, 2, 3, 4};
    EXPECT_TRUE(th.ordered());
    EXPECT_EQ(Thresholds::from_array(th.as_array()), th);
    EXPECT_DOUBLE_EQ(th.a(Regime::two), 2.0);
    EXPECT_DOUBLE_EQ(th.b(Regime::one), 3.0);
    th.b1 = 2.0;
    EXPECT_FALSE(th.ordered());
}
