#include "rsgame/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace rsgame;

namespace {

const SmoothFitSolution& benchmark_solution() {
    static const SmoothFitSolution sol = solve_thresholds(benchmark_params());
    return sol;
}

// Moves b1 and re-fits every coefficient from the b-side conditions, which
// keeps pasting at b1, b2 but breaks it at a2.
SmoothFitSolution shifted_b1(double shift) {
    auto sol = benchmark_solution();
    sol.thresholds.b1 += shift;
    const PastingSystem sys(sol.params, sol.spectral);
    sol.coeffs.A = sys.f2(sol.thresholds.b1, sol.thresholds.b2);
    sol.coeffs.Ctilde = sys.ctilde_from_b2(sol.thresholds.b2);
    return sol;
}

// Accessors for every stored coefficient.
std::vector<std::function<double&(SmoothFitSolution&)>> coefficients() {
    std::vector<std::function<double&(SmoothFitSolution&)>> out;
    for (int k = 0; k < 4; ++k) out.push_back([k](SmoothFitSolution& s) -> double& { return s.coeffs.A[k]; });
    for (int k = 0; k < 2; ++k) out.push_back([k](SmoothFitSolution& s) -> double& { return s.coeffs.C[k]; });
    for (int k = 0; k < 2; ++k) out.push_back([k](SmoothFitSolution& s) -> double& { return s.coeffs.Ctilde[k]; });
    return out;
}

} // namespace

TEST(Verify, BenchmarkPassesEveryCheck) {
    const ValueFunction vf(benchmark_solution());
    const auto rep = verify(vf);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.smoothness.worst, 1e-8);
    EXPECT_LE(rep.bounds.worst.violation, 1e-7);
    EXPECT_LE(rep.vi.c.worst.violation, 1e-6);
    EXPECT_LE(rep.vi.d.worst.violation, 1e-6);
    EXPECT_EQ(rep.grid.count, 20001u);
    EXPECT_EQ(rep.boundsGrid.count, 20001u);
    EXPECT_EQ(rep.smoothness.points[0].label, "v1@a1");
    EXPECT_EQ(rep.smoothness.points[5].label, "v2@b2");
}

TEST(Verify, GridsSpanRequiredRange) {
    const auto& th = benchmark_solution().thresholds;
    const auto g = bounds_grid(th);
    EXPECT_DOUBLE_EQ(g.lo, th.a1 - 5 * (th.b2 - th.a1));
    EXPECT_DOUBLE_EQ(g.hi, th.b2 + 5 * (th.b2 - th.a1));
    EXPECT_GE(g.count, 10000u);
}

TEST(Verify, InteriorPointsAvoidBoundaries) {
    const auto& th = benchmark_solution().thresholds;
    GridSpec g{th.a1, th.b2, 3};
    for (double x : interior_points(g, th))
        for (double t : th.as_array()) EXPECT_GE(std::abs(x - t), kBoundaryOffset * 0.999);
}

TEST(Verify, CommonContinuationRegionSolvesBothOdes) {
    const ValueFunction vf(benchmark_solution());
    const auto& th = vf.thresholds();
    for (double x : linspace(th.a2 + 1e-6, th.b1 - 1e-6, 1001)) {
        EXPECT_NEAR(vf.generator(x, Regime::one), 0.0, 1e-8);
        EXPECT_NEAR(vf.generator(x, Regime::two), 0.0, 1e-8);
    }
}

TEST(Verify, StoppingPieceIdentity) {
    const ValueFunction vf(benchmark_solution());
    const auto& th = vf.thresholds();
    for (double x : linspace(th.a2 - 5.0, th.a2 - 1e-6, 200)) {
        EXPECT_EQ(vf.eval(x, Regime::two) - (x - 3.0), 0.0);
        EXPECT_LE(vf.generator(x, Regime::two), 1e-6); // max{Lv, v - (x - K)} = 0 with the obstacle active
    }
}

TEST(Verify, PerturbedA1BreaksSmoothness) {
    auto sol = benchmark_solution();
    sol.coeffs.A[0] += 1e-3;
    const auto rep = check_smoothness(ValueFunction(sol));
    EXPECT_FALSE(rep.pass);
    EXPECT_GT(rep.points[2].value_gap + rep.points[2].slope_gap, 1e-8); // v1@b1
}

// Property: any single coefficient moved by 1e-3 (absolute or relative)
// makes verify fail.
TEST(VerifyProperty, AnyCoefficientPerturbationFails) {
    int n = 0;
    for (const auto& coef : coefficients()) {
        for (bool relative : {false, true}) {
            auto sol = benchmark_solution();
            double& c = coef(sol);
            c += relative ? 1e-3 * std::abs(c) : 1e-3;
            const auto rep = verify(ValueFunction(sol));
            EXPECT_FALSE(rep.pass) << "coefficient " << n << (relative ? " relative" : " absolute");
            EXPECT_FALSE(rep.smoothness.pass);
        }
        ++n;
    }
}

TEST(Verify, ShiftedB1FailsVi) {
    const ValueFunction vf(shifted_b1(0.1));
    const auto rep = verify(vf);
    EXPECT_FALSE(rep.pass);
    EXPECT_GT(std::max(rep.vi.c.worst.violation, rep.vi.d.worst.violation), 1e-3);
}

TEST(Verify, RaisedPieceBreaksUpperBound) {
    auto sol = benchmark_solution();
    sol.spectral.q += 0.1; // lifts v(., 1) on (a1, a2) by 0.1
    const ValueFunction vf(sol);
    const auto rep = check_bounds(vf, grid_points(bounds_grid(sol.thresholds)));
    EXPECT_FALSE(rep.pass);
    EXPECT_NEAR(rep.worst.violation, 0.1, 1e-3);
    EXPECT_EQ(rep.worst.regime, Regime::one);
    EXPECT_NEAR(rep.worst.x, sol.thresholds.a1, 0.01);
}

TEST(Verify, RefinedGridContainsCoarse) {
    const GridSpec g{-3.0, 7.0, 101};
    const auto coarse = grid_points(g);
    const auto fine = grid_points(refine(g));
    ASSERT_EQ(fine.size(), 201u);
    for (std::size_t k = 0; k < coarse.size(); ++k) EXPECT_NEAR(fine[2 * k], coarse[k], 1e-12);
}

// Property: refining never lowers a reported violation.
TEST(VerifyProperty, RefinementIsMonotone) {
    for (double shift : {0.02, 0.1, -0.05}) {
        const ValueFunction vf(shifted_b1(shift));
        GridSpec vi = default_grid(vf.thresholds());
        GridSpec sand = bounds_grid(vf.thresholds());
        vi.count = sand.count = 501;
        auto prev = verify(vf, vi, sand);
        for (int level = 0; level < 3; ++level) {
            vi = refine(vi);
            sand = refine(sand);
            const auto next = verify(vf, vi, sand);
            EXPECT_GE(next.bounds.worst.violation, prev.bounds.worst.violation * (1 - 1e-12));
            EXPECT_GE(next.vi.c.worst.violation, prev.vi.c.worst.violation * (1 - 1e-12));
            EXPECT_GE(next.vi.d.worst.violation, prev.vi.d.worst.violation * (1 - 1e-12));
            if (!prev.pass) EXPECT_FALSE(next.pass);
            prev = next;
        }
    }
}

TEST(VerifyProperty, GeneratorMatchesFiniteDifferences) {
    const ValueFunction vf(benchmark_solution());
    const auto& p = vf.params();
    const auto& th = vf.thresholds();
    const double h = 1e-4;
    for (double x : interior_points({th.a1 - 1.0, th.b2 + 1.0, 997}, th, 1e-3)) {
        for (Regime i : kRegimes) {
            const double v = vf.eval(x, i);
            const double d2 = (vf.eval(x + h, i) - 2 * v + vf.eval(x - h, i)) / (h * h);
            const double fd = p.r * v - 0.5 * p.sigma_of(i) * p.sigma_of(i) * d2 -
                              p.lambda_of(i) * (vf.eval(x, other(i)) - v);
            EXPECT_NEAR(vf.generator(x, i), fd, 1e-5 * std::max(1.0, std::abs(fd))) << x;
        }
    }
}
