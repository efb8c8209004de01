#include "rsgame/spectral.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <random>

using namespace rsgame;

namespace {

// Roots of the monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0 by
// Durand-Kerner iteration, real parts sorted ascending.
std::array<double, 4> durand_kerner(double c3, double c2, double c1, double c0) {
    using C = std::complex<double>;
    auto f = [&](C x) { return (((x + c3) * x + c2) * x + c1) * x + c0; };
    std::array<C, 4> z;
    const C seed(0.4, 0.9);
    const double scale = 1.0 + std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    for (int k = 0; k < 4; ++k) z[k] = scale * std::pow(seed, k);
    for (int it = 0; it < 2000; ++it) {
        double move = 0.0;
        for (int k = 0; k < 4; ++k) {
            C den = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != k) den *= z[k] - z[j];
            const C step = f(z[k]) / den;
            z[k] -= step;
            move = std::max(move, std::abs(step));
        }
        if (move < 1e-15 * scale) break;
    }
    std::array<double, 4> out;
    for (int k = 0; k < 4; ++k) {
        EXPECT_LT(std::abs(z[k].imag()), 1e-8) << "complex root";
        out[k] = z[k].real();
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Quartic in beta written out directly from the coupled ODE system:
// (sigma1^2 b^2 / 2 - r - lambda1)(sigma2^2 b^2 / 2 - r - lambda2) - lambda1 lambda2 = 0.
std::array<double, 4> oracle_roots(const GameParams& p) {
    const double u = 0.5 * p.sigma[0] * p.sigma[0];
    const double w = 0.5 * p.sigma[1] * p.sigma[1];
    const double m = p.r + p.lambda[0];
    const double n = p.r + p.lambda[1];
    const double lead = u * w;
    return durand_kerner(0.0, -(u * n + w * m) / lead, 0.0, (m * n - p.lambda[0] * p.lambda[1]) / lead);
}

GameParams random_params(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> pos(0.2, 6.0);
    GameParams p;
    p.r = pos(gen);
    p.sigma = {pos(gen), pos(gen)};
    p.lambda = {pos(gen), pos(gen)};
    p.K = {pos(gen), pos(gen)};
    p.Ktilde = {p.K[0] + pos(gen), p.K[1] + pos(gen)};
    return p;
}

GameParams symmetric_params() {
    GameParams p;
    p.r = 3.0;
    p.sigma = {2.0, 2.0};
    p.lambda = {2.0, 2.0};
    p.K = {2.0, 3.0};
    p.Ktilde = {5.0, 6.0};
    return p;
}

} // namespace

TEST(Spectral, SymmetricCaseClosedForm) {
    // Equal sigma and lambda: beta^2 = 2r / sigma^2 or 2(r + 2 lambda) / sigma^2.
    const auto p = symmetric_params();
    const auto s = characteristic_squared_roots(p);
    EXPECT_NEAR(s.s_minus, 1.5, 1e-14);
    EXPECT_NEAR(s.s_plus, 3.5, 1e-14);
    const auto beta = characteristic_roots(p);
    EXPECT_NEAR(beta[0], -std::sqrt(3.5), 1e-14);
    EXPECT_NEAR(beta[1], -1.224744871391589, 1e-14);
    EXPECT_NEAR(beta[2], 1.224744871391589, 1e-14);
    EXPECT_NEAR(beta[3], 1.870828693386971, 1e-14);
    // Slow pair moves both regimes together, fast pair in opposition.
    const auto rho = rho_coefficients(p, beta);
    EXPECT_NEAR(rho[0], -1.0, 1e-13);
    EXPECT_NEAR(rho[1], 1.0, 1e-13);
    EXPECT_NEAR(rho[2], 1.0, 1e-13);
    EXPECT_NEAR(rho[3], -1.0, 1e-13);
}

TEST(Spectral, BenchmarkSingleRegimeConstants) {
    const auto c = single_regime_constants(benchmark_params());
    EXPECT_NEAR(c.gamma[0], 1.5811388300841898, 1e-14);
    EXPECT_NEAR(c.gamma[1], -1.5811388300841898, 1e-14);
    EXPECT_NEAR(c.gammaTilde[0], 1.0, 1e-14); // sqrt(2 * 8 / 16)
    EXPECT_NEAR(c.p, 0.4, 1e-15);
    EXPECT_NEAR(c.q, -1.2, 1e-15);
    EXPECT_NEAR(c.pTilde, 0.625, 1e-15);
    EXPECT_NEAR(c.qTilde, -3.125, 1e-15);
}

TEST(Spectral, BenchmarkAgreesWithPolynomialOracle) {
    const auto p = benchmark_params();
    const auto beta = characteristic_roots(p);
    const auto ref = oracle_roots(p);
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(beta[k], ref[k], 1e-10 * std::abs(ref[k]));
        EXPECT_LT(quartic_residual(p, beta[k]), 1e-12);
    }
}

// Property: four distinct real roots, symmetric, interlacing the single-regime
// rates, agreeing with the independent root finder.
TEST(SpectralProperty, RandomParameters) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_params(gen);
        const auto beta = characteristic_roots(p);
        const auto ref = oracle_roots(p);
        const double c1 = 2.0 * (p.r + p.lambda[0]) / (p.sigma[0] * p.sigma[0]);
        const double c2 = 2.0 * (p.r + p.lambda[1]) / (p.sigma[1] * p.sigma[1]);
        ASSERT_LT(beta[0], beta[1]);
        ASSERT_LT(beta[1], 0.0);
        ASSERT_DOUBLE_EQ(beta[0], -beta[3]);
        ASSERT_DOUBLE_EQ(beta[1], -beta[2]);
        EXPECT_LT(beta[2] * beta[2], std::min(c1, c2));
        EXPECT_GT(beta[3] * beta[3], std::max(c1, c2));
        for (int k = 0; k < 4; ++k) {
            EXPECT_LT(quartic_residual(p, beta[k]), 1e-10) << "trial " << trial;
            EXPECT_NEAR(beta[k], ref[k], 1e-8 * std::abs(ref[k])) << "trial " << trial;
        }
        // rho solves the second equation of the coupled system as well.
        const auto rho = rho_coefficients(p, beta);
        for (int k = 0; k < 4; ++k) {
            const double b2 = beta[k] * beta[k];
            const double second = p.lambda[1] - (p.r + p.lambda[1] - 0.5 * p.sigma[1] * p.sigma[1] * b2) * rho[k];
            EXPECT_NEAR(second, 0.0, 1e-9 * (p.lambda[1] + (p.r + p.lambda[1]) * std::abs(rho[k])));
        }
    }
}

TEST(Spectral, ComputeSpectralBundlesEverything) {
    const auto p = benchmark_params();
    const auto s = compute_spectral(p);
    EXPECT_EQ(s.beta, characteristic_roots(p));
    EXPECT_EQ(s.rho, rho_coefficients(p, s.beta));
    EXPECT_DOUBLE_EQ(s.p, 0.4);
    EXPECT_DOUBLE_EQ(s.qTilde, -3.125);
}

TEST(Spectral, WeakCouplingApproachesSingleRegimeRates) {
    auto p = benchmark_params();
    p.lambda = {1e-6, 1e-6};
    const auto beta = characteristic_roots(p);
    // Slow pair -> sqrt(2r / sigma2^2), fast pair -> sqrt(2r / sigma1^2).
    EXPECT_NEAR(beta[2], std::sqrt(2.0 * 3.0 / 16.0), 1e-6);
    EXPECT_NEAR(beta[3], std::sqrt(2.0 * 3.0 / 4.0), 1e-6);
}
