#include "rsgame/spectral.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rsgame {

namespace {

struct QuarticCoefficients {
    double c1; // 2(r + lambda1) / sigma1^2
    double c2; // 2(r + lambda2) / sigma2^2
    double d;  // 4 lambda1 lambda2 / (sigma1^2 sigma2^2)
    double f0; // c1 c2 - d, evaluated without cancellation
};

QuarticCoefficients quartic_coefficients(const GameParams& p) {
    const double s1 = p.sigma[0] * p.sigma[0];
    const double s2 = p.sigma[1] * p.sigma[1];
    QuarticCoefficients q{};
    q.c1 = 2.0 * (p.r + p.lambda[0]) / s1;
    q.c2 = 2.0 * (p.r + p.lambda[1]) / s2;
    q.d = 4.0 * p.lambda[0] * p.lambda[1] / (s1 * s2);
    q.f0 = 4.0 * (p.r * p.r + p.r * (p.lambda[0] + p.lambda[1])) / (s1 * s2);
    return q;
}

} // namespace

SquaredRoots characteristic_squared_roots(const GameParams& params) {
    const auto [c1, c2, d, f0] = quartic_coefficients(params);
    // s^2 - (c1 + c2) s + (c1 c2 - d) = 0 with f(0) > 0 > f(min(c1, c2)),
    // so both roots are positive and bracket min(c1, c2).
    const double disc = std::sqrt((c1 - c2) * (c1 - c2) + 4.0 * d);
    SquaredRoots s;
    s.s_plus = 0.5 * (c1 + c2 + disc);
    s.s_minus = f0 / s.s_plus;
    assert(s.s_minus > 0.0 && s.s_minus < std::min(c1, c2));
    assert(s.s_plus > std::max(c1, c2));
    return s;
}

std::array<double, 4> characteristic_roots(const GameParams& params) {
    const auto s = characteristic_squared_roots(params);
    const double outer = std::sqrt(s.s_plus);
    const double inner = std::sqrt(s.s_minus);
    return {-outer, -inner, inner, outer};
}

double quartic_residual(const GameParams& params, double beta) {
    const auto [c1, c2, d, f0] = quartic_coefficients(params);
    const double b2 = beta * beta;
    const double value = (b2 - c1) * (b2 - c2) - d;
    const double scale = b2 * b2 + (c1 + c2) * b2 + c1 * c2 + d;
    return std::abs(value) / scale;
}

std::array<double, 4> rho_coefficients(const GameParams& params, const std::array<double, 4>& beta) {
    const double s1 = params.sigma[0] * params.sigma[0];
    std::array<double, 4> rho{};
    for (std::size_t k = 0; k < 4; ++k)
        rho[k] = ((params.r + params.lambda[0]) - 0.5 * s1 * beta[k] * beta[k]) / params.lambda[0];
    return rho;
}

SingleRegimeConstants single_regime_constants(const GameParams& p) {
    SingleRegimeConstants c;
    const double g = std::sqrt(2.0 * (p.r + p.lambda[0]) / (p.sigma[0] * p.sigma[0]));
    const double gt = std::sqrt(2.0 * (p.r + p.lambda[1]) / (p.sigma[1] * p.sigma[1]));
    c.gamma = {g, -g};
    c.gammaTilde = {gt, -gt};
    c.p = p.lambda[0] / (p.r + p.lambda[0]);
    c.q = -p.lambda[0] * p.K[1] / (p.r + p.lambda[0]);
    c.pTilde = p.lambda[1] / (p.r + p.lambda[1]);
    c.qTilde = -p.lambda[1] * p.Ktilde[0] / (p.r + p.lambda[1]);
    return c;
}

SpectralData compute_spectral(const GameParams& params) {
    SpectralData s;
    s.beta = characteristic_roots(params);
    s.rho = rho_coefficients(params, s.beta);
    const auto c = single_regime_constants(params);
    s.gamma = c.gamma;
    s.gammaTilde = c.gammaTilde;
    s.p = c.p;
    s.q = c.q;
    s.pTilde = c.pTilde;
    s.qTilde = c.qTilde;
    return s;
}

} // namespace rsgame
