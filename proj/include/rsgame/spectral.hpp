#pragma once

#include "rsgame/model.hpp"

#include <array>

namespace rsgame {

/// Closed-form constants of the piecewise value function.
struct SpectralData {
    /// Exponents of the coupled system on the common continuation region,
    /// ascending: beta[0] = -beta[3], beta[1] = -beta[2].
    std::array<double, 4> beta{};
    /// rho[k] links the regime-2 coefficient to the regime-1 one: B_k = rho_k A_k.
    std::array<double, 4> rho{};
    /// (+root, -root) of (r + lambda1) - sigma1^2 gamma^2 / 2 = 0.
    std::array<double, 2> gamma{};
    /// (+root, -root) of (r + lambda2) - sigma2^2 gamma^2 / 2 = 0.
    std::array<double, 2> gammaTilde{};
    /// Affine particular solution p x + q of regime 1 on (a1, a2).
    double p = 0.0;
    double q = 0.0;
    /// Affine particular solution of regime 2 on (b1, b2).
    double pTilde = 0.0;
    double qTilde = 0.0;
};

/// Roots in s = beta^2 of the characteristic quadratic, s_minus < s_plus.
struct SquaredRoots {
    double s_minus = 0.0;
    double s_plus = 0.0;
};

SquaredRoots characteristic_squared_roots(const GameParams& params);

/// The four real roots of the characteristic quartic, ascending.
std::array<double, 4> characteristic_roots(const GameParams& params);

/// Relative residual of the characteristic quartic at beta, normalized by
/// the size of its terms.
double quartic_residual(const GameParams& params, double beta);

std::array<double, 4> rho_coefficients(const GameParams& params, const std::array<double, 4>& beta);

struct SingleRegimeConstants {
    std::array<double, 2> gamma{};
    std::array<double, 2> gammaTilde{};
    double p = 0.0;
    double q = 0.0;
    double pTilde = 0.0;
    double qTilde = 0.0;
};

SingleRegimeConstants single_regime_constants(const GameParams& params);

/// All of the above for validated parameters.
SpectralData compute_spectral(const GameParams& params);

} // namespace rsgame
