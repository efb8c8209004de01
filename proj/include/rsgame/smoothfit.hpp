#pragma once

#include "rsgame/linalg.hpp"
#include "rsgame/model.hpp"
#include "rsgame/newton.hpp"
#include "rsgame/spectral.hpp"

#include <array>
#include <optional>

namespace rsgame {

/// Coefficients of the exponential pieces of the value function.
///
/// A multiplies exp(beta_k x) in regime 1 on (a2, b1); the regime-2
/// coefficients there are B_k = rho_k A_k and are derived, never stored.
/// C lives on (a1, a2) in regime 1, Ctilde on (b1, b2) in regime 2, both
/// paired with the (+, -) root order of gamma / gammaTilde.
struct CoefficientSet {
    std::array<double, 4> A{};
    std::array<double, 2> C{};
    std::array<double, 2> Ctilde{};

    std::array<double, 4> B(const SpectralData& s) const noexcept {
        return {s.rho[0] * A[0], s.rho[1] * A[1], s.rho[2] * A[2], s.rho[3] * A[3]};
    }
};

struct SmoothFitSolution {
    GameParams params;
    Thresholds thresholds;
    CoefficientSet coeffs;
    SpectralData spectral;
    /// Max absolute residual over the twelve pasting equations.
    double residual = 0.0;
    /// Final max-norm of F1 - F2 in the Newton metric.
    double newtonResidual = 0.0;
    int newtonIterations = 0;
};

/// The linear blocks of the pasting system for fixed parameters.
///
/// F1 expresses the common-region coefficients A through the conditions at
/// a1 and a2, F2 through those at b1 and b2. Both can be returned re-based
/// at an anchor point, i.e. as A_k exp(beta_k * anchor), which keeps the
/// entries of comparable size when the thresholds are far from zero.
class PastingSystem {
public:
    explicit PastingSystem(const GameParams& params);
    PastingSystem(const GameParams& params, const SpectralData& spectral);

    const GameParams& params() const noexcept { return params_; }
    const SpectralData& spectral() const noexcept { return spectral_; }

    /// C from the value and slope conditions at a1.
    std::array<double, 2> c_from_a1(double a1) const;
    /// Ctilde from the value and slope conditions at b2.
    std::array<double, 2> ctilde_from_b2(double b2) const;

    linalg::Vec<4> f1(double a1, double a2, double anchor = 0.0) const;
    linalg::Vec<4> f2(double b1, double b2, double anchor = 0.0) const;

    /// F1 - F2 with each growing mode (beta_k > 0) re-based at a2 and each
    /// decaying mode at b1, so neither side involves a positive exponent.
    /// NaN when th is not strictly ordered.
    linalg::Vec<4> mismatch(const Thresholds& th) const;

private:
    GameParams params_;
    SpectralData spectral_;
    linalg::Lu<4> coupled_;     // rows (1; beta; rho; beta rho)
    linalg::Lu<2> gamma_;       // rows (1; gamma)
    linalg::Lu<2> gamma_tilde_; // rows (1; gammaTilde)
};

/// Common-region coefficients A from the a-side conditions.
linalg::Vec<4> eval_F1(double a1, double a2, const SpectralData& spectral, const GameParams& params);
/// Common-region coefficients A from the b-side conditions.
linalg::Vec<4> eval_F2(double b1, double b2, const SpectralData& spectral, const GameParams& params);

/// The twelve pasting equations, each as (right side - left side), in the
/// order: v1 value/slope at a1, a2, b1; v2 value/slope at a2, b1, b2.
std::array<double, 12> pasting_residuals(const GameParams& params, const SpectralData& spectral,
                                         const Thresholds& th, const CoefficientSet& coeffs);

/// Solves F1(a1, a2) = F2(b1, b2) by damped Newton and recovers every
/// coefficient. Throws Error(no_convergence), Error(ordering_violated) or
/// Error(singular_matrix).
SmoothFitSolution solve_thresholds(const GameParams& params, std::optional<Thresholds> init = std::nullopt,
                                   const NewtonOptions& options = {});

/// Game without regime switching: thresholds a < b and the coefficients of
/// A1 exp(beta x) + A2 exp(-beta x) on (a, b), beta = sqrt(2 r / sigma^2).
struct ReductionSolution {
    ReducedThresholds thresholds;
    std::array<double, 2> A{};
    std::array<double, 2> beta{};
    double residual = 0.0;
    int newtonIterations = 0;
};

/// Residuals of the four pasting equations of the reduced game.
std::array<double, 4> reduction_residuals(double r, double sigma, double K, double Ktilde,
                                          const ReductionSolution& sol);

ReductionSolution solve_reduction(double r, double sigma, double K, double Ktilde,
                                  const NewtonOptions& options = {});

/// Starting point for solve_thresholds built from the two single-regime games.
Thresholds initial_guess(const GameParams& params);

/// Moves x into the ordered cone, keeping consecutive entries at least 1e-8 apart.
template <std::size_t N>
std::array<double, N> project_ordered(std::array<double, N> x) {
    constexpr double gap = 1e-8;
    for (std::size_t j = 1; j < N; ++j)
        if (!(x[j] >= x[j - 1] + gap)) x[j] = x[j - 1] + gap;
    return x;
}

} // namespace rsgame
