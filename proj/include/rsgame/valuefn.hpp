#pragma once

#include "rsgame/model.hpp"
#include "rsgame/smoothfit.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rsgame {

/// One closed-form piece: sum_k coef_k exp(rate_k (x - anchor)) + slope x + intercept
/// on the interval (lo, hi].
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    double anchor = 0.0;
    std::array<double, 4> coef{};
    std::array<double, 4> rate{};
    std::size_t terms = 0;
    double slope = 0.0;
    double intercept = 0.0;

    double value(double x) const noexcept;
    /// Derivative of order 0, 1 or 2.
    double derivative(double x, int order) const noexcept;
};

/// The piecewise value function v(x, i) assembled from a smooth-fit solution.
///
/// Pieces are left-open, right-closed: a point sitting exactly on a free
/// boundary is evaluated with the piece to its left. Exponential
/// coefficients are re-based at each piece's left end once, at construction.
class ValueFunction {
public:
    explicit ValueFunction(SmoothFitSolution solution);

    double eval(double x, Regime i) const;

    /// First or second derivative. Throws Error(validation) for order 2 on a
    /// free boundary, where v is only C^1, and for orders other than 1 and 2.
    double eval_deriv(double x, Regime i, int order) const;

    /// Piece of regime i that owns x.
    const Piece& piece_at(double x, Regime i) const;

    /// Row of the piecewise table that owns x: 0 on (-inf, a1], 1 on (a1, a2],
    /// 2 on (a2, b1], 3 on (b1, b2], 4 on (b2, inf).
    int piece_id(double x) const noexcept;

    std::span<const Piece> pieces(Regime i) const noexcept { return pieces_[slot(i)]; }

    /// r v - sigma(i)^2 v'' / 2 - lambda(i) [v(x, j) - v(x, i)]. On a free boundary
    /// v'' is taken from the left piece.
    double generator(double x, Regime i) const;

    const SmoothFitSolution& solution() const noexcept { return solution_; }
    const Thresholds& thresholds() const noexcept { return solution_.thresholds; }
    const GameParams& params() const noexcept { return solution_.params; }

private:
    SmoothFitSolution solution_;
    std::array<std::vector<Piece>, 2> pieces_;
};

/// One row of a value-function tabulation.
struct TabulationRow {
    double x = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double dv1 = 0.0;
    double dv2 = 0.0;
    int piece = 0;
};

/// `count` equally spaced points on [lo, hi], both ends included once.
std::vector<double> linspace(double lo, double hi, std::size_t count);

std::vector<TabulationRow> tabulate(const ValueFunction& vf, double lo, double hi, std::size_t count);

} // namespace rsgame
