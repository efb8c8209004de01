#pragma once

#include "rsgame/model.hpp"
#include "rsgame/valuefn.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rsgame {

inline constexpr double kPastingTol = 1e-8;
inline constexpr double kBoundsTol = 1e-7;
inline constexpr double kViTol = 1e-6;
/// Distance kept between grid points and free boundaries in the VI check.
inline constexpr double kBoundaryOffset = 1e-6;

/// Uniform grid on [lo, hi] with `count` points.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// count points on [a1 - w (b2 - a1), b2 + w (b2 - a1)].
GridSpec span_grid(const Thresholds& th, double widen, std::size_t count);

/// 20001 points, two threshold spans beyond each side.
GridSpec default_grid(const Thresholds& th);
/// 20001 points, five spans beyond each side, for the sandwich check.
GridSpec bounds_grid(const Thresholds& th);

/// Doubles the density while keeping every existing point: 2 count - 1 points.
GridSpec refine(const GridSpec& grid);

std::vector<double> grid_points(const GridSpec& grid);

/// Grid points pushed at least `offset` away from every threshold.
std::vector<double> interior_points(const GridSpec& grid, const Thresholds& th, double offset = kBoundaryOffset);

/// Location and size of the worst violation of one condition.
struct WorstPoint {
    double x = 0.0;
    Regime regime = Regime::one;
    double violation = 0.0;
};

struct ConditionResult {
    std::string name;
    WorstPoint worst;
    double tolerance = 0.0;
    bool pass = true;
};

/// Value and slope gaps at one pasting point.
struct PastingMismatch {
    std::string label;
    double x = 0.0;
    Regime regime = Regime::one;
    double value_gap = 0.0;
    double slope_gap = 0.0;
};

struct SmoothnessReport {
    std::array<PastingMismatch, 6> points;
    double worst = 0.0;
    double tolerance = kPastingTol;
    bool pass = true;
};

/// C^1 mismatches at v1(a1), v1(a2), v1(b1), v2(a2), v2(b1), v2(b2).
SmoothnessReport check_smoothness(const ValueFunction& vf);

/// Worst breach of x - Ktilde(i) <= v(x, i) <= x - K(i) over the grid and both regimes.
ConditionResult check_bounds(const ValueFunction& vf, std::span<const double> grid);

struct ViReport {
    /// min{Lv, v - (x - Ktilde(i))} = 0 on (a_i, inf)
    ConditionResult c;
    /// max{Lv, v - (x - K(i))} = 0 on (-inf, b_i)
    ConditionResult d;
};

/// Grid points must avoid free boundaries, see interior_points.
ViReport check_vi(const ValueFunction& vf, std::span<const double> grid);

struct VerificationReport {
    GridSpec grid;
    GridSpec boundsGrid;
    SmoothnessReport smoothness;
    ConditionResult bounds;
    ViReport vi;
    bool pass = false;
};

/// Runs all checks on the given grids.
VerificationReport verify(const ValueFunction& vf, const GridSpec& vi_grid, const GridSpec& sandwich_grid);
/// Runs all checks on default_grid / bounds_grid.
VerificationReport verify(const ValueFunction& vf);

} // namespace rsgame
