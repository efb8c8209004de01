#include "rsgame/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsgame {

GridSpec span_grid(const Thresholds& th, double widen, std::size_t count) {
    const double w = th.b2 - th.a1;
    return {th.a1 - widen * w, th.b2 + widen * w, count};
}

GridSpec default_grid(const Thresholds& th) { return span_grid(th, 2.0, 20001); }
GridSpec bounds_grid(const Thresholds& th) { return span_grid(th, 5.0, 20001); }

GridSpec refine(const GridSpec& grid) {
    return {grid.lo, grid.hi, grid.count < 2 ? grid.count : 2 * grid.count - 1};
}

std::vector<double> grid_points(const GridSpec& grid) { return linspace(grid.lo, grid.hi, grid.count); }

std::vector<double> interior_points(const GridSpec& grid, const Thresholds& th, double offset) {
    auto xs = grid_points(grid);
    for (double& x : xs) {
        for (double t : th.as_array()) {
            if (std::abs(x - t) < offset) x = x < t ? t - offset : t + offset;
        }
    }
    return xs;
}

namespace {

void consider(ConditionResult& res, double x, Regime i, double violation) {
    if (violation > res.worst.violation || std::isnan(violation)) {
        res.worst = {x, i, std::isnan(violation) ? std::numeric_limits<double>::infinity() : violation};
    }
}

void finish(ConditionResult& res) { res.pass = res.worst.violation <= res.tolerance; }

} // namespace

SmoothnessReport check_smoothness(const ValueFunction& vf) {
    SmoothnessReport rep;
    std::size_t n = 0;
    for (Regime i : kRegimes) {
        const auto pieces = vf.pieces(i);
        const char* names[2][3] = {{"v1@a1", "v1@a2", "v1@b1"}, {"v2@a2", "v2@b1", "v2@b2"}};
        // The three interior joins of each regime, between consecutive pieces.
        for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
            const double x = pieces[k].hi;
            PastingMismatch m;
            m.label = names[slot(i)][k];
            m.x = x;
            m.regime = i;
            m.value_gap = std::abs(pieces[k].value(x) - pieces[k + 1].value(x));
            m.slope_gap = std::abs(pieces[k].derivative(x, 1) - pieces[k + 1].derivative(x, 1));
            rep.worst = std::max({rep.worst, m.value_gap, m.slope_gap});
            if (std::isnan(m.value_gap) || std::isnan(m.slope_gap)) rep.worst = std::numeric_limits<double>::infinity();
            rep.points[n++] = m;
        }
    }
    rep.pass = rep.worst <= rep.tolerance;
    return rep;
}

ConditionResult check_bounds(const ValueFunction& vf, std::span<const double> grid) {
    ConditionResult res{"bounds", {}, kBoundsTol, true};
    const auto& p = vf.params();
    for (Regime i : kRegimes) {
        for (double x : grid) {
            const double v = vf.eval(x, i);
            const double below = (x - p.Ktilde_of(i)) - v; // lower envelope breach
            const double above = v - (x - p.K_of(i));      // upper envelope breach
            consider(res, x, i, std::max(below, above));
        }
    }
    finish(res);
    return res;
}

ViReport check_vi(const ValueFunction& vf, std::span<const double> grid) {
    ViReport rep{{"vi_player1", {}, kViTol, true}, {"vi_player2", {}, kViTol, true}};
    const auto& p = vf.params();
    const auto& th = vf.thresholds();
    for (Regime i : kRegimes) {
        for (double x : grid) {
            const double v = vf.eval(x, i);
            const double lv = vf.generator(x, i);
            if (x > th.a(i)) consider(rep.c, x, i, std::abs(std::min(lv, v - (x - p.Ktilde_of(i)))));
            if (x < th.b(i)) consider(rep.d, x, i, std::abs(std::max(lv, v - (x - p.K_of(i)))));
        }
    }
    finish(rep.c);
    finish(rep.d);
    return rep;
}

VerificationReport verify(const ValueFunction& vf, const GridSpec& vi_grid, const GridSpec& sandwich_grid) {
    VerificationReport rep;
    rep.grid = vi_grid;
    rep.boundsGrid = sandwich_grid;
    rep.smoothness = check_smoothness(vf);
    const auto sandwich = grid_points(sandwich_grid);
    rep.bounds = check_bounds(vf, sandwich);
    const auto interior = interior_points(vi_grid, vf.thresholds());
    rep.vi = check_vi(vf, interior);
    rep.pass = rep.smoothness.pass && rep.bounds.pass && rep.vi.c.pass && rep.vi.d.pass;
    return rep;
}

VerificationReport verify(const ValueFunction& vf) {
    return verify(vf, default_grid(vf.thresholds()), bounds_grid(vf.thresholds()));
}

} // namespace rsgame
