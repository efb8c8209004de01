#include "rsgame/valuefn.hpp"

#include "rsgame/error.hpp"

#include <cmath>
#include <limits>

namespace rsgame {

double Piece::value(double x) const noexcept { return derivative(x, 0); }

double Piece::derivative(double x, int order) const noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double scale = order == 0 ? 1.0 : order == 1 ? rate[k] : rate[k] * rate[k];
        acc += coef[k] * scale * std::exp(rate[k] * (x - anchor));
    }
    if (order == 0) return acc + slope * x + intercept;
    if (order == 1) return acc + slope;
    return acc;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Piece linear(double lo, double hi, double offset) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.slope = 1.0;
    p.intercept = -offset;
    return p;
}

template <std::size_t N>
Piece exponential(double lo, double hi, const std::array<double, N>& coef, const std::array<double, N>& rate,
                  double slope, double intercept) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.anchor = lo;
    p.terms = N;
    for (std::size_t k = 0; k < N; ++k) {
        p.rate[k] = rate[k];
        p.coef[k] = coef[k] * std::exp(rate[k] * lo);
    }
    p.slope = slope;
    p.intercept = intercept;
    return p;
}

} // namespace

ValueFunction::ValueFunction(SmoothFitSolution solution) : solution_(std::move(solution)) {
    const auto& th = solution_.thresholds;
    const auto& s = solution_.spectral;
    const auto& c = solution_.coeffs;
    const auto& p = solution_.params;
    const auto B = c.B(s);

    pieces_[0] = {
        linear(-kInf, th.a1, p.K[0]),
        exponential(th.a1, th.a2, c.C, s.gamma, s.p, s.q),
        exponential(th.a2, th.b1, c.A, s.beta, 0.0, 0.0),
        linear(th.b1, kInf, p.Ktilde[0]),
    };
    pieces_[1] = {
        linear(-kInf, th.a2, p.K[1]),
        exponential(th.a2, th.b1, B, s.beta, 0.0, 0.0),
        exponential(th.b1, th.b2, c.Ctilde, s.gammaTilde, s.pTilde, s.qTilde),
        linear(th.b2, kInf, p.Ktilde[1]),
    };
}

const Piece& ValueFunction::piece_at(double x, Regime i) const {
    const auto& list = pieces_[slot(i)];
    for (const auto& piece : list)
        if (x <= piece.hi) return piece;
    return list.back();
}

int ValueFunction::piece_id(double x) const noexcept {
    int id = 0;
    for (double t : thresholds().as_array())
        if (x > t) ++id;
    return id;
}

double ValueFunction::eval(double x, Regime i) const { return piece_at(x, i).value(x); }

double ValueFunction::eval_deriv(double x, Regime i, int order) const {
    if (order != 1 && order != 2) throw Error(ErrorKind::validation, "derivative order must be 1 or 2");
    if (order == 2) {
        for (double t : thresholds().as_array())
            if (x == t) throw Error(ErrorKind::validation, "second derivative undefined at free boundary");
    }
    return piece_at(x, i).derivative(x, order);
}

double ValueFunction::generator(double x, Regime i) const {
    const auto& p = params();
    const double v = eval(x, i);
    const double v2 = piece_at(x, i).derivative(x, 2);
    const double sig = p.sigma_of(i);
    return p.r * v - 0.5 * sig * sig * v2 - p.lambda_of(i) * (eval(x, other(i)) - v);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> xs;
    if (count == 0) return xs;
    if (count == 1) return {lo};
    xs.reserve(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k + 1 < count; ++k) xs.push_back(lo + step * static_cast<double>(k));
    xs.push_back(hi);
    return xs;
}

std::vector<TabulationRow> tabulate(const ValueFunction& vf, double lo, double hi, std::size_t count) {
    std::vector<TabulationRow> rows;
    rows.reserve(count);
    for (double x : linspace(lo, hi, count)) {
        rows.push_back({x, vf.eval(x, Regime::one), vf.eval(x, Regime::two), vf.eval_deriv(x, Regime::one, 1),
                        vf.eval_deriv(x, Regime::two, 1), vf.piece_id(x)});
    }
    return rows;
}

} // namespace rsgame
