#include "rsgame/smoothfit.hpp"

#include "rsgame/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace rsgame {

namespace {

linalg::Mat<4> coupled_matrix(const SpectralData& s) {
    linalg::Mat<4> m{};
    for (std::size_t k = 0; k < 4; ++k) {
        m[0][k] = 1.0;
        m[1][k] = s.beta[k];
        m[2][k] = s.rho[k];
        m[3][k] = s.beta[k] * s.rho[k];
    }
    return m;
}

linalg::Mat<2> root_matrix(const std::array<double, 2>& g) { return {{{1.0, 1.0}, {g[0], g[1]}}}; }

double max_abs(const auto& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
linalg::Vec<N> nan_vec() {
    linalg::Vec<N> v;
    v.fill(std::numeric_limits<double>::quiet_NaN());
    return v;
}

// Full-system tolerance checked after Newton.
constexpr double kPastingTolerance = 1e-9;
// Gap below which the converged point is considered to sit on the cone boundary.
constexpr double kOrderingGap = 1e-6;

} // namespace

PastingSystem::PastingSystem(const GameParams& params)
    : PastingSystem(validate(params), compute_spectral(params)) {}

PastingSystem::PastingSystem(const GameParams& params, const SpectralData& spectral)
    : params_(params),
      spectral_(spectral),
      coupled_(coupled_matrix(spectral), "coupled-region 4x4 (1; beta; rho; beta*rho)"),
      gamma_(root_matrix(spectral.gamma), "regime-1 2x2 (1; gamma)"),
      gamma_tilde_(root_matrix(spectral.gammaTilde), "regime-2 2x2 (1; gammaTilde)") {}

std::array<double, 2> PastingSystem::c_from_a1(double a1) const {
    const auto& s = spectral_;
    const auto base = gamma_.solve({(1.0 - s.p) * a1 - s.q - params_.K[0], 1.0 - s.p});
    return {base[0] * std::exp(-s.gamma[0] * a1), base[1] * std::exp(-s.gamma[1] * a1)};
}

std::array<double, 2> PastingSystem::ctilde_from_b2(double b2) const {
    const auto& s = spectral_;
    const auto base = gamma_tilde_.solve({(1.0 - s.pTilde) * b2 - s.qTilde - params_.Ktilde[1], 1.0 - s.pTilde});
    return {base[0] * std::exp(-s.gammaTilde[0] * b2), base[1] * std::exp(-s.gammaTilde[1] * b2)};
}

linalg::Vec<4> PastingSystem::f1(double a1, double a2, double anchor) const {
    if (!(a1 < a2)) throw Error(ErrorKind::validation, "F1 requires a1 < a2");
    const auto& s = spectral_;
    // C_k exp(gamma_k a2), evaluated without forming C.
    const auto base = gamma_.solve({(1.0 - s.p) * a1 - s.q - params_.K[0], 1.0 - s.p});
    const double e0 = base[0] * std::exp(s.gamma[0] * (a2 - a1));
    const double e1 = base[1] * std::exp(s.gamma[1] * (a2 - a1));
    const linalg::Vec<4> rhs{e0 + e1 + s.p * a2 + s.q,
                             s.gamma[0] * e0 + s.gamma[1] * e1 + s.p,
                             a2 - params_.K[1],
                             1.0};
    auto a = coupled_.solve(rhs);
    for (std::size_t k = 0; k < 4; ++k) a[k] *= std::exp(-s.beta[k] * (a2 - anchor));
    return a;
}

linalg::Vec<4> PastingSystem::f2(double b1, double b2, double anchor) const {
    if (!(b1 < b2)) throw Error(ErrorKind::validation, "F2 requires b1 < b2");
    const auto& s = spectral_;
    const auto base =
        gamma_tilde_.solve({(1.0 - s.pTilde) * b2 - s.qTilde - params_.Ktilde[1], 1.0 - s.pTilde});
    const double e0 = base[0] * std::exp(s.gammaTilde[0] * (b1 - b2));
    const double e1 = base[1] * std::exp(s.gammaTilde[1] * (b1 - b2));
    const linalg::Vec<4> rhs{b1 - params_.Ktilde[0],
                             1.0,
                             e0 + e1 + s.pTilde * b1 + s.qTilde,
                             s.gammaTilde[0] * e0 + s.gammaTilde[1] * e1 + s.pTilde};
    auto a = coupled_.solve(rhs);
    for (std::size_t k = 0; k < 4; ++k) a[k] *= std::exp(-s.beta[k] * (b1 - anchor));
    return a;
}

linalg::Vec<4> PastingSystem::mismatch(const Thresholds& th) const {
    if (!th.ordered()) return nan_vec<4>();
    const auto lhs = f1(th.a1, th.a2, th.a2);
    const auto rhs = f2(th.b1, th.b2, th.b1);
    const double span = th.b1 - th.a2;
    linalg::Vec<4> g{};
    for (std::size_t k = 0; k < 4; ++k) {
        const double b = spectral_.beta[k];
        g[k] = b > 0.0 ? lhs[k] - rhs[k] * std::exp(-b * span) : lhs[k] * std::exp(b * span) - rhs[k];
    }
    return g;
}

linalg::Vec<4> eval_F1(double a1, double a2, const SpectralData& spectral, const GameParams& params) {
    return PastingSystem(params, spectral).f1(a1, a2);
}

linalg::Vec<4> eval_F2(double b1, double b2, const SpectralData& spectral, const GameParams& params) {
    return PastingSystem(params, spectral).f2(b1, b2);
}

std::array<double, 12> pasting_residuals(const GameParams& params, const SpectralData& s, const Thresholds& th,
                                         const CoefficientSet& c) {
    const auto B = c.B(s);
    auto exp_sum = [](const auto& coef, const auto& rate, double x, int order) {
        double acc = 0.0;
        for (std::size_t k = 0; k < coef.size(); ++k)
            acc += coef[k] * std::pow(rate[k], order) * std::exp(rate[k] * x);
        return acc;
    };
    auto c_piece = [&](double x, int order) {
        const double affine = order == 0 ? s.p * x + s.q : s.p;
        return exp_sum(c.C, s.gamma, x, order) + affine;
    };
    auto ct_piece = [&](double x, int order) {
        const double affine = order == 0 ? s.pTilde * x + s.qTilde : s.pTilde;
        return exp_sum(c.Ctilde, s.gammaTilde, x, order) + affine;
    };
    const double K1 = params.K[0], K2 = params.K[1];
    const double Kt1 = params.Ktilde[0], Kt2 = params.Ktilde[1];

    return {
        c_piece(th.a1, 0) - (th.a1 - K1),
        c_piece(th.a1, 1) - 1.0,
        exp_sum(c.A, s.beta, th.a2, 0) - c_piece(th.a2, 0),
        exp_sum(c.A, s.beta, th.a2, 1) - c_piece(th.a2, 1),
        (th.b1 - Kt1) - exp_sum(c.A, s.beta, th.b1, 0),
        1.0 - exp_sum(c.A, s.beta, th.b1, 1),
        exp_sum(B, s.beta, th.a2, 0) - (th.a2 - K2),
        exp_sum(B, s.beta, th.a2, 1) - 1.0,
        ct_piece(th.b1, 0) - exp_sum(B, s.beta, th.b1, 0),
        ct_piece(th.b1, 1) - exp_sum(B, s.beta, th.b1, 1),
        (th.b2 - Kt2) - ct_piece(th.b2, 0),
        1.0 - ct_piece(th.b2, 1),
    };
}

namespace {

// Damped Newton on F1(a1, a2) = F2(b1, b2) from `start`; singular
// Jacobians end the attempt instead of throwing.
NewtonResult<4> newton_thresholds(const PastingSystem& sys, const linalg::Vec<4>& start,
                                  const NewtonOptions& options) {
    auto mismatch = [&](const linalg::Vec<4>& th) { return sys.mismatch(Thresholds::from_array(th)); };
    try {
        return damped_newton<4>(
            mismatch, start, [](const linalg::Vec<4>& x) { return project_ordered(x); },
            [](const linalg::Vec<4>& x, const linalg::Vec<4>& d) { return ordered_step_cap(x, d); }, options);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::singular_matrix) throw;
        NewtonResult<4> failed;
        failed.x = start;
        return failed;
    }
}

// Weaker switching makes the regimes closer to two separate single-regime
// games, for which the start is accurate. Halves the intensities until a
// solve from `start` succeeds, then follows that solution back up.
std::optional<NewtonResult<4>> coupling_continuation(const GameParams& params, const linalg::Vec<4>& start,
                                                     const NewtonOptions& options) {
    auto at_scale = [&](double scale, const linalg::Vec<4>& x0) {
        GameParams p = params;
        p.lambda = {params.lambda[0] * scale, params.lambda[1] * scale};
        return newton_thresholds(PastingSystem(p), x0, options);
    };

    double done = 0.5;
    std::optional<NewtonResult<4>> last;
    for (; done >= 1e-6; done *= 0.5) {
        if (auto r = at_scale(done, start); r.converged) {
            last = r;
            break;
        }
    }
    if (!last) return std::nullopt;

    // The next try is done * ratio; failures shrink the ratio.
    double ratio = 2.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double target = std::min(1.0, done * ratio);
        const auto r = at_scale(target, last->x);
        if (r.converged) {
            last = r;
            done = target;
            if (done == 1.0) return last;
            ratio = std::min(4.0, ratio * ratio);
        } else {
            if (ratio < 1.001) return std::nullopt;
            ratio = std::sqrt(ratio);
        }
    }
    return std::nullopt;
}

} // namespace

SmoothFitSolution solve_thresholds(const GameParams& params, std::optional<Thresholds> init,
                                   const NewtonOptions& options) {
    const PastingSystem sys(params);
    const Thresholds start = init.value_or(initial_guess(params));

    auto result = newton_thresholds(sys, start.as_array(), options);
    if (!result.converged) {
        try {
            if (const auto followed = coupling_continuation(params, start.as_array(), options)) result = *followed;
        } catch (const Error&) {
            // Keep the direct attempt's diagnostics.
        }
    }
    if (!result.converged) {
        std::ostringstream msg;
        msg << "no convergence after " << result.iterations << " Newton iterations (best residual "
            << result.residual << " at a1=" << result.x[0] << ", a2=" << result.x[1] << ", b1=" << result.x[2]
            << ", b2=" << result.x[3] << ")";
        throw Error(ErrorKind::no_convergence, msg.str());
    }

    SmoothFitSolution sol;
    sol.params = params;
    sol.spectral = sys.spectral();
    sol.thresholds = Thresholds::from_array(result.x);
    sol.newtonResidual = result.residual;
    sol.newtonIterations = result.iterations;

    const auto& th = sol.thresholds;
    const double min_gap = std::min({th.a2 - th.a1, th.b1 - th.a2, th.b2 - th.b1});
    if (!(min_gap > kOrderingGap)) {
        std::ostringstream msg;
        msg << "ordering violated: converged point (" << th.a1 << ", " << th.a2 << ", " << th.b1 << ", " << th.b2
            << ") does not satisfy a1 < a2 < b1 < b2";
        throw Error(ErrorKind::ordering_violated, msg.str());
    }

    sol.coeffs.C = sys.c_from_a1(th.a1);
    sol.coeffs.Ctilde = sys.ctilde_from_b2(th.b2);
    // Each mode from the side where it is not amplified by a growing exponent.
    const auto from_a = sys.f1(th.a1, th.a2), from_b = sys.f2(th.b1, th.b2);
    for (std::size_t k = 0; k < 4; ++k) sol.coeffs.A[k] = sol.spectral.beta[k] > 0.0 ? from_b[k] : from_a[k];
    sol.residual = max_abs(pasting_residuals(params, sol.spectral, th, sol.coeffs));
    if (!(sol.residual <= kPastingTolerance)) {
        std::ostringstream msg;
        msg << "no convergence: pasting equations hold only to " << sol.residual;
        throw Error(ErrorKind::no_convergence, msg.str());
    }
    return sol;
}

namespace {

struct ReducedSystem {
    double K, Ktilde;
    std::array<double, 2> beta;
    linalg::Lu<2> roots;

    ReducedSystem(double r, double sigma, double k, double kt)
        : K(k), Ktilde(kt), beta(make_beta(r, sigma)), roots(root_matrix(beta), "reduced 2x2 (1; beta)") {}

    static std::array<double, 2> make_beta(double r, double sigma) {
        const double b = std::sqrt(2.0 * r / (sigma * sigma));
        return {b, -b};
    }

    // A_k exp(beta_k anchor) from the value and slope conditions at x.
    linalg::Vec<2> coefficients(double x, double target, double anchor) const {
        auto c = roots.solve({x - target, 1.0});
        for (std::size_t k = 0; k < 2; ++k) c[k] *= std::exp(-beta[k] * (x - anchor));
        return c;
    }

    // Coefficient mismatch between the a-side and b-side conditions, the
    // growing mode compared at a and the decaying one at b.
    linalg::Vec<2> mismatch(double a, double b) const {
        if (!(a < b)) return nan_vec<2>();
        const auto lhs = coefficients(a, K, a);
        const auto rhs = coefficients(b, Ktilde, b);
        const double decay = std::exp(-beta[0] * (b - a));
        return {lhs[0] - rhs[0] * decay, lhs[1] * decay - rhs[1]};
    }
};

} // namespace

std::array<double, 4> reduction_residuals(double, double, double K, double Ktilde, const ReductionSolution& sol) {
    const auto& A = sol.A;
    const auto& be = sol.beta;
    const double a = sol.thresholds.a, b = sol.thresholds.b;
    auto v = [&](double x) { return A[0] * std::exp(be[0] * x) + A[1] * std::exp(be[1] * x); };
    auto dv = [&](double x) { return A[0] * be[0] * std::exp(be[0] * x) + A[1] * be[1] * std::exp(be[1] * x); };
    return {v(a) - (a - K), dv(a) - 1.0, v(b) - (b - Ktilde), dv(b) - 1.0};
}

ReductionSolution solve_reduction(double r, double sigma, double K, double Ktilde, const NewtonOptions& options) {
    {
        std::vector<std::string> bad;
        if (!(std::isfinite(r) && r > 0.0)) bad.emplace_back("discount rate must be positive");
        if (!(std::isfinite(sigma) && sigma > 0.0)) bad.emplace_back("volatility must be positive");
        if (!(std::isfinite(K) && std::isfinite(Ktilde) && K < Ktilde)) bad.emplace_back("K < K̃ violated");
        if (!bad.empty()) {
            std::string msg = "invalid reduction inputs: ";
            for (std::size_t k = 0; k < bad.size(); ++k) msg += (k ? "; " : "") + bad[k];
            throw Error(ErrorKind::validation, msg);
        }
    }
    const ReducedSystem sys(r, sigma, K, Ktilde);
    auto mismatch = [&](const linalg::Vec<2>& x) { return sys.mismatch(x[0], x[1]); };
    // Start from the single-barrier levels K - 1/beta and Ktilde + 1/beta;
    // (K, Ktilde) itself is a critical point of the mismatch.
    const double reach = 1.0 / sys.beta[0];
    const auto result = damped_newton<2>(mismatch, linalg::Vec<2>{K - reach, Ktilde + reach},
                                         [](const linalg::Vec<2>& x) { return project_ordered(x); }, options);
    if (!result.converged) {
        std::ostringstream msg;
        msg << "reduction: no convergence after " << result.iterations << " Newton iterations (best residual "
            << result.residual << ")";
        throw Error(ErrorKind::no_convergence, msg.str());
    }
    ReductionSolution sol;
    sol.thresholds = {result.x[0], result.x[1]};
    sol.beta = sys.beta;
    sol.A = {sys.coefficients(result.x[1], Ktilde, 0.0)[0], sys.coefficients(result.x[0], K, 0.0)[1]};
    sol.newtonIterations = result.iterations;
    sol.residual = max_abs(reduction_residuals(r, sigma, K, Ktilde, sol));
    return sol;
}

Thresholds initial_guess(const GameParams& params) {
    validate(params);
    try {
        const auto one = solve_reduction(params.r, params.sigma[0], params.K[0], params.Ktilde[0]);
        const auto two = solve_reduction(params.r, params.sigma[1], params.K[1], params.Ktilde[1]);
        const double a_lo = std::min(one.thresholds.a, two.thresholds.a);
        const double a_hi = std::max(one.thresholds.a, two.thresholds.a);
        const double b_lo = std::min(one.thresholds.b, two.thresholds.b);
        const double b_hi = std::max(one.thresholds.b, two.thresholds.b);
        const double margin = 0.05 * (b_hi - a_lo);
        std::array<double, 4> g{a_lo - margin, a_hi, b_lo, b_hi + margin};
        // Keep a strictly ordered guess even when the blended levels collide.
        const double gap = 0.01 * (b_hi - a_lo);
        for (std::size_t j = 1; j < 4; ++j) g[j] = std::max(g[j], g[j - 1] + gap);
        return Thresholds::from_array(g);
    } catch (const Error&) {
        const double lo = std::min(params.K[0], params.K[1]);
        const double hi = std::max(params.Ktilde[0], params.Ktilde[1]);
        const double w = hi - lo;
        return {lo + 0.2 * w, lo + 0.4 * w, lo + 0.6 * w, lo + 0.8 * w};
    }
}

} // namespace rsgame
