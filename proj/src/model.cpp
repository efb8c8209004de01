#include "rsgame/model.hpp"

#include "rsgame/error.hpp"

#include <cmath>
#include <sstream>

namespace rsgame {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return 1;
    case ErrorKind::no_convergence:
    case ErrorKind::ordering_violated:
    case ErrorKind::singular_matrix: return 2;
    case ErrorKind::verification: return 3;
    case ErrorKind::io: return 4;
    }
    return 1;
}

Regime regime_from_int(int value) {
    if (value == 1) return Regime::one;
    if (value == 2) return Regime::two;
    throw Error(ErrorKind::validation, "regime must be 1 or 2, got " + std::to_string(value));
}

GameParams benchmark_params() {
    GameParams p;
    p.r = 3.0;
    p.sigma = {2.0, 4.0};
    p.K = {2.0, 3.0};
    p.Ktilde = {5.0, 6.0};
    p.lambda = {2.0, 5.0};
    return p;
}

std::vector<std::string> violations(const GameParams& p) {
    std::vector<std::string> out;
    auto finite = [&](double v, const std::string& name) {
        if (!std::isfinite(v)) out.push_back(name + " must be finite");
        return std::isfinite(v);
    };

    if (finite(p.r, "r") && !(p.r > 0.0)) out.emplace_back("discount rate must be positive");
    for (Regime i : kRegimes) {
        const std::string n = std::to_string(number(i));
        if (finite(p.sigma_of(i), "sigma" + n) && !(p.sigma_of(i) > 0.0))
            out.push_back("volatility sigma(" + n + ") must be positive");
        if (finite(p.lambda_of(i), "lambda" + n) && !(p.lambda_of(i) > 0.0))
            out.push_back("intensity lambda(" + n + ") must be positive");
        const bool kf = finite(p.K_of(i), "K" + n);
        const bool ktf = finite(p.Ktilde_of(i), "Ktilde" + n);
        if (kf && ktf && !(p.K_of(i) < p.Ktilde_of(i)))
            out.push_back("K(" + n + ") < K̃(" + n + ") violated");
    }
    return out;
}

const GameParams& validate(const GameParams& params) {
    const auto bad = violations(params);
    if (bad.empty()) return params;
    std::ostringstream msg;
    msg << "invalid parameters: ";
    for (std::size_t k = 0; k < bad.size(); ++k) msg << (k ? "; " : "") << bad[k];
    throw Error(ErrorKind::validation, msg.str());
}

Regions regions(const Thresholds& th, Regime i) {
    const double inf = std::numeric_limits<double>::infinity();
    Regions out;
    out.player1.stop = {-inf, th.a(i), false, true};
    out.player1.cont = {th.a(i), inf, false, false};
    out.player2.stop = {th.b(i), inf, true, false};
    out.player2.cont = {-inf, th.b(i), false, false};
    return out;
}

} // namespace rsgame
