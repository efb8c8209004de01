#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace rsgame {

/// State of the two-state Markov chain.
enum class Regime : int { one = 1, two = 2 };

/// Zero-based array slot for a regime.
constexpr std::size_t slot(Regime i) noexcept { return i == Regime::one ? 0 : 1; }
constexpr Regime other(Regime i) noexcept { return i == Regime::one ? Regime::two : Regime::one; }
constexpr int number(Regime i) noexcept { return static_cast<int>(i); }

/// Regime from its number; throws Error(validation) for anything but 1 or 2.
Regime regime_from_int(int value);

inline constexpr std::array<Regime, 2> kRegimes{Regime::one, Regime::two};

/// Model constants. Arrays are indexed by slot(regime).
///
/// Player 1 receives X - K(i) when stopping, Player 2 X - Ktilde(i); the
/// chain leaves regime i at rate lambda(i).
struct GameParams {
    double r = 0.0;
    std::array<double, 2> sigma{};
    std::array<double, 2> K{};
    std::array<double, 2> Ktilde{};
    std::array<double, 2> lambda{};

    double sigma_of(Regime i) const noexcept { return sigma[slot(i)]; }
    double K_of(Regime i) const noexcept { return K[slot(i)]; }
    double Ktilde_of(Regime i) const noexcept { return Ktilde[slot(i)]; }
    double lambda_of(Regime i) const noexcept { return lambda[slot(i)]; }

    bool operator==(const GameParams&) const = default;
};

/// r=3, sigma=(2,4), K=(2,3), Ktilde=(5,6), lambda=(2,5).
GameParams benchmark_params();

/// Names of every invariant the parameters break; empty when valid.
std::vector<std::string> violations(const GameParams& params);

/// Returns the parameters unchanged when valid, otherwise throws
/// Error(validation) listing every violated invariant.
const GameParams& validate(const GameParams& params);

/// Free boundaries a1 < a2 < b1 < b2.
struct Thresholds {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    double a(Regime i) const noexcept { return i == Regime::one ? a1 : a2; }
    double b(Regime i) const noexcept { return i == Regime::one ? b1 : b2; }
    std::array<double, 4> as_array() const noexcept { return {a1, a2, b1, b2}; }
    static Thresholds from_array(const std::array<double, 4>& v) noexcept { return {v[0], v[1], v[2], v[3]}; }

    bool ordered() const noexcept { return a1 < a2 && a2 < b1 && b1 < b2; }
    bool operator==(const Thresholds&) const = default;
};

/// Thresholds of the game without regime switching.
struct ReducedThresholds {
    double a = 0.0;
    double b = 0.0;
};

/// Interval of the real line; infinite ends are always open.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double x) const noexcept {
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
};

struct PlayerRegions {
    Interval stop;
    Interval cont;
};

struct Regions {
    PlayerRegions player1;
    PlayerRegions player2;
};

/// Stopping and continuation half-lines of both players in regime i.
/// The free boundary itself belongs to the stopping region.
Regions regions(const Thresholds& th, Regime i);

} // namespace rsgame
