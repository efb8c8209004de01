#pragma once

#include "rsgame/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace rsgame::linalg {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Row-major square matrix.
template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

/// Matrices whose 1-norm condition estimate exceeds this are rejected.
inline constexpr double kMaxCondition = 1e12;

template <std::size_t N>
double norm_inf(const Vec<N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
double norm1(const Mat<N>& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < N; ++i) col += std::abs(m[i][j]);
        best = std::max(best, col);
    }
    return best;
}

template <std::size_t N>
Vec<N> mul(const Mat<N>& m, const Vec<N>& v) {
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i] += m[i][j] * v[j];
    return out;
}

/// LU factorization with partial pivoting, P A = L U packed in one matrix.
template <std::size_t N>
class Lu {
public:
    /// Factorizes `a`; `name` identifies the matrix in diagnostics.
    Lu(const Mat<N>& a, std::string_view name) : lu_(a), name_(name) {
        for (std::size_t i = 0; i < N; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < N; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < N; ++i)
                if (std::abs(lu_[i][k]) > std::abs(lu_[piv][k])) piv = i;
            if (!(std::abs(lu_[piv][k]) > 0.0) || !std::isfinite(lu_[piv][k]))
                throw Error(ErrorKind::singular_matrix, name_ + " matrix is singular");
            if (piv != k) {
                std::swap(lu_[piv], lu_[k]);
                std::swap(perm_[piv], perm_[k]);
            }
            for (std::size_t i = k + 1; i < N; ++i) {
                lu_[i][k] /= lu_[k][k];
                for (std::size_t j = k + 1; j < N; ++j) lu_[i][j] -= lu_[i][k] * lu_[k][j];
            }
        }
        const double cond = norm1(a) * norm1(inverse());
        if (!(cond <= kMaxCondition))
            throw Error(ErrorKind::singular_matrix,
                        name_ + " matrix is numerically singular (condition estimate " + std::to_string(cond) + ")");
        condition_ = cond;
    }

    Vec<N> solve(const Vec<N>& b) const {
        Vec<N> x{};
        for (std::size_t i = 0; i < N; ++i) {
            double s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_[i][j] * x[j];
            x[i] = s;
        }
        for (std::size_t ii = N; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t j = ii + 1; j < N; ++j) s -= lu_[ii][j] * x[j];
            x[ii] = s / lu_[ii][ii];
        }
        return x;
    }

    Mat<N> inverse() const {
        Mat<N> inv{};
        for (std::size_t j = 0; j < N; ++j) {
            Vec<N> e{};
            e[j] = 1.0;
            const Vec<N> col = solve(e);
            for (std::size_t i = 0; i < N; ++i) inv[i][j] = col[i];
        }
        return inv;
    }

    double condition() const noexcept { return condition_; }

private:
    Mat<N> lu_;
    std::array<std::size_t, N> perm_{};
    std::string name_;
    double condition_ = 0.0;
};

/// Solves a x = b, throwing Error(singular_matrix) naming `name` when `a` is
/// singular or ill-conditioned.
template <std::size_t N>
Vec<N> solve(const Mat<N>& a, const Vec<N>& b, std::string_view name) {
    return Lu<N>(a, name).solve(b);
}

template <std::size_t N>
Mat<N> inverse(const Mat<N>& a, std::string_view name) {
    return Lu<N>(a, name).inverse();
}

} // namespace rsgame::linalg
