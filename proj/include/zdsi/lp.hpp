#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/rational.hpp"

namespace zdsi {

/// Exact test for whether some convex combination of `points` lies coordinate-wise
/// at or below `target`. On success returns the weights of a basic solution, so at
/// most dim+1 of them are nonzero.
///
/// Phase I of the primal simplex over
///   Σ_i λ_i p_i[j] + s_j = t_j  (j < dim),   Σ_i λ_i = 1,   λ, s ≥ 0,
/// with Bland's rule for termination.
inline std::optional<std::vector<Rational>> find_convex_cover(const std::vector<std::vector<Rational>>& points,
                                                              const std::vector<Rational>& target)
{
    if (points.empty()) return std::nullopt;
    const std::size_t n = points.size();
    const std::size_t dim = target.size();
    for (const auto& p : points)
        if (p.size() != dim) fail(Errc::ValidationError, "point dimension does not match target");

    const std::size_t rows = dim + 1;
    // Columns: λ (n), slacks (dim), artificials (rows), then the right-hand side.
    const std::size_t slack0 = n, art0 = n + dim, rhs = n + dim + rows;
    std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(rhs + 1));
    std::vector<std::size_t> basis(rows);
    for (std::size_t j = 0; j < dim; ++j) {
        bool flip = target[j] < Rational(0);
        Rational sg = flip ? Rational(-1) : Rational(1);
        for (std::size_t i = 0; i < n; ++i) tab[j][i] = sg * points[i][j];
        tab[j][slack0 + j] = sg;
        tab[j][rhs] = sg * target[j];
        if (flip) {
            tab[j][art0 + j] = Rational(1);
            basis[j] = art0 + j;
        } else {
            basis[j] = slack0 + j;
        }
    }
    for (std::size_t i = 0; i < n; ++i) tab[dim][i] = Rational(1);
    tab[dim][art0 + dim] = Rational(1);
    tab[dim][rhs] = Rational(1);
    basis[dim] = art0 + dim;

    // Reduced costs of the phase-I objective (sum of artificials).
    std::vector<Rational> cost(rhs + 1);
    for (std::size_t r = 0; r < rows; ++r) {
        if (basis[r] < art0) continue;
        for (std::size_t c = 0; c <= rhs; ++c)
            if (c < art0 || c == rhs) cost[c] -= tab[r][c];
    }

    while (true) {
        std::size_t enter = rhs;
        for (std::size_t c = 0; c < art0; ++c)
            if (cost[c].sign() < 0) {
                enter = c;
                break;
            }
        if (enter == rhs) break;

        std::size_t leave = rows;
        Rational best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (tab[r][enter].sign() <= 0) continue;
            Rational ratio = tab[r][rhs] / tab[r][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave == rows) fail(Errc::DomainError, "phase-I program unbounded");

        Rational piv = tab[leave][enter];
        for (auto& v : tab[leave]) v /= piv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == leave || tab[r][enter].is_zero()) continue;
            Rational k = tab[r][enter];
            for (std::size_t c = 0; c <= rhs; ++c)
                if (!tab[leave][c].is_zero()) tab[r][c] -= k * tab[leave][c];
        }
        if (!cost[enter].is_zero()) {
            Rational k = cost[enter];
            for (std::size_t c = 0; c <= rhs; ++c)
                if (!tab[leave][c].is_zero()) cost[c] -= k * tab[leave][c];
        }
        basis[leave] = enter;
    }

    // cost[rhs] holds minus the remaining artificial mass.
    if (!cost[rhs].is_zero()) return std::nullopt;
    std::vector<Rational> lambda(n);
    for (std::size_t r = 0; r < rows; ++r)
        if (basis[r] < n) lambda[basis[r]] = tab[r][rhs];
    return lambda;
}

} // namespace zdsi
