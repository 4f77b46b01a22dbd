#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "zdsi/prob.hpp"

namespace zdsi::gen {

/// Random rational pmf with small integer counts over a common total. Each cell
/// is zero with probability `sparsity`; every row keeps at least one positive cell.
inline JointPMF random_pmf(std::mt19937_64& gen, std::size_t rows, std::size_t cols, double sparsity = 0.4)
{
    std::uniform_int_distribution<int> count(1, 6);
    std::bernoulli_distribution zero(sparsity);
    std::uniform_int_distribution<std::size_t> pick(0, cols - 1);
    std::vector<std::vector<std::int64_t>> c(rows, std::vector<std::int64_t>(cols, 0));
    std::int64_t total = 0;
    for (auto& row : c) {
        for (auto& v : row) v = zero(gen) ? 0 : count(gen);
        bool any = false;
        for (auto v : row) any = any || v > 0;
        if (!any) row[pick(gen)] = count(gen);
        for (auto v : row) total += v;
    }
    RationalMatrix m(rows, std::vector<Rational>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = Rational(c[i][j], total);
    return JointPMF(Alphabet::numbered("X", rows), Alphabet::numbered("Y", cols), std::move(m));
}

/// Random triple pmf indexed [a][b][c] with small integer counts.
inline TriplePMF random_triple(std::mt19937_64& gen, std::size_t na, std::size_t nb, std::size_t nc, double sparsity = 0.5)
{
    std::uniform_int_distribution<int> count(1, 5);
    std::bernoulli_distribution zero(sparsity);
    std::vector<std::vector<std::vector<std::int64_t>>> c(na, std::vector<std::vector<std::int64_t>>(nb, std::vector<std::int64_t>(nc, 0)));
    std::int64_t total = 0;
    for (auto& m : c)
        for (auto& row : m)
            for (auto& v : row) {
                v = zero(gen) ? 0 : count(gen);
                total += v;
            }
    if (total == 0) {
        c[0][0][0] = 1;
        total = 1;
    }
    std::vector<RationalMatrix> t(na, RationalMatrix(nb, std::vector<Rational>(nc)));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < nc; ++k) t[i][j][k] = Rational(c[i][j][k], total);
    return TriplePMF(Alphabet::numbered("A", na), Alphabet::numbered("B", nb), Alphabet::numbered("C", nc), std::move(t));
}

} // namespace zdsi::gen
