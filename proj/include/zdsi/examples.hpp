#pragma once

#include <string>
#include <vector>

#include "zdsi/problem.hpp"

namespace zdsi {

inline ProblemSpec hamming_problem(std::string name, JointPMF pmf)
{
    auto d = DistortionMatrix::hamming(pmf.source());
    return ProblemSpec{std::move(name), std::move(pmf), std::nullopt, std::move(d), std::nullopt};
}

/// Five symbols, uniform P(x), P(y|x) = 1 - p on the diagonal. Off-diagonal mass per
/// row, in units of p: x1 -> y5; x2 -> y4; x3 -> y1 (3/4), y5 (1/4);
/// x4 -> y2 (1/2), y3 (5/12), y5 (1/12); x5 -> y1.
/// This support is a reconstruction: it reproduces the 2-cell optimum 13p/60 at
/// rate 1, the 3-cell optimum p/60 at rate 8/5 and the refined rate 7/5 at p/60.
inline JointPMF split_channel(const Rational& p)
{
    if (p.sign() <= 0 || p >= Rational(1)) fail(Errc::DomainError, "split_channel needs 0 < p < 1");
    const Rational q(1, 5);
    RationalMatrix m(5, std::vector<Rational>(5));
    for (std::size_t x = 0; x < 5; ++x) m[x][x] = q * (Rational(1) - p);
    auto put = [&](std::size_t x, std::size_t y, Rational w) { m[x - 1][y - 1] += q * p * w; };
    put(1, 5, 1);
    put(2, 4, 1);
    put(3, 1, Rational(3, 4));
    put(3, 5, Rational(1, 4));
    put(4, 2, Rational(1, 2));
    put(4, 3, Rational(5, 12));
    put(4, 5, Rational(1, 12));
    put(5, 1, 1);
    return JointPMF(Alphabet::numbered("X", 5), Alphabet::numbered("Y", 5), std::move(m));
}

/// X = Y, uniform on {0, 1}.
inline JointPMF correlated_binary()
{
    RationalMatrix m{{Rational(1, 2), Rational(0)}, {Rational(0), Rational(1, 2)}};
    return JointPMF(Alphabet("X", {"0", "1"}), Alphabet("Y", {"0", "1"}), std::move(m));
}

struct ExampleInfo {
    std::string name;
    std::string summary;
};

inline std::vector<ExampleInfo> example_catalog()
{
    return {
        {"pentagon", "typewriter source on 5 symbols, characteristic graph C5"},
        {"c6", "typewriter source on 6 symbols, characteristic graph C6"},
        {"fully-connected", "uniform X, Y = X w.p. 1-p else uniform over the rest (--M, --p)"},
        {"mt-binary", "X = Y uniform binary, Hamming on both"},
        {"split-channel", "reconstructed 5-symbol channel with tied 2- and 3-cell optima (--p)"},
    };
}

/// Named fixture; `M` and `p` only matter for the parametric ones.
inline ProblemSpec make_example(const std::string& name, std::size_t M = 4, const Rational& p = Rational(1, 5))
{
    if (name == "pentagon") return hamming_problem(name, typewriter(5));
    if (name == "c6") return hamming_problem(name, typewriter(6));
    if (name == "fully-connected") return hamming_problem(name, fully_connected(M, p));
    if (name == "mt-binary") return hamming_problem(name, correlated_binary());
    if (name == "split-channel") return hamming_problem(name, split_channel(p));
    fail(Errc::ValidationError, "unknown example '" + name + "'");
}

} // namespace zdsi
