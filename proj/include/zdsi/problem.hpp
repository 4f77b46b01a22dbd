#pragma once

#include <optional>
#include <string>

#include "zdsi/prob.hpp"

namespace zdsi {

/// Everything a command needs about one source. `pmf` is always P(x, y); when the
/// encoder also sees S, `sxy` holds P(s, x, y) and `pmf` is its (x, y) marginal.
struct ProblemSpec {
    std::string name;
    JointPMF pmf;
    std::optional<TriplePMF> sxy;
    DistortionMatrix distortion;                  // d(x, x̂)
    std::optional<DistortionMatrix> distortion_y; // d(y, ŷ), multiterminal only

    /// Second distortion for the multiterminal commands, Hamming on Y when absent.
    DistortionMatrix y_distortion() const { return distortion_y ? *distortion_y : DistortionMatrix::hamming(pmf.si()); }

    /// P(s, x, y) with a single constant S when the file has no encoder SI.
    TriplePMF encoder_si() const
    {
        if (sxy) return *sxy;
        return TriplePMF(Alphabet("S", {"s"}), pmf.source(), pmf.si(), {pmf.matrix()});
    }
};

/// (x, y) marginal of P(s, x, y).
inline JointPMF marginal_xy(const TriplePMF& sxy)
{
    RationalMatrix m(sxy.second().size(), std::vector<Rational>(sxy.third().size()));
    for (std::size_t s = 0; s < sxy.first().size(); ++s)
        for (std::size_t x = 0; x < m.size(); ++x)
            for (std::size_t y = 0; y < m[x].size(); ++y) m[x][y] += sxy.at(s, x, y);
    return JointPMF(sxy.second(), sxy.third(), std::move(m));
}

} // namespace zdsi
