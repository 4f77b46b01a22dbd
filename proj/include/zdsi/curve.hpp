#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/rational.hpp"

namespace zdsi {

template <class T>
struct CurveVertex {
    T distortion;
    T rate;
    std::size_t source; // index of the generating point in the input cloud
};

/// Piecewise-linear lower convex envelope. Vertices have strictly increasing
/// distortion and strictly decreasing rate; between vertices the curve is the
/// chord, and right of the last vertex it stays at the last rate.
template <class T>
struct RDCurve {
    std::vector<CurveVertex<T>> vertices;

    const T& min_distortion() const { return vertices.front().distortion; }
};

/// Lower-left convex hull of (distortion, rate) points after Pareto filtering.
template <class T>
RDCurve<T> lower_convex_envelope(const std::vector<std::pair<T, T>>& points)
{
    if (points.empty()) fail(Errc::EmptyInput, "envelope of an empty point set");
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
        if (points[a].first != points[b].first) return points[a].first < points[b].first;
        return points[a].second < points[b].second;
    });

    std::vector<std::size_t> pareto;
    for (auto i : idx) {
        if (pareto.empty() || points[i].second < points[pareto.back()].second) pareto.push_back(i);
    }

    std::vector<std::size_t> hull;
    for (auto i : pareto) {
        while (hull.size() >= 2) {
            const auto& a = points[hull[hull.size() - 2]];
            const auto& b = points[hull.back()];
            const auto& c = points[i];
            // Drop b unless the turn a -> b -> c is strictly convex (counter-clockwise).
            T cross = (b.first - a.first) * (c.second - b.second) - (b.second - a.second) * (c.first - b.first);
            if (cross > T(0)) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }

    RDCurve<T> curve;
    for (auto i : hull) curve.vertices.push_back({points[i].first, points[i].second, i});
    return curve;
}

/// Position of `d` on the curve: the bracketing vertex pair (lo, hi) and the weight
/// `lambda` on lo, so that d = lambda*D_lo + (1-lambda)*D_hi. At or beyond a vertex lo == hi.
template <class T>
struct CurveBracket {
    std::size_t lo;
    std::size_t hi;
    T lambda;
};

template <class T>
CurveBracket<T> bracket(const RDCurve<T>& curve, const T& d)
{
    if (curve.vertices.empty()) fail(Errc::EmptyInput, "empty curve");
    const auto& v = curve.vertices;
    if (d < v.front().distortion) fail(Errc::BelowMinimumDistortion, "distortion below the curve's minimum");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (d == v[i].distortion) return {i, i, T(1)};
        if (i + 1 < v.size() && d < v[i + 1].distortion) {
            T lambda = (v[i + 1].distortion - d) / (v[i + 1].distortion - v[i].distortion);
            return {i, i + 1, lambda};
        }
    }
    return {v.size() - 1, v.size() - 1, T(1)};
}

/// Exact interpolated rate at distortion d.
template <class T>
T query(const RDCurve<T>& curve, const T& d)
{
    auto b = bracket(curve, d);
    const auto& v = curve.vertices;
    if (b.lo == b.hi) return v[b.lo].rate;
    return b.lambda * v[b.lo].rate + (T(1) - b.lambda) * v[b.hi].rate;
}

} // namespace zdsi
