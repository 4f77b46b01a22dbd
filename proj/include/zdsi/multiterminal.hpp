#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zdsi/curve.hpp"
#include "zdsi/error.hpp"
#include "zdsi/lp.hpp"
#include "zdsi/partition.hpp"
#include "zdsi/prob.hpp"
#include "zdsi/ri_codes.hpp"

namespace zdsi {

/// Which message the decoder reads first. YX: the Y-encoder's V is decoded first
/// and serves as SI for U. Simultaneous: both Huffman coded independently.
enum class DecodeOrder { YX, XY, Simultaneous };

inline std::string to_string(DecodeOrder o)
{
    switch (o) {
    case DecodeOrder::YX: return "YX";
    case DecodeOrder::XY: return "XY";
    case DecodeOrder::Simultaneous: return "SIM";
    }
    return "?";
}

/// Reproductions indexed [u][v]; entries for pairs of zero probability hold npos.
using PairDecoder = std::vector<std::vector<SymbolIndex>>;

struct MTPoint {
    DecodeOrder order;
    Partition px; // defines U
    Partition py; // defines V
    PairDecoder gx;
    PairDecoder gy;
    Rational rx, ry, dx, dy;

    std::array<Rational, 4> coords() const { return {rx, ry, dx, dy}; }
};

struct MTOptions {
    RISolverOptions ri;
    std::size_t max_partition_symbols = 8;
    bool simultaneous = false; // also emit SIM points (kept out of membership queries)
};

/// Base points of both decoding orders over the normalized pmf. `pmf`, `dx`, `dy`
/// are the zero-marginal-stripped inputs the partitions refer to.
struct MTRegion {
    JointPMF pmf;
    DistortionMatrix dx;
    DistortionMatrix dy;
    std::vector<MTPoint> points;
};

namespace detail {

inline RationalMatrix pair_joint(const JointPMF& pmf, const Partition& fx, const Partition& fy)
{
    RationalMatrix m(fx.cell_count(), std::vector<Rational>(fy.cell_count()));
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y)
            if (!pmf.at(x, y).is_zero()) m[fx.cell_of(x)][fy.cell_of(y)] += pmf.at(x, y);
    return m;
}

// Bayes decoder for one source given both cell indices; `source_is_x` selects
// which coordinate of (x, y) the distortion measures.
inline std::pair<PairDecoder, Rational> pair_decoder(const JointPMF& pmf, const Partition& fx, const Partition& fy,
                                                     const DistortionMatrix& d, bool source_is_x)
{
    constexpr SymbolIndex npos = static_cast<SymbolIndex>(-1);
    const std::size_t nu = fx.cell_count(), nv = fy.cell_count();
    std::vector<std::vector<std::vector<Rational>>> cost(nu, std::vector<std::vector<Rational>>(nv, std::vector<Rational>(d.cols())));
    std::vector<std::vector<bool>> live(nu, std::vector<bool>(nv, false));
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y) {
            const auto& p = pmf.at(x, y);
            if (p.is_zero()) continue;
            auto u = fx.cell_of(x), v = fy.cell_of(y);
            live[u][v] = true;
            std::size_t s = source_is_x ? x : y;
            for (std::size_t r = 0; r < d.cols(); ++r) cost[u][v][r] += p * d.at(s, r);
        }
    PairDecoder g(nu, std::vector<SymbolIndex>(nv, npos));
    Rational total;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v = 0; v < nv; ++v) {
            if (!live[u][v]) continue;
            std::size_t arg = 0;
            for (std::size_t r = 1; r < d.cols(); ++r)
                if (cost[u][v][r] < cost[u][v][arg]) arg = r;
            g[u][v] = arg;
            total += cost[u][v][arg];
        }
    return {std::move(g), total};
}

inline std::vector<Rational> row_sums(const RationalMatrix& m)
{
    std::vector<Rational> s(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto& v : m[i]) s[i] += v;
    return s;
}

inline std::vector<Rational> col_sums(const RationalMatrix& m)
{
    std::vector<Rational> s(m.empty() ? 0 : m[0].size());
    for (const auto& row : m)
        for (std::size_t j = 0; j < row.size(); ++j) s[j] += row[j];
    return s;
}

inline JointPMF as_pmf(RationalMatrix m)
{
    auto rows = Alphabet::numbered("A", m.size());
    auto cols = Alphabet::numbered("B", m.empty() ? 0 : m[0].size());
    return JointPMF(std::move(rows), std::move(cols), std::move(m));
}

inline RationalMatrix transpose(const RationalMatrix& m)
{
    RationalMatrix t(m.empty() ? 0 : m[0].size(), std::vector<Rational>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

} // namespace detail

/// Every (partition of X, partition of Y) pair for both orders, YX first.
inline MTRegion enumerate_mt_points(const JointPMF& pmf, const DistortionMatrix& dx, const DistortionMatrix& dy,
                                    const MTOptions& opts = {})
{
    if (dx.rows() != pmf.rows()) fail(Errc::ValidationError, "X distortion rows do not match the X alphabet");
    if (dy.rows() != pmf.cols()) fail(Errc::ValidationError, "Y distortion rows do not match the Y alphabet");
    auto norm = normalize(pmf);
    MTRegion region{norm.pmf, dx.restrict_rows(norm.source_map, norm.pmf.source()), dy.restrict_rows(norm.si_map, norm.pmf.si()), {}};
    const auto& p = region.pmf;

    auto xs = all_partitions(p.rows(), opts.max_partition_symbols);
    auto ys = all_partitions(p.cols(), opts.max_partition_symbols);

    // Huffman rates of the marginal cell distributions only depend on one partition.
    std::vector<Rational> lu(xs.size()), lv(ys.size());
    std::vector<MTPoint> yx, xy, sim;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            auto m = detail::pair_joint(p, xs[i], ys[j]);
            if (j == 0) lu[i] = huffman(detail::row_sums(m)).average_length;
            if (i == 0) lv[j] = huffman(detail::col_sums(m)).average_length;
            auto [gx, dxv] = detail::pair_decoder(p, xs[i], ys[j], region.dx, true);
            auto [gy, dyv] = detail::pair_decoder(p, xs[i], ys[j], region.dy, false);
            auto lvu = solve_ri(detail::as_pmf(m), opts.ri).length;                    // U given V
            auto luv = solve_ri(detail::as_pmf(detail::transpose(m)), opts.ri).length; // V given U
            yx.push_back({DecodeOrder::YX, xs[i], ys[j], gx, gy, lvu, lv[j], dxv, dyv});
            xy.push_back({DecodeOrder::XY, xs[i], ys[j], gx, gy, lu[i], luv, dxv, dyv});
            if (opts.simultaneous) sim.push_back({DecodeOrder::Simultaneous, xs[i], ys[j], gx, gy, lu[i], lv[j], dxv, dyv});
        }
    }
    for (auto* v : {&yx, &xy, &sim})
        for (auto& pt : *v) region.points.push_back(std::move(pt));
    return region;
}

struct WitnessTerm {
    Rational weight;
    std::size_t point; // index into MTRegion::points
};

struct Membership {
    bool achievable = false;
    std::optional<DecodeOrder> order;
    std::vector<WitnessTerm> witness;
};

struct MembershipOptions {
    // Allow one time-sharing schedule to alternate between decoding orders. Off by
    // default: the region is the union of the per-order regions.
    bool mix_orders = false;
};

namespace detail {

inline std::optional<std::vector<WitnessTerm>> cover_with(const MTRegion& region, const std::vector<std::size_t>& ids,
                                                          const std::array<Rational, 4>& target)
{
    // Identical coordinate vectors are merged; the witness names the first one.
    std::map<std::array<Rational, 4>, std::size_t> seen;
    std::vector<std::size_t> rep;
    std::vector<std::vector<Rational>> pts;
    for (auto id : ids) {
        auto c = region.points[id].coords();
        if (seen.emplace(c, rep.size()).second) {
            rep.push_back(id);
            pts.emplace_back(c.begin(), c.end());
        }
    }
    auto lambda = find_convex_cover(pts, std::vector<Rational>(target.begin(), target.end()));
    if (!lambda) return std::nullopt;
    std::vector<WitnessTerm> out;
    for (std::size_t i = 0; i < lambda->size(); ++i)
        if (!(*lambda)[i].is_zero()) out.push_back({(*lambda)[i], rep[i]});
    return out;
}

} // namespace detail

/// Exact membership of (R_x, R_y, D_x, D_y). The witness is a basic solution of the
/// feasibility program, so it mixes at most five base points.
inline Membership is_achievable(const MTRegion& region, const std::array<Rational, 4>& target, const MembershipOptions& opts = {})
{
    std::vector<std::size_t> yx, xy, both;
    for (std::size_t i = 0; i < region.points.size(); ++i) {
        auto o = region.points[i].order;
        if (o == DecodeOrder::YX) yx.push_back(i);
        if (o == DecodeOrder::XY) xy.push_back(i);
        if (o != DecodeOrder::Simultaneous) both.push_back(i);
    }
    Membership m;
    if (opts.mix_orders) {
        if (auto w = detail::cover_with(region, both, target)) {
            m.achievable = true;
            m.witness = std::move(*w);
        }
        return m;
    }
    for (auto [order, ids] : {std::pair{DecodeOrder::YX, &yx}, std::pair{DecodeOrder::XY, &xy}}) {
        if (auto w = detail::cover_with(region, *ids, target)) {
            m.achievable = true;
            m.order = order;
            m.witness = std::move(*w);
            return m;
        }
    }
    return m;
}

struct SurfacePoint {
    std::size_t point;
    bool extreme; // not reachable by time-sharing the other points of its order
};

inline bool dominates(const std::array<Rational, 4>& a, const std::array<Rational, 4>& b)
{
    bool strict = false;
    for (std::size_t k = 0; k < 4; ++k) {
        if (b[k] < a[k]) return false;
        strict = strict || a[k] < b[k];
    }
    return strict;
}

/// Base points (of the two decoding orders) not dominated coordinate-wise by any
/// other base point; duplicates of an earlier point are dropped.
inline std::vector<SurfacePoint> pareto_surface(const MTRegion& region)
{
    std::vector<std::size_t> keep;
    const auto& pts = region.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].order == DecodeOrder::Simultaneous) continue;
        auto ci = pts[i].coords();
        bool out = false;
        for (std::size_t j = 0; j < pts.size() && !out; ++j) {
            if (j == i || pts[j].order == DecodeOrder::Simultaneous) continue;
            auto cj = pts[j].coords();
            out = dominates(cj, ci) || (cj == ci && j < i);
        }
        if (!out) keep.push_back(i);
    }
    std::vector<SurfacePoint> surface;
    for (auto i : keep) {
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i && pts[j].order == pts[i].order && pts[j].coords() != pts[i].coords()) others.push_back(j);
        bool reachable = !others.empty() && detail::cover_with(region, others, pts[i].coords()).has_value();
        surface.push_back({i, !reachable});
    }
    return surface;
}

/// (D_x, R_x) envelope of the base points with R_y ≤ ry, over both orders.
inline RDCurve<Rational> rx_dx_projection(const MTRegion& region, const Rational& ry)
{
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& p : region.points)
        if (p.order != DecodeOrder::Simultaneous && p.ry <= ry) pts.emplace_back(p.dx, p.rx);
    return lower_convex_envelope(pts);
}

} // namespace zdsi
