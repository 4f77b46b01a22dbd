#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zdsi/curve.hpp"
#include "zdsi/error.hpp"
#include "zdsi/partition.hpp"
#include "zdsi/prob.hpp"
#include "zdsi/ri_codes.hpp"

namespace zdsi {

/// Reproduction symbol per (cell, SI symbol). Pairs of zero induced probability
/// carry `DecoderRule::none`.
struct DecoderRule {
    static constexpr SymbolIndex none = std::numeric_limits<SymbolIndex>::max();
    std::vector<std::vector<SymbolIndex>> table;

    SymbolIndex operator()(std::size_t cell, SymbolIndex y) const { return table.at(cell).at(y); }
};

/// Bayes-optimal decoder for partition f: for each (z, y) of positive probability,
/// the reproduction minimizing Σ_{x in z} P(x,y) d(x, ·), lowest index on ties.
/// Returns the rule and its exact expected distortion.
inline std::pair<DecoderRule, Rational> optimal_decoder(const JointPMF& pmf, const Partition& f, const DistortionMatrix& d)
{
    if (f.size() != pmf.rows()) fail(Errc::ValidationError, "partition does not cover the source alphabet");
    if (d.rows() != pmf.rows()) fail(Errc::ValidationError, "distortion rows do not match the source alphabet");
    auto cells = f.cells();
    DecoderRule rule;
    rule.table.assign(cells.size(), std::vector<SymbolIndex>(pmf.cols(), DecoderRule::none));
    Rational total;
    for (std::size_t z = 0; z < cells.size(); ++z) {
        for (std::size_t y = 0; y < pmf.cols(); ++y) {
            bool any = false;
            for (auto x : cells[z]) any = any || pmf.at(x, y).sign() > 0;
            if (!any) continue;
            Rational best;
            SymbolIndex arg = DecoderRule::none;
            for (std::size_t r = 0; r < d.cols(); ++r) {
                Rational cost;
                for (auto x : cells[z])
                    if (pmf.at(x, y).sign() > 0) cost += pmf.at(x, y) * d.at(x, r);
                if (arg == DecoderRule::none || cost < best) {
                    best = cost;
                    arg = r;
                }
            }
            rule.table[z][y] = arg;
            total += best;
        }
    }
    return {std::move(rule), total};
}

/// One scalar SI-aware quantizer: partition, optimal decoder, optimal RI
/// protocol for the cells, and its exact (distortion, rate) operating point.
struct QuantizerPoint {
    Partition partition;
    DecoderRule decoder;
    RIProtocol protocol; // codeword per cell
    Rational rate;       // L_Y(f(X))
    Rational distortion; // E d(X, h(f(X), Y))
};

struct QuantizerOptions {
    RISolverOptions ri;
    std::size_t max_partition_symbols = kMaxPartitionAlphabet;
};

/// Point cloud over every partition of the (normalized) source alphabet.
/// `pmf` and `distortion` are the zero-marginal-stripped versions the points refer
/// to; `source_map[i]` is the original index of normalized symbol i.
struct RDCloud {
    JointPMF pmf;
    DistortionMatrix distortion;
    std::vector<SymbolIndex> source_map;
    std::vector<QuantizerPoint> points;
};

inline QuantizerPoint evaluate_partition(const JointPMF& pmf, const DistortionMatrix& d, const Partition& f,
                                         const RISolverOptions& ri = {})
{
    auto [rule, dist] = optimal_decoder(pmf, f, d);
    auto sol = solve_ri(induced_pmf(pmf, f), ri);
    return QuantizerPoint{f, std::move(rule), std::move(sol.protocol), sol.length, dist};
}

namespace detail {

// Strips zero-marginal source symbols. The SI alphabet is kept as is so decoder
// tables stay indexed by the caller's SI symbols.
inline std::pair<JointPMF, std::vector<SymbolIndex>> strip_source(const JointPMF& pmf)
{
    validate(pmf);
    auto px = marginal_source(pmf);
    std::vector<SymbolIndex> keep;
    std::vector<std::string> labels;
    RationalMatrix m;
    for (std::size_t x = 0; x < px.size(); ++x) {
        if (px[x].is_zero()) continue;
        keep.push_back(x);
        labels.push_back(pmf.source().label(x));
        m.push_back(pmf.matrix()[x]);
    }
    return {JointPMF(Alphabet(pmf.source().name(), std::move(labels)), pmf.si(), std::move(m)), std::move(keep)};
}

} // namespace detail

inline RDCloud rd_points(const JointPMF& pmf, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    if (d.rows() != pmf.rows()) fail(Errc::ValidationError, "distortion rows do not match the source alphabet");
    auto [stripped, keep] = detail::strip_source(pmf);
    RDCloud cloud{stripped, d.restrict_rows(keep, stripped.source()), keep, {}};
    PartitionEnumerator parts(stripped.rows(), opts.max_partition_symbols);
    while (auto f = parts.next()) cloud.points.push_back(evaluate_partition(cloud.pmf, cloud.distortion, *f, opts.ri));
    return cloud;
}

inline RDCurve<Rational> rd_curve(const RDCloud& cloud)
{
    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(cloud.points.size());
    for (const auto& p : cloud.points) pts.emplace_back(p.distortion, p.rate);
    return lower_convex_envelope(pts);
}

/// Lower convex envelope of the zero-delay point cloud.
inline RDCurve<Rational> rd_curve(const JointPMF& pmf, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    return rd_curve(rd_points(pmf, d, opts));
}

// ---------------------------------------------------------------------------
// Causal setting: same enumeration, rate functional H(f(X) | Y).

struct CausalPoint {
    Partition partition;
    DecoderRule decoder;
    double rate;
    Rational distortion;
};

inline std::vector<CausalPoint> causal_points(const JointPMF& pmf, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    if (d.rows() != pmf.rows()) fail(Errc::ValidationError, "distortion rows do not match the source alphabet");
    auto [stripped, keep] = detail::strip_source(pmf);
    auto dd = d.restrict_rows(keep, stripped.source());
    std::vector<CausalPoint> out;
    PartitionEnumerator parts(stripped.rows(), opts.max_partition_symbols);
    while (auto f = parts.next()) {
        auto [rule, dist] = optimal_decoder(stripped, *f, dd);
        out.push_back({*f, std::move(rule), conditional_entropy_bits(induced_pmf(stripped, *f)), dist});
    }
    return out;
}

/// Envelope of (distortion, H(f(X)|Y)) in binary64.
inline RDCurve<double> causal_rd_curve(const JointPMF& pmf, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    auto pts = causal_points(pmf, d, opts);
    std::vector<std::pair<double, double>> xy;
    xy.reserve(pts.size());
    for (const auto& p : pts) xy.emplace_back(p.distortion.to_double(), p.rate);
    return lower_convex_envelope(xy);
}

// ---------------------------------------------------------------------------
// Encoder side information: the encoder sees (X, S), the decoder sees Y.

/// Joint of the product symbol (x, s) with Y, keeping only pairs of positive
/// probability, plus the distortion lifted to the product alphabet.
struct ProductSource {
    JointPMF pmf;                                       // rows: (x, s) pairs
    DistortionMatrix distortion;                        // d((x, s), x̂) = d(x, x̂)
    std::vector<std::pair<SymbolIndex, SymbolIndex>> pairs; // (x, s) per row
};

/// `sxy` is indexed [s][x][y]; `d` measures X against its reproduction.
inline ProductSource encoder_si_product(const TriplePMF& sxy, const DistortionMatrix& d)
{
    validate(sxy);
    const auto& S = sxy.first();
    const auto& X = sxy.second();
    const auto& Y = sxy.third();
    if (d.rows() != X.size()) fail(Errc::ValidationError, "distortion rows do not match the source alphabet");
    ProductSource out;
    std::vector<std::string> labels;
    RationalMatrix m;
    RationalMatrix dm;
    for (std::size_t x = 0; x < X.size(); ++x) {
        for (std::size_t s = 0; s < S.size(); ++s) {
            std::vector<Rational> row(Y.size());
            Rational mass;
            for (std::size_t y = 0; y < Y.size(); ++y) {
                row[y] = sxy.at(s, x, y);
                mass += row[y];
            }
            if (mass.is_zero()) continue;
            out.pairs.emplace_back(x, s);
            labels.push_back(X.label(x) + "|" + S.label(s));
            m.push_back(std::move(row));
            std::vector<Rational> drow(d.cols());
            for (std::size_t r = 0; r < d.cols(); ++r) drow[r] = d.at(x, r);
            dm.push_back(std::move(drow));
        }
    }
    Alphabet product(X.name() + "S", std::move(labels));
    out.pmf = JointPMF(product, Y, std::move(m));
    out.distortion = DistortionMatrix(product, d.reproduction(), std::move(dm));
    return out;
}

inline RDCloud encoder_si_points(const TriplePMF& sxy, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    auto prod = encoder_si_product(sxy, d);
    return rd_points(prod.pmf, prod.distortion, opts);
}

inline RDCurve<Rational> encoder_si_rd_curve(const TriplePMF& sxy, const DistortionMatrix& d, const QuantizerOptions& opts = {})
{
    return rd_curve(encoder_si_points(sxy, d, opts));
}

} // namespace zdsi
