#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zdsi/curve.hpp"
#include "zdsi/error.hpp"
#include "zdsi/graph.hpp"
#include "zdsi/prob.hpp"
#include "zdsi/quantizer.hpp"

namespace zdsi {

/// Time-sharing of at most two scalar quantizers: the first ceil(λn) symbols of an
/// n-block use `stages[0]`, the rest `stages[1]`. A single-stage plan has λ = 1.
struct TimeSharePlan {
    JointPMF pmf;                 // normalized source the partitions refer to
    DistortionMatrix distortion;
    std::vector<QuantizerPoint> stages;
    Rational lambda;

    Rational rate() const
    {
        if (stages.size() == 1) return stages[0].rate;
        return lambda * stages[0].rate + (Rational(1) - lambda) * stages[1].rate;
    }
    Rational expected_distortion() const
    {
        if (stages.size() == 1) return stages[0].distortion;
        return lambda * stages[0].distortion + (Rational(1) - lambda) * stages[1].distortion;
    }
    std::size_t switch_point(std::size_t n) const
    {
        if (stages.size() == 1) return n;
        Rational k = lambda * Rational(static_cast<std::int64_t>(n));
        BigInt q = k.num() / k.den();
        if (q * k.den() != k.num()) q += 1;
        return static_cast<std::size_t>(q);
    }
    const QuantizerPoint& stage_at(std::size_t t, std::size_t n) const { return stages[t < switch_point(n) ? 0 : 1]; }
};

/// Plan for target distortion D from the bracketing envelope vertices.
inline TimeSharePlan build_plan(const RDCloud& cloud, const RDCurve<Rational>& curve, const Rational& D)
{
    auto b = bracket(curve, D);
    TimeSharePlan plan{cloud.pmf, cloud.distortion, {}, Rational(1)};
    plan.stages.push_back(cloud.points.at(curve.vertices[b.lo].source));
    if (b.lo != b.hi) {
        plan.stages.push_back(cloud.points.at(curve.vertices[b.hi].source));
        plan.lambda = b.lambda;
    }
    for (const auto& s : plan.stages)
        if (!check_feasible(s.protocol.codewords, induced_graph(plan.pmf, s.partition)))
            fail(Errc::InfeasibleProtocol, "plan stage carries an infeasible protocol");
    return plan;
}

inline TimeSharePlan build_plan(const RDCloud& cloud, const Rational& D) { return build_plan(cloud, rd_curve(cloud), D); }

/// Flat bit sequence without framing.
class BitStream {
public:
    void append(const Codeword& c)
    {
        for (char b : c.bits()) bits_.push_back(b == '1');
    }
    std::size_t size() const { return bits_.size(); }
    bool at(std::size_t i) const { return bits_.at(i); }
    const std::vector<bool>& bits() const { return bits_; }

private:
    std::vector<bool> bits_;
};

/// Per-stage lookup tables shared by encoder and decoder.
class StreamCodec {
public:
    explicit StreamCodec(const TimeSharePlan& plan) : plan_(&plan)
    {
        for (const auto& s : plan.stages) {
            auto induced = induced_pmf(plan.pmf, s.partition);
            std::vector<std::vector<std::size_t>> cand(plan.pmf.cols());
            for (std::size_t y = 0; y < plan.pmf.cols(); ++y)
                for (std::size_t z = 0; z < induced.rows(); ++z)
                    if (induced.at(z, y).sign() > 0) cand[y].push_back(z);
            candidates_.push_back(std::move(cand));
        }
    }

    std::size_t stage_index(std::size_t t, std::size_t n) const { return t < plan_->switch_point(n) ? 0 : 1; }

    /// Codeword the encoder emits for x at time t.
    const Codeword& encode(std::size_t t, std::size_t n, SymbolIndex x, std::size_t* cell = nullptr) const
    {
        const auto& s = plan_->stages[stage_index(t, n)];
        auto z = s.partition.cell_of(x);
        if (cell) *cell = z;
        return s.protocol.codewords[z];
    }

    struct Decoded {
        std::size_t cell;
        SymbolIndex reproduction;
        std::size_t bits; // consumed
    };

    /// Reads from `pos` until the bits read equal exactly one candidate codeword
    /// for y. Returns nullopt on a synchronization loss.
    std::optional<Decoded> decode(std::size_t t, std::size_t n, const BitStream& in, std::size_t pos, SymbolIndex y) const
    {
        auto si = stage_index(t, n);
        const auto& s = plan_->stages[si];
        const auto& cand = candidates_[si][y];
        std::string read;
        while (true) {
            bool extendable = false;
            for (auto z : cand) {
                const auto& w = s.protocol.codewords[z].bits();
                if (w == read) return Decoded{z, s.decoder(z, y), read.size()};
                extendable = extendable || (w.size() > read.size() && w.compare(0, read.size(), read) == 0);
            }
            if (!extendable || pos + read.size() >= in.size()) return std::nullopt;
            read.push_back(in.at(pos + read.size()) ? '1' : '0');
        }
    }

private:
    const TimeSharePlan* plan_;
    std::vector<std::vector<std::vector<std::size_t>>> candidates_; // [stage][y] -> cells
};

struct TraceRow {
    std::size_t t;
    std::string x, y, z, codeword, xhat;
};

struct SimReport {
    std::size_t n = 0;
    std::size_t total_bits = 0;
    double rate = 0;       // total_bits / n
    double distortion = 0; // empirical average
    std::size_t sync_errors = 0;
    std::size_t mismatches = 0; // reproduction differs from h(f(x), y)
    std::vector<TraceRow> trace;
    BitStream stream;
};

struct SimOptions {
    bool trace = false;
    bool keep_stream = false;
    bool strict = false; // raise SyncLoss instead of counting it
};

/// Drives n i.i.d. pairs through the codec. The decoder reads the shared stream
/// causally; after each symbol its cursor must equal the encoder's.
inline SimReport run_simulation(const TimeSharePlan& plan, std::size_t n, std::uint64_t seed, const SimOptions& opts = {})
{
    if (n == 0) fail(Errc::DomainError, "n must be positive");
    StreamCodec codec(plan);
    auto pairs = sample_iid(plan.pmf, n, seed);
    SimReport rep;
    rep.n = n;
    BitStream stream;
    std::size_t cursor = 0;
    Rational dist;
    const auto& S = plan.pmf.source();
    const auto& Y = plan.pmf.si();
    const auto& R = plan.distortion.reproduction();
    for (std::size_t t = 0; t < n; ++t) {
        auto [x, y] = pairs[t];
        std::size_t z = 0;
        const auto& w = codec.encode(t, n, x, &z);
        stream.append(w);
        auto got = codec.decode(t, n, stream, cursor, y);
        const auto& stage = plan.stages[codec.stage_index(t, n)];
        SymbolIndex expect = stage.decoder(z, y);
        if (!got || cursor + got->bits != stream.size()) {
            if (opts.strict) fail(Errc::SyncLoss, "decoder lost synchronization at t=" + std::to_string(t));
            ++rep.sync_errors;
            cursor = stream.size(); // resynchronize
            dist += plan.distortion.at(x, expect);
            continue;
        }
        cursor += got->bits;
        if (got->reproduction != expect) ++rep.mismatches;
        dist += plan.distortion.at(x, got->reproduction);
        if (opts.trace)
            rep.trace.push_back({t, S.label(x), Y.label(y), std::to_string(got->cell), w.empty() ? std::string("-") : w.bits(),
                                 R.label(got->reproduction)});
    }
    rep.total_bits = stream.size();
    rep.rate = static_cast<double>(rep.total_bits) / static_cast<double>(n);
    rep.distortion = (dist / Rational(static_cast<std::int64_t>(n))).to_double();
    if (opts.keep_stream) rep.stream = std::move(stream);
    return rep;
}

} // namespace zdsi
