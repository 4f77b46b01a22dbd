#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/prob.hpp"
#include "zdsi/ri_codes.hpp"

namespace zdsi {

inline constexpr std::size_t kMaxCodebook = std::size_t{1} << 20;
inline constexpr std::size_t kMaxBlockLength = std::size_t{1} << 14;

/// (1 - 2^{-nαH})^{2^{nR}}, evaluated as exp(2^{nR} · log1p(-2^{-nαH})).
inline double pc_lower_bound(double n, double alpha, double H, double R)
{
    if (!(n >= 1) || !(alpha > 0) || !(alpha <= 1) || !(H > 0) || !(R >= 0))
        fail(Errc::DomainError, "pc_lower_bound needs n >= 1, 0 < alpha <= 1, H > 0, R >= 0");
    double log_base = std::log1p(-std::exp2(-n * alpha * H));
    double count = std::exp2(n * R);
    return std::exp(count * log_base);
}

/// Smallest prefix fraction for which the bound tends to one: R / H. Values above
/// one mean no prefix fraction suffices.
inline double threshold_alpha(double R, double H)
{
    if (!(H > 0)) fail(Errc::DomainError, "threshold_alpha needs H > 0");
    return R / H;
}

// ---------------------------------------------------------------------------
// Rate-distortion function

struct RDPoint {
    double distortion;
    double rate;               // bits
    std::vector<double> prior; // reproduction marginal of the optimal test channel
};

struct RDOptions {
    double tolerance = 1e-10;
    std::size_t max_sweeps = 100000;
    bool force_iterative = false; // skip the uniform/Hamming closed form
};

namespace detail {

inline std::vector<double> doubles(const std::vector<Rational>& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& r : v) out.push_back(r.to_double());
    return out;
}

inline std::vector<std::vector<double>> doubles(const DistortionMatrix& d)
{
    std::vector<std::vector<double>> out(d.rows(), std::vector<double>(d.cols()));
    for (std::size_t x = 0; x < d.rows(); ++x)
        for (std::size_t r = 0; r < d.cols(); ++r) out[x][r] = d.at(x, r).to_double();
    return out;
}

inline double binary_entropy(double p) { return (p <= 0 || p >= 1) ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

inline bool uniform_hamming(const std::vector<Rational>& px, const DistortionMatrix& d)
{
    if (d.rows() != d.cols() || px.size() != d.rows()) return false;
    for (std::size_t x = 0; x < px.size(); ++x) {
        if (px[x] != px[0]) return false;
        for (std::size_t r = 0; r < d.cols(); ++r)
            if (d.at(x, r) != Rational(x == r ? 0 : 1)) return false;
    }
    return true;
}

// One Blahut-Arimoto run at slope s < 0 (nats per unit distortion), warm-started from q.
inline RDPoint blahut_arimoto(const std::vector<double>& p, const std::vector<std::vector<double>>& d, double s,
                              std::vector<double> q, const RDOptions& opts)
{
    const std::size_t nx = p.size(), nr = q.size();
    std::vector<std::vector<double>> Q(nx, std::vector<double>(nr));
    for (std::size_t sweep = 0;; ++sweep) {
        if (sweep >= opts.max_sweeps) fail(Errc::NoConvergence, "Blahut-Arimoto did not converge");
        for (std::size_t x = 0; x < nx; ++x) {
            double z = 0;
            for (std::size_t r = 0; r < nr; ++r) z += Q[x][r] = q[r] * std::exp(s * d[x][r]);
            for (auto& v : Q[x]) v /= z;
        }
        std::vector<double> next(nr, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t r = 0; r < nr; ++r) next[r] += p[x] * Q[x][r];
        double diff = 0;
        for (std::size_t r = 0; r < nr; ++r) diff = std::max(diff, std::abs(next[r] - q[r]));
        q = std::move(next);
        if (diff < opts.tolerance) break;
    }
    RDPoint out{0, 0, q};
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t r = 0; r < nr; ++r) {
            if (p[x] <= 0 || Q[x][r] <= 0) continue;
            out.distortion += p[x] * Q[x][r] * d[x][r];
            if (q[r] > 0) out.rate += p[x] * Q[x][r] * std::log2(Q[x][r] / q[r]);
        }
    out.rate = std::max(out.rate, 0.0);
    return out;
}

} // namespace detail

/// R(D) of a memoryless source with marginal `px` under distortion `d`.
inline RDPoint rate_distortion(const std::vector<Rational>& px, const DistortionMatrix& d, double D, const RDOptions& opts = {})
{
    if (px.size() != d.rows()) fail(Errc::ValidationError, "distortion rows do not match the source alphabet");
    auto p = detail::doubles(px);
    auto dm = detail::doubles(d);
    const std::size_t nr = d.cols();

    double dmin = 0;
    for (std::size_t x = 0; x < p.size(); ++x) dmin += p[x] * *std::min_element(dm[x].begin(), dm[x].end());
    std::size_t best_const = 0;
    double dmax = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < nr; ++r) {
        double e = 0;
        for (std::size_t x = 0; x < p.size(); ++x) e += p[x] * dm[x][r];
        if (e < dmax) {
            dmax = e;
            best_const = r;
        }
    }
    if (D < dmin - 1e-12) fail(Errc::BelowMinimumDistortion, "distortion below the source's minimum");
    if (D >= dmax) {
        std::vector<double> prior(nr, 0.0);
        prior[best_const] = 1.0;
        return {D, 0.0, prior};
    }

    if (!opts.force_iterative && detail::uniform_hamming(px, d)) {
        double m = static_cast<double>(p.size());
        double rate = std::log2(m) - detail::binary_entropy(D) - D * std::log2(m - 1);
        return {D, std::max(rate, 0.0), std::vector<double>(nr, 1.0 / static_cast<double>(nr))};
    }

    // Bisection on the slope: D(s) increases from dmin (s -> -inf) to dmax (s = 0).
    std::vector<double> q(nr, 1.0 / static_cast<double>(nr));
    double lo = -1.0, hi = 0.0;
    RDPoint at_lo = detail::blahut_arimoto(p, dm, lo, q, opts);
    while (at_lo.distortion > D && lo > -1e4) {
        lo *= 2;
        at_lo = detail::blahut_arimoto(p, dm, lo, at_lo.prior, opts);
    }
    if (at_lo.distortion > D) return at_lo; // D at the floor: steepest slope reached
    RDPoint best = at_lo;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        auto pt = detail::blahut_arimoto(p, dm, mid, best.prior, opts);
        if (pt.distortion > D) {
            hi = mid;
        } else {
            lo = mid;
            best = pt;
        }
        if (std::abs(pt.distortion - D) < 1e-12) {
            best = pt;
            break;
        }
    }
    best.distortion = D;
    return best;
}

/// R(D) sampled at `points` evenly spaced distortions in [dmin, dmax].
inline std::vector<RDPoint> rate_distortion_curve(const std::vector<Rational>& px, const DistortionMatrix& d, std::size_t points,
                                                  const RDOptions& opts = {})
{
    if (points < 2) fail(Errc::DomainError, "need at least two curve points");
    auto p = detail::doubles(px);
    auto dm = detail::doubles(d);
    double dmin = 0, dmax = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < p.size(); ++x) dmin += p[x] * *std::min_element(dm[x].begin(), dm[x].end());
    for (std::size_t r = 0; r < d.cols(); ++r) {
        double e = 0;
        for (std::size_t x = 0; x < p.size(); ++x) e += p[x] * dm[x][r];
        dmax = std::min(dmax, e);
    }
    std::vector<RDPoint> out;
    for (std::size_t i = 0; i < points; ++i) {
        double D = dmin + (dmax - dmin) * static_cast<double>(i) / static_cast<double>(points - 1);
        out.push_back(rate_distortion(px, d, D, opts));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct PrefixEstimate {
    double estimate;     // fraction of trials with a collision-free prefix
    double stddev;       // binomial standard error of the estimate
    double ci_halfwidth; // 1.96 standard errors
    std::size_t trials;
};

namespace detail {

inline void check_codebook(double log2_count, std::size_t n)
{
    if (n == 0) fail(Errc::DomainError, "block length must be positive");
    if (n > kMaxBlockLength) fail(Errc::TooLarge, "block length above 2^14");
    if (log2_count > 20) fail(Errc::TooLarge, "codebook above 2^20 entries");
}

inline std::size_t codebook_size(double log2_count)
{
    return static_cast<std::size_t>(std::ceil(std::exp2(log2_count) - 1e-9));
}

inline PrefixEstimate summarize(std::size_t ok, std::size_t trials)
{
    double est = static_cast<double>(ok) / static_cast<double>(trials);
    double sd = std::sqrt(est * (1 - est) / static_cast<double>(trials));
    return {est, sd, 1.96 * sd, trials};
}

} // namespace detail

/// Draws a reference word and ceil(2^{nR}) competitors per trial and records
/// whether no competitor repeats the reference's first ceil(nα) symbols.
inline PrefixEstimate simulate_prefix_uniqueness(const std::vector<double>& prior, std::size_t n, double R, double alpha,
                                                 std::size_t trials, std::uint64_t seed)
{
    if (trials == 0) fail(Errc::DomainError, "trials must be positive");
    if (!(alpha > 0) || alpha > 1) fail(Errc::DomainError, "alpha must lie in (0, 1]");
    detail::check_codebook(static_cast<double>(n) * R, n);
    const std::size_t count = detail::codebook_size(static_cast<double>(n) * R);
    const auto len = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * alpha - 1e-9));
    DiscreteSampler draw(prior);
    std::vector<std::size_t> ref(len);
    std::size_t ok = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        for (auto& s : ref) s = draw(rng);
        bool clash = false;
        for (std::size_t c = 0; c < count && !clash; ++c) {
            std::size_t k = 0;
            while (k < len && draw(rng) == ref[k]) ++k;
            clash = k == len;
        }
        ok += !clash;
    }
    return detail::summarize(ok, trials);
}

enum class RateMode { Fixed, Variable };

struct SchemeConfig {
    double D = 0;
    std::size_t n = 24;
    double epsilon = 0.1;
    double alpha = -1; // negative: R(D)/H(prior) + 2ε
    RateMode mode = RateMode::Fixed;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    double delta = 0.02; // distortion-typicality slack
};

struct SchemeReport {
    double alpha;
    std::size_t n;
    double rate;         // R(D)
    double codebook_log2;
    std::size_t codebook_size;
    std::size_t prefix_length;
    double pc_bound;
    double pc_estimate;  // among typical trials, fraction with a unique prefix
    double ci_halfwidth;
    double bits_per_symbol; // over typical trials
    double distortion;      // over typical trials
    double typical_fail_rate;
    double prefix_fail_rate; // over typical trials
    std::size_t trials;
};

/// Sequential prefix-identification scheme. One codebook of ceil(2^{n(R(D)+ε)})
/// words is drawn from the optimal output prior (stream 0 of `seed`); trial t draws
/// its source word from stream t + 1, picks the first codeword within D + δ
/// per-letter distortion and sends its first ceil(nα) symbols.
inline SchemeReport simulate_scheme(const std::vector<Rational>& px, const DistortionMatrix& d, const SchemeConfig& cfg)
{
    if (cfg.trials == 0) fail(Errc::DomainError, "trials must be positive");
    auto rd = rate_distortion(px, d, cfg.D);
    double log2_count = static_cast<double>(cfg.n) * (rd.rate + cfg.epsilon);
    detail::check_codebook(log2_count, cfg.n);
    const std::size_t count = detail::codebook_size(log2_count);
    const std::size_t n = cfg.n;
    const std::size_t nr = d.cols();

    double h_prior = entropy_bits(rd.prior);
    double alpha = cfg.alpha >= 0 ? cfg.alpha : rd.rate / std::max(h_prior, 1e-300) + 2 * cfg.epsilon;
    alpha = std::min(alpha, 1.0);
    if (!(alpha > 0)) alpha = 1.0 / static_cast<double>(n);
    const auto len = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(n) * alpha - 1e-9)));

    // Codebook, stored row-major.
    DiscreteSampler out_draw(rd.prior);
    std::vector<std::uint16_t> book(count * n);
    {
        Rng rng(cfg.seed, 0);
        for (auto& s : book) s = static_cast<std::uint16_t>(out_draw(rng));
    }
    // A prefix identifies the reproduction when every codeword carrying it is the
    // same sequence; duplicates of one word are harmless.
    auto view = [&](std::size_t c, std::size_t k) {
        return std::string_view(reinterpret_cast<const char*>(&book[c * n]), k * sizeof(std::uint16_t));
    };
    struct PrefixInfo {
        std::size_t first;
        bool ambiguous;
    };
    std::unordered_map<std::string_view, PrefixInfo> prefixes;
    for (std::size_t c = 0; c < count; ++c) {
        auto [it, fresh] = prefixes.try_emplace(view(c, len), PrefixInfo{c, false});
        if (!fresh && !it->second.ambiguous && view(it->second.first, n) != view(c, n)) it->second.ambiguous = true;
    }

    // Per-symbol bit cost.
    std::vector<double> bits(nr, std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(nr, 2)))));
    if (nr == 1) bits[0] = 0;
    if (cfg.mode == RateMode::Variable) {
        auto code = huffman(rd.prior);
        for (std::size_t r = 0; r < nr; ++r) bits[r] = static_cast<double>(code.codewords[r].length());
    }

    auto pxd = detail::doubles(px);
    auto dm = detail::doubles(d);
    DiscreteSampler src_draw(pxd);
    const double budget = (cfg.D + cfg.delta) * static_cast<double>(n) + 1e-9;

    std::size_t typical = 0, unique = 0;
    double bit_total = 0, dist_total = 0;
    std::vector<std::size_t> x(n);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(cfg.seed, t + 1);
        for (auto& s : x) s = src_draw(rng);
        std::size_t found = count;
        double found_dist = 0;
        for (std::size_t c = 0; c < count && found == count; ++c) {
            const auto* w = &book[c * n];
            double acc = 0;
            std::size_t k = 0;
            for (; k < n && acc <= budget; ++k) acc += dm[x[k]][w[k]];
            if (k == n && acc <= budget) {
                found = c;
                found_dist = acc;
            }
        }
        if (found == count) continue;
        ++typical;
        const auto* w = &book[found * n];
        for (std::size_t k = 0; k < len; ++k) bit_total += bits[w[k]];
        dist_total += found_dist / static_cast<double>(n);
        if (!prefixes.at(view(found, len)).ambiguous) ++unique;
    }

    SchemeReport rep{};
    rep.alpha = alpha;
    rep.n = n;
    rep.rate = rd.rate;
    rep.codebook_log2 = log2_count;
    rep.codebook_size = count;
    rep.prefix_length = len;
    rep.pc_bound = h_prior > 0 ? pc_lower_bound(static_cast<double>(n), alpha, h_prior, rd.rate + cfg.epsilon) : 0.0;
    rep.trials = cfg.trials;
    rep.typical_fail_rate = 1.0 - static_cast<double>(typical) / static_cast<double>(cfg.trials);
    if (typical > 0) {
        auto s = detail::summarize(unique, typical);
        rep.pc_estimate = s.estimate;
        rep.ci_halfwidth = s.ci_halfwidth;
        rep.prefix_fail_rate = 1.0 - s.estimate;
        rep.bits_per_symbol = bit_total / static_cast<double>(typical * n);
        rep.distortion = dist_total / static_cast<double>(typical);
    }
    return rep;
}

} // namespace zdsi
