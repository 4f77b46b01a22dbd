#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/rational.hpp"

namespace zdsi {

using SymbolIndex = std::size_t;

/// Ordered, named set of symbol labels. The position of a label is its SymbolIndex.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::string name, std::vector<std::string> symbols)
        : name_(std::move(name)), symbols_(std::move(symbols))
    {
        if (symbols_.empty()) fail(Errc::ValidationError, "alphabet '" + name_ + "' is empty");
        std::set<std::string> seen(symbols_.begin(), symbols_.end());
        if (seen.size() != symbols_.size()) fail(Errc::ValidationError, "alphabet '" + name_ + "' has duplicate labels");
    }

    /// Labels "1".."n".
    static Alphabet numbered(std::string name, std::size_t n)
    {
        std::vector<std::string> s;
        s.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) s.push_back(std::to_string(i));
        return Alphabet(std::move(name), std::move(s));
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::string& label(SymbolIndex i) const { return symbols_.at(i); }
    std::size_t size() const { return symbols_.size(); }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string name_;
    std::vector<std::string> symbols_;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Joint distribution P(x, y): rows index the source, columns the side information.
class JointPMF {
public:
    JointPMF() = default;
    JointPMF(Alphabet source, Alphabet si, RationalMatrix p)
        : source_(std::move(source)), si_(std::move(si)), p_(std::move(p))
    {
        if (p_.size() != source_.size()) fail(Errc::ValidationError, "pmf row count does not match source alphabet");
        for (const auto& row : p_) {
            if (row.size() != si_.size()) fail(Errc::ValidationError, "pmf column count does not match SI alphabet");
        }
    }

    const Alphabet& source() const { return source_; }
    const Alphabet& si() const { return si_; }
    std::size_t rows() const { return p_.size(); }
    std::size_t cols() const { return si_.size(); }
    const Rational& at(SymbolIndex x, SymbolIndex y) const { return p_[x][y]; }
    const RationalMatrix& matrix() const { return p_; }

    /// Swaps the roles of source and side information.
    JointPMF transposed() const
    {
        RationalMatrix t(cols(), std::vector<Rational>(rows()));
        for (std::size_t x = 0; x < rows(); ++x)
            for (std::size_t y = 0; y < cols(); ++y) t[y][x] = p_[x][y];
        return JointPMF(si_, source_, std::move(t));
    }

private:
    Alphabet source_;
    Alphabet si_;
    RationalMatrix p_;
};

/// Joint distribution over three finite alphabets, indexed [a][b][c].
class TriplePMF {
public:
    TriplePMF() = default;
    TriplePMF(Alphabet a, Alphabet b, Alphabet c, std::vector<RationalMatrix> p)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), p_(std::move(p))
    {
        if (p_.size() != a_.size()) fail(Errc::ValidationError, "triple pmf outer dimension mismatch");
        for (const auto& m : p_) {
            if (m.size() != b_.size()) fail(Errc::ValidationError, "triple pmf middle dimension mismatch");
            for (const auto& row : m)
                if (row.size() != c_.size()) fail(Errc::ValidationError, "triple pmf inner dimension mismatch");
        }
    }

    const Alphabet& first() const { return a_; }
    const Alphabet& second() const { return b_; }
    const Alphabet& third() const { return c_; }
    const Rational& at(SymbolIndex i, SymbolIndex j, SymbolIndex k) const { return p_[i][j][k]; }
    const std::vector<RationalMatrix>& tensor() const { return p_; }

    /// Marginal of the first two coordinates.
    JointPMF marginal12() const
    {
        RationalMatrix m(a_.size(), std::vector<Rational>(b_.size()));
        for (std::size_t i = 0; i < a_.size(); ++i)
            for (std::size_t j = 0; j < b_.size(); ++j)
                for (std::size_t k = 0; k < c_.size(); ++k) m[i][j] += p_[i][j][k];
        return JointPMF(a_, b_, std::move(m));
    }

    /// Marginal of the third coordinate.
    std::vector<Rational> marginal3() const
    {
        std::vector<Rational> m(c_.size());
        for (const auto& mat : p_)
            for (const auto& row : mat)
                for (std::size_t k = 0; k < row.size(); ++k) m[k] += row[k];
        return m;
    }

    /// Joint of the first two coordinates conditioned on the third taking value k.
    JointPMF conditional12_given3(SymbolIndex k) const
    {
        Rational pk = marginal3().at(k);
        if (pk.is_zero()) fail(Errc::ConditionOnZero, "conditioning on zero-probability symbol '" + c_.label(k) + "'");
        RationalMatrix m(a_.size(), std::vector<Rational>(b_.size()));
        for (std::size_t i = 0; i < a_.size(); ++i)
            for (std::size_t j = 0; j < b_.size(); ++j) m[i][j] = p_[i][j][k] / pk;
        return JointPMF(a_, b_, std::move(m));
    }

private:
    Alphabet a_, b_, c_;
    std::vector<RationalMatrix> p_;
};

/// Per-letter distortion d(x, x̂) between a source and a reproduction alphabet.
class DistortionMatrix {
public:
    DistortionMatrix() = default;
    DistortionMatrix(Alphabet source, Alphabet reproduction, RationalMatrix d)
        : source_(std::move(source)), repro_(std::move(reproduction)), d_(std::move(d))
    {
        if (d_.size() != source_.size()) fail(Errc::ValidationError, "distortion row count does not match source alphabet");
        for (std::size_t x = 0; x < d_.size(); ++x) {
            if (d_[x].size() != repro_.size())
                fail(Errc::ValidationError, "distortion column count does not match reproduction alphabet");
            for (std::size_t r = 0; r < d_[x].size(); ++r)
                if (d_[x][r].sign() < 0)
                    fail(Errc::NegativeEntry, "distortion entry (" + std::to_string(x) + "," + std::to_string(r) + ") is negative");
        }
    }

    /// 0 on the diagonal, 1 elsewhere; reproduction alphabet equals the source alphabet.
    static DistortionMatrix hamming(const Alphabet& a)
    {
        RationalMatrix d(a.size(), std::vector<Rational>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) d[i][j] = i == j ? 0 : 1;
        return DistortionMatrix(a, a, std::move(d));
    }

    const Alphabet& source() const { return source_; }
    const Alphabet& reproduction() const { return repro_; }
    std::size_t rows() const { return d_.size(); }
    std::size_t cols() const { return repro_.size(); }
    const Rational& at(SymbolIndex x, SymbolIndex r) const { return d_[x][r]; }

    /// Keeps only the listed source rows (used after zero-marginal stripping).
    DistortionMatrix restrict_rows(const std::vector<SymbolIndex>& keep, const Alphabet& new_source) const
    {
        RationalMatrix d;
        d.reserve(keep.size());
        for (auto k : keep) d.push_back(d_.at(k));
        return DistortionMatrix(new_source, repro_, std::move(d));
    }

private:
    Alphabet source_;
    Alphabet repro_;
    RationalMatrix d_;
};

// ---------------------------------------------------------------------------
// Validation and marginals

inline void validate(const JointPMF& pmf)
{
    Rational total;
    for (std::size_t x = 0; x < pmf.rows(); ++x) {
        for (std::size_t y = 0; y < pmf.cols(); ++y) {
            const auto& v = pmf.at(x, y);
            if (v.sign() < 0)
                fail(Errc::NegativeEntry, "entry (" + pmf.source().label(x) + "," + pmf.si().label(y) + ") = " + v.str());
            total += v;
        }
    }
    if (total != Rational(1)) fail(Errc::SumNotOne, "entries sum to " + total.str());
}

inline void validate(const TriplePMF& pmf)
{
    Rational total;
    for (std::size_t i = 0; i < pmf.first().size(); ++i)
        for (std::size_t j = 0; j < pmf.second().size(); ++j)
            for (std::size_t k = 0; k < pmf.third().size(); ++k) {
                const auto& v = pmf.at(i, j, k);
                if (v.sign() < 0)
                    fail(Errc::NegativeEntry, "entry (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                                  std::to_string(k) + ") = " + v.str());
                total += v;
            }
    if (total != Rational(1)) fail(Errc::SumNotOne, "entries sum to " + total.str());
}

inline std::vector<Rational> marginal_source(const JointPMF& pmf)
{
    std::vector<Rational> m(pmf.rows());
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y) m[x] += pmf.at(x, y);
    return m;
}

inline std::vector<Rational> marginal_si(const JointPMF& pmf)
{
    std::vector<Rational> m(pmf.cols());
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y) m[y] += pmf.at(x, y);
    return m;
}

/// P(· | y) over the source alphabet.
inline std::vector<Rational> conditional_given_si(const JointPMF& pmf, SymbolIndex y)
{
    Rational py;
    for (std::size_t x = 0; x < pmf.rows(); ++x) py += pmf.at(x, y);
    if (py.is_zero()) fail(Errc::ConditionOnZero, "SI symbol '" + pmf.si().label(y) + "' has zero probability");
    std::vector<Rational> c(pmf.rows());
    for (std::size_t x = 0; x < pmf.rows(); ++x) c[x] = pmf.at(x, y) / py;
    return c;
}

/// P(· | x) over the SI alphabet.
inline std::vector<Rational> conditional_given_source(const JointPMF& pmf, SymbolIndex x)
{
    Rational px;
    for (std::size_t y = 0; y < pmf.cols(); ++y) px += pmf.at(x, y);
    if (px.is_zero()) fail(Errc::ConditionOnZero, "source symbol '" + pmf.source().label(x) + "' has zero probability");
    std::vector<Rational> c(pmf.cols());
    for (std::size_t y = 0; y < pmf.cols(); ++y) c[y] = pmf.at(x, y) / px;
    return c;
}

/// Result of stripping zero-marginal symbols. `source_map[i]` is the original
/// index of normalized source symbol i; likewise `si_map`.
struct Normalized {
    JointPMF pmf;
    std::vector<SymbolIndex> source_map;
    std::vector<SymbolIndex> si_map;
};

inline Normalized normalize(const JointPMF& pmf)
{
    validate(pmf);
    auto px = marginal_source(pmf);
    auto py = marginal_si(pmf);
    Normalized out;
    std::vector<std::string> xs, ys;
    for (std::size_t x = 0; x < px.size(); ++x)
        if (!px[x].is_zero()) {
            out.source_map.push_back(x);
            xs.push_back(pmf.source().label(x));
        }
    for (std::size_t y = 0; y < py.size(); ++y)
        if (!py[y].is_zero()) {
            out.si_map.push_back(y);
            ys.push_back(pmf.si().label(y));
        }
    RationalMatrix m(xs.size(), std::vector<Rational>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) m[i][j] = pmf.at(out.source_map[i], out.si_map[j]);
    out.pmf = JointPMF(Alphabet(pmf.source().name(), std::move(xs)), Alphabet(pmf.si().name(), std::move(ys)), std::move(m));
    return out;
}

// ---------------------------------------------------------------------------
// Named generators

/// Uniform source on M symbols whose SI support is {x, x+1 mod M}, weight 1/2 each.
inline JointPMF typewriter(std::size_t m)
{
    if (m < 3) fail(Errc::DomainError, "typewriter needs M >= 3");
    RationalMatrix p(m, std::vector<Rational>(m));
    Rational w(1, static_cast<std::int64_t>(2 * m));
    for (std::size_t x = 0; x < m; ++x) {
        p[x][x] = w;
        p[x][(x + 1) % m] = w;
    }
    return JointPMF(Alphabet::numbered("X", m), Alphabet::numbered("Y", m), std::move(p));
}

/// Uniform source; Y equals X with probability 1-p and is any other symbol with p/(M-1).
inline JointPMF fully_connected(std::size_t m, const Rational& p)
{
    if (m < 2) fail(Errc::DomainError, "fully_connected needs M >= 2");
    if (p.sign() < 0 || p >= Rational(1)) fail(Errc::DomainError, "fully_connected needs 0 <= p < 1");
    auto mm = static_cast<std::int64_t>(m);
    Rational px(1, mm);
    Rational diag = px * (Rational(1) - p);
    Rational off = px * p / Rational(mm - 1);
    RationalMatrix t(m, std::vector<Rational>(m));
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) t[x][y] = x == y ? diag : off;
    return JointPMF(Alphabet::numbered("X", m), Alphabet::numbered("Y", m), std::move(t));
}

// ---------------------------------------------------------------------------
// Sampling

/// Reproducible 64-bit stream keyed by (seed, stream). Each stream is an
/// independently seeded std::mt19937_64, so per-trial streams never depend on
/// how trials are scheduled.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5a17u};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a finite distribution given as binary64 weights.
class DiscreteSampler {
public:
    DiscreteSampler() = default;
    explicit DiscreteSampler(const std::vector<double>& weights)
    {
        double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(total > 0)) fail(Errc::DomainError, "sampler weights must have positive mass");
        cdf_.resize(weights.size());
        double acc = 0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] < 0) fail(Errc::NegativeEntry, "negative sampler weight");
            acc += weights[i] / total;
            cdf_[i] = acc;
            if (weights[i] > 0) last_positive = i;
        }
        for (std::size_t i = last_positive; i < cdf_.size(); ++i) cdf_[i] = 1.0;
    }
    explicit DiscreteSampler(const std::vector<Rational>& weights) : DiscreteSampler(to_doubles(weights)) {}

    std::size_t operator()(Rng& rng) const
    {
        double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::size_t>(it - cdf_.begin());
    }

    std::size_t size() const { return cdf_.size(); }

private:
    static std::vector<double> to_doubles(const std::vector<Rational>& w)
    {
        std::vector<double> d;
        d.reserve(w.size());
        for (const auto& r : w) d.push_back(r.to_double());
        return d;
    }

    std::vector<double> cdf_;
};

/// Draws n i.i.d. (x, y) pairs; identical seeds give identical sequences.
inline std::vector<std::pair<SymbolIndex, SymbolIndex>> sample_iid(const JointPMF& pmf, std::size_t n, std::uint64_t seed)
{
    validate(pmf);
    std::vector<Rational> flat;
    flat.reserve(pmf.rows() * pmf.cols());
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y) flat.push_back(pmf.at(x, y));
    DiscreteSampler sampler(flat);
    Rng rng(seed);
    std::vector<std::pair<SymbolIndex, SymbolIndex>> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        auto k = sampler(rng);
        out.emplace_back(k / pmf.cols(), k % pmf.cols());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entropies (binary64, bits)

template <class Range>
double entropy_bits(const Range& probs)
{
    double h = 0;
    for (const auto& v : probs) {
        double p = to_double(v);
        if (p > 0) h -= p * std::log2(p);
    }
    return h;
}

/// H(X | Y) in bits for a joint pmf.
inline double conditional_entropy_bits(const JointPMF& pmf)
{
    double h = 0;
    auto py = marginal_si(pmf);
    for (std::size_t y = 0; y < pmf.cols(); ++y) {
        double pyd = py[y].to_double();
        if (pyd <= 0) continue;
        for (std::size_t x = 0; x < pmf.rows(); ++x) {
            double pxy = pmf.at(x, y).to_double();
            if (pxy > 0) h -= pxy * std::log2(pxy / pyd);
        }
    }
    return h;
}

} // namespace zdsi
