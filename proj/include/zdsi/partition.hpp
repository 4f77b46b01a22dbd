#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/prob.hpp"

namespace zdsi {

/// Set partition of {0..n-1} in restricted-growth form: `cell_of(i)` is the cell
/// holding element i, cell indices are contiguous from 0, and each new cell index
/// first appears in increasing order.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::size_t> rgs) : rgs_(std::move(rgs))
    {
        std::size_t next = 0;
        for (auto c : rgs_) {
            if (c > next) fail(Errc::ValidationError, "not a restricted-growth string");
            if (c == next) ++next;
        }
        cells_ = next;
    }

    static Partition singletons(std::size_t n)
    {
        std::vector<std::size_t> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = i;
        return Partition(std::move(r));
    }

    static Partition single_cell(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

    /// Builds the canonical form from arbitrary cell labels.
    static Partition from_labels(const std::vector<std::size_t>& labels)
    {
        std::vector<std::size_t> map;
        std::vector<std::size_t> seen;
        std::vector<std::size_t> r;
        r.reserve(labels.size());
        for (auto l : labels) {
            std::size_t k = 0;
            while (k < seen.size() && seen[k] != l) ++k;
            if (k == seen.size()) seen.push_back(l);
            r.push_back(k);
        }
        return Partition(std::move(r));
    }

    static Partition from_cells(std::size_t n, const std::vector<std::vector<std::size_t>>& cells)
    {
        std::vector<std::size_t> labels(n, static_cast<std::size_t>(-1));
        for (std::size_t c = 0; c < cells.size(); ++c)
            for (auto i : cells[c]) {
                if (i >= n || labels[i] != static_cast<std::size_t>(-1))
                    fail(Errc::ValidationError, "cells do not form a partition");
                labels[i] = c;
            }
        for (auto l : labels)
            if (l == static_cast<std::size_t>(-1)) fail(Errc::ValidationError, "cells do not cover the alphabet");
        return from_labels(labels);
    }

    std::size_t size() const { return rgs_.size(); }
    std::size_t cell_count() const { return cells_; }
    std::size_t cell_of(std::size_t i) const { return rgs_[i]; }
    const std::vector<std::size_t>& rgs() const { return rgs_; }

    std::vector<std::vector<std::size_t>> cells() const
    {
        std::vector<std::vector<std::size_t>> c(cells_);
        for (std::size_t i = 0; i < rgs_.size(); ++i) c[rgs_[i]].push_back(i);
        return c;
    }

    /// Restricted-growth string with '-' separators, e.g. "0-1-0-2".
    std::string str() const
    {
        std::string s;
        for (std::size_t i = 0; i < rgs_.size(); ++i) {
            if (i) s += '-';
            s += std::to_string(rgs_[i]);
        }
        return s;
    }

    /// Cells written with alphabet labels, e.g. "{1,4}{2}{3}{5}".
    std::string describe(const Alphabet& a) const
    {
        std::string s;
        for (const auto& cell : cells()) {
            s += '{';
            for (std::size_t k = 0; k < cell.size(); ++k) {
                if (k) s += ',';
                s += a.label(cell[k]);
            }
            s += '}';
        }
        return s;
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::size_t> rgs_;
    std::size_t cells_ = 0;
};

inline constexpr std::size_t kMaxPartitionAlphabet = 12;

/// Streams every set partition of an n-element set exactly once, in
/// restricted-growth lexicographic order.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(std::size_t n, std::size_t max_n = kMaxPartitionAlphabet) : n_(n)
    {
        if (n > max_n) fail(Errc::TooLarge, "partition enumeration capped at " + std::to_string(max_n) + " symbols");
        if (n == 0) fail(Errc::EmptyInput, "cannot partition an empty alphabet");
        a_.assign(n, 0);
        b_.assign(n, 1); // b_[i] = 1 + max(a_[0..i-1])
    }

    /// Next partition, or nullopt once all Bell(n) have been produced.
    std::optional<Partition> next()
    {
        if (done_) return std::nullopt;
        if (!started_) {
            started_ = true;
            return Partition(a_);
        }
        // Find the rightmost position that can be incremented.
        std::size_t i = n_;
        while (i-- > 1) {
            if (a_[i] < b_[i]) break;
        }
        if (i == 0) {
            done_ = true;
            return std::nullopt;
        }
        ++a_[i];
        for (std::size_t j = i + 1; j < n_; ++j) {
            a_[j] = 0;
            b_[j] = std::max(b_[j - 1], a_[j - 1] + 1);
        }
        return Partition(a_);
    }

private:
    std::size_t n_;
    std::vector<std::size_t> a_;
    std::vector<std::size_t> b_;
    bool started_ = false;
    bool done_ = false;
};

inline std::vector<Partition> all_partitions(std::size_t n, std::size_t max_n = kMaxPartitionAlphabet)
{
    std::vector<Partition> out;
    PartitionEnumerator e(n, max_n);
    while (auto p = e.next()) out.push_back(std::move(*p));
    return out;
}

/// P(z, y) = sum over x in cell z of P(x, y).
inline JointPMF induced_pmf(const JointPMF& pmf, const Partition& f)
{
    if (f.size() != pmf.rows()) fail(Errc::ValidationError, "partition does not cover the source alphabet");
    RationalMatrix m(f.cell_count(), std::vector<Rational>(pmf.cols()));
    for (std::size_t x = 0; x < pmf.rows(); ++x)
        for (std::size_t y = 0; y < pmf.cols(); ++y) m[f.cell_of(x)][y] += pmf.at(x, y);
    std::vector<std::string> labels;
    for (const auto& cell : f.cells()) {
        std::string s = "{";
        for (std::size_t k = 0; k < cell.size(); ++k) {
            if (k) s += ',';
            s += pmf.source().label(cell[k]);
        }
        labels.push_back(s + "}");
    }
    return JointPMF(Alphabet("Z", std::move(labels)), pmf.si(), std::move(m));
}

} // namespace zdsi
