#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "zdsi/codeword.hpp"
#include "zdsi/error.hpp"
#include "zdsi/graph.hpp"
#include "zdsi/prob.hpp"

namespace zdsi {

/// Σ P(x)·|φ(x)|, exact.
template <class Weight>
Weight avg_length(const std::vector<Codeword>& assignment, const std::vector<Weight>& p)
{
    if (assignment.size() != p.size()) fail(Errc::ValidationError, "assignment and distribution sizes differ");
    Weight total{};
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * Weight(static_cast<std::int64_t>(assignment[i].length()));
    return total;
}

template <class Weight>
struct HuffmanCode {
    std::vector<Codeword> codewords;
    Weight average_length{};
};

/// Binary Huffman code. The two smallest weights merge first, ties go to the
/// lowest original symbol index, and the smaller node takes bit 0. Zero-weight
/// symbols are left out of the tree and get the empty codeword.
template <class Weight>
HuffmanCode<Weight> huffman(const std::vector<Weight>& p)
{
    if (p.empty()) fail(Errc::EmptyInput, "huffman needs at least one symbol");
    struct Node {
        Weight w;
        std::size_t key; // lowest original index in the subtree
        std::vector<std::size_t> symbols;
    };
    std::vector<Node> live;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < Weight(0)) fail(Errc::NegativeEntry, "negative probability in huffman input");
        if (p[i] > Weight(0)) live.push_back(Node{p[i], i, {i}});
    }
    if (live.empty()) fail(Errc::DomainError, "huffman input has no positive mass");

    std::vector<std::string> code(p.size());
    auto smaller = [](const Node& a, const Node& b) { return a.w < b.w || (a.w == b.w && a.key < b.key); };
    while (live.size() > 1) {
        std::sort(live.begin(), live.end(), smaller);
        Node lo = std::move(live[0]);
        Node hi = std::move(live[1]);
        live.erase(live.begin(), live.begin() + 2);
        for (auto s : lo.symbols) code[s].insert(code[s].begin(), '0');
        for (auto s : hi.symbols) code[s].insert(code[s].begin(), '1');
        Node merged{lo.w + hi.w, std::min(lo.key, hi.key), std::move(lo.symbols)};
        merged.symbols.insert(merged.symbols.end(), hi.symbols.begin(), hi.symbols.end());
        live.push_back(std::move(merged));
    }

    HuffmanCode<Weight> out;
    for (auto& c : code) out.codewords.emplace_back(std::move(c));
    out.average_length = avg_length(out.codewords, p);
    return out;
}

struct RISolverOptions {
    /// Largest positive-probability source alphabet solved exactly.
    std::size_t max_symbols = 10;
};

struct RISolution {
    RIProtocol protocol;
    Rational length; // L_Y(X)
};

namespace detail {

// Exact minimum of Σ w(x)|φ(x)| over feasible assignments, by dynamic programming
// over vertex subsets. For a set S of symbols placed under a common prefix,
// every symbol isolated in G[S] takes the prefix itself (it constrains nobody),
// and the rest split into the 0-branch and the 1-branch. Each remaining symbol
// pays one bit for the branching level:
//
//   cost(S) = w(R) + min over splits R = A ∪ B, A,B ≠ ∅ of cost(A) + cost(B)
//
// where R is S minus its isolated vertices. A contains the lowest element of R,
// which fixes the global 0/1 relabeling symmetry. A split with an empty side is
// never needed: it only lengthens every codeword by the same bit.
template <class Cost>
std::vector<Codeword> solve_subset_dp(const std::vector<VertexMask>& adj, const std::vector<Cost>& w)
{
    const std::size_t n = adj.size();
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<Cost> wsum(full + 1, Cost(0));
    for (std::size_t s = 1; s <= full; ++s) {
        auto low = static_cast<std::size_t>(std::countr_zero(s));
        wsum[s] = wsum[s & (s - 1)] + w[low];
    }

    auto isolated_in = [&](std::size_t s) {
        std::size_t iso = 0;
        for (std::size_t rest = s; rest; rest &= rest - 1) {
            auto v = static_cast<std::size_t>(std::countr_zero(rest));
            if ((adj[v] & s) == 0) iso |= std::size_t{1} << v;
        }
        return iso;
    };

    std::vector<Cost> cost(full + 1, Cost(0));
    std::vector<std::size_t> choice(full + 1, 0); // the 0-branch subset A
    for (std::size_t s = 1; s <= full; ++s) {
        std::size_t r = s & ~isolated_in(s);
        if (r == 0) continue;
        std::size_t low = r & (~r + 1);
        std::size_t others = r ^ low;
        bool have = false;
        Cost best{};
        std::size_t best_a = 0;
        // Submasks of `others` in decreasing order; B = r ^ a must be nonempty.
        std::size_t sub = others;
        while (true) {
            std::size_t a = low | sub;
            std::size_t b = r ^ a;
            if (b != 0) {
                Cost c = cost[a] + cost[b];
                if (!have || c < best) {
                    best = c;
                    best_a = a;
                    have = true;
                }
            }
            if (sub == 0) break;
            sub = (sub - 1) & others;
        }
        cost[s] = wsum[r] + best;
        choice[s] = best_a;
    }

    std::vector<std::string> code(n);
    std::vector<std::pair<std::size_t, std::string>> stack{{full, std::string()}};
    while (!stack.empty()) {
        auto [s, prefix] = stack.back();
        stack.pop_back();
        std::size_t iso = isolated_in(s);
        for (std::size_t rest = iso; rest; rest &= rest - 1) code[static_cast<std::size_t>(std::countr_zero(rest))] = prefix;
        std::size_t r = s & ~iso;
        if (r == 0) continue;
        std::size_t a = choice[s];
        stack.emplace_back(r ^ a, prefix + '1');
        stack.emplace_back(a, prefix + '0');
    }
    std::vector<Codeword> out;
    out.reserve(n);
    for (auto& c : code) out.emplace_back(std::move(c));
    return out;
}

} // namespace detail

/// Minimum-average-length RI protocol for X with decoder SI Y, and L_Y(X).
inline RISolution solve_ri(const JointPMF& pmf, const RISolverOptions& opts = {})
{
    validate(pmf);
    auto px = marginal_source(pmf);
    auto g = build_characteristic_graph(pmf);

    std::vector<std::size_t> keep;
    for (std::size_t x = 0; x < px.size(); ++x)
        if (!px[x].is_zero()) keep.push_back(x);
    if (keep.size() > opts.max_symbols)
        fail(Errc::TooLarge, "exact RI solver capped at " + std::to_string(opts.max_symbols) + " symbols (got " +
                                 std::to_string(keep.size()) + "); raise the cap knowingly");
    if (keep.size() >= 8 * sizeof(std::size_t) - 1) fail(Errc::TooLarge, "alphabet too large for subset enumeration");

    std::vector<VertexMask> adj(keep.size(), 0);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (g.adjacent(keep[i], keep[j])) adj[i] |= VertexMask{1} << j;

    // Integer weights over the common denominator.
    BigInt scale = 1;
    for (auto x : keep) scale = boost::multiprecision::lcm(scale, px[x].den());
    std::vector<Codeword> sub;
    BigInt bound = scale * BigInt(static_cast<std::uint64_t>(keep.size() + 1));
    if (bound < BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        std::vector<std::int64_t> w;
        for (auto x : keep) w.push_back((px[x].num() * (scale / px[x].den())).convert_to<std::int64_t>());
        sub = detail::solve_subset_dp(adj, w);
    } else {
        std::vector<BigInt> w;
        for (auto x : keep) w.push_back(px[x].num() * (scale / px[x].den()));
        sub = detail::solve_subset_dp(adj, w);
    }

    RISolution out;
    out.protocol.codewords.assign(pmf.rows(), Codeword());
    for (std::size_t i = 0; i < keep.size(); ++i) out.protocol.codewords[keep[i]] = sub[i];
    out.protocol.average_length = avg_length(out.protocol.codewords, px);
    out.length = out.protocol.average_length;
    return out;
}

/// L_Y(X|Z) = Σ_z P(z) L_Y(X | Z = z) for a triple pmf indexed [x][y][z].
inline Rational solve_ri_conditional(const TriplePMF& xyz, const RISolverOptions& opts = {})
{
    validate(xyz);
    auto pz = xyz.marginal3();
    Rational total;
    for (std::size_t z = 0; z < pz.size(); ++z) {
        if (pz[z].is_zero()) continue;
        total += pz[z] * solve_ri(xyz.conditional12_given3(z), opts).length;
    }
    return total;
}

/// L(X|Z) = Σ_z P(z) L(P(·|z)) for a pair pmf with rows X and columns Z.
inline Rational conditional_huffman(const JointPMF& xz)
{
    validate(xz);
    auto pz = marginal_si(xz);
    Rational total;
    for (std::size_t z = 0; z < pz.size(); ++z) {
        if (pz[z].is_zero()) continue;
        total += pz[z] * huffman(conditional_given_si(xz, z)).average_length;
    }
    return total;
}

} // namespace zdsi
