#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zdsi/codeword.hpp"
#include "zdsi/error.hpp"
#include "zdsi/partition.hpp"
#include "zdsi/prob.hpp"

namespace zdsi {

using VertexMask = std::uint64_t;

inline constexpr std::size_t kMaxGraphVertices = 64;
inline constexpr std::size_t kMaxChromaticVertices = 20;

/// Simple undirected graph on an alphabet, stored as adjacency bitmasks.
class CharacteristicGraph {
public:
    CharacteristicGraph() = default;
    explicit CharacteristicGraph(Alphabet vertices) : vertices_(std::move(vertices)), adj_(vertices_.size(), 0)
    {
        if (vertices_.size() > kMaxGraphVertices)
            fail(Errc::TooLarge, "graphs are limited to " + std::to_string(kMaxGraphVertices) + " vertices");
    }

    void add_edge(std::size_t u, std::size_t v)
    {
        if (u == v) return;
        adj_.at(u) |= VertexMask{1} << v;
        adj_.at(v) |= VertexMask{1} << u;
    }

    const Alphabet& vertices() const { return vertices_; }
    std::size_t size() const { return adj_.size(); }
    bool adjacent(std::size_t u, std::size_t v) const { return (adj_[u] >> v) & 1U; }
    VertexMask neighbours(std::size_t u) const { return adj_[u]; }
    std::size_t degree(std::size_t u) const { return static_cast<std::size_t>(std::popcount(adj_[u])); }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t u = 0; u < size(); ++u)
            for (std::size_t v = u + 1; v < size(); ++v)
                if (adjacent(u, v)) e.emplace_back(u, v);
        return e;
    }

    std::size_t edge_count() const
    {
        std::size_t d = 0;
        for (std::size_t u = 0; u < size(); ++u) d += degree(u);
        return d / 2;
    }

    friend bool operator==(const CharacteristicGraph& a, const CharacteristicGraph& b) { return a.adj_ == b.adj_; }

private:
    Alphabet vertices_;
    std::vector<VertexMask> adj_;
};

/// Edge (x, x') iff x != x' and some y has P(x,y) > 0 and P(x',y) > 0.
inline CharacteristicGraph build_characteristic_graph(const JointPMF& pmf)
{
    CharacteristicGraph g(pmf.source());
    for (std::size_t y = 0; y < pmf.cols(); ++y) {
        for (std::size_t a = 0; a < pmf.rows(); ++a) {
            if (pmf.at(a, y).sign() <= 0) continue;
            for (std::size_t b = a + 1; b < pmf.rows(); ++b)
                if (pmf.at(b, y).sign() > 0) g.add_edge(a, b);
        }
    }
    return g;
}

/// Characteristic graph of the cells of `f` with respect to the SI.
inline CharacteristicGraph induced_graph(const JointPMF& pmf, const Partition& f)
{
    return build_characteristic_graph(induced_pmf(pmf, f));
}

inline bool is_complete(const CharacteristicGraph& g)
{
    for (std::size_t u = 0; u < g.size(); ++u)
        if (g.degree(u) + 1 != g.size()) return false;
    return true;
}

/// One line "u v" per edge, using vertex labels.
inline std::string edge_list(const CharacteristicGraph& g)
{
    std::ostringstream os;
    for (auto [u, v] : g.edges()) os << g.vertices().label(u) << ' ' << g.vertices().label(v) << '\n';
    return os.str();
}

struct Coloring {
    std::vector<std::size_t> color;
    std::size_t count = 0;
};

inline bool is_proper(const CharacteristicGraph& g, const Coloring& c)
{
    if (c.color.size() != g.size()) return false;
    for (auto [u, v] : g.edges())
        if (c.color[u] == c.color[v]) return false;
    return true;
}

namespace detail {

inline Coloring relabel_by_first_use(const std::vector<std::size_t>& raw)
{
    auto p = Partition::from_labels(raw);
    return Coloring{p.rgs(), p.cell_count()};
}

// Search order: degree descending, ties by index.
inline std::vector<std::size_t> degree_order(const CharacteristicGraph& g)
{
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.degree(a) > g.degree(b); });
    return order;
}

inline bool color_with(const CharacteristicGraph& g, const std::vector<std::size_t>& order, std::size_t k,
                       std::size_t pos, std::size_t used, std::vector<std::size_t>& color)
{
    if (pos == order.size()) return true;
    auto v = order[pos];
    std::size_t limit = std::min(k, used + 1);
    for (std::size_t c = 0; c < limit; ++c) {
        bool ok = true;
        for (std::size_t q = 0; q < pos && ok; ++q)
            if (color[order[q]] == c && g.adjacent(v, order[q])) ok = false;
        if (!ok) continue;
        color[v] = c;
        if (color_with(g, order, k, pos + 1, std::max(used, c + 1), color)) return true;
    }
    return false;
}

} // namespace detail

/// Exact chromatic number with a proper witness coloring using exactly that many colors.
inline Coloring chromatic_number(const CharacteristicGraph& g)
{
    if (g.size() > kMaxChromaticVertices)
        fail(Errc::TooLarge, "exact chromatic number limited to " + std::to_string(kMaxChromaticVertices) + " vertices");
    if (g.size() == 0) return {};
    auto order = detail::degree_order(g);

    // Greedy upper bound.
    std::vector<std::size_t> greedy(g.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto v = order[i];
        std::vector<bool> taken(g.size() + 1, false);
        for (std::size_t j = 0; j < i; ++j)
            if (g.adjacent(v, order[j])) taken[greedy[order[j]]] = true;
        std::size_t c = 0;
        while (taken[c]) ++c;
        greedy[v] = c;
    }
    Coloring best = detail::relabel_by_first_use(greedy);

    // Greedy clique lower bound.
    VertexMask clique = 0;
    std::size_t lower = 0;
    for (auto v : order) {
        if ((g.neighbours(v) & clique) == clique) {
            clique |= VertexMask{1} << v;
            ++lower;
        }
    }

    for (std::size_t k = std::max<std::size_t>(lower, 1); k < best.count; ++k) {
        std::vector<std::size_t> color(g.size(), 0);
        if (detail::color_with(g, order, k, 0, 0, color)) return detail::relabel_by_first_use(color);
    }
    return best;
}

/// True iff codewords across every edge are neither equal nor prefixes of one another.
inline bool check_feasible(const std::vector<Codeword>& assignment, const CharacteristicGraph& g)
{
    if (assignment.size() != g.size()) return false;
    for (auto [u, v] : g.edges())
        if (!prefix_compatible(assignment[u], assignment[v])) return false;
    return true;
}

/// Color classes are the groups of symbols sharing a codeword.
inline Coloring coloring_of_protocol(const std::vector<Codeword>& codewords, const CharacteristicGraph& g)
{
    if (!check_feasible(codewords, g)) fail(Errc::InfeasibleProtocol, "protocol violates the prefix condition on an edge");
    std::map<Codeword, std::size_t> ids;
    std::vector<std::size_t> raw;
    raw.reserve(codewords.size());
    for (const auto& c : codewords) {
        auto [it, inserted] = ids.try_emplace(c, ids.size());
        raw.push_back(it->second);
    }
    return detail::relabel_by_first_use(raw);
}

inline Coloring coloring_of_protocol(const RIProtocol& protocol, const CharacteristicGraph& g)
{
    return coloring_of_protocol(protocol.codewords, g);
}

} // namespace zdsi
