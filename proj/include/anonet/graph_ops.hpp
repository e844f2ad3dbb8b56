#pragma once

#include <deque>
#include <optional>

#include "anonet/dynamic_graph.hpp"
#include "anonet/graph.hpp"

namespace anonet {

// Relation composition: (i,j) present iff some k has (i,k) in a and (k,j) in b
// ("first step in a, then in b"). Result is simple. The associated graph of
// the backward matrix product A(t')x...xA(t) is product(G(t), ..., G(t')).
inline DirectedMultigraph product(const DirectedMultigraph& a, const DirectedMultigraph& b) {
    if (a.n() != b.n()) throw ValidationError("product of graphs with different vertex counts");
    int n = a.n();
    std::vector<std::vector<bool>> bstep(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    for (const Edge& e : b.edges())
        bstep[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(e.dst)] = true;
    std::vector<std::vector<bool>> out(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    for (const Edge& e : a.edges())
        for (int j = 0; j < n; ++j)
            if (bstep[static_cast<std::size_t>(e.dst)][static_cast<std::size_t>(j)])
                out[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(j)] = true;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                edges.push_back({i, j});
    return DirectedMultigraph(n, std::move(edges));
}

// Complete off the diagonal; self-loops are not required (with mandatory
// dynamic self-loops the diagonal is present in window products anyway).
inline bool is_complete(const DirectedMultigraph& g) {
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            if (i != j && g.multiplicity(i, j) == 0) return false;
    return true;
}

inline std::vector<int> bfs_distances(const DirectedMultigraph& g, int src) {
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    std::deque<int> q{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e : g.out_edges(v)) {
            int w = g.edge(e).dst;
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

inline bool is_strongly_connected(const DirectedMultigraph& g) {
    if (g.n() == 0) return false;
    for (int v = 0; v < g.n(); ++v)
        for (int d : bfs_distances(g, v))
            if (d < 0) return false;
    return true;
}

// Max BFS distance over ordered pairs; nullopt when not strongly connected.
inline std::optional<int> diameter(const DirectedMultigraph& g) {
    int best = 0;
    for (int v = 0; v < g.n(); ++v)
        for (int d : bfs_distances(g, v)) {
            if (d < 0) return std::nullopt;
            best = std::max(best, d);
        }
    return best;
}

// Smallest D <= horizon such that every window G(t)o...oG(t+D-1) with
// t in 1..horizon is complete; nullopt if none qualifies.
inline std::optional<int> dynamic_diameter(const DynamicGraph& dg, int horizon) {
    if (horizon < 1) throw ValidationError("dynamic diameter needs a positive horizon");
    if (dg.n() == 1) return 1;
    for (int d = 1; d <= horizon; ++d) {
        bool ok = true;
        for (int t = 1; t <= horizon && ok; ++t) {
            DirectedMultigraph w = dg.at(t);
            for (int k = 1; k < d; ++k) w = product(w, dg.at(t + k));
            ok = is_complete(w);
        }
        if (ok) return d;
    }
    return std::nullopt;
}

}  // namespace anonet
