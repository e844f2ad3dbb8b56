#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "dynamic_graph.hpp"
#include "graph.hpp"
#include "graph_ops.hpp"
#include "morphism.hpp"

namespace anonet {

inline DirectedMultigraph ring_directed(int n, bool self_loops = false) {
    if (n < 1) throw ValidationError("ring needs at least one vertex");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    if (self_loops && n > 1)
        for (int i = 0; i < n; ++i) edges.push_back({i, i});
    return DirectedMultigraph(n, std::move(edges));
}

// Clockwise edges get port 1, counterclockwise port 2; on two vertices the
// directions survive as parallel edges.
inline DirectedMultigraph ring_bidirectional(int n) {
    if (n < 2) throw ValidationError("bidirectional ring needs at least two vertices");
    std::vector<Edge> edges;
    std::vector<int> ports;
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, (i + 1) % n});
        ports.push_back(1);
        edges.push_back({i, (i + n - 1) % n});
        ports.push_back(2);
    }
    DirectedMultigraph g(n, std::move(edges));
    g.set_ports(std::move(ports));
    return g;
}

// Vertex 0 is the hub; port 1..k outward by leaf order, port 1 back inward.
inline DirectedMultigraph star_bidirectional(int leaves) {
    if (leaves < 1) throw ValidationError("star needs at least one leaf");
    std::vector<Edge> edges;
    std::vector<int> ports;
    for (int l = 1; l <= leaves; ++l) {
        edges.push_back({0, l});
        ports.push_back(l);
        edges.push_back({l, 0});
        ports.push_back(1);
    }
    DirectedMultigraph g(leaves + 1, std::move(edges));
    g.set_ports(std::move(ports));
    return g;
}

inline DirectedMultigraph complete_graph(int n, bool self_loops = false) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j || self_loops) edges.push_back({i, j});
    return DirectedMultigraph(n, std::move(edges));
}

inline DirectedMultigraph loops_only(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, i});
    return DirectedMultigraph(n, std::move(edges));
}

// Uniformly random valid port labeling: a shuffle of 1..outdeg per vertex.
inline DirectedMultigraph with_random_ports(DirectedMultigraph g, std::mt19937_64& rng) {
    std::vector<int> ports(static_cast<std::size_t>(g.m()), 0);
    for (int v = 0; v < g.n(); ++v) {
        std::vector<int> out = g.out_edges(v);
        std::vector<int> labels(out.size());
        std::iota(labels.begin(), labels.end(), 1);
        std::shuffle(labels.begin(), labels.end(), rng);
        for (std::size_t k = 0; k < out.size(); ++k)
            ports[static_cast<std::size_t>(out[k])] = labels[k];
    }
    g.set_ports(std::move(ports));
    return g;
}

namespace gen_detail {

// adjacency bitmask of a simple loopless digraph, minimized over relabelings
inline std::uint64_t canonical_mask(int n, std::uint64_t mask) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = ~std::uint64_t{0};
    do {
        std::uint64_t m = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (mask & (std::uint64_t{1} << (i * n + j)))
                    m |= std::uint64_t{1} << (perm[static_cast<std::size_t>(i)] * n +
                                              perm[static_cast<std::size_t>(j)]);
            }
        best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline DirectedMultigraph graph_of_mask(int n, std::uint64_t mask) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (mask & (std::uint64_t{1} << (i * n + j)))) edges.push_back({i, j});
    return DirectedMultigraph(n, std::move(edges));
}

}  // namespace gen_detail

// Every strongly connected simple loopless digraph on n vertices, one per
// isomorphism class. Exhausts all 2^(n(n-1)) labeled graphs, so keep n small
// (n <= 4 is instant, n = 5 takes a few seconds).
inline std::vector<DirectedMultigraph> all_strongly_connected_digraphs(int n) {
    if (n < 1 || n > 5) throw ValidationError("exhaustive enumeration supports 1 <= n <= 5");
    std::vector<DirectedMultigraph> out;
    std::set<std::uint64_t> seen;
    std::uint64_t total = std::uint64_t{1} << (n * (n - 1));
    for (std::uint64_t compact = 0; compact < total; ++compact) {
        // spread the n(n-1) off-diagonal bits onto the n*n grid
        std::uint64_t mask = 0;
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (compact & (std::uint64_t{1} << bit)) mask |= std::uint64_t{1} << (i * n + j);
                ++bit;
            }
        DirectedMultigraph g = gen_detail::graph_of_mask(n, mask);
        if (!is_strongly_connected(g)) continue;
        if (seen.insert(gen_detail::canonical_mask(n, mask)).second) out.push_back(std::move(g));
    }
    return out;
}

inline DirectedMultigraph random_strongly_connected(int n, std::mt19937_64& rng,
                                                    double extra_edge_prob = 0.3,
                                                    bool self_loops = false) {
    if (n < 1) throw ValidationError("graph needs at least one vertex");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<int, int>> picked;
    for (int i = 0; i < n && n > 1; ++i)
        picked.emplace(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>((i + 1) % n)]);
    std::bernoulli_distribution flip(extra_edge_prob);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && flip(rng)) picked.emplace(i, j);
    std::vector<Edge> edges;
    for (const auto& [s, d] : picked) edges.push_back({s, d});
    if (self_loops || n == 1)
        for (int i = 0; i < n; ++i) edges.push_back({i, i});
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.src, a.dst) < std::pair(b.src, b.dst); });
    return DirectedMultigraph(n, std::move(edges));
}

inline DirectedMultigraph random_symmetric_connected(int n, std::mt19937_64& rng,
                                                     double extra_edge_prob = 0.3,
                                                     bool self_loops = false) {
    if (n < 1) throw ValidationError("graph needs at least one vertex");
    std::set<std::pair<int, int>> und;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        int u = pick(rng);
        und.emplace(std::min(u, v), std::max(u, v));
    }
    std::bernoulli_distribution flip(extra_edge_prob);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (flip(rng)) und.emplace(i, j);
    std::vector<Edge> edges;
    for (const auto& [a, b] : und) {
        edges.push_back({a, b});
        edges.push_back({b, a});
    }
    if (self_loops || n == 1)
        for (int i = 0; i < n; ++i) edges.push_back({i, i});
    return DirectedMultigraph(n, std::move(edges));
}

// Periodic schedule of random self-looped rounds whose measured dynamic
// diameter equals exactly the requested value; resamples until it fits.
inline DynamicGraph random_dynamic_with_diameter(int n, int target_diameter, std::mt19937_64& rng,
                                                 int max_attempts = 20000) {
    if (n < 1 || target_diameter < 1) throw ValidationError("need n >= 1 and diameter >= 1");
    if (n == 1 || target_diameter == 1) {
        // a complete round every round has diameter one; nothing to search
        if (target_diameter == 1) {
            DynamicGraph d(complete_graph(n, true));
            ANONET_INVARIANT(dynamic_diameter(d, 4) == std::optional<int>(1), "complete rounds");
            return d;
        }
        throw ValidationError("one agent always has dynamic diameter one");
    }
    std::uniform_int_distribution<int> cycle_len(target_diameter, 2 * target_diameter);
    std::bernoulli_distribution flip(n <= 3 ? 0.5 : 0.35);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        int len = cycle_len(rng);
        std::vector<DirectedMultigraph> cycle;
        for (int t = 0; t < len; ++t) {
            std::vector<Edge> edges;
            for (int i = 0; i < n; ++i) edges.push_back({i, i});
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j && flip(rng)) edges.push_back({i, j});
            cycle.emplace_back(n, std::move(edges));
        }
        DynamicGraph d({}, std::move(cycle));
        if (dynamic_diameter(d, 4 * len + 4 * target_diameter + 8) ==
            std::optional<int>(target_diameter))
            return d;
    }
    throw ValidationError("no schedule with the requested dynamic diameter found");
}

// Quotient of the directed n-ring onto the directed p-ring, p dividing n:
// vertices map mod p, the edge leaving i maps to the edge leaving i mod p.
inline Fibration ring_fibration(int n, int p) {
    if (p < 1 || n < p || n % p != 0)
        throw ValidationError("ring fibration needs p >= 1 dividing n");
    DirectedMultigraph total = ring_directed(n);
    DirectedMultigraph base = ring_directed(p);
    GraphMorphism phi;
    for (int i = 0; i < n; ++i) {
        phi.vertex_map.push_back(i % p);
        phi.edge_map.push_back(i % p);
    }
    return make_fibration(std::move(total), std::move(base), std::move(phi));
}

}  // namespace anonet
