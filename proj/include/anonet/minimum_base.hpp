#pragma once

#include <map>
#include <tuple>

#include "anonet/graph_ops.hpp"
#include "anonet/morphism.hpp"

namespace anonet {

// Which per-vertex/per-edge data the refinement respects. Valuations, ports
// and leader masks present on the graph are used by default; the outdegree
// is only a class invariant under the outdegree-aware (and port) models.
struct RefineOptions {
    bool use_valuation = true;
    bool use_outdeg = false;
    bool use_ports = true;
    bool use_leaders = true;
};

namespace detail {

// Coarsest partition stable under in-neighborhood refinement: vertices stay
// together while their initial keys and their multisets of
// (in-neighbor class, port) pairs agree. Classes are returned as per-vertex
// ids, renumbered canonically by (initial key, smallest member).
inline std::vector<int> stable_partition_classes(const DirectedMultigraph& g,
                                                 const RefineOptions& opt) {
    int n = g.n();
    using Key = std::tuple<int, int, int>;  // valuation rank, od, leader
    std::vector<Key> key0(static_cast<std::size_t>(n), Key{0, 0, 0});
    if (opt.use_valuation && g.valuation()) {
        std::map<Value, int> rank;
        for (const Value& v : *g.valuation()) rank.emplace(v, 0);
        int r = 0;
        for (auto& [v, k] : rank) k = r++;
        for (int v = 0; v < n; ++v)
            std::get<0>(key0[static_cast<std::size_t>(v)]) = rank.at((*g.valuation())[static_cast<std::size_t>(v)]);
    }
    if (opt.use_outdeg)
        for (int v = 0; v < n; ++v) std::get<1>(key0[static_cast<std::size_t>(v)]) = g.send_degree(v);
    if (opt.use_leaders && g.leaders())
        for (int v = 0; v < n; ++v)
            std::get<2>(key0[static_cast<std::size_t>(v)]) = (*g.leaders())[static_cast<std::size_t>(v)] ? 1 : 0;

    std::vector<int> cls(static_cast<std::size_t>(n));
    {
        std::map<Key, int> ids;
        for (int v = 0; v < n; ++v) ids.emplace(key0[static_cast<std::size_t>(v)], 0);
        int next = 0;
        for (auto& [k, id] : ids) id = next++;
        for (int v = 0; v < n; ++v) cls[static_cast<std::size_t>(v)] = ids.at(key0[static_cast<std::size_t>(v)]);
    }

    for (;;) {
        using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
        std::vector<Sig> sig(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<std::pair<int, int>> in;
            for (int e : g.in_edges(v))
                in.emplace_back(cls[static_cast<std::size_t>(g.edge(e).src)],
                                opt.use_ports ? g.port(e) : 0);
            std::sort(in.begin(), in.end());
            sig[static_cast<std::size_t>(v)] = {cls[static_cast<std::size_t>(v)], std::move(in)};
        }
        std::map<Sig, int> ids;
        for (int v = 0; v < n; ++v) ids.emplace(sig[static_cast<std::size_t>(v)], 0);
        if (static_cast<int>(ids.size()) == 1 + *std::max_element(cls.begin(), cls.end())) break;
        int next = 0;
        for (auto& [s, id] : ids) id = next++;
        for (int v = 0; v < n; ++v) cls[static_cast<std::size_t>(v)] = ids.at(sig[static_cast<std::size_t>(v)]);
    }

    // Canonical renumbering: order classes by (initial key, smallest member).
    int k = 1 + *std::max_element(cls.begin(), cls.end());
    std::vector<std::pair<std::pair<Key, int>, int>> order;
    std::vector<int> smallest(static_cast<std::size_t>(k), n);
    for (int v = n - 1; v >= 0; --v) smallest[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])] = v;
    for (int c = 0; c < k; ++c)
        order.push_back({{key0[static_cast<std::size_t>(smallest[static_cast<std::size_t>(c)])],
                          smallest[static_cast<std::size_t>(c)]},
                         c});
    std::sort(order.begin(), order.end());
    std::vector<int> renum(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) renum[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second)] = i;
    for (int v = 0; v < n; ++v) cls[static_cast<std::size_t>(v)] = renum[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])];
    return cls;
}

}  // namespace detail

// Builds the quotient of g by its coarsest stable partition, together with
// the quotient fibration. This is the minimum base: the unique
// fibration-prime graph g fibres over.
inline Fibration minimum_base(const DirectedMultigraph& g, const RefineOptions& opt = {}) {
    if (g.n() == 0) throw ValidationError("minimum base of an empty graph");
    if (!is_strongly_connected(g))
        throw ValidationError("minimum base requires a strongly connected graph");
    std::vector<int> cls = detail::stable_partition_classes(g, opt);
    int k = 1 + *std::max_element(cls.begin(), cls.end());

    std::vector<int> rep(static_cast<std::size_t>(k), -1);
    for (int v = 0; v < g.n(); ++v)
        if (rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])] < 0)
            rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])] = v;

    // Base edges: each member of class K sees the same multiset of
    // (source class, port) in-edges; materialize the representative's.
    std::vector<Edge> bedges;
    std::vector<int> bports;
    bool with_ports = opt.use_ports && g.ports().has_value();
    for (int K = 0; K < k; ++K) {
        int v = rep[static_cast<std::size_t>(K)];
        std::vector<std::pair<int, int>> in;
        for (int e : g.in_edges(v))
            in.emplace_back(cls[static_cast<std::size_t>(g.edge(e).src)], with_ports ? g.port(e) : 0);
        std::sort(in.begin(), in.end());
        for (const auto& [J, p] : in) {
            bedges.push_back({J, K});
            bports.push_back(p);
        }
    }
    DirectedMultigraph base(k, bedges);

    if (opt.use_valuation && g.valuation()) {
        std::vector<Value> bvals;
        for (int K = 0; K < k; ++K)
            bvals.push_back((*g.valuation())[static_cast<std::size_t>(rep[static_cast<std::size_t>(K)])]);
        base.set_valuation(std::move(bvals));
    }
    if (opt.use_leaders && g.leaders()) {
        std::vector<bool> bl;
        for (int K = 0; K < k; ++K)
            bl.push_back((*g.leaders())[static_cast<std::size_t>(rep[static_cast<std::size_t>(K)])]);
        base.set_leaders(std::move(bl));
    }
    // Record the common outdegree when it is constant on every class; it
    // always is under use_outdeg, and under ports (coverings).
    {
        std::vector<int> b(static_cast<std::size_t>(k), -1);
        bool uniform = true;
        for (int v = 0; v < g.n() && uniform; ++v) {
            int K = cls[static_cast<std::size_t>(v)];
            int d = g.send_degree(v);
            if (b[static_cast<std::size_t>(K)] < 0) b[static_cast<std::size_t>(K)] = d;
            else if (b[static_cast<std::size_t>(K)] != d) uniform = false;
        }
        ANONET_INVARIANT(uniform || !opt.use_outdeg, "outdegree not constant on an od class");
        if (uniform) base.set_out_valuation(std::move(b));
    }
    if (with_ports) base.set_ports(bports);

    // Edge map: per target vertex, pair its in-edges with the base's in-edges
    // of its class, matching (source class, port); unlabeled parallels are
    // assigned in id order.
    GraphMorphism phi;
    phi.vertex_map = cls;
    phi.edge_map.assign(static_cast<std::size_t>(g.m()), -1);
    for (int v = 0; v < g.n(); ++v) {
        int K = cls[static_cast<std::size_t>(v)];
        std::map<std::pair<int, int>, std::vector<int>> mine;  // (J, port) -> g edge ids
        for (int e : g.in_edges(v))
            mine[{cls[static_cast<std::size_t>(g.edge(e).src)], with_ports ? g.port(e) : 0}].push_back(e);
        std::map<std::pair<int, int>, std::vector<int>> theirs;  // (J, port) -> base edge ids
        for (int be : base.in_edges(K))
            theirs[{base.edge(be).src, with_ports ? base.port(be) : 0}].push_back(be);
        ANONET_INVARIANT(mine.size() == theirs.size(), "class in-signature mismatch");
        for (auto& [jp, ges] : mine) {
            auto it = theirs.find(jp);
            ANONET_INVARIANT(it != theirs.end() && it->second.size() == ges.size(),
                             "class in-signature mismatch");
            for (std::size_t i = 0; i < ges.size(); ++i)
                phi.edge_map[static_cast<std::size_t>(ges[i])] = it->second[i];
        }
    }

    return make_fibration(g, std::move(base), std::move(phi));
}

inline bool is_fibration_prime(const DirectedMultigraph& g, const RefineOptions& opt = {}) {
    return minimum_base(g, opt).base.n() == g.n();
}

// Exhaustive permutation search, honoring multiplicities, valuations,
// outdegree valuations, ports and leader masks. Desk scale (n <= 8).
inline bool isomorphic(const DirectedMultigraph& a, const DirectedMultigraph& b) {
    if (a.n() != b.n() || a.m() != b.m()) return false;
    int n = a.n();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    auto vertex_ok = [&](int va, int vb) {
        if (a.valuation() && b.valuation() &&
            (*a.valuation())[static_cast<std::size_t>(va)] != (*b.valuation())[static_cast<std::size_t>(vb)])
            return false;
        if (a.valuation().has_value() != b.valuation().has_value()) return false;
        if (a.out_valuation() && b.out_valuation() &&
            (*a.out_valuation())[static_cast<std::size_t>(va)] !=
                (*b.out_valuation())[static_cast<std::size_t>(vb)])
            return false;
        if (a.leaders() && b.leaders() &&
            (*a.leaders())[static_cast<std::size_t>(va)] != (*b.leaders())[static_cast<std::size_t>(vb)])
            return false;
        return true;
    };
    auto edges_ok = [&]() {
        bool ports = a.ports() && b.ports();
        if (a.ports().has_value() != b.ports().has_value()) return false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int pi = perm[static_cast<std::size_t>(i)], pj = perm[static_cast<std::size_t>(j)];
                if (a.multiplicity(i, j) != b.multiplicity(pi, pj)) return false;
                if (ports) {
                    std::vector<int> pa, pb;
                    for (int e : a.out_edges(i))
                        if (a.edge(e).dst == j) pa.push_back(a.port(e));
                    for (int e : b.out_edges(pi))
                        if (b.edge(e).dst == pj) pb.push_back(b.port(e));
                    std::sort(pa.begin(), pa.end());
                    std::sort(pb.begin(), pb.end());
                    if (pa != pb) return false;
                }
            }
        return true;
    };
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) ok = vertex_ok(v, perm[static_cast<std::size_t>(v)]);
        if (ok && edges_ok()) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace anonet
