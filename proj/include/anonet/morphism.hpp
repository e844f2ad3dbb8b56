#pragma once

#include <string>
#include <vector>

#include "anonet/graph.hpp"

namespace anonet {

// Vertex and edge maps from a graph to a (candidate) base, by index.
struct GraphMorphism {
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
};

struct MorphismCheck {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
    static MorphismCheck fail(std::string why) { return {false, std::move(why)}; }
};

// Fibration: epimorphism commuting with incidence, preserving valuations and
// port labels where both graphs carry them, with unique lifting of base
// edges at every target vertex.
inline MorphismCheck is_fibration(const GraphMorphism& m, const DirectedMultigraph& g,
                                  const DirectedMultigraph& b) {
    if (static_cast<int>(m.vertex_map.size()) != g.n())
        return MorphismCheck::fail("vertex map size != |V|");
    if (static_cast<int>(m.edge_map.size()) != g.m())
        return MorphismCheck::fail("edge map size != |E|");
    for (int v : m.vertex_map)
        if (v < 0 || v >= b.n()) return MorphismCheck::fail("vertex map out of range");
    for (int e : m.edge_map)
        if (e < 0 || e >= b.m()) return MorphismCheck::fail("edge map out of range");

    for (int e = 0; e < g.m(); ++e) {
        const Edge& ge = g.edge(e);
        const Edge& be = b.edge(m.edge_map[static_cast<std::size_t>(e)]);
        if (m.vertex_map[static_cast<std::size_t>(ge.src)] != be.src)
            return MorphismCheck::fail("source incidence not preserved");
        if (m.vertex_map[static_cast<std::size_t>(ge.dst)] != be.dst)
            return MorphismCheck::fail("target incidence not preserved");
    }

    if (g.valuation() && b.valuation()) {
        for (int v = 0; v < g.n(); ++v)
            if ((*g.valuation())[static_cast<std::size_t>(v)] !=
                (*b.valuation())[static_cast<std::size_t>(m.vertex_map[static_cast<std::size_t>(v)])])
                return MorphismCheck::fail("valuation not preserved");
    }
    if (b.out_valuation()) {
        // The base's outdegree valuation must record the senders' outdegrees.
        for (int v = 0; v < g.n(); ++v)
            if (g.send_degree(v) !=
                (*b.out_valuation())[static_cast<std::size_t>(m.vertex_map[static_cast<std::size_t>(v)])])
                return MorphismCheck::fail("outdegree valuation not preserved");
    }
    if (g.ports() && b.ports()) {
        for (int e = 0; e < g.m(); ++e)
            if (g.port(e) != b.port(m.edge_map[static_cast<std::size_t>(e)]))
                return MorphismCheck::fail("port labels not preserved");
    }
    if (g.leaders() && b.leaders()) {
        for (int v = 0; v < g.n(); ++v)
            if ((*g.leaders())[static_cast<std::size_t>(v)] !=
                (*b.leaders())[static_cast<std::size_t>(m.vertex_map[static_cast<std::size_t>(v)])])
                return MorphismCheck::fail("leader mask not preserved");
    }

    std::vector<bool> hit(static_cast<std::size_t>(b.n()), false);
    for (int v : m.vertex_map) hit[static_cast<std::size_t>(v)] = true;
    for (bool h : hit)
        if (!h) return MorphismCheck::fail("vertex map not surjective");

    // Unique lifting at targets: the in-edges of v map bijectively onto the
    // in-edges of phi(v).
    for (int v = 0; v < g.n(); ++v) {
        std::vector<int> image;
        for (int e : g.in_edges(v)) image.push_back(m.edge_map[static_cast<std::size_t>(e)]);
        std::vector<int> expect = b.in_edges(m.vertex_map[static_cast<std::size_t>(v)]);
        std::sort(image.begin(), image.end());
        std::sort(expect.begin(), expect.end());
        if (image != expect) return MorphismCheck::fail("edge lifting at a target is not unique");
    }
    return {};
}

// Covering: a fibration that is also a local isomorphism on out-stars.
inline MorphismCheck is_covering(const GraphMorphism& m, const DirectedMultigraph& g,
                                 const DirectedMultigraph& b) {
    MorphismCheck fib = is_fibration(m, g, b);
    if (!fib) return fib;
    for (int v = 0; v < g.n(); ++v) {
        std::vector<int> image;
        for (int e : g.out_edges(v)) image.push_back(m.edge_map[static_cast<std::size_t>(e)]);
        std::vector<int> expect = b.out_edges(m.vertex_map[static_cast<std::size_t>(v)]);
        std::sort(image.begin(), image.end());
        std::sort(expect.begin(), expect.end());
        if (image != expect) return MorphismCheck::fail("out-star is not locally isomorphic");
    }
    return {};
}

struct Fibration {
    DirectedMultigraph total;  // G
    DirectedMultigraph base;   // B
    GraphMorphism phi;
    std::vector<std::vector<int>> fibres;  // indexed by base vertex

    std::vector<Int> fibre_cardinalities() const {
        std::vector<Int> out;
        for (const auto& f : fibres) out.push_back(Int(static_cast<long>(f.size())));
        return out;
    }
};

inline std::vector<std::vector<int>> fibres_of(const GraphMorphism& m, int base_n) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(base_n));
    for (int v = 0; v < static_cast<int>(m.vertex_map.size()); ++v)
        out[static_cast<std::size_t>(m.vertex_map[static_cast<std::size_t>(v)])].push_back(v);
    return out;
}

inline Fibration make_fibration(DirectedMultigraph g, DirectedMultigraph b, GraphMorphism m) {
    MorphismCheck c = is_fibration(m, g, b);
    if (!c) throw ValidationError("not a fibration: " + c.reason);
    std::vector<std::vector<int>> fb = fibres_of(m, b.n());
    return Fibration{std::move(g), std::move(b), std::move(m), std::move(fb)};
}

// Pointwise lift of per-vertex base data along the fibration.
template <class T>
std::vector<T> lift_state(const Fibration& f, const std::vector<T>& base_states) {
    if (base_states.size() != static_cast<std::size_t>(f.base.n()))
        throw ValidationError("lift_state size mismatch");
    std::vector<T> out;
    out.reserve(f.phi.vertex_map.size());
    for (int bv : f.phi.vertex_map) out.push_back(base_states[static_cast<std::size_t>(bv)]);
    return out;
}

}  // namespace anonet
