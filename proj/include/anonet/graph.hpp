#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "anonet/value.hpp"

namespace anonet {

struct Edge {
    int src = 0;
    int dst = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed multigraph on vertices 0..n-1. Edge ids are dense integers in
// construction order; canonical (serialization) order sorts by
// (source, target, id). Optional per-vertex data: valuation (input values),
// outdegree valuation (bases record the common fibre outdegree b, which may
// differ from the structural outdegree of the base vertex), leader mask.
// Optional per-edge port labels (output-port model): out-edges of each
// vertex must be labeled bijectively with 1..outdegree.
class DirectedMultigraph {
public:
    DirectedMultigraph() = default;
    DirectedMultigraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 0) throw ValidationError("graph with negative vertex count");
        for (const Edge& e : edges_)
            if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
                throw ValidationError("edge endpoint out of range");
        rebuild_adjacency();
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    const std::vector<int>& out_edges(int v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& in_edges(int v) const { return in_[static_cast<std::size_t>(v)]; }
    int out_degree(int v) const { return static_cast<int>(out_edges(v).size()); }
    int in_degree(int v) const { return static_cast<int>(in_edges(v).size()); }

    // Outdegree the sending layer should report: the recorded valuation when
    // present (minimum bases), the structural outdegree otherwise.
    int send_degree(int v) const {
        if (out_valuation_) return (*out_valuation_)[static_cast<std::size_t>(v)];
        return out_degree(v);
    }

    int multiplicity(int i, int j) const {
        int c = 0;
        for (int e : out_edges(i))
            if (edges_[static_cast<std::size_t>(e)].dst == j) ++c;
        return c;
    }

    bool is_bidirectional() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (multiplicity(i, j) != multiplicity(j, i)) return false;
        return true;
    }

    // Weaker reciprocity: every channel has a reverse channel, multiplicities
    // free. Identical to is_bidirectional on simple graphs; quotients of
    // bidirectional graphs keep this even when edge counts skew.
    bool is_support_symmetric() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if ((multiplicity(i, j) > 0) != (multiplicity(j, i) > 0)) return false;
        return true;
    }

    bool has_self_loop(int v) const {
        for (int e : out_edges(v))
            if (edges_[static_cast<std::size_t>(e)].dst == v) return true;
        return false;
    }
    bool has_all_self_loops() const {
        for (int v = 0; v < n_; ++v)
            if (!has_self_loop(v)) return false;
        return true;
    }

    DirectedMultigraph with_self_loops() const {
        DirectedMultigraph g = *this;
        for (int v = 0; v < n_; ++v)
            if (!g.has_self_loop(v)) g.edges_.push_back({v, v});
        g.ports_.reset();  // a valid labeling does not survive edge insertion
        g.rebuild_adjacency();
        return g;
    }

    void set_valuation(std::vector<Value> vals) {
        if (static_cast<int>(vals.size()) != n_)
            throw ValidationError("valuation size mismatch");
        valuation_ = std::move(vals);
    }
    const std::optional<std::vector<Value>>& valuation() const { return valuation_; }

    void set_out_valuation(std::vector<int> b) {
        if (static_cast<int>(b.size()) != n_)
            throw ValidationError("outdegree valuation size mismatch");
        out_valuation_ = std::move(b);
    }
    const std::optional<std::vector<int>>& out_valuation() const { return out_valuation_; }

    void set_leaders(std::vector<bool> mask) {
        if (static_cast<int>(mask.size()) != n_)
            throw ValidationError("leader mask size mismatch");
        leaders_ = std::move(mask);
    }
    const std::optional<std::vector<bool>>& leaders() const { return leaders_; }

    void set_ports(std::vector<int> labels) {
        if (labels.size() != edges_.size())
            throw ValidationError("port label count mismatch");
        ports_ = std::move(labels);
        validate_ports();
    }
    const std::optional<std::vector<int>>& ports() const { return ports_; }
    int port(int edge_id) const {
        return ports_ ? (*ports_)[static_cast<std::size_t>(edge_id)] : 0;
    }

    void validate_ports() const {
        if (!ports_) return;
        for (int v = 0; v < n_; ++v) {
            std::vector<int> seen;
            for (int e : out_edges(v)) seen.push_back((*ports_)[static_cast<std::size_t>(e)]);
            std::sort(seen.begin(), seen.end());
            for (std::size_t k = 0; k < seen.size(); ++k)
                if (seen[k] != static_cast<int>(k) + 1)
                    throw ValidationError("port labels are not 1..outdegree at a vertex");
        }
    }

    // Assigns the canonical labeling 1..outdeg per vertex (by edge id order).
    DirectedMultigraph with_canonical_ports() const {
        DirectedMultigraph g = *this;
        std::vector<int> labels(edges_.size(), 0);
        for (int v = 0; v < n_; ++v) {
            int next = 1;
            for (int e : out_edges(v)) labels[static_cast<std::size_t>(e)] = next++;
        }
        g.set_ports(std::move(labels));
        return g;
    }

    std::vector<int> canonical_edge_order() const {
        std::vector<int> ids(edges_.size());
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            const Edge& ea = edges_[static_cast<std::size_t>(a)];
            const Edge& eb = edges_[static_cast<std::size_t>(b)];
            if (ea.src != eb.src) return ea.src < eb.src;
            if (ea.dst != eb.dst) return ea.dst < eb.dst;
            return a < b;
        });
        return ids;
    }

    friend bool operator==(const DirectedMultigraph& a, const DirectedMultigraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_ && a.valuation_ == b.valuation_ &&
               a.out_valuation_ == b.out_valuation_ && a.ports_ == b.ports_ &&
               a.leaders_ == b.leaders_;
    }

private:
    void rebuild_adjacency() {
        out_.assign(static_cast<std::size_t>(n_), {});
        in_.assign(static_cast<std::size_t>(n_), {});
        for (int id = 0; id < m(); ++id) {
            out_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(id)].src)].push_back(id);
            in_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(id)].dst)].push_back(id);
        }
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_, in_;
    std::optional<std::vector<Value>> valuation_;
    std::optional<std::vector<int>> out_valuation_;
    std::optional<std::vector<int>> ports_;
    std::optional<std::vector<bool>> leaders_;
};

}  // namespace anonet
