#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "graph_ops.hpp"
#include "value.hpp"

namespace anonet {

// Hash-consed store of in-view trees. A node records what one agent knew at
// some instant: its input value, leader bit, outdegree if the model reveals
// it (-1 otherwise), and one child per message received in the previous
// round, tagged with the sender's output port (0 when untagged). Equal trees
// get equal ids, so views are compared, truncated, and memoized in O(1) per
// node instead of exponentially in the tree.
class ViewStore {
public:
    struct Node {
        Value value;
        bool leader = false;
        int od = -1;
        std::vector<std::pair<int, int>> children;  // (port, child id), sorted
        int height = 0;
    };

    static ViewStore& global() {
        static ViewStore store;
        return store;
    }

    int leaf(const Value& v, bool leader, int od = -1) { return make(v, leader, od, {}); }

    int make(const Value& v, bool leader, int od, std::vector<std::pair<int, int>> children) {
        Node n;
        n.value = v;
        n.leader = leader;
        n.od = od;
        std::sort(children.begin(), children.end());
        for (const auto& [p, c] : children)
            if (c < 0 || c >= static_cast<int>(nodes_.size()))
                throw ValidationError("child view id out of range");
        n.children = std::move(children);
        for (const auto& [p, c] : n.children)
            n.height = std::max(n.height, nodes_[static_cast<std::size_t>(c)].height + 1);
        return intern(std::move(n));
    }

    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    int size() const { return static_cast<int>(nodes_.size()); }

    int with_od(int id, int od) {
        const Node& n = node(id);
        if (n.od == od) return id;
        return make(n.value, n.leader, od, n.children);
    }

    // Tree truncated to height h; a tree already at most h deep is returned
    // unchanged (no padding), so callers must check heights themselves when
    // they need a full h-deep truncation.
    int truncate(int id, int h) {
        if (node(id).height <= h) return id;
        auto memo_key = std::pair(id, h);
        auto it = trunc_memo_.find(memo_key);
        if (it != trunc_memo_.end()) return it->second;
        const Node n = node(id);  // copy: interning below may grow the table
        std::vector<std::pair<int, int>> kids;
        if (h > 0) {
            kids.reserve(n.children.size());
            for (const auto& [p, c] : n.children) kids.emplace_back(p, truncate(c, h - 1));
        }
        int out = make(n.value, n.leader, n.od, std::move(kids));
        trunc_memo_.emplace(memo_key, out);
        return out;
    }

    // Canonical rendering, a process-independent total order on view trees.
    // The memo is grown to cover the whole node table up front: references
    // handed out stay valid until the next intern, never merely the next key.
    const std::string& key(int id) {
        if (key_memo_.size() < nodes_.size()) key_memo_.resize(nodes_.size());
        if (!key_memo_[static_cast<std::size_t>(id)]) {
            const Node& n = node(id);
            std::string s = "(" + n.value.str() + (n.leader ? "*" : "") + "@" + std::to_string(n.od);
            for (const auto& [p, c] : n.children)
                s += "," + std::to_string(p) + ":" + key(c);
            s += ")";
            key_memo_[static_cast<std::size_t>(id)] = std::move(s);
        }
        return *key_memo_[static_cast<std::size_t>(id)];
    }

    std::vector<int> reachable(int root) const {
        std::vector<int> out{root};
        std::vector<bool> seen(nodes_.size(), false);
        seen[static_cast<std::size_t>(root)] = true;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& [p, c] : node(out[i]).children)
                if (!seen[static_cast<std::size_t>(c)]) {
                    seen[static_cast<std::size_t>(c)] = true;
                    out.push_back(c);
                }
        return out;
    }

private:
    using Key = std::tuple<Value, bool, int, std::vector<std::pair<int, int>>>;

    int intern(Node n) {
        Key k{n.value, n.leader, n.od, n.children};
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back(std::move(n));
        index_.emplace(std::move(k), id);
        return id;
    }

    std::vector<Node> nodes_;
    std::map<Key, int> index_;
    std::map<std::pair<int, int>, int> trunc_memo_;
    std::vector<std::optional<std::string>> key_memo_;
};

struct BaseRecovery {
    bool ok = false;
    std::string why;
    DirectedMultigraph base;
};

namespace view_detail {

inline BaseRecovery fail(std::string why) {
    BaseRecovery r;
    r.why = std::move(why);
    return r;
}

// Recover the minimum base of the communication graph from one agent's view.
// Nodes of height >= h+1 carry full h- and (h+1)-deep truncations; the
// partition of those truncations stabilizes at the first h where both depths
// yield the same number of distinct trees, and the stable classes are the
// base vertices. Sound whenever the view is deep enough to expose every
// vertex at the stabilization depth (round n + D onward in a clean run on a
// strongly connected graph); anything recovered earlier is validated
// structurally and rejected rather than trusted.
inline BaseRecovery recover(int root_id) {
    ViewStore& store = ViewStore::global();
    std::vector<int> nodes = store.reachable(root_id);
    int root_height = store.node(root_id).height;

    int level = -1;
    std::vector<int> class_keys;  // distinct truncations at the stable level
    for (int h = 0; h <= root_height; ++h) {
        std::vector<int> carriers;
        for (int u : nodes)
            if (store.node(u).height >= h + 1) carriers.push_back(u);
        if (carriers.empty()) return fail("view too shallow to stabilize");
        std::set<int> at_h, at_h1;
        for (int u : carriers) {
            at_h.insert(store.truncate(u, h));
            at_h1.insert(store.truncate(u, h + 1));
        }
        if (at_h.size() == at_h1.size()) {
            level = h;
            class_keys.assign(at_h.begin(), at_h.end());
            break;
        }
    }
    if (level < 0) return fail("view partition never stabilized");

    // canonical vertex order, independent of interning history
    std::sort(class_keys.begin(), class_keys.end(),
              [&](int a, int b) { return store.key(a) < store.key(b); });
    std::map<int, int> class_of;
    for (std::size_t i = 0; i < class_keys.size(); ++i)
        class_of[class_keys[static_cast<std::size_t>(i)]] = static_cast<int>(i);
    int m = static_cast<int>(class_keys.size());

    // deepest member of each class makes the best representative: its
    // children are most likely to still carry full truncations
    std::vector<int> rep(static_cast<std::size_t>(m), -1);
    for (int u : nodes) {
        if (store.node(u).height < level + 1) continue;
        auto it = class_of.find(store.truncate(u, level));
        if (it == class_of.end()) continue;
        int& r = rep[static_cast<std::size_t>(it->second)];
        if (r < 0 || store.node(u).height > store.node(r).height) r = u;
    }

    std::vector<Edge> edges;
    std::vector<int> ports;
    std::vector<Value> values;
    std::vector<bool> leaders;
    std::vector<int> b;
    bool all_b = true, any_port = false, all_port = true;
    for (int k = 0; k < m; ++k) {
        const ViewStore::Node& rn = store.node(rep[static_cast<std::size_t>(k)]);
        values.push_back(rn.value);
        leaders.push_back(rn.leader);
        b.push_back(rn.od);
        if (rn.od < 0) all_b = false;
        for (const auto& [p, c] : rn.children) {
            auto it = class_of.find(store.truncate(c, level));
            if (it == class_of.end()) return fail("child view outside recovered classes");
            edges.push_back({it->second, k});
            ports.push_back(p);
            if (p > 0) any_port = true;
            if (p <= 0) all_port = false;
        }
    }
    if (any_port && !all_port) return fail("inconsistent port tags");

    BaseRecovery out;
    out.base = DirectedMultigraph(m, std::move(edges));
    out.base.set_valuation(std::move(values));
    out.base.set_leaders(std::move(leaders));
    if (all_b) out.base.set_out_valuation(std::move(b));
    if (any_port) {
        try {
            out.base.set_ports(std::move(ports));
        } catch (const ValidationError& e) {
            return fail(std::string("recovered ports invalid: ") + e.what());
        }
    }
    if (!is_strongly_connected(out.base)) return fail("recovered base not strongly connected");
    out.ok = true;
    return out;
}

}  // namespace view_detail

// Memoized over the interned view id; ids are content-addressed, so the memo
// stays valid for the life of the process.
inline const BaseRecovery& reconstruct_base(int root_id) {
    static std::map<int, std::unique_ptr<BaseRecovery>> memo;
    auto it = memo.find(root_id);
    if (it == memo.end())
        it = memo.emplace(root_id, std::make_unique<BaseRecovery>(view_detail::recover(root_id))).first;
    return *it->second;
}

}  // namespace anonet
