#pragma once

#include <vector>

#include "anonet/graph.hpp"

namespace anonet {

// Eventually periodic round-graph sequence on a fixed vertex set. Every round
// graph must carry a self-loop at every vertex (each agent always hears
// itself in a dynamic network). Round indices are 1-based.
class DynamicGraph {
public:
    DynamicGraph(std::vector<DirectedMultigraph> prefix, std::vector<DirectedMultigraph> cycle)
        : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
        if (cycle_.empty()) throw ValidationError("dynamic graph needs a nonempty cycle");
        n_ = cycle_.front().n();
        for (const auto* part : {&prefix_, &cycle_})
            for (const DirectedMultigraph& g : *part) {
                if (g.n() != n_) throw ValidationError("dynamic graph with varying vertex count");
                if (!g.has_all_self_loops())
                    throw ValidationError("dynamic round graph missing a self-loop");
            }
    }

    explicit DynamicGraph(DirectedMultigraph constant)
        : DynamicGraph({}, std::vector<DirectedMultigraph>{std::move(constant)}) {}

    int n() const { return n_; }
    std::size_t prefix_length() const { return prefix_.size(); }
    std::size_t cycle_length() const { return cycle_.size(); }
    const std::vector<DirectedMultigraph>& prefix() const { return prefix_; }
    const std::vector<DirectedMultigraph>& cycle() const { return cycle_; }

    const DirectedMultigraph& at(long long t) const {
        if (t < 1) throw ValidationError("dynamic graph rounds are 1-based");
        std::size_t i = static_cast<std::size_t>(t - 1);
        if (i < prefix_.size()) return prefix_[i];
        return cycle_[(i - prefix_.size()) % cycle_.size()];
    }

private:
    std::vector<DirectedMultigraph> prefix_, cycle_;
    int n_ = 0;
};

}  // namespace anonet
