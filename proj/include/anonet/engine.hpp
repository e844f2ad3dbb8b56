#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "algorithm.hpp"
#include "dynamic_graph.hpp"
#include "graph.hpp"
#include "graph_ops.hpp"

namespace anonet {

// A static graph used at every round, or a genuinely dynamic schedule. Static
// graphs need not carry self-loops; dynamic ones always do (enforced by
// DynamicGraph).
class GraphSchedule {
public:
    GraphSchedule(DirectedMultigraph g) : v_(std::move(g)) {}
    GraphSchedule(DynamicGraph d) : v_(std::move(d)) {}

    bool is_static() const { return v_.index() == 0; }
    int n() const {
        return is_static() ? std::get<0>(v_).n() : std::get<1>(v_).n();
    }
    const DirectedMultigraph& at(int t) const {
        return is_static() ? std::get<0>(v_) : std::get<1>(v_).at(t);
    }
    const DirectedMultigraph& static_graph() const {
        if (!is_static()) throw ValidationError("schedule is not static");
        return std::get<0>(v_);
    }
    const DynamicGraph& dynamic() const {
        if (is_static()) throw ValidationError("schedule is static");
        return std::get<1>(v_);
    }

private:
    std::variant<DirectedMultigraph, DynamicGraph> v_;
};

struct RunOptions {
    int rounds = 0;
    // starts[i] = first round agent i participates in (1-based); empty means
    // every agent starts at round 1. Before its start an agent is frozen and
    // edges touching it are suppressed, except self-loops.
    std::vector<int> starts;
    std::optional<std::vector<bool>> leaders;        // overrides the graph's marks
    std::optional<std::vector<Datum>> init_override; // arbitrary initial states
    // When set, received messages are delivered in a seeded shuffled order
    // instead of canonical sorted order; traces must not depend on it.
    std::optional<std::uint64_t> shuffle_seed;
};

struct ExecutionTrace {
    std::vector<std::vector<Datum>> states;    // states[t][i], t = 0..rounds
    std::vector<std::vector<Output>> outputs;  // outputs[t][i]
    long long deliveries = 0;                  // messages delivered in total
};

// Throws unless the algorithm's model can run on this schedule: port
// awareness needs a static port-labeled graph and synchronous starts, the
// symmetric model needs bidirectional rounds, and any dynamic schedule or
// asynchronous start pattern needs self-loops everywhere.
inline void check_model_discipline(CommunicationModel model, const GraphSchedule& sched,
                                   const std::vector<int>& starts, int rounds) {
    bool async = false;
    for (int s : starts)
        if (s > 1) async = true;
    if (model == CommunicationModel::OutputPortAware) {
        if (!sched.is_static())
            throw ValidationError("port awareness requires a static graph");
        if (!sched.static_graph().ports())
            throw ValidationError("port awareness requires port labels");
        if (async) throw ValidationError("port awareness requires synchronous starts");
    }
    if (model == CommunicationModel::Symmetric) {
        int horizon =
            sched.is_static()
                ? 1
                : std::max(rounds, static_cast<int>(sched.dynamic().prefix_length() +
                                                    sched.dynamic().cycle_length()));
        for (int t = 1; t <= horizon; ++t)
            if (!sched.at(t).is_support_symmetric())
                throw ValidationError("symmetric model on a non-bidirectional round");
    }
    if (async && sched.is_static() && !sched.static_graph().has_all_self_loops())
        throw ValidationError("asynchronous starts require self-loops");
}

inline ExecutionTrace run(const AlgorithmDescriptor& algo, const GraphSchedule& sched,
                          const std::vector<Value>& inputs, const RunOptions& opt) {
    int n = sched.n();
    if (static_cast<int>(inputs.size()) != n)
        throw ValidationError("input count does not match vertex count");
    if (opt.rounds < 0) throw ValidationError("negative round count");
    std::vector<int> starts = opt.starts;
    if (starts.empty()) starts.assign(static_cast<std::size_t>(n), 1);
    if (static_cast<int>(starts.size()) != n)
        throw ValidationError("start count does not match vertex count");
    for (int s : starts)
        if (s < 1) throw ValidationError("start rounds are 1-based");
    check_model_discipline(algo.model, sched, starts, opt.rounds);

    std::vector<bool> leaders(static_cast<std::size_t>(n), false);
    if (opt.leaders) {
        if (static_cast<int>(opt.leaders->size()) != n)
            throw ValidationError("leader mask size mismatch");
        leaders = *opt.leaders;
    } else if (sched.at(1).leaders()) {
        leaders = *sched.at(1).leaders();
    }

    bool degree_aware = algo.model == CommunicationModel::OutdegreeAware ||
                        algo.model == CommunicationModel::OutputPortAware;

    ExecutionTrace trace;
    std::vector<Datum> state(static_cast<std::size_t>(n));
    if (opt.init_override) {
        if (static_cast<int>(opt.init_override->size()) != n)
            throw ValidationError("initial state count mismatch");
        state = *opt.init_override;
    } else {
        for (int i = 0; i < n; ++i)
            state[static_cast<std::size_t>(i)] =
                algo.init(i, inputs[static_cast<std::size_t>(i)], leaders[static_cast<std::size_t>(i)]);
    }
    auto record = [&]() {
        trace.states.push_back(state);
        std::vector<Output> outs;
        outs.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) outs.push_back(algo.output(state[static_cast<std::size_t>(i)]));
        trace.outputs.push_back(std::move(outs));
    };
    record();

    std::optional<std::mt19937_64> rng;
    if (opt.shuffle_seed) rng.emplace(*opt.shuffle_seed);

    for (int t = 1; t <= opt.rounds; ++t) {
        const DirectedMultigraph& g = sched.at(t);
        if (g.n() != n) throw ValidationError("round graph changes vertex count");

        auto active = [&](int i) { return t >= starts[static_cast<std::size_t>(i)]; };
        // effective edges this round: self-loops always, others once both ends started
        std::vector<int> live_edges;
        std::vector<int> send_deg(static_cast<std::size_t>(n), 0);
        for (int e = 0; e < g.m(); ++e) {
            const Edge& ed = g.edge(e);
            if (ed.src == ed.dst ? active(ed.src) : (active(ed.src) && active(ed.dst))) {
                live_edges.push_back(e);
                ++send_deg[static_cast<std::size_t>(ed.src)];
            }
        }
        // an out-valuation on the round graph stands in for the structural
        // outdegree (bases of graphs carry one); only meaningful synchronously
        if (g.out_valuation()) {
            for (int i = 0; i < n; ++i)
                send_deg[static_cast<std::size_t>(i)] = g.send_degree(i);
        }

        std::vector<std::vector<Datum>> inbox(static_cast<std::size_t>(n));
        std::vector<std::optional<Datum>> broadcast_msg(static_cast<std::size_t>(n));
        for (int e : live_edges) {
            const Edge& ed = g.edge(e);
            int d = degree_aware ? send_deg[static_cast<std::size_t>(ed.src)] : -1;
            Datum msg;
            if (algo.model == CommunicationModel::OutputPortAware) {
                msg = algo.send(state[static_cast<std::size_t>(ed.src)], d, g.port(e));
            } else {
                auto& cached = broadcast_msg[static_cast<std::size_t>(ed.src)];
                if (!cached) cached = algo.send(state[static_cast<std::size_t>(ed.src)], d, 0);
                msg = *cached;
            }
            inbox[static_cast<std::size_t>(ed.dst)].push_back(std::move(msg));
            ++trace.deliveries;
        }

        for (int i = 0; i < n; ++i) {
            if (!active(i)) continue;
            auto& received = inbox[static_cast<std::size_t>(i)];
            if (rng)
                std::shuffle(received.begin(), received.end(), *rng);
            else
                std::sort(received.begin(), received.end());
            int d = degree_aware ? send_deg[static_cast<std::size_t>(i)] : -1;
            state[static_cast<std::size_t>(i)] =
                algo.transition(state[static_cast<std::size_t>(i)], d, received);
        }
        record();
    }
    return trace;
}

// Smallest round index r such that every agent's output is identical from r
// through the end of the trace; empty when even the final round disagrees
// with itself (never) or the trace is empty.
inline std::optional<int> stable_from(const ExecutionTrace& trace) {
    if (trace.outputs.empty()) return std::nullopt;
    int r = static_cast<int>(trace.outputs.size()) - 1;
    while (r > 0 && trace.outputs[static_cast<std::size_t>(r - 1)] == trace.outputs.back()) --r;
    return r;
}

inline bool all_agents_agree(const ExecutionTrace& trace, int t) {
    const auto& outs = trace.outputs.at(static_cast<std::size_t>(t));
    for (const Output& o : outs)
        if (!(o == outs.front())) return false;
    return true;
}

}  // namespace anonet
