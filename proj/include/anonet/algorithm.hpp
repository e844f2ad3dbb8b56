#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "datum.hpp"
#include "output.hpp"
#include "value.hpp"

namespace anonet {

// What a sender knows or controls about its audience in each round:
//   Broadcast       one message, recipient count unknown
//   OutdegreeAware  one message, recipient count known
//   OutputPortAware one message per local output port 1..d (static graphs only)
//   Symmetric       broadcast over bidirectional links
enum class CommunicationModel { Broadcast, OutdegreeAware, OutputPortAware, Symmetric };

inline std::string model_name(CommunicationModel m) {
    switch (m) {
        case CommunicationModel::Broadcast: return "broadcast";
        case CommunicationModel::OutdegreeAware: return "outdegree";
        case CommunicationModel::OutputPortAware: return "port";
        case CommunicationModel::Symmetric: return "symmetric";
    }
    return "?";
}

inline CommunicationModel parse_model(const std::string& s) {
    if (s == "broadcast") return CommunicationModel::Broadcast;
    if (s == "outdegree") return CommunicationModel::OutdegreeAware;
    if (s == "port") return CommunicationModel::OutputPortAware;
    if (s == "symmetric") return CommunicationModel::Symmetric;
    throw ValidationError("unknown communication model '" + s + "'");
}

// An anonymous-network algorithm: all agents run the same code, so none of the
// callbacks may depend on agent identity. The engine passes agent_index to
// init purely as an instrumentation channel for tests that seed per-agent
// state; honest algorithms ignore it (anonymity is separately asserted by
// running with permuted indices).
//
// Per round the engine calls send for each agent, delivers messages along the
// round's edges, then calls transition with the received messages sorted into
// canonical order (a multiset: receivers learn nothing from arrival order).
//
// send_degree is the number of recipients this round, or -1 when the model
// hides it (Broadcast, Symmetric). port is the output-port label 1..d in the
// port-aware model and 0 elsewhere; port-aware send is invoked once per port.
struct AlgorithmDescriptor {
    std::string name;
    CommunicationModel model = CommunicationModel::Broadcast;
    std::vector<Value> sample_values;  // inputs generic drivers may draw from

    std::function<Datum(int agent_index, const Value& input, bool leader)> init;
    std::function<Datum(const Datum& state, int send_degree, int port)> send;
    std::function<Datum(const Datum& state, int send_degree, const std::vector<Datum>& received)>
        transition;
    std::function<Output(const Datum& state)> output;
};

namespace flood_detail {

// Shared shape for the flooding family: state is the accumulated value set as
// a sorted list.
inline Datum flood_init(const Value& input) {
    return Datum(std::vector<Datum>{Datum::of_value(input)});
}

inline Datum flood_merge(const Datum& state, const std::vector<Datum>& received) {
    std::vector<Datum> pool = state.as_list();
    for (const Datum& msg : received)
        for (const Datum& item : msg.as_list()) pool.push_back(item);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return Datum(std::move(pool));
}

}  // namespace flood_detail

// Floods the set of seen values; outputs its maximum. Self-stabilizing on the
// value set it has seen, exact once every input has reached every agent.
inline AlgorithmDescriptor make_flooding_max() {
    AlgorithmDescriptor a;
    a.name = "flooding-max";
    a.model = CommunicationModel::Broadcast;
    a.sample_values = {Value::parse("1"), Value::parse("2"), Value::parse("5")};
    a.init = [](int, const Value& v, bool) { return flood_detail::flood_init(v); };
    a.send = [](const Datum& s, int, int) { return s; };
    a.transition = [](const Datum& s, int, const std::vector<Datum>& r) {
        return flood_detail::flood_merge(s, r);
    };
    a.output = [](const Datum& s) {
        return Output(s.as_list().back().as_value());
    };
    return a;
}

inline AlgorithmDescriptor make_flooding_min() {
    AlgorithmDescriptor a = make_flooding_max();
    a.name = "flooding-min";
    a.output = [](const Datum& s) { return Output(s.as_list().front().as_value()); };
    return a;
}

inline AlgorithmDescriptor make_flooding_set() {
    AlgorithmDescriptor a = make_flooding_max();
    a.name = "flooding-set";
    a.output = [](const Datum& s) {
        ValueSet out;
        for (const Datum& d : s.as_list()) out.push_back(d.as_value());
        return Output(out);
    };
    return a;
}

namespace history_detail {

// Cut a nested datum off at the given depth, replacing any deeper list by its
// length. Keeps window states polynomial in degree; retaining raw received
// states instead would blow up like in-degree^rounds.
inline Datum trim(const Datum& d, int depth) {
    if (!d.is_list()) return d;
    if (depth == 0) return Datum(static_cast<std::int64_t>(d.as_list().size()));
    Datum::List out;
    out.reserve(d.as_list().size());
    for (const Datum& c : d.as_list()) out.push_back(trim(c, depth - 1));
    return Datum(std::move(out));
}

}  // namespace history_detail

// Keeps a two-round sliding window of received-message multisets, each message
// depth-trimmed. State layout: [value, leader, round, window(t-1), window(t)].
// The deeply nested lists stress structural state equality in trace
// comparisons without the unbounded growth of a full history.
inline AlgorithmDescriptor make_history_accumulator() {
    AlgorithmDescriptor a;
    a.name = "history";
    a.model = CommunicationModel::Broadcast;
    a.sample_values = {Value::parse("0"), Value::parse("1")};
    a.init = [](int, const Value& v, bool leader) {
        return Datum(std::vector<Datum>{Datum::of_value(v), Datum(static_cast<std::int64_t>(leader)),
                                        Datum(std::int64_t{0}), Datum(Datum::List{}),
                                        Datum(Datum::List{})});
    };
    a.send = [](const Datum& s, int, int) { return s; };
    a.transition = [](const Datum& s, int, const std::vector<Datum>& r) {
        Datum::List cur;
        cur.reserve(r.size());
        for (const Datum& msg : r) cur.push_back(history_detail::trim(msg, 3));
        std::sort(cur.begin(), cur.end());
        Datum::List next = s.as_list();
        next[2] = Datum(next[2].as_int() + 1);
        next[3] = next[4];
        next[4] = Datum(std::move(cur));
        return Datum(std::move(next));
    };
    a.output = [](const Datum& s) { return Output(val(static_cast<long long>(s.text().size()))); };
    return a;
}

// Counts rounds and echoes the parity of how many messages arrived; depends on
// message counts but not contents.
inline AlgorithmDescriptor make_pulse_counter() {
    AlgorithmDescriptor a;
    a.name = "pulse-counter";
    a.model = CommunicationModel::Broadcast;
    a.sample_values = {Value::parse("0"), Value::parse("1")};
    a.init = [](int, const Value& v, bool) {
        return Datum(std::vector<Datum>{Datum::of_value(v), Datum(std::int64_t{0}), Datum(std::int64_t{0})});
    };
    a.send = [](const Datum& s, int, int) { return s.as_list()[2]; };
    a.transition = [](const Datum& s, int, const std::vector<Datum>& r) {
        std::int64_t acc = 0;
        for (const Datum& msg : r) acc += msg.as_int();
        std::vector<Datum> next = s.as_list();
        next[1] = Datum(next[1].as_int() + 1);
        next[2] = Datum(acc + static_cast<std::int64_t>(r.size()));
        return Datum(std::move(next));
    };
    a.output = [](const Datum& s) { return Output(val(static_cast<long long>(s.as_list()[2].as_int() % 2))); };
    return a;
}

}  // namespace anonet
