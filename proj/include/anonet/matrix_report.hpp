#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"

namespace anonet {

namespace matrix_detail {

inline bool outputs_exact_from(const ExecutionTrace& tr, const Output& expected, int from) {
    if (from >= static_cast<int>(tr.outputs.size())) return false;
    for (int t = from; t < static_cast<int>(tr.outputs.size()); ++t)
        for (const Output& o : tr.outputs[static_cast<std::size_t>(t)])
            if (o != expected) return false;
    return true;
}

// hub 0 with two leaves, values 1, 2, 4; n = 3, diameter 2
inline DirectedMultigraph witness_star() {
    DirectedMultigraph g = star_bidirectional(2);
    g.set_valuation({Value::parse("1"), Value::parse("2"), Value::parse("4")});
    g.set_leaders({true, false, false});
    return g;
}

inline bool static_positive_witness(CommunicationModel model, const Help& help,
                                    const TargetFunction& f) {
    DirectedMultigraph g = witness_star();
    AlgorithmDescriptor algo = make_static_algorithm(f, model, help);
    RunOptions opt;
    opt.rounds = 10;
    ExecutionTrace tr = run(algo, GraphSchedule(g), *g.valuation(), opt);
    Output expected = eval_on_vector(f, *g.valuation());
    return outputs_exact_from(tr, expected, 3 + 2);
}

inline bool flooding_set_witness(const GraphSchedule& sched, const std::vector<Value>& inputs) {
    AlgorithmDescriptor algo = make_flooding_set();
    RunOptions opt;
    opt.rounds = 12;
    ExecutionTrace tr = run(algo, sched, inputs, opt);
    if (!stable_from(tr) || !all_agents_agree(tr, opt.rounds)) return false;
    return tr.outputs.back().front() == Output(make_value_set(inputs));
}

// Trace equality along a graph epimorphism: agent i of the total graph and
// agent phi[i] of the base step through identical states. This is the
// executed form of the impossibility argument: the two networks have
// different input statistics, yet no algorithm in the model can tell them
// apart.
inline bool lift_traces_equal(const AlgorithmDescriptor& algo, const DirectedMultigraph& total,
                              const DirectedMultigraph& base, const std::vector<int>& phi,
                              const std::vector<Value>& base_inputs, int rounds) {
    std::vector<Value> lifted;
    for (int i = 0; i < total.n(); ++i)
        lifted.push_back(base_inputs[static_cast<std::size_t>(phi[static_cast<std::size_t>(i)])]);
    RunOptions opt;
    opt.rounds = rounds;
    ExecutionTrace tb = run(algo, GraphSchedule(base), base_inputs, opt);
    ExecutionTrace tt = run(algo, GraphSchedule(total), lifted, opt);
    for (int t = 0; t <= rounds; ++t)
        for (int i = 0; i < total.n(); ++i) {
            std::size_t bi = static_cast<std::size_t>(phi[static_cast<std::size_t>(i)]);
            if (tt.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] !=
                tb.states[static_cast<std::size_t>(t)][bi])
                return false;
            if (tt.outputs[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] !=
                tb.outputs[static_cast<std::size_t>(t)][bi])
                return false;
        }
    return true;
}

// Star against its two-class quotient: same broadcast traces, different
// value frequencies (2/3 vs 1/2), so frequency-based functions are out of
// reach without degree information.
inline bool star_broadcast_witness(bool with_loops) {
    DirectedMultigraph total = star_bidirectional(2);
    std::vector<Edge> base_edges = {{0, 1}, {1, 0}, {1, 0}};
    if (with_loops) {
        total = total.with_self_loops();
        base_edges.push_back({0, 0});
        base_edges.push_back({1, 1});
    }
    DirectedMultigraph base(2, std::move(base_edges));
    AlgorithmDescriptor algo =
        make_static_algorithm(make_average(), CommunicationModel::Broadcast);
    return lift_traces_equal(algo, total, base, {0, 1, 1},
                             {Value::parse("1"), Value::parse("2")}, 8);
}

// Directed or bidirectional ring against its half-length quotient: same
// traces even with outdegrees and ports visible, different input multisets,
// so multiset-based functions need centralized help.
inline bool ring_witness(CommunicationModel model) {
    DirectedMultigraph total, base;
    if (model == CommunicationModel::Symmetric) {
        total = ring_bidirectional(4);
        base = ring_bidirectional(2);
    } else if (model == CommunicationModel::OutputPortAware) {
        total = ring_directed(4).with_canonical_ports();
        base = ring_directed(2).with_canonical_ports();
    } else {
        total = ring_directed(4);
        base = ring_directed(2);
    }
    AlgorithmDescriptor algo = make_static_algorithm(make_average(), model);
    return lift_traces_equal(algo, total, base, {0, 1, 0, 1},
                             {Value::parse("1"), Value::parse("2")}, 8);
}

// Two alternating symmetric rounds on three agents, dynamic diameter 2.
inline DynamicGraph witness_dynamic_schedule() {
    DirectedMultigraph a(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}, {1, 2}, {2, 1}});
    DirectedMultigraph b(3, {{0, 0}, {1, 1}, {2, 2}, {0, 2}, {2, 0}});
    DynamicGraph d({}, {a, b});
    ANONET_INVARIANT(dynamic_diameter(d, 24) == std::optional<int>(2),
                     "witness schedule should have dynamic diameter 2");
    return d;
}

inline bool dynamic_pushsum_witness(const Help& help, const TargetFunction& f) {
    DynamicGraph d = witness_dynamic_schedule();
    std::vector<Value> inputs = {Value::parse("1"), Value::parse("2"), Value::parse("4")};
    AlgorithmDescriptor algo = make_frequency_pushsum(f, help);
    Int N = help.n;
    Rat eps = Rat(1) / Rat(2 * N * N);
    long long bound = convergence_bound(3, 2, eps);
    RunOptions opt;
    opt.rounds = static_cast<int>(bound) + 5;
    ExecutionTrace tr = run(algo, GraphSchedule(d), inputs, opt);
    Output expected = eval_on_vector(f, inputs);
    return outputs_exact_from(tr, expected, static_cast<int>(bound));
}

}  // namespace matrix_detail

// Executed form of the model-by-help computability tables: every achievable
// cell runs a witness suite, impossibility notes run the trace-equality
// witness where the quotient construction applies, and cells the theory
// leaves open are reported as such.
inline Json matrix_report(const std::string& family) {
    if (family != "static" && family != "dynamic")
        throw ValidationError("matrix family must be static or dynamic");
    bool dynamic = family == "dynamic";

    using matrix_detail::static_positive_witness;
    const std::vector<std::string> helps = {"none", "bound", "n", "leader"};
    std::vector<std::string> models = {"broadcast", "outdegree", "symmetric"};
    if (!dynamic) models.push_back("port");

    auto model_of = [](const std::string& name) {
        if (name == "broadcast") return CommunicationModel::Broadcast;
        if (name == "outdegree") return CommunicationModel::OutdegreeAware;
        if (name == "symmetric") return CommunicationModel::Symmetric;
        return CommunicationModel::OutputPortAware;
    };
    auto help_of = [](const std::string& h) {
        if (h == "none") return Help::none();
        if (h == "bound") return Help::bound(5);
        if (h == "n") return Help::exact_n(3);
        return Help::leaders(1);
    };

    Json cells = Json::array();
    bool all_pass = true;

    // shared witnesses, computed once
    bool flood_static = false, flood_dynamic = false;
    std::vector<Value> abc = {Value::parse("a"), Value::parse("b"), Value::parse("b"),
                              Value::parse("c")};
    if (!dynamic) {
        flood_static = matrix_detail::flooding_set_witness(
            GraphSchedule(ring_directed(4, true)), abc);
    } else {
        std::vector<Value> ab = {Value::parse("a"), Value::parse("b"), Value::parse("b")};
        flood_dynamic = matrix_detail::flooding_set_witness(
            GraphSchedule(matrix_detail::witness_dynamic_schedule()), ab);
    }

    for (const std::string& m : models) {
        for (const std::string& h : helps) {
            Json cell;
            cell["model"] = m;
            cell["help"] = h;
            std::string computable, witness, impossibility = "out of scope (proof-only)";

            if (m == "broadcast") {
                computable = "set-based";
                witness = (dynamic ? flood_dynamic : flood_static) ? "pass" : "fail";
                impossibility = matrix_detail::star_broadcast_witness(dynamic)
                                    ? "witnessed by fibration-lift trace equality"
                                    : "witness failed";
            } else if (!dynamic) {
                computable = (h == "none" || h == "bound") ? "frequency-based" : "multiset-based";
                TargetFunction f = (h == "none" || h == "bound") ? make_average()
                                   : h == "n"                    ? make_sum()
                                                                 : make_multiset();
                witness = static_positive_witness(model_of(m), help_of(h), f) ? "pass" : "fail";
                if (h == "none" || h == "bound")
                    impossibility = matrix_detail::ring_witness(model_of(m))
                                        ? "witnessed by fibration-lift trace equality"
                                        : "witness failed";
            } else if (m == "outdegree") {
                if (h == "none" || h == "leader") {
                    computable = "open question";
                    witness = "open question";
                } else if (h == "bound") {
                    computable = "frequency-based";
                    witness = matrix_detail::dynamic_pushsum_witness(Help::bound(3), make_average())
                                  ? "pass"
                                  : "fail";
                    impossibility = matrix_detail::ring_witness(CommunicationModel::OutdegreeAware)
                                        ? "witnessed by fibration-lift trace equality"
                                        : "witness failed";
                } else {  // n known
                    computable = "multiset-based";
                    witness = matrix_detail::dynamic_pushsum_witness(Help::exact_n(3), make_sum())
                                  ? "pass"
                                  : "fail";
                }
            } else {  // dynamic, symmetric: positive results use algorithms
                      // whose update rules are outside this library
                computable = (h == "none" || h == "bound") ? "frequency-based" : "multiset-based";
                witness = "out of scope (proof-only)";
                if (h == "none" || h == "bound")
                    impossibility = matrix_detail::ring_witness(CommunicationModel::Symmetric)
                                        ? "witnessed by fibration-lift trace equality"
                                        : "witness failed";
            }

            cell["computable"] = computable;
            cell["witness"] = witness;
            cell["impossibility"] = impossibility;
            if (witness == "fail" || impossibility == "witness failed") all_pass = false;
            cells.push_back(std::move(cell));
        }
    }

    Json report;
    report["family"] = family;
    report["cells"] = std::move(cells);
    report["all_witnesses_pass"] = all_pass;
    return report;
}

}  // namespace anonet
