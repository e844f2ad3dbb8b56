#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "generators.hpp"
#include "json_io.hpp"
#include "pushsum.hpp"
#include "static_algo.hpp"
#include "target_function.hpp"

namespace anonet {

inline Help parse_help(const std::string& s) {
    if (s == "none" || s.empty()) return Help::none();
    auto eq = s.find('=');
    if (eq != std::string::npos) {
        std::string head = s.substr(0, eq);
        std::string arg = s.substr(eq + 1);
        try {
            if (head == "bound") return Help::bound(Int(arg));
            if (head == "n") return Help::exact_n(Int(arg));
            if (head == "leaders") return Help::leaders(std::stoi(arg));
        } catch (const std::exception&) {
            throw ValidationError("help mode \"" + s + "\" has a malformed argument");
        }
    }
    throw ValidationError("help mode must be none, bound=N, n=N or leaders=L, got \"" + s + "\"");
}

inline std::string help_str(const Help& h) {
    switch (h.kind) {
        case Help::Kind::None: return "none";
        case Help::Kind::Bound: return "bound=" + h.n.str();
        case Help::Kind::ExactN: return "n=" + h.n.str();
        default: return "leaders=" + std::to_string(h.ell);
    }
}

// Graph documents in scenarios are either inline (n + edges, or prefix +
// cycle) or generator specs selected by a "generator" field.
inline GraphSchedule schedule_from_spec(const Json& j, std::uint64_t seed) {
    if (j.is_object() && j.contains("generator")) {
        json_detail::reject_unknown(j,
                                    {"generator", "n", "leaves", "self_loops", "diameter",
                                     "extra_edge_prob", "ports"},
                                    "graph generator");
        std::string kind = j.at("generator").get<std::string>();
        bool loops = j.value("self_loops", false);
        bool ports = j.value("ports", false);
        std::mt19937_64 rng(seed);
        auto with_ports = [&](DirectedMultigraph g) {
            return ports ? g.with_canonical_ports() : g;
        };
        if (kind == "ring") return GraphSchedule(with_ports(ring_directed(j.at("n").get<int>(), loops)));
        if (kind == "ring-bidirectional")
            return GraphSchedule(ring_bidirectional(j.at("n").get<int>()));
        if (kind == "star") return GraphSchedule(star_bidirectional(j.at("leaves").get<int>()));
        if (kind == "complete")
            return GraphSchedule(with_ports(complete_graph(j.at("n").get<int>(), loops)));
        if (kind == "random-sc")
            return GraphSchedule(with_ports(random_strongly_connected(
                j.at("n").get<int>(), rng, j.value("extra_edge_prob", 0.3), loops)));
        if (kind == "random-symmetric")
            return GraphSchedule(with_ports(random_symmetric_connected(
                j.at("n").get<int>(), rng, j.value("extra_edge_prob", 0.3), loops)));
        if (kind == "random-dynamic")
            return GraphSchedule(
                random_dynamic_with_diameter(j.at("n").get<int>(), j.at("diameter").get<int>(), rng));
        throw ValidationError("unknown graph generator \"" + kind + "\"");
    }
    return json_to_schedule(j);
}

struct Scenario {
    std::string name = "unnamed";
    CommunicationModel model = CommunicationModel::Broadcast;
    Json graph_spec;
    std::string algorithm;
    Json algorithm_params = Json::object();
    std::optional<TargetFunction> function;
    Help help = Help::none();
    std::vector<Value> inputs;  // empty = take the graph valuation
    std::vector<int> starts;
    std::optional<std::vector<Datum>> init_override;
    int rounds = 0;
    Metric metric = Metric::Euclidean;
    std::optional<Rat> eps;
    bool float_arithmetic = false;
    std::uint64_t seed = 1;
};

inline Scenario parse_scenario(const Json& j) {
    json_detail::reject_unknown(j,
                                {"name", "model", "graph", "algorithm", "function", "help",
                                 "inputs", "starts", "init", "rounds", "metric", "eps",
                                 "arithmetic", "seed"},
                                "scenario");
    for (const char* field : {"model", "graph", "algorithm", "rounds"})
        if (!j.contains(field))
            throw ValidationError(std::string("scenario: field ") + field + " is required");
    Scenario s;
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    s.model = parse_model(j.at("model").get<std::string>());
    s.graph_spec = j.at("graph");
    if (j.at("algorithm").is_string()) {
        s.algorithm = j.at("algorithm").get<std::string>();
    } else {
        if (!j.at("algorithm").is_object() || !j.at("algorithm").contains("name"))
            throw ValidationError("scenario.algorithm: expected a name or {name, ...params}");
        s.algorithm_params = j.at("algorithm");
        s.algorithm = s.algorithm_params.at("name").get<std::string>();
        s.algorithm_params.erase("name");
    }
    if (j.contains("function")) s.function = parse_target(j.at("function").get<std::string>());
    if (j.contains("help")) s.help = parse_help(j.at("help").get<std::string>());
    if (j.contains("inputs")) {
        if (!j.at("inputs").is_array()) throw ValidationError("scenario.inputs: expected an array");
        for (const Json& v : j.at("inputs")) s.inputs.push_back(json_to_value(v));
    }
    if (j.contains("starts")) {
        if (!j.at("starts").is_array()) throw ValidationError("scenario.starts: expected an array");
        for (const Json& v : j.at("starts"))
            s.starts.push_back(json_detail::as_index(v, "scenario.starts"));
    }
    if (j.contains("init")) {
        if (!j.at("init").is_array()) throw ValidationError("scenario.init: expected an array");
        std::vector<Datum> init;
        for (const Json& v : j.at("init")) init.push_back(json_to_datum(v));
        s.init_override = std::move(init);
    }
    s.rounds = json_detail::as_index(j.at("rounds"), "scenario.rounds");
    if (j.contains("metric")) {
        std::string m = j.at("metric").get<std::string>();
        if (m == "discrete") s.metric = Metric::Discrete;
        else if (m == "euclidean") s.metric = Metric::Euclidean;
        else throw ValidationError("scenario.metric must be discrete or euclidean");
    }
    if (j.contains("eps")) s.eps = json_to_rat(j.at("eps"));
    if (j.contains("arithmetic")) {
        std::string a = j.at("arithmetic").get<std::string>();
        if (a == "float") s.float_arithmetic = true;
        else if (a != "exact")
            throw ValidationError("scenario.arithmetic must be exact or float");
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

namespace scenario_detail {

inline std::vector<Rat> parse_weights(const Json& params) {
    std::vector<Rat> w;
    if (params.contains("weights"))
        for (const Json& x : params.at("weights")) w.push_back(json_to_rat(x));
    return w;
}

}  // namespace scenario_detail

using AlgorithmBuilder = std::function<AlgorithmDescriptor(const Scenario&)>;

// Registry of runnable algorithms; extensible so tools can add custom
// descriptors without touching the library.
inline std::map<std::string, AlgorithmBuilder>& algorithm_registry() {
    static std::map<std::string, AlgorithmBuilder> reg = [] {
        std::map<std::string, AlgorithmBuilder> r;
        auto corpus = [](AlgorithmDescriptor (*make)()) {
            return [make](const Scenario& s) {
                AlgorithmDescriptor a = make();
                a.model = s.model;  // value-only algorithms run under any model
                return a;
            };
        };
        r["flooding-max"] = corpus(&make_flooding_max);
        r["flooding-min"] = corpus(&make_flooding_min);
        r["flooding-set"] = corpus(&make_flooding_set);
        r["history"] = corpus(&make_history_accumulator);
        r["pulse-counter"] = corpus(&make_pulse_counter);
        r["static-frequency"] = [](const Scenario& s) {
            if (!s.function)
                throw ValidationError("static-frequency needs a function spec");
            json_detail::reject_unknown(s.algorithm_params, {"depth_cap"}, "static-frequency params");
            int cap = s.algorithm_params.value("depth_cap", 16);
            return make_static_algorithm(*s.function, s.model, s.help, cap);
        };
        r["pushsum"] = [](const Scenario& s) {
            json_detail::reject_unknown(s.algorithm_params, {"weights", "predivide", "leader_seeded"},
                                        "pushsum params");
            PushSumOptions opt;
            opt.weights = scenario_detail::parse_weights(s.algorithm_params);
            opt.predivide = s.algorithm_params.value("predivide", true);
            opt.leader_seeded = s.algorithm_params.value("leader_seeded", false);
            if (s.help.kind == Help::Kind::Leaders) opt.leader_seeded = true;
            return s.float_arithmetic ? make_pushsum_float(opt) : make_pushsum(opt);
        };
        r["pushsum-frequency"] = [](const Scenario& s) {
            if (!s.function)
                throw ValidationError("pushsum-frequency needs a function spec");
            json_detail::reject_unknown(s.algorithm_params, {}, "pushsum-frequency params");
            if (s.float_arithmetic)
                throw ValidationError("pushsum-frequency runs in exact arithmetic only");
            return make_frequency_pushsum(*s.function, s.help);
        };
        return r;
    }();
    return reg;
}

inline AlgorithmDescriptor build_algorithm(const Scenario& s) {
    auto& reg = algorithm_registry();
    auto it = reg.find(s.algorithm);
    if (it == reg.end()) throw ValidationError("unknown algorithm \"" + s.algorithm + "\"");
    return it->second(s);
}

struct ScenarioReport {
    std::string name;
    std::string verdict;       // stabilized | converged | failed
    std::optional<int> round;  // stabilization round, or first round within eps
    Output final_output;       // representative (agent 0, last round)
    int rounds_run = 0;
    std::string detail;
    ExecutionTrace trace;

    bool passed() const { return verdict != "failed"; }

    Json to_json() const {
        Json j;
        j["name"] = name;
        j["verdict"] = verdict;
        if (round) j["round"] = *round;
        j["rounds_run"] = rounds_run;
        j["final_output"] = output_to_json(final_output);
        if (!detail.empty()) j["detail"] = detail;
        return j;
    }
};

namespace scenario_detail {

// First round from which every agent's output stays within eps of the
// expected output through the end of the trace.
inline std::optional<int> within_from(const ExecutionTrace& trace, const Output& expected,
                                      Metric metric, const Rat& eps) {
    int last_outside = -1;
    for (int t = 0; t < static_cast<int>(trace.outputs.size()); ++t)
        for (const Output& o : trace.outputs[static_cast<std::size_t>(t)]) {
            std::optional<Rat> d = o.distance(expected, metric);
            if (!d || *d > eps) last_outside = t;
        }
    if (last_outside + 1 >= static_cast<int>(trace.outputs.size())) return std::nullopt;
    return last_outside + 1;
}

inline Output expected_output(const Scenario& s, const AlgorithmDescriptor& algo,
                              const ExecutionTrace& trace, const std::vector<Value>& inputs) {
    if (s.algorithm == "pushsum") {
        if (s.float_arithmetic) {
            double y = 0, z = 0;
            for (const Datum& st : trace.states.front()) {
                y += st.as_list()[0].as_real();
                z += st.as_list()[1].as_real();
            }
            if (z == 0) throw ValidationError("pushsum scenario has zero total weight");
            return Output(y / z);
        }
        Rat y(0), z(0);
        for (const Datum& st : trace.states.front()) {
            y += pushsum_y(st);
            z += pushsum_z(st);
        }
        if (z == 0) throw ValidationError("pushsum scenario has zero total weight");
        return Output(y / z);
    }
    if (s.function) return eval_on_vector(*s.function, inputs);
    (void)algo;
    throw ValidationError("scenario with eps needs a function or a pushsum algorithm");
}

}  // namespace scenario_detail

inline ScenarioReport run_scenario(const Scenario& s) {
    GraphSchedule sched = schedule_from_spec(s.graph_spec, s.seed);
    std::vector<Value> inputs = s.inputs;
    if (inputs.empty()) {
        const auto& val = sched.at(1).valuation();
        if (!val) throw ValidationError("scenario has no inputs and the graph has no valuation");
        inputs = *val;
    }
    AlgorithmDescriptor algo = build_algorithm(s);
    RunOptions opt;
    opt.rounds = s.rounds;
    opt.starts = s.starts;
    opt.init_override = s.init_override;

    ScenarioReport rep;
    rep.name = s.name;
    rep.trace = run(algo, sched, inputs, opt);
    rep.rounds_run = s.rounds;
    const auto& final_row = rep.trace.outputs.back();
    rep.final_output = final_row.front();

    if (s.eps) {
        Output expected = scenario_detail::expected_output(s, algo, rep.trace, inputs);
        std::optional<int> from =
            scenario_detail::within_from(rep.trace, expected, s.metric, *s.eps);
        if (from) {
            rep.verdict = "converged";
            rep.round = from;
            rep.detail = "within eps of " + expected.str() + " from round " + std::to_string(*from);
        } else {
            rep.verdict = "failed";
            rep.detail = "never settled within eps of " + expected.str();
        }
        return rep;
    }

    std::optional<int> stable = stable_from(rep.trace);
    bool agree = all_agents_agree(rep.trace, static_cast<int>(rep.trace.outputs.size()) - 1);
    bool correct = true;
    if (s.function) {
        Output expected = eval_on_vector(*s.function, inputs);
        correct = final_row.front() == expected;
        if (!correct) rep.detail = "expected " + expected.str() + ", got " + final_row.front().str();
    }
    if (stable && agree && correct) {
        rep.verdict = "stabilized";
        rep.round = stable;
    } else {
        rep.verdict = "failed";
        if (rep.detail.empty())
            rep.detail = !stable ? "outputs still changing at the round budget"
                                 : "agents disagree at the final round";
    }
    return rep;
}

// Per-round summary rows: pushsum scenarios report the ratio envelope
// (round, min, max, spread); everything else reports output agreement.
inline std::string scenario_summary_csv(const Scenario& s, const ExecutionTrace& trace) {
    std::ostringstream os;
    if (s.algorithm == "pushsum") {
        os << "round,min_x,max_x,spread\n";
        for (std::size_t t = 0; t < trace.outputs.size(); ++t) {
            std::optional<Rat> lo, hi;
            bool all_ready = true;
            for (const Output& o : trace.outputs[t]) {
                if (!o.is_rat()) { all_ready = false; break; }
                if (!lo || o.rat() < *lo) lo = o.rat();
                if (!hi || o.rat() > *hi) hi = o.rat();
            }
            if (s.float_arithmetic) {
                std::optional<double> flo, fhi;
                all_ready = true;
                for (const Output& o : trace.outputs[t]) {
                    if (!o.is_real()) { all_ready = false; break; }
                    if (!flo || o.real() < *flo) flo = o.real();
                    if (!fhi || o.real() > *fhi) fhi = o.real();
                }
                if (all_ready)
                    os << t << "," << *flo << "," << *fhi << "," << (*fhi - *flo) << "\n";
                else
                    os << t << ",,,\n";
                continue;
            }
            if (all_ready)
                os << t << "," << rat_str(*lo) << "," << rat_str(*hi) << ","
                   << rat_str(*hi - *lo) << "\n";
            else
                os << t << ",,,\n";
        }
        return os.str();
    }
    os << "round,distinct_outputs,changed\n";
    for (std::size_t t = 0; t < trace.outputs.size(); ++t) {
        std::set<std::string> distinct;
        for (const Output& o : trace.outputs[t]) distinct.insert(o.str());
        bool changed = t > 0 && trace.outputs[t] != trace.outputs[t - 1];
        os << t << "," << distinct.size() << "," << (changed ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace anonet
