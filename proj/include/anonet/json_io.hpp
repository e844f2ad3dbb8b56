#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynamic_graph.hpp"
#include "engine.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "morphism.hpp"
#include "output.hpp"

namespace anonet {

using Json = nlohmann::json;

namespace json_detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError(where + ": unknown field \"" + it.key() + "\"");
}

inline int as_index(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
    return j.get<int>();
}

// JSON object keys are strings; graph maps are keyed by integer index.
inline int key_index(const std::string& k, const std::string& where) {
    try {
        std::size_t used = 0;
        int v = std::stoi(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": key \"" + k + "\" is not an integer index");
    }
}

}  // namespace json_detail

inline Json value_to_json(const Value& v) { return Json(v.str()); }

inline Value json_to_value(const Json& j) {
    if (j.is_number_integer()) return Value::rational(Rat(j.get<long long>()));
    if (j.is_string()) return Value::parse(j.get<std::string>());
    throw ValidationError("value must be an integer or a string like \"7/3\" or \"a\"");
}

inline Json rat_to_json(const Rat& r) { return Json(rat_str(r)); }

inline Rat json_to_rat(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw ValidationError("rational must be an integer or a \"p/q\" string");
}

inline Json graph_to_json(const DirectedMultigraph& g) {
    Json j;
    j["n"] = g.n();
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({e.src, e.dst}));
    j["edges"] = std::move(edges);
    if (g.valuation()) {
        Json valuation = Json::object();
        for (int v = 0; v < g.n(); ++v)
            valuation[std::to_string(v)] =
                value_to_json((*g.valuation())[static_cast<std::size_t>(v)]);
        j["valuation"] = std::move(valuation);
    }
    if (g.leaders()) {
        Json leaders = Json::array();
        for (int v = 0; v < g.n(); ++v)
            if ((*g.leaders())[static_cast<std::size_t>(v)]) leaders.push_back(v);
        j["leaders"] = std::move(leaders);
    }
    if (g.ports()) {
        Json ports = Json::object();
        for (int e = 0; e < g.m(); ++e) ports[std::to_string(e)] = g.port(e);
        j["ports"] = std::move(ports);
    }
    if (g.out_valuation()) {
        Json ov = Json::object();
        for (int v = 0; v < g.n(); ++v) ov[std::to_string(v)] = g.send_degree(v);
        j["out_valuation"] = std::move(ov);
    }
    return j;
}

inline DirectedMultigraph json_to_graph(const Json& j) {
    json_detail::reject_unknown(
        j, {"n", "edges", "valuation", "ports", "leaders", "out_valuation"}, "graph");
    if (!j.contains("n") || !j.contains("edges"))
        throw ValidationError("graph: fields n and edges are required");
    int n = json_detail::as_index(j.at("n"), "graph.n");
    if (!j.at("edges").is_array()) throw ValidationError("graph.edges: expected an array");
    std::vector<Edge> edges;
    for (const Json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("graph.edges: each edge is a [source, target] pair");
        edges.push_back({json_detail::as_index(e[0], "graph.edges"),
                         json_detail::as_index(e[1], "graph.edges")});
    }
    DirectedMultigraph g(n, std::move(edges));
    if (j.contains("valuation")) {
        if (!j.at("valuation").is_object())
            throw ValidationError("graph.valuation: expected an object");
        std::vector<std::optional<Value>> vals(static_cast<std::size_t>(n));
        for (auto it = j.at("valuation").begin(); it != j.at("valuation").end(); ++it) {
            int v = json_detail::key_index(it.key(), "graph.valuation");
            if (v < 0 || v >= n) throw ValidationError("graph.valuation: vertex out of range");
            vals[static_cast<std::size_t>(v)] = json_to_value(it.value());
        }
        for (int v = 0; v < n; ++v)
            if (!vals[static_cast<std::size_t>(v)])
                throw ValidationError("graph.valuation: missing vertex " + std::to_string(v));
        std::vector<Value> flat;
        for (auto& o : vals) flat.push_back(std::move(*o));
        g.set_valuation(std::move(flat));
    }
    if (j.contains("leaders")) {
        if (!j.at("leaders").is_array())
            throw ValidationError("graph.leaders: expected an array of vertex ids");
        std::vector<bool> flags(static_cast<std::size_t>(n), false);
        for (const Json& l : j.at("leaders")) {
            int v = json_detail::as_index(l, "graph.leaders");
            if (v < 0 || v >= n) throw ValidationError("graph.leaders: vertex out of range");
            flags[static_cast<std::size_t>(v)] = true;
        }
        g.set_leaders(std::move(flags));
    }
    if (j.contains("ports")) {
        if (!j.at("ports").is_object()) throw ValidationError("graph.ports: expected an object");
        std::vector<int> ports(static_cast<std::size_t>(g.m()), 0);
        for (auto it = j.at("ports").begin(); it != j.at("ports").end(); ++it) {
            int e = json_detail::key_index(it.key(), "graph.ports");
            if (e < 0 || e >= g.m()) throw ValidationError("graph.ports: edge index out of range");
            ports[static_cast<std::size_t>(e)] = json_detail::as_index(it.value(), "graph.ports");
        }
        g.set_ports(std::move(ports));
    }
    if (j.contains("out_valuation")) {
        if (!j.at("out_valuation").is_object())
            throw ValidationError("graph.out_valuation: expected an object");
        std::vector<int> ov(static_cast<std::size_t>(n), -1);
        for (auto it = j.at("out_valuation").begin(); it != j.at("out_valuation").end(); ++it) {
            int v = json_detail::key_index(it.key(), "graph.out_valuation");
            if (v < 0 || v >= n)
                throw ValidationError("graph.out_valuation: vertex out of range");
            ov[static_cast<std::size_t>(v)] =
                json_detail::as_index(it.value(), "graph.out_valuation");
        }
        for (int v = 0; v < n; ++v)
            if (ov[static_cast<std::size_t>(v)] < 0)
                throw ValidationError("graph.out_valuation: missing vertex " + std::to_string(v));
        g.set_out_valuation(std::move(ov));
    }
    return g;
}

inline Json dynamic_to_json(const DynamicGraph& d) {
    Json j;
    Json prefix = Json::array();
    for (const DirectedMultigraph& g : d.prefix()) prefix.push_back(graph_to_json(g));
    Json cycle = Json::array();
    for (const DirectedMultigraph& g : d.cycle()) cycle.push_back(graph_to_json(g));
    j["prefix"] = std::move(prefix);
    j["cycle"] = std::move(cycle);
    return j;
}

inline DynamicGraph json_to_dynamic(const Json& j) {
    json_detail::reject_unknown(j, {"prefix", "cycle"}, "dynamic graph");
    if (!j.contains("cycle")) throw ValidationError("dynamic graph: field cycle is required");
    std::vector<DirectedMultigraph> prefix, cycle;
    if (j.contains("prefix")) {
        if (!j.at("prefix").is_array())
            throw ValidationError("dynamic graph.prefix: expected an array");
        for (const Json& g : j.at("prefix")) prefix.push_back(json_to_graph(g));
    }
    if (!j.at("cycle").is_array()) throw ValidationError("dynamic graph.cycle: expected an array");
    for (const Json& g : j.at("cycle")) cycle.push_back(json_to_graph(g));
    return DynamicGraph(std::move(prefix), std::move(cycle));
}

// A graph document is dynamic exactly when it carries a cycle.
inline GraphSchedule json_to_schedule(const Json& j) {
    if (j.is_object() && j.contains("cycle")) return GraphSchedule(json_to_dynamic(j));
    return GraphSchedule(json_to_graph(j));
}

// Datum encoding: null, integers and arrays map directly; "p/q" strings are
// rationals; {"t": s} wraps text; {"f": x} wraps binary floats.
inline Json datum_to_json(const Datum& d) {
    if (d.is_unit()) return Json();
    if (d.is_int()) return Json(d.as_int());
    if (d.is_rat()) return Json(rat_str(d.as_rat()));
    if (d.is_real()) return Json{{"f", d.as_real()}};
    if (d.is_text()) return Json{{"t", d.as_text()}};
    Json xs = Json::array();
    for (const Datum& x : d.as_list()) xs.push_back(datum_to_json(x));
    return xs;
}

inline Datum json_to_datum(const Json& j) {
    if (j.is_null()) return Datum();
    if (j.is_number_integer()) return Datum(j.get<std::int64_t>());
    if (j.is_string()) return Datum(parse_rat(j.get<std::string>()));
    if (j.is_array()) {
        std::vector<Datum> xs;
        for (const Json& x : j) xs.push_back(json_to_datum(x));
        return Datum(std::move(xs));
    }
    if (j.is_object() && j.size() == 1 && j.contains("t") && j.at("t").is_string())
        return Datum(j.at("t").get<std::string>());
    if (j.is_object() && j.size() == 1 && j.contains("f") && j.at("f").is_number())
        return Datum(j.at("f").get<double>());
    throw ValidationError("datum: expected null, integer, \"p/q\", array, {\"t\": ...} or {\"f\": ...}");
}

inline Json output_to_json(const Output& o) {
    Json j;
    if (o.is_not_ready()) {
        j["kind"] = "not-ready";
    } else if (o.is_rat()) {
        j["kind"] = "rational";
        j["value"] = rat_to_json(o.rat());
    } else if (o.is_real()) {
        j["kind"] = "real";
        j["value"] = o.real();
    } else if (o.is_value()) {
        j["kind"] = "value";
        j["value"] = value_to_json(o.value());
    } else if (o.is_set()) {
        j["kind"] = "set";
        Json xs = Json::array();
        for (const Value& v : o.set()) xs.push_back(value_to_json(v));
        j["value"] = std::move(xs);
    } else if (o.is_multiset()) {
        j["kind"] = "multiset";
        Json xs = Json::array();
        for (const auto& [v, c] : o.multiset())
            xs.push_back(Json::array({value_to_json(v), c.str()}));
        j["value"] = std::move(xs);
    } else {
        j["kind"] = "frequency";
        Json xs = Json::object();
        for (const auto& [v, f] : o.frequency().nu) xs[v.str()] = rat_to_json(f);
        j["value"] = std::move(xs);
    }
    return j;
}

inline Json matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json fibration_to_json(const Fibration& f) {
    Json j;
    j["base"] = graph_to_json(f.base);
    j["vertex_map"] = f.phi.vertex_map;
    j["edge_map"] = f.phi.edge_map;
    Json fibres = Json::array();
    for (const auto& fibre : f.fibres) fibres.push_back(fibre);
    j["fibres"] = std::move(fibres);
    return j;
}

inline std::size_t state_digest(const Datum& d) { return std::hash<std::string>{}(d.text()); }

// One JSON object per line per round: round index, per-agent outputs, and a
// short per-agent state digest for change tracking.
inline void trace_to_jsonl(const ExecutionTrace& trace, std::ostream& os,
                           bool with_digests = true) {
    for (std::size_t t = 0; t < trace.outputs.size(); ++t) {
        Json j;
        j["round"] = t;
        Json outs = Json::array();
        for (const Output& o : trace.outputs[t]) outs.push_back(output_to_json(o));
        j["outputs"] = std::move(outs);
        if (with_digests) {
            Json digests = Json::array();
            for (const Datum& s : trace.states[t]) {
                char buf[20];
                std::snprintf(buf, sizeof buf, "%016zx", state_digest(s));
                digests.push_back(std::string(buf));
            }
            j["state_digest"] = std::move(digests);
        }
        os << j.dump() << "\n";
    }
}

}  // namespace anonet
