// Command-line front end: scenario runner, computability matrix report,
// minimum base extraction, Push-Sum experiments, and the static
// view-solve algorithm.
//
// Exit codes: 0 success, 2 convergence/stabilization failure,
// 3 validation error, 4 internal invariant breach.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anonet/anonet.hpp"

namespace fs = std::filesystem;
using namespace anonet;

namespace {

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return j;
}

std::vector<Value> parse_value_list(const std::string& csv) {
    std::vector<Value> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Value::parse(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
    Json doc = load_json(scenario_path);
    Scenario s = parse_scenario(doc);
    ScenarioReport rep = run_scenario(s);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ostringstream trace;
        trace_to_jsonl(rep.trace, trace);
        write_file(fs::path(out_dir) / (s.name + ".trace.jsonl"), trace.str());
        write_file(fs::path(out_dir) / (s.name + ".summary.csv"),
                   scenario_summary_csv(s, rep.trace));
        write_file(fs::path(out_dir) / (s.name + ".report.json"), rep.to_json().dump(2) + "\n");
    }
    std::cout << rep.to_json().dump(2) << "\n";
    return rep.passed() ? 0 : 2;
}

int cmd_matrix(const std::string& family) {
    Json r = matrix_report(family);
    std::cout << r.dump(2) << "\n";
    return r["all_witnesses_pass"].get<bool>() ? 0 : 2;
}

int cmd_minbase(const std::string& graph_path, const RefineOptions& opt) {
    DirectedMultigraph g = json_to_graph(load_json(graph_path));
    Fibration f = minimum_base(g, opt);
    Json out = fibration_to_json(f);
    out["prime"] = is_fibration_prime(f.base, opt);
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct PushSumArgs {
    std::string function, help_mode = "none", mode = "exact";
    std::string graph_path, dynamic_path;
    std::string starts, inputs, weights, csv_path;
    std::string eps = "1/1000000";
    int max_rounds = 0;
    bool raw_wire = false;
};

int cmd_pushsum(const PushSumArgs& args) {
    if (args.graph_path.empty() == args.dynamic_path.empty())
        throw ValidationError("exactly one of --graph and --dynamic is required");
    GraphSchedule sched = args.graph_path.empty()
                              ? GraphSchedule(json_to_dynamic(load_json(args.dynamic_path)))
                              : GraphSchedule(json_to_graph(load_json(args.graph_path)));
    int n = sched.n();

    std::vector<Value> inputs;
    if (!args.inputs.empty()) inputs = parse_value_list(args.inputs);
    else if (sched.at(1).valuation()) inputs = *sched.at(1).valuation();
    else throw ValidationError("no --inputs and the graph has no valuation");

    Help help = parse_help(args.help_mode);
    if (help.kind == Help::Kind::ExactN)
        throw ValidationError("pushsum help modes are none, bound=N or leaders=L");
    Rat eps = parse_rat(args.eps);
    if (eps <= 0) throw ValidationError("eps must be positive");

    bool scalar = args.function.empty();
    bool float_mode = args.mode == "float";
    if (args.mode != "exact" && args.mode != "float")
        throw ValidationError("--mode must be exact or float");
    if (float_mode && !scalar)
        throw ValidationError("float mode applies to the scalar quot-sum form only");

    AlgorithmDescriptor algo;
    TargetFunction f;
    if (scalar) {
        PushSumOptions opt;
        if (!args.weights.empty())
            for (const Value& v : parse_value_list(args.weights)) opt.weights.push_back(v.rat());
        opt.predivide = !args.raw_wire;
        opt.leader_seeded = help.kind == Help::Kind::Leaders;
        algo = float_mode ? make_pushsum_float(opt) : make_pushsum(opt);
    } else {
        f = parse_target(args.function);
        algo = make_frequency_pushsum(f, help);
    }

    RunOptions opt;
    opt.rounds = args.max_rounds;
    if (!args.starts.empty()) opt.starts = parse_int_list(args.starts);

    ExecutionTrace tr = run(algo, sched, inputs, opt);

    // diameter for the theoretical bound: static graphs use the hop diameter,
    // dynamic schedules measure over one prefix+cycle window
    std::optional<int> diam =
        sched.is_static() ? diameter(sched.static_graph())
                          : dynamic_diameter(sched.dynamic(),
                                             4 * static_cast<int>(sched.dynamic().cycle_length() +
                                                                  sched.dynamic().prefix_length()) +
                                                 4 * n + 8);
    int max_start = 1;
    for (int s : opt.starts) max_start = std::max(max_start, s);
    std::optional<long long> bound;
    if (diam) bound = convergence_bound(n, *diam + (max_start - 1), eps);

    // per-round envelope over whichever scalar kind the outputs carry
    Json report;
    std::ostringstream csv;
    csv << "round,min_x,max_x,spread\n";
    Json min_x = Json::array(), max_x = Json::array(), spread = Json::array();
    for (std::size_t t = 0; t < tr.outputs.size(); ++t) {
        std::optional<Rat> lo, hi;
        std::optional<double> flo, fhi;
        bool ready = true;
        for (const Output& o : tr.outputs[t]) {
            if (o.is_rat()) {
                if (!lo || o.rat() < *lo) lo = o.rat();
                if (!hi || o.rat() > *hi) hi = o.rat();
            } else if (o.is_real()) {
                if (!flo || o.real() < *flo) flo = o.real();
                if (!fhi || o.real() > *fhi) fhi = o.real();
            } else {
                ready = false;
            }
        }
        if (!ready || (!lo && !flo)) {
            csv << t << ",,,\n";
            min_x.push_back(nullptr);
            max_x.push_back(nullptr);
            spread.push_back(nullptr);
        } else if (lo) {
            csv << t << "," << rat_str(*lo) << "," << rat_str(*hi) << "," << rat_str(*hi - *lo)
                << "\n";
            min_x.push_back(rat_str(*lo));
            max_x.push_back(rat_str(*hi));
            spread.push_back(rat_str(*hi - *lo));
        } else {
            csv << t << "," << *flo << "," << *fhi << "," << (*fhi - *flo) << "\n";
            min_x.push_back(*flo);
            max_x.push_back(*fhi);
            spread.push_back(*fhi - *flo);
        }
    }
    if (!args.csv_path.empty()) write_file(args.csv_path, csv.str());

    // expected limit / value, and the first round settled within eps
    std::optional<int> within;
    bool pass = false;
    if (scalar && !float_mode) {
        Rat y0(0), z0(0);
        for (const Datum& st : tr.states.front()) {
            y0 += pushsum_y(st);
            z0 += pushsum_z(st);
        }
        if (z0 == 0) throw ValidationError("total weight is zero");
        Rat target = y0 / z0;
        PushSumReport pr = check_pushsum_trace(tr, target, eps);
        within = pr.within_from;
        report["target"] = rat_str(target);
        report["mass_conserved"] = pr.mass_conserved;
        report["envelopes_monotone"] = pr.envelopes_monotone;
        pass = within.has_value() && pr.mass_conserved && pr.envelopes_monotone;
    } else if (scalar) {
        double y0 = 0, z0 = 0;
        for (const Datum& st : tr.states.front()) {
            y0 += st.as_list()[0].as_real();
            z0 += st.as_list()[1].as_real();
        }
        if (z0 == 0) throw ValidationError("total weight is zero");
        double target = y0 / z0;
        double slack = static_cast<double>(eps) + 1e-12;  // float mode tolerance
        int last_outside = -1;
        for (int t = 0; t < static_cast<int>(tr.outputs.size()); ++t)
            for (const Output& o : tr.outputs[static_cast<std::size_t>(t)])
                if (!o.is_real() || std::abs(o.real() - target) > slack) last_outside = t;
        if (last_outside + 1 < static_cast<int>(tr.outputs.size())) within = last_outside + 1;
        report["target"] = target;
        pass = within.has_value();
    } else {
        Output expected = eval_on_vector(f, inputs);
        Metric metric = expected.is_rat() ? Metric::Euclidean : Metric::Discrete;
        within = scenario_detail::within_from(tr, expected, metric, eps);
        report["target"] = output_to_json(expected);
        pass = within.has_value();
    }

    report["rounds_run"] = args.max_rounds;
    report["eps"] = rat_str(eps);
    if (bound) report["bound_rounds"] = *bound;
    if (within) report["first_within_eps"] = *within;
    report["min_x"] = std::move(min_x);
    report["max_x"] = std::move(max_x);
    report["spread"] = std::move(spread);
    report["verdict"] = pass ? "converged" : "failed";
    std::cout << report.dump(2) << "\n";
    return pass ? 0 : 2;
}

struct StaticComputeArgs {
    std::string model, function, help_mode = "none", graph_path, inputs;
    int rounds = 0;
};

int cmd_static_compute(const StaticComputeArgs& args) {
    DirectedMultigraph g = json_to_graph(load_json(args.graph_path));
    std::vector<Value> inputs;
    if (!args.inputs.empty()) inputs = parse_value_list(args.inputs);
    else if (g.valuation()) inputs = *g.valuation();
    else throw ValidationError("no --inputs and the graph has no valuation");

    CommunicationModel model = parse_model(args.model);
    TargetFunction f = parse_target(args.function);
    Help help = parse_help(args.help_mode);
    AlgorithmDescriptor algo = make_static_algorithm(f, model, help);

    int rounds = args.rounds;
    if (rounds <= 0) {
        std::optional<int> diam = diameter(g);
        if (!diam) throw ValidationError("graph is not strongly connected");
        rounds = g.n() + *diam + 2;
    }
    RunOptions opt;
    opt.rounds = rounds;
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);

    for (std::size_t t = 0; t < tr.outputs.size(); ++t) {
        std::cout << "round " << t << ":";
        for (const Output& o : tr.outputs[t]) std::cout << " " << o.str();
        std::cout << "\n";
    }
    std::optional<int> stable = stable_from(tr);
    bool agree = all_agents_agree(tr, rounds);
    if (stable && agree) {
        std::cout << "stabilized at round " << *stable << " with output "
                  << tr.outputs.back().front().str() << "\n";
        return 0;
    }
    std::cout << (stable ? "stabilized but agents disagree" : "not stabilized within the budget")
              << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anonymous-network simulator and analysis toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir;
    auto* run_cmd = app.add_subcommand("run", "run a scenario file and report the verdict");
    run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run_cmd->add_option("--out", out_dir, "directory for trace/summary/report files");

    std::string family;
    auto* matrix_cmd =
        app.add_subcommand("matrix", "run the computability matrix witness suites");
    matrix_cmd->add_option("--family", family, "static or dynamic")->required();

    std::string graph_path;
    RefineOptions refine;
    auto* minbase_cmd = app.add_subcommand("minbase", "compute the minimum base of a graph");
    minbase_cmd->add_option("graph", graph_path, "graph JSON file")->required();
    minbase_cmd->add_flag("--outdeg", refine.use_outdeg, "separate classes by outdegree");
    bool no_valuation = false, no_ports = false, no_leaders = false;
    minbase_cmd->add_flag("--ignore-valuation", no_valuation, "ignore vertex values");
    minbase_cmd->add_flag("--ignore-ports", no_ports, "ignore port labels");
    minbase_cmd->add_flag("--ignore-leaders", no_leaders, "ignore leader marks");

    PushSumArgs ps;
    auto* pushsum_cmd = app.add_subcommand("pushsum", "run Push-Sum to convergence");
    pushsum_cmd->add_option("--function", ps.function,
                            "target function (omit for the scalar quot-sum form)");
    pushsum_cmd->add_option("--help-mode", ps.help_mode, "none, bound=N or leaders=L");
    pushsum_cmd->add_option("--mode", ps.mode, "exact or float");
    pushsum_cmd->add_option("--graph", ps.graph_path, "static graph JSON file");
    pushsum_cmd->add_option("--dynamic", ps.dynamic_path, "dynamic graph JSON file");
    pushsum_cmd->add_option("--starts", ps.starts, "comma-separated 1-based start rounds");
    pushsum_cmd->add_option("--inputs", ps.inputs, "comma-separated input values");
    pushsum_cmd->add_option("--weights", ps.weights, "comma-separated rational weights");
    pushsum_cmd->add_option("--eps", ps.eps, "convergence tolerance as p/q");
    pushsum_cmd->add_option("--max-rounds", ps.max_rounds, "round budget")->required();
    pushsum_cmd->add_option("--csv", ps.csv_path, "write the per-round envelope CSV here");
    pushsum_cmd->add_flag("--raw-wire", ps.raw_wire,
                          "send <y, z, outdegree> and divide at the receiver");

    StaticComputeArgs sc;
    auto* static_cmd =
        app.add_subcommand("static-compute", "run the view-solve algorithm on a static graph");
    static_cmd->add_option("--model", sc.model, "broadcast, outdegree, symmetric or port")
        ->required();
    static_cmd->add_option("--function", sc.function, "target function spec")->required();
    static_cmd->add_option("--help-mode", sc.help_mode, "none, bound=N, n=N or leaders=L");
    static_cmd->add_option("--graph", sc.graph_path, "graph JSON file")->required();
    static_cmd->add_option("--inputs", sc.inputs, "comma-separated input values");
    static_cmd->add_option("--rounds", sc.rounds, "round budget (default n + diameter + 2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(scenario_path, out_dir);
        if (*matrix_cmd) return cmd_matrix(family);
        if (*minbase_cmd) {
            refine.use_valuation = !no_valuation;
            refine.use_ports = !no_ports;
            refine.use_leaders = !no_leaders;
            return cmd_minbase(graph_path, refine);
        }
        if (*pushsum_cmd) return cmd_pushsum(ps);
        if (*static_cmd) return cmd_static_compute(sc);
    } catch (const InvariantBreach& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
