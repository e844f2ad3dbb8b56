#include <catch2/catch_amalgamated.hpp>

#include "anonet/anonet.hpp"
#include "oracles.hpp"

using namespace anonet;

namespace {

std::vector<Value> nums(std::initializer_list<long long> xs) {
    std::vector<Value> out;
    for (long long x : xs) out.push_back(val(x));
    return out;
}

std::vector<Rat> ratios_at(const ExecutionTrace& tr, int t) {
    std::vector<Rat> xs;
    for (const Datum& s : tr.states[static_cast<std::size_t>(t)])
        xs.push_back(pushsum_y(s) / pushsum_z(s));
    return xs;
}

Rat rat_pow(const Rat& base, int e) {
    Rat acc(1);
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

}  // namespace

TEST_CASE("ratio consensus on two looped agents averages in one round") {
    DirectedMultigraph g = complete_graph(2, true);
    RunOptions opt;
    opt.rounds = 6;
    ExecutionTrace tr = run(make_pushsum(), GraphSchedule(g), nums({0, 1}), opt);
    CHECK(tr.outputs[0][0] == Output(Rat(0)));
    CHECK(tr.outputs[0][1] == Output(Rat(1)));
    for (int t = 1; t <= 6; ++t) {
        CHECK(tr.outputs[static_cast<std::size_t>(t)][0] == Output(Rat(1, 2)));
        CHECK(tr.outputs[static_cast<std::size_t>(t)][1] == Output(Rat(1, 2)));
    }
    PushSumReport rep = check_pushsum_trace(tr, Rat(1, 2), Rat(1, 1000000));
    CHECK(rep.mass_conserved);
    CHECK(rep.envelopes_monotone);
    CHECK(rep.within_from == 1);
}

TEST_CASE("mass from one agent floods a complete graph in one round") {
    DirectedMultigraph g = complete_graph(3, true);
    RunOptions opt;
    opt.rounds = 3;
    ExecutionTrace tr = run(make_pushsum(), GraphSchedule(g), nums({3, 0, 0}), opt);
    for (int i = 0; i < 3; ++i) CHECK(tr.outputs[1][static_cast<std::size_t>(i)] == Output(Rat(1)));
}

TEST_CASE("a lone agent reports its own quotient forever") {
    PushSumOptions opt;
    opt.weights = {Rat(2)};
    RunOptions ro;
    ro.rounds = 5;
    ExecutionTrace tr = run(make_pushsum(opt), GraphSchedule(loops_only(1)), nums({7}), ro);
    for (const auto& outs : tr.outputs) CHECK(outs[0] == Output(Rat(7, 2)));
}

TEST_CASE("engine states follow the column-stochastic round matrices") {
    std::mt19937_64 rng(oracles::seeded(97)());
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        GraphSchedule sched = trial % 2 == 0
                                  ? GraphSchedule(random_strongly_connected(n, rng, 0.4, true))
                                  : GraphSchedule(random_dynamic_with_diameter(n, 1 + static_cast<int>(rng() % 2), rng));
        std::vector<Value> inputs;
        std::vector<Rat> y0, z0;
        for (int i = 0; i < n; ++i) {
            long long v = static_cast<long long>(rng() % 7);
            inputs.push_back(val(v));
            y0.push_back(Rat(v));
            z0.push_back(Rat(1));
        }
        RunOptions opt;
        opt.rounds = 10;
        ExecutionTrace tr = run(make_pushsum(), sched, inputs, opt);
        for (int t = 0; t <= 10; ++t) {
            std::vector<Rat> wy = oracles::apply_rounds(sched, y0, t);
            std::vector<Rat> wz = oracles::apply_rounds(sched, z0, t);
            for (int i = 0; i < n; ++i) {
                CHECK(pushsum_y(tr.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) ==
                      wy[static_cast<std::size_t>(i)]);
                CHECK(pushsum_z(tr.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) ==
                      wz[static_cast<std::size_t>(i)]);
            }
        }
    }
}

TEST_CASE("pre-divided and raw wire formats produce identical states") {
    std::mt19937_64 rng(oracles::seeded(101)());
    DirectedMultigraph g = random_strongly_connected(4, rng, 0.5, true);
    RunOptions opt;
    opt.rounds = 8;
    std::vector<Value> inputs = nums({1, 5, 2, 2});
    PushSumOptions raw;
    raw.predivide = false;
    ExecutionTrace a = run(make_pushsum(), GraphSchedule(g), inputs, opt);
    ExecutionTrace b = run(make_pushsum(raw), GraphSchedule(g), inputs, opt);
    CHECK(a.states == b.states);
}

TEST_CASE("weighted quotients and input validation") {
    DirectedMultigraph g = complete_graph(3, true);
    PushSumOptions opt;
    opt.weights = {Rat(1), Rat(1), Rat(2)};
    RunOptions ro;
    ro.rounds = 40;
    ExecutionTrace tr = run(make_pushsum(opt), GraphSchedule(g), nums({1, 2, 4}), ro);
    PushSumReport rep = check_pushsum_trace(tr, Rat(7, 4), Rat(1, 1000000));
    CHECK(rep.mass_conserved);
    CHECK(rep.envelopes_monotone);
    REQUIRE(rep.within_from);
    CHECK(*rep.within_from <= convergence_bound(3, 1, Rat(1, 1000000)));

    PushSumOptions bad;
    bad.weights = {Rat(1), Rat(0), Rat(1)};
    AlgorithmDescriptor algo = make_pushsum(bad);
    CHECK_THROWS_AS(run(algo, GraphSchedule(g), nums({1, 2, 4}), ro), ValidationError);
}

TEST_CASE("leader-seeded weights measure the sum") {
    DirectedMultigraph g = complete_graph(3, true);
    PushSumOptions opt;
    opt.leader_seeded = true;
    RunOptions ro;
    ro.rounds = 60;
    ro.leaders = std::vector<bool>{true, false, false};
    ExecutionTrace tr = run(make_pushsum(opt), GraphSchedule(g), nums({5, 1, 1}), ro);
    CHECK(tr.outputs[0][1] == Output::not_ready());  // no weight yet
    PushSumReport rep = check_pushsum_trace(tr, Rat(7), Rat(1, 1000000));
    CHECK(rep.mass_conserved);
    REQUIRE(rep.within_from);
}

TEST_CASE("weight envelopes respect the alpha-safe bounds") {
    std::mt19937_64 rng(oracles::seeded(103)());
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        DirectedMultigraph g = random_strongly_connected(n, rng, 0.4, true);
        int d = *diameter(g);
        RunOptions opt;
        opt.rounds = d + 8;
        std::vector<Value> inputs;
        for (int i = 0; i < n; ++i) inputs.push_back(val(static_cast<long long>(rng() % 5)));
        ExecutionTrace tr = run(make_pushsum(), GraphSchedule(g), inputs, opt);
        Rat total(n);  // unit weights
        Rat lower = total * rat_pow(Rat(1, n), d);
        for (int t = d; t <= opt.rounds; ++t)
            for (const Datum& s : tr.states[static_cast<std::size_t>(t)]) {
                CHECK(pushsum_z(s) >= lower);
                CHECK(pushsum_z(s) <= total);
            }
    }
}

TEST_CASE("spread contracts at the ergodic rate") {
    std::mt19937_64 rng(oracles::seeded(107)());
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        DirectedMultigraph g = random_strongly_connected(n, rng, 0.5, true);
        int d = *diameter(g);
        RunOptions opt;
        opt.rounds = 3 * d + 6;
        std::vector<Value> inputs;
        for (int i = 0; i < n; ++i) inputs.push_back(val(static_cast<long long>(rng() % 9)));
        ExecutionTrace tr = run(make_pushsum(), GraphSchedule(g), inputs, opt);
        Rat rate = Rat(1) - rat_pow(Rat(1, n), 2 * d);
        Rat s0 = spread(ratios_at(tr, 0));
        for (int t = 0; t <= opt.rounds; ++t)
            CHECK(spread(ratios_at(tr, t)) <= rat_pow(rate, t / d) * s0);
    }
}

TEST_CASE("frozen convergence bounds") {
    CHECK(convergence_bound_ln(2, 1, 1.0L) == 4);           // 1 * 2^2 * 1
    CHECK(convergence_bound(3, 1, Rat(1, 1000000)) == 125);  // 9 ln(1e6) rounded up
    CHECK(convergence_bound_ln(1, 2, 1.0L) == 2);
    CHECK(convergence_bound(2, 1, Rat(1)) == 0);
    CHECK_THROWS_AS(convergence_bound(0, 1, Rat(1, 2)), ValidationError);
    CHECK_THROWS_AS(convergence_bound(2, 0, Rat(1, 2)), ValidationError);
    CHECK_THROWS_AS(convergence_bound(2, 1, Rat(2)), ValidationError);
    CHECK_THROWS_AS(convergence_bound(2, 1, Rat(0)), ValidationError);
}

TEST_CASE("dynamic schedules converge within the proven bound") {
    std::mt19937_64 rng(oracles::seeded(109)());
    Rat eps(1, 10000);
    long long bound = convergence_bound(2, 1, eps);
    for (int trial = 0; trial < 5; ++trial) {
        DynamicGraph dg = random_dynamic_with_diameter(2, 1, rng);
        RunOptions opt;
        opt.rounds = static_cast<int>(bound) + 5;
        ExecutionTrace tr = run(make_pushsum(), GraphSchedule(dg), nums({0, 1}), opt);
        PushSumReport rep = check_pushsum_trace(tr, Rat(1, 2), eps);
        CHECK(rep.mass_conserved);
        CHECK(rep.envelopes_monotone);
        REQUIRE(rep.within_from);
        CHECK(*rep.within_from <= bound);
    }
}

TEST_CASE("restarting from a mid-run snapshot replays the suffix") {
    std::mt19937_64 rng(oracles::seeded(113)());
    DirectedMultigraph g = random_strongly_connected(4, rng, 0.4, true);
    RunOptions opt;
    opt.rounds = 20;
    std::vector<Value> inputs = nums({1, 2, 4, 8});
    ExecutionTrace full = run(make_pushsum(), GraphSchedule(g), inputs, opt);

    RunOptions resume;
    resume.rounds = 10;
    resume.init_override = full.states[10];
    ExecutionTrace tail = run(make_pushsum(), GraphSchedule(g), inputs, resume);
    for (int t = 0; t <= 10; ++t)
        CHECK(tail.states[static_cast<std::size_t>(t)] == full.states[static_cast<std::size_t>(t) + 10]);
}

TEST_CASE("floating-point twin tracks the exact ratios") {
    DirectedMultigraph g = complete_graph(3, true);
    RunOptions opt;
    opt.rounds = 30;
    std::vector<Value> inputs = nums({1, 2, 4});
    ExecutionTrace exact = run(make_pushsum(), GraphSchedule(g), inputs, opt);
    ExecutionTrace approx = run(make_pushsum_float(), GraphSchedule(g), inputs, opt);
    for (int t = 0; t <= 30; ++t)
        for (int i = 0; i < 3; ++i) {
            const Datum& es = exact.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            const Datum& fs = approx.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            double ex = Rat(pushsum_y(es) / pushsum_z(es)).convert_to<double>();
            double fx = fs.as_list()[0].as_real() / fs.as_list()[1].as_real();
            CHECK(std::abs(ex - fx) < 1e-9);
        }
    CHECK(std::abs(approx.outputs[30][0].real() - 7.0 / 3.0) < 1e-9);
}

TEST_CASE("trace checker flags tampered mass") {
    DirectedMultigraph g = complete_graph(2, true);
    RunOptions opt;
    opt.rounds = 4;
    ExecutionTrace tr = run(make_pushsum(), GraphSchedule(g), nums({0, 1}), opt);
    tr.states[2][0] = Datum(std::vector<Datum>{Datum(Rat(5)), Datum(Rat(1))});
    PushSumReport rep = check_pushsum_trace(tr, Rat(1, 2), Rat(1, 100));
    CHECK_FALSE(rep.mass_conserved);
}

TEST_CASE("frequency estimates round exactly onto the bounded grid") {
    DirectedMultigraph g = complete_graph(3, true);
    std::vector<Value> inputs{Value::token("a"), Value::token("a"), Value::token("b")};
    long long bound = convergence_bound(3, 1, Rat(1, 18));  // half the 1/9 grid gap
    RunOptions opt;
    opt.rounds = static_cast<int>(3 * bound);
    AlgorithmDescriptor algo = make_frequency_pushsum(make_frequency(), Help::exact_n(3));
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);
    FrequencyFunction nu;
    nu.nu[Value::token("a")] = Rat(2, 3);
    nu.nu[Value::token("b")] = Rat(1, 3);
    Output expect{nu};
    for (long long t = bound; t <= 3 * bound; ++t)
        for (const Output& o : tr.outputs[static_cast<std::size_t>(t)]) CHECK(o == expect);
}

TEST_CASE("uniform inputs are correct from the very first round") {
    DirectedMultigraph g = ring_directed(4, true);
    std::vector<Value> inputs(4, Value::token("c"));
    AlgorithmDescriptor algo = make_frequency_pushsum(make_frequency());
    RunOptions opt;
    opt.rounds = 6;
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);
    FrequencyFunction nu;
    nu.nu[Value::token("c")] = Rat(1);
    for (const auto& outs : tr.outputs)
        for (const Output& o : outs) CHECK(o == Output(nu));
}

TEST_CASE("bounded-size help turns estimates into exact frequencies") {
    DirectedMultigraph g = complete_graph(3, true);
    std::vector<Value> inputs = nums({1, 2, 4});
    long long bound = convergence_bound(3, 1, Rat(1, 18));
    RunOptions opt;
    opt.rounds = static_cast<int>(bound) + 5;
    AlgorithmDescriptor algo = make_frequency_pushsum(make_average(), Help::bound(3));
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);
    for (std::size_t t = static_cast<std::size_t>(bound); t < tr.outputs.size(); ++t)
        for (const Output& o : tr.outputs[t]) CHECK(o == Output(Rat(7, 3)));
}

TEST_CASE("a leader converts frequencies into multiplicities") {
    DirectedMultigraph g = complete_graph(3, true);
    std::vector<Value> inputs{Value::token("a"), Value::token("a"), Value::token("b")};
    RunOptions opt;
    opt.rounds = 40;
    opt.leaders = std::vector<bool>{false, false, true};
    AlgorithmDescriptor algo =
        make_frequency_pushsum(make_multiplicity(Value::token("a")), Help::leaders(1));
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);
    CHECK(tr.outputs[40][0] == Output(Rat(2)));
    CHECK(tr.outputs[40][1] == Output(Rat(2)));
    REQUIRE(stable_from(tr));
    CHECK(*stable_from(tr) <= 30);

    CHECK_THROWS_AS(make_frequency_pushsum(make_multiset()), ValidationError);
}
