#include <catch2/catch_amalgamated.hpp>

#include "anonet/anonet.hpp"
#include "oracles.hpp"

using namespace anonet;

TEST_CASE("multigraph construction and incidence") {
    DirectedMultigraph g(3, {{0, 1}, {0, 1}, {1, 2}, {2, 0}});
    CHECK(g.n() == 3);
    CHECK(g.m() == 4);
    CHECK(g.multiplicity(0, 1) == 2);
    CHECK(g.multiplicity(1, 0) == 0);
    CHECK(g.out_degree(0) == 2);
    CHECK(g.in_degree(1) == 2);
    CHECK_THROWS_AS(DirectedMultigraph(2, {{0, 5}}), ValidationError);
    CHECK_THROWS_AS(DirectedMultigraph(-1, {}), ValidationError);
}

TEST_CASE("bidirectionality is stricter than support symmetry") {
    // the 3-vertex star quotient: one hub-to-leaf channel, two back
    DirectedMultigraph base(2, {{0, 1}, {1, 0}, {1, 0}});
    CHECK_FALSE(base.is_bidirectional());
    CHECK(base.is_support_symmetric());

    DirectedMultigraph simple(2, {{0, 1}, {1, 0}});
    CHECK(simple.is_bidirectional());
    CHECK(simple.is_support_symmetric());

    DirectedMultigraph one_way(2, {{0, 1}});
    CHECK_FALSE(one_way.is_support_symmetric());
}

TEST_CASE("self-loop helpers") {
    DirectedMultigraph g = ring_directed(3);
    CHECK_FALSE(g.has_self_loop(0));
    DirectedMultigraph gl = g.with_self_loops();
    CHECK(gl.has_all_self_loops());
    CHECK(gl.m() == 6);
    CHECK(gl.with_self_loops().m() == 6);  // already looped: unchanged
}

TEST_CASE("port labels must be bijective per sender") {
    DirectedMultigraph g(2, {{0, 1}, {0, 1}, {1, 0}});
    CHECK_THROWS_AS(g.set_ports({1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(g.set_ports({1, 3, 1}), ValidationError);
    g.set_ports({2, 1, 1});
    CHECK(g.port(0) == 2);
    DirectedMultigraph c = g.with_canonical_ports();
    CHECK(c.port(0) == 1);
    CHECK(c.port(1) == 2);
    CHECK(c.port(2) == 1);
}

TEST_CASE("send degree prefers the recorded outdegree valuation") {
    DirectedMultigraph g(2, {{0, 1}, {1, 0}});
    CHECK(g.send_degree(0) == 1);
    g.set_out_valuation({3, 2});
    CHECK(g.send_degree(0) == 3);
    CHECK(g.send_degree(1) == 2);
    CHECK(g.out_degree(0) == 1);
}

TEST_CASE("diameter matches Floyd-Warshall on every small strongly connected digraph") {
    for (int n = 1; n <= 4; ++n) {
        for (const DirectedMultigraph& g : all_strongly_connected_digraphs(n)) {
            CHECK(diameter(g) == oracles::floyd_warshall_diameter(g));
            CHECK(is_strongly_connected(g));
        }
    }
    DirectedMultigraph chain(3, {{0, 1}, {1, 2}});
    CHECK(diameter(chain) == std::nullopt);
    CHECK_FALSE(is_strongly_connected(chain));
    CHECK(oracles::floyd_warshall_diameter(chain) == std::nullopt);
}

TEST_CASE("graph product support matches the path-count oracle") {
    std::mt19937_64 rng(oracles::seeded(11)());
    std::uniform_int_distribution<int> nv(2, 4), ne(2, 8), pick(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        int n = nv(rng);
        auto rand_graph = [&]() {
            std::vector<Edge> es;
            int m = ne(rng);
            for (int e = 0; e < m; ++e) es.push_back({pick(rng) % n, pick(rng) % n});
            return DirectedMultigraph(n, std::move(es));
        };
        DirectedMultigraph a = rand_graph(), b = rand_graph();
        DirectedMultigraph p = product(a, b);
        DirectedMultigraph q = oracles::product_oracle(a, b);
        REQUIRE(p.n() == q.n());
        // product composes the reachability relation: its result is simple,
        // so only the support of the oracle's path counts is comparable
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CHECK(p.multiplicity(i, j) == (q.multiplicity(i, j) > 0 ? 1 : 0));
            }
    }
}

TEST_CASE("dynamic graph indexing and validation") {
    DirectedMultigraph a = complete_graph(2, true);
    DirectedMultigraph b = loops_only(2);
    DirectedMultigraph c = ring_bidirectional(2).with_self_loops();
    DynamicGraph dg({a}, {b, c});
    CHECK(dg.prefix_length() == 1);
    CHECK(dg.cycle_length() == 2);
    CHECK(dg.at(1).m() == a.m());
    CHECK(dg.at(2).m() == b.m());
    CHECK(dg.at(3).m() == c.m());
    CHECK(dg.at(4).m() == b.m());
    CHECK(dg.at(101).m() == c.m());

    CHECK_THROWS_AS(DynamicGraph({}, {}), ValidationError);
    CHECK_THROWS_AS(DynamicGraph(ring_directed(3)), ValidationError);  // no self-loops
    CHECK_THROWS_AS(DynamicGraph({complete_graph(2, true)}, {complete_graph(3, true)}),
                    ValidationError);
}

TEST_CASE("dynamic diameter matches the window reachability oracle") {
    DynamicGraph constant(complete_graph(3, true));
    CHECK(dynamic_diameter(constant, 6) == 1);
    CHECK(oracles::dynamic_diameter_oracle(constant, 6) == 1);

    DynamicGraph ring(ring_directed(3, true));
    CHECK(dynamic_diameter(ring, 8) == 2);
    CHECK(oracles::dynamic_diameter_oracle(ring, 8) == 2);

    // alternating path / shortcut rounds
    DirectedMultigraph path(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
    DirectedMultigraph shortcut(3, {{0, 2}, {2, 0}});
    DynamicGraph alt({}, {path.with_self_loops(), shortcut.with_self_loops()});
    auto lib = dynamic_diameter(alt, 10);
    auto orc = oracles::dynamic_diameter_oracle(alt, 10);
    CHECK(lib == orc);
    CHECK(lib == 2);

    // loops only: never complete
    DynamicGraph idle(loops_only(2));
    CHECK(dynamic_diameter(idle, 5) == std::nullopt);
    CHECK(oracles::dynamic_diameter_oracle(idle, 5) == std::nullopt);
}

TEST_CASE("fixed generators have the advertised shape") {
    DirectedMultigraph r4 = ring_directed(4);
    CHECK(r4.n() == 4);
    CHECK(r4.m() == 4);
    CHECK(diameter(r4) == 3);

    DirectedMultigraph rb = ring_bidirectional(4);
    CHECK(rb.m() == 8);
    CHECK(rb.is_bidirectional());
    REQUIRE(rb.ports());
    CHECK(diameter(rb) == 2);

    DirectedMultigraph rb2 = ring_bidirectional(2);
    CHECK(rb2.m() == 4);  // two parallel channels each way
    CHECK(rb2.multiplicity(0, 1) == 2);

    DirectedMultigraph star = star_bidirectional(3);
    CHECK(star.n() == 4);
    CHECK(star.m() == 6);
    CHECK(star.out_degree(0) == 3);
    CHECK(star.is_bidirectional());
    REQUIRE(star.ports());

    CHECK(complete_graph(3).m() == 6);
    CHECK(complete_graph(3, true).m() == 9);
    CHECK(complete_graph(3, true).has_all_self_loops());
    CHECK(diameter(complete_graph(4)) == 1);

    CHECK(loops_only(3).m() == 3);
    CHECK_FALSE(is_strongly_connected(loops_only(3)));
    CHECK(is_strongly_connected(loops_only(1)));
}

TEST_CASE("exhaustive strongly connected digraph counts") {
    CHECK(all_strongly_connected_digraphs(1).size() == 1);
    CHECK(all_strongly_connected_digraphs(2).size() == 1);
    CHECK(all_strongly_connected_digraphs(3).size() == 5);
    CHECK(all_strongly_connected_digraphs(4).size() == 83);
    for (const DirectedMultigraph& g : all_strongly_connected_digraphs(3)) {
        CHECK(is_strongly_connected(g));
        CHECK_FALSE(g.has_self_loop(0));
    }
}

TEST_CASE("random generators respect their contracts") {
    std::mt19937_64 rng(oracles::seeded(23)());
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        DirectedMultigraph g = random_strongly_connected(n, rng);
        CHECK(is_strongly_connected(g));
        for (int v = 0; v < n; ++v) CHECK_FALSE(g.has_self_loop(v));

        DirectedMultigraph gl = random_strongly_connected(n, rng, 0.3, true);
        CHECK(is_strongly_connected(gl));
        CHECK(gl.has_all_self_loops());

        DirectedMultigraph s = random_symmetric_connected(n, rng);
        CHECK(is_strongly_connected(s));
        CHECK(s.is_bidirectional());

        DirectedMultigraph p = with_random_ports(random_strongly_connected(n, rng), rng);
        REQUIRE(p.ports());
    }
    for (int d = 1; d <= 3; ++d) {
        DynamicGraph dg = random_dynamic_with_diameter(4, d, rng);
        CHECK(dynamic_diameter(dg, 4 * static_cast<int>(dg.cycle_length()) + 8) == d);
        CHECK(oracles::dynamic_diameter_oracle(dg, 4 * static_cast<int>(dg.cycle_length()) + 8) == d);
    }
}

TEST_CASE("ring lifts are coverings with equal fibres") {
    Fibration f = ring_fibration(6, 3);
    CHECK(f.total.n() == 6);
    CHECK(f.base.n() == 3);
    CHECK(is_covering(f.phi, f.total, f.base).ok);
    for (const auto& fibre : f.fibres) CHECK(fibre.size() == 2);
    CHECK_THROWS_AS(ring_fibration(6, 4), ValidationError);
}
