#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "shatter/graph.hpp"
#include "shatter/util.hpp"
#include "testutil.hpp"

using namespace shatter;

TEST_CASE("graph construction validates and normalizes") {
    Graph g(4, {{2, 1}, {0, 1}, {1, 2}});
    CHECK(g.n() == 4);
    CHECK(g.m() == 2);  // duplicate collapsed
    CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(g.has_edge(1, 0));
    CHECK(g.edge_index(2, 1) == 1);
    CHECK(g.edge_index(0, 3) == -1);
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("ball basics") {
    Graph p5 = path_graph(5);
    CHECK(ball(p5, 2, 1) == VertexSet{1, 2, 3});
    CHECK(ball(p5, 3, 0) == VertexSet{3});
    Graph c6 = cycle_graph(6);
    CHECK(ball(c6, 0, 2) == VertexSet{0, 1, 2, 4, 5});
    CHECK(ball(c6, 0, 2).size() == 5);
    CHECK_THROWS_AS(ball(p5, 9, 1), std::invalid_argument);
}

TEST_CASE("ball equals BFS oracle on random graphs") {
    for (int trial = 0; trial < 12; ++trial) {
        Graph g = oracle::random_graph(20 + trial * 2, 0.12, 100 + trial);
        for (int r = 0; r <= 4; ++r)
            for (int v = 0; v < g.n(); v += 3) CHECK(ball(g, v, r) == oracle::ball(g, v, r));
    }
}

TEST_CASE("power graph") {
    Graph c6 = cycle_graph(6);
    Graph sq = power_graph(c6, 2);
    for (int v = 0; v < 6; ++v) CHECK(sq.degree(v) == 4);
    Graph cube = power_graph(c6, 3);
    CHECK(cube.m() == 15);  // K6
    Graph p4 = path_graph(4);
    CHECK(power_graph(p4, 1).edges() == p4.edges());
}

TEST_CASE("power graph matches ball relation") {
    for (int trial = 0; trial < 8; ++trial) {
        Graph g = oracle::random_graph(18, 0.15, 500 + trial);
        for (int r = 1; r <= 3; ++r) {
            Graph p = power_graph(g, r);
            for (int u = 0; u < g.n(); ++u) {
                auto b = ball(g, u, r);
                for (int v = 0; v < g.n(); ++v) {
                    bool in_ball = v != u && set_contains(b, v);
                    CHECK(p.has_edge(u, v) == in_ball);
                }
            }
        }
    }
}

TEST_CASE("induced subgraph") {
    Graph c5 = cycle_graph(5);
    auto sub = induced_subgraph(c5, {0, 1, 2});
    CHECK(sub.graph.n() == 3);
    CHECK(sub.graph.m() == 2);
    CHECK(sub.old_of_new == std::vector<int>{0, 1, 2});
    auto whole = induced_subgraph(c5, {0, 1, 2, 3, 4});
    CHECK(whole.graph.edges() == c5.edges());
    auto empty = induced_subgraph(c5, {});
    CHECK(empty.graph.n() == 0);
    CHECK_THROWS_AS(induced_subgraph(c5, {1, 0}), std::invalid_argument);
}

TEST_CASE("line graph identities") {
    Graph k3 = cycle_graph(3);
    auto l = line_graph(k3);
    CHECK(l.graph.n() == 3);
    CHECK(l.graph.m() == 3);  // L(K3) = K3
    Graph p3 = path_graph(3);
    CHECK(line_graph(p3).graph.m() == 1);
    Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    auto ls = line_graph(star);
    CHECK(ls.graph.n() == 4);
    CHECK(ls.graph.m() == 6);  // K4
}

TEST_CASE("line graph degree identity") {
    Graph g = oracle::random_graph(16, 0.2, 77);
    auto l = line_graph(g);
    for (int e = 0; e < g.m(); ++e) {
        auto [u, v] = g.edges()[e];
        CHECK(l.graph.degree(e) == g.degree(u) + g.degree(v) - 2);
    }
}

TEST_CASE("components") {
    Graph two_triangles = disjoint_union({cycle_graph(3), cycle_graph(3)});
    auto comps = components(two_triangles);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == VertexSet{0, 1, 2});
    CHECK(comps[1] == VertexSet{3, 4, 5});
    CHECK(components(cycle_graph(7)).size() == 1);
}

TEST_CASE("components match union-find oracle and cover V") {
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = oracle::random_graph(25, 0.06, 900 + trial);
        auto comps = components(g);
        CHECK(comps == oracle::components_by_union_find(g.n(), g.edges()));
        std::set<int> all;
        for (const auto& c : comps)
            for (int v : c) CHECK(all.insert(v).second);
        CHECK(static_cast<int>(all.size()) == g.n());
    }
}

TEST_CASE("generators") {
    CHECK(max_degree(cycle_graph(6)) == 2);
    Graph grid = grid_graph(3, 3);
    CHECK(grid.n() == 9);
    CHECK(grid.m() == 12);
    Graph reg = random_regular(10, 3, 1);
    CHECK(reg.n() == 10);
    for (int v = 0; v < 10; ++v) CHECK(reg.degree(v) == 3);
    CHECK_THROWS_AS(random_regular(5, 3, 1), std::invalid_argument);  // odd n*d
    Graph u = disjoint_union({path_graph(3), cycle_graph(4)});
    CHECK(u.n() == 7);
    CHECK(u.m() == 6);
    CHECK(u.has_edge(3, 6));  // cycle closure shifted past the path
}

TEST_CASE("random_regular deterministic in seed") {
    CHECK(random_regular(12, 3, 42).edges() == random_regular(12, 3, 42).edges());
}

TEST_CASE("interval-partition blocks keep components small") {
    Graph p = path_graph(23);
    // Alternate blocks of 4: components of either side have at most 4 vertices.
    std::vector<std::pair<int, int>> u0_edges;
    VertexSet u0;
    for (int v = 0; v < 23; ++v)
        if ((v / 4) % 2 == 0) u0.push_back(v);
    auto sub = induced_subgraph(p, u0);
    for (const auto& comp : components(sub.graph)) CHECK(comp.size() <= 4);
}
