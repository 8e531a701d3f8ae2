#include <doctest.h>

#include <algorithm>
#include <limits>

#include "ninpath/atsp.hpp"
#include "ninpath/errors.hpp"
#include "ninpath/exact.hpp"
#include "support/fixtures.hpp"

using namespace ninpath;

namespace {

int actual_visits(const BruteForceResult& r, const SamplingGraph& g) {
    int c = 0;
    for (const auto& t : r.tours)
        for (int s : t.nodes) c += g.is_task_node(s);
    return c;
}

// Copy of the graph with every arc touching a rejected node removed.
template <typename Reject>
SamplingGraph without(const SamplingGraph& g, Reject reject) {
    SamplingGraph h = g;
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.real_count(); ++i)
        for (int j = 0; j < g.real_count(); ++j)
            if (reject(i, j)) h.cost(i, j) = inf;
    return h;
}

SamplingGraph tiny_exact_graph(std::uint64_t& seed) {
    for (;;) {
        ++seed;
        fixtures::Options o;
        o.n = 2 + static_cast<int>(seed % 3);
        o.m = 1 + static_cast<int>(seed % 3);
        o.samples = 1 + static_cast<int>((seed / 3) % 2);
        o.area = 1000;
        auto s = fixtures::random_scenario(seed, o);
        auto g = build_graph(s);
        attach_virtual_nodes(g, s);
        int task_nodes = 0;
        for (int i = 0; i < g.real_count(); ++i) task_nodes += g.is_task_node(i);
        if (g.node_count() <= kExactMaxNodes && task_nodes <= 10) return g;
    }
}

}  // namespace

TEST_CASE("single task, single node per cluster") {
    fixtures::Options o;
    o.n = 1;
    o.m = 1;
    o.samples = 1;
    auto s = fixtures::random_scenario(3, o);
    auto g = build_graph(s);
    const int d = g.cluster(2, 1).front(), t = g.cluster(1, 1).front(), e = g.cluster(3, 1).front();
    auto r = brute_force(g, true);
    CHECK(r.cost == doctest::Approx(g.edge_cost(d, t) + g.edge_cost(t, e)).epsilon(1e-14));
    REQUIRE(r.tours.size() == 1);
    CHECK(r.tours[0].nodes == std::vector<int>{d, t, e});
}

TEST_CASE("brute force matches the exact transformed solve") {
    std::uint64_t seed = 0;
    for (int i = 0; i < 40; ++i) {
        auto g = tiny_exact_graph(seed);
        auto p = to_atsp(g);
        auto tours = from_atsp(solve_exact(p).sequence, p, g);
        auto bf = brute_force(g, true);
        CHECK(std::abs(bf.cost - ghmdatsp_cost(tours)) <= 1e-9);
        // The oracle's own tours embed and decode back to the same cost.
        auto emb = embed_feasible(bf.tours, p, g);
        CHECK(ghmdatsp_cost(from_atsp(emb, p, g)) == doctest::Approx(bf.cost).epsilon(1e-12));
    }
}

TEST_CASE("NIN coverage never hurts and sometimes halves the visits") {
    int pattern = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        fixtures::Options o;
        o.n = 5;
        o.m = 2;
        o.samples = 1;
        o.cluster_spread = 70;
        o.area = 1200;
        o.restrict_eligibility = false;
        auto s = fixtures::random_scenario(seed, o);
        auto g = build_graph(s);
        attach_virtual_nodes(g, s);
        auto with = brute_force(g, true), plain = brute_force(g, false);
        CHECK(with.cost <= plain.cost);
        CHECK(actual_visits(plain, g) == 5);
        pattern += actual_visits(with, g) == 2 && with.cost < plain.cost;
    }
    CHECK(pattern >= 1);
}

TEST_CASE("every candidate class matters") {
    // Restricting node choice, visit order or vehicle assignment raises the optimum somewhere.
    int node_hits = 0, order_hits = 0, assign_hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        fixtures::Options o;
        o.n = 4;
        o.m = 1;
        o.samples = 2;
        o.area = 1200;
        o.restrict_eligibility = false;
        auto g = build_graph(fixtures::random_scenario(seed + 500, o));
        double full = brute_force(g, false).cost;
        auto first_only = without(g, [&](int i, int j) {
            auto is_first = [&](int x) { return g.cluster(g.task_of(x), g.vehicle_of(x)).front() == x; };
            return !is_first(i) || !is_first(j);
        });
        const double a = brute_force(first_only, false).cost;
        CHECK(a >= full);
        node_hits += a > full;

        o.m = 2;
        o.samples = 1;
        g = build_graph(fixtures::random_scenario(seed + 500, o));
        full = brute_force(g, false).cost;
        auto ascending = without(g, [&](int i, int j) {
            return g.is_task_node(i) && g.is_task_node(j) && g.task_of(i) > g.task_of(j);
        });
        auto one_vehicle = without(g, [&](int i, int) { return g.vehicle_of(i) == 2 && g.is_task_node(i); });
        const double b = brute_force(ascending, false).cost;
        const double c = brute_force(one_vehicle, false).cost;
        CHECK(b >= full);
        CHECK(c >= full);
        order_hits += b > full;
        assign_hits += c > full;
    }
    CHECK(node_hits >= 1);
    CHECK(order_hits >= 1);
    CHECK(assign_hits >= 1);
}

TEST_CASE("brute force size caps") {
    fixtures::Options o;
    o.n = 6;
    o.m = 1;
    o.samples = 1;
    auto g = build_graph(fixtures::random_scenario(1, o));
    CHECK_THROWS_AS(brute_force(g), CapacityError);
    o.n = 4;
    o.samples = 3;
    auto g2 = build_graph(fixtures::random_scenario(1, o));
    CHECK_THROWS_AS(brute_force(g2), CapacityError);
}

TEST_CASE("LP export of a two-node graph") {
    SamplingGraph g;
    g.n_tasks = 2;
    g.n_vehicles = 1;
    for (int i = 0; i < 2; ++i) {
        SampleNode nd;
        nd.id = i;
        nd.cluster = {i + 1, 1};
        nd.pose = Pose(10.0 * i, 0, 0);
        g.nodes.push_back(nd);
        g.clusters[nd.cluster].push_back(i);
    }
    g.cost = Eigen::MatrixXd::Constant(2, 2, SamplingGraph::kNoEdge);
    g.cost(0, 1) = 3;
    g.cost(1, 0) = 5;
    g.nin.assign(2, {});
    g.virtual_of.assign(2, {});
    auto model = build_milp(g);
    CHECK(model.variables.size() == 4);
    const std::string expected =
        "\\ GHMDATSP model: minimise total flight time over directed sample-node arcs.\n"
        "\\ x_i_j: arc from node i to node j is flown; y_i: node i is used.\n"
        "\\ Subtour cuts enumerate task-node subsets of size 2..2 only; larger subtours are not excluded.\n"
        "\\ Node map (id: cluster vehicle kind x y theta):\n"
        "\\   0: task_1 vehicle_1 real 0 0 0\n"
        "\\   1: task_2 vehicle_1 real 10 0 0\n"
        "Minimize\n"
        " obj: 3 x_0_1 + 5 x_1_0\n"
        "Subject To\n"
        " task_1: y_0 = 1\n"
        " task_2: y_1 = 1\n"
        " in_0: x_1_0 - y_0 = 0\n"
        " out_0: x_0_1 - y_0 = 0\n"
        " in_1: x_0_1 - y_1 = 0\n"
        " out_1: x_1_0 - y_1 = 0\n"
        " sec_0: -2 y_0 >= 0\n"
        " sec_1: -2 y_1 >= 0\n"
        "Binary\n"
        " x_0_1 x_1_0 y_0 y_1\n"
        "End\n";
    CHECK(to_lp(model) == expected);
    CHECK(export_lp(g, 2) == expected);
}

TEST_CASE("LP variable and row counts") {
    fixtures::Options o;
    o.n = 3;
    o.m = 2;
    o.samples = 2;
    o.cluster_spread = 70;
    auto s = fixtures::random_scenario(4, o);
    auto g = build_graph(s);
    attach_virtual_nodes(g, s);
    LpOptions plain;
    plain.idle_arcs = false;
    auto m0 = build_milp(g, plain);
    CHECK(m0.variables.size() == g.edge_count() + static_cast<std::size_t>(g.node_count()));
    auto m1 = build_milp(g);
    CHECK(m1.idle_variables == 2 * 2 * 2);
    CHECK(m1.variables.size() == m0.variables.size() + 8);
    for (const auto& mdl : {m0, m1}) {
        const auto text = to_lp(mdl);
        const auto counts = parse_lp_counts(text);
        CHECK(counts.variables == mdl.variables.size());
        CHECK(counts.constraints == mdl.constraints.size());
        CHECK(counts.objective_terms == mdl.objective.size());
        // Every variable appears in some row.
        std::vector<char> used(mdl.variables.size(), 0);
        for (const auto& c : mdl.constraints)
            for (const auto& t : c.terms) used[static_cast<std::size_t>(t.var)] = 1;
        CHECK(std::all_of(used.begin(), used.end(), [](char u) { return u != 0; }));
    }
    CHECK_THROWS_AS(parse_lp_counts("Minimize\n obj: x_0_1\n"), DomainError);
}

TEST_CASE("subset cap is lowered on large graphs") {
    fixtures::Options o;
    o.n = 10;
    o.m = 1;
    o.samples = 6;
    auto g = build_graph(fixtures::random_scenario(2, o));
    LpOptions opt;
    opt.max_cut_rows = 20000;
    auto model = build_milp(g, opt);
    CHECK(model.subset_cap < 4);
    CHECK(to_lp(model).find("Subset cap lowered") != std::string::npos);
}
