#include "ninpath/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ninpath/errors.hpp"
#include "ninpath/numeric.hpp"

namespace ninpath {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Cluster cycle starting at `entry`.
void append_cycle(std::vector<int>& out, const AtspProblem& p, int entry) {
    int s = entry;
    do {
        out.push_back(s);
        s = p.successor[at(s)];
    } while (s != entry);
}

}  // namespace

double choose_big_m(const SamplingGraph& graph) { return graph.total_edge_cost() + 1.0; }

AtspProblem to_atsp(const SamplingGraph& graph, double big_m) {
    AtspProblem p;
    const int n = graph.n_tasks, m = graph.n_vehicles;
    p.n_tasks = n;
    p.n_vehicles = m;
    p.big_m = big_m > 0 ? big_m : choose_big_m(graph);
    p.sentinel = 1e6 * p.big_m;

    // Task clusters pool every vehicle's nodes; depot and terminal clusters stay per vehicle.
    p.clusters.assign(at(n + 2 * m), {});
    for (int t = 1; t <= n; ++t)
        for (int k = 1; k <= m; ++k) {
            const auto& c = graph.cluster(t, k);
            p.clusters[at(p.task_cluster(t))].insert(p.clusters[at(p.task_cluster(t))].end(), c.begin(), c.end());
        }
    for (int k = 1; k <= m; ++k) {
        p.clusters[at(p.depot_cluster(k))] = graph.cluster(n + 1, k);
        p.clusters[at(p.terminal_cluster(k))] = graph.cluster(n + 2, k);
    }
    for (std::size_t c = 0; c < p.clusters.size(); ++c)
        if (p.clusters[c].empty())
            throw ScenarioError("cluster " + std::to_string(c) + " has no sample nodes");

    const int total = graph.node_count();
    p.predecessor.assign(at(total), -1);
    p.successor.assign(at(total), -1);
    p.cluster_of.assign(at(total), -1);
    p.index_of.assign(at(total), -1);
    auto place = [&](int c) {
        const auto& nodes = p.clusters[at(c)];
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const int s = nodes[i];
            p.cluster_of[at(s)] = c;
            p.predecessor[at(s)] = nodes[(i + nodes.size() - 1) % nodes.size()];
            p.successor[at(s)] = nodes[(i + 1) % nodes.size()];
            p.index_of[at(s)] = p.size();
            p.node_order.push_back(s);
        }
    };
    for (int k = 1; k <= m; ++k) {
        place(p.depot_cluster(k));
        place(p.terminal_cluster(k));
    }
    for (int t = 1; t <= n; ++t) place(p.task_cluster(t));
    if (p.size() != total) throw InvalidSolutionError("sampling graph has nodes outside every cluster");

    p.cost = Eigen::MatrixXd::Constant(total, total, p.sentinel);
    p.kind = Eigen::Matrix<EdgeKind, Eigen::Dynamic, Eigen::Dynamic>::Constant(total, total, EdgeKind::none);
    auto set = [&](int from, int to, EdgeKind kind, double value) {
        const int i = p.index_of[at(from)], j = p.index_of[at(to)];
        if (i == j) return;
        if (p.kind(i, j) != EdgeKind::none) throw std::logic_error("transformation rule overlap");
        p.kind(i, j) = kind;
        p.cost(i, j) = value;
    };
    const double M = p.big_m;
    auto inter = [&](int origin_real, int to) {
        const double c = graph.edge_cost(origin_real, to);
        if (!std::isfinite(c)) throw std::logic_error("transformation references a missing edge");
        return c + M;
    };

    std::vector<std::vector<int>> real_tasks(at(m + 1));
    for (int s = 0; s < graph.real_count(); ++s)
        if (graph.is_task_node(s)) real_tasks[at(graph.vehicle_of(s))].push_back(s);

    for (int s : p.node_order) {
        if (p.successor[at(s)] != s) set(s, p.successor[at(s)], EdgeKind::zero, 0.0);
    }
    for (int s1 : p.node_order) {
        const int src = p.predecessor[at(s1)];
        const int k = graph.vehicle_of(s1);
        const auto& terminals = graph.cluster(n + 2, k);
        if (graph.is_depot_node(s1)) {
            for (int t : terminals) set(src, t, EdgeKind::pure_m, M);
            for (int s2 : real_tasks[at(k)]) set(src, s2, EdgeKind::cost_m, inter(s1, s2));
        } else if (graph.is_terminal_node(s1)) {
            for (int d : graph.cluster(n + 1, k % m + 1)) set(src, d, EdgeKind::pure_m, M);
        } else if (graph.node(s1).kind == NodeKind::real) {
            for (int t : terminals) set(src, t, EdgeKind::cost_m, inter(s1, t));
            for (int s2 : real_tasks[at(k)])
                if (graph.task_of(s2) != graph.task_of(s1)) set(src, s2, EdgeKind::cost_m, inter(s1, s2));
            for (int v : graph.virtual_of[at(s1)]) set(src, v, EdgeKind::pure_m, M);
        } else {
            const int o = *graph.node(s1).origin;
            for (int v : graph.virtual_of[at(o)])
                if (v != s1) set(src, v, EdgeKind::pure_m, M);
            for (int s2 : real_tasks[at(k)]) {
                const int t2 = graph.task_of(s2);
                if (t2 != graph.task_of(o) && t2 != graph.task_of(s1)) set(src, s2, EdgeKind::cost_m, inter(o, s2));
            }
            for (int t : terminals) set(src, t, EdgeKind::cost_m, inter(o, t));
        }
    }
    return p;
}

double vehicle_tour_cost(const VehicleTour& tour, const SamplingGraph& graph) {
    if (tour.nodes.size() < 2) return 0.0;
    if (tour.nodes.size() == 2 && graph.is_depot_node(tour.nodes[0]) && graph.is_terminal_node(tour.nodes[1]))
        return 0.0;
    CompensatedSum sum;
    for (std::size_t i = 0; i + 1 < tour.nodes.size(); ++i) {
        const double c = graph.edge_cost(tour.nodes[i], tour.nodes[i + 1]);
        if (!std::isfinite(c)) throw InvalidSolutionError("tour uses a missing edge");
        sum.add(c);
    }
    return sum.value();
}

std::vector<VehicleTour> from_atsp(const std::vector<int>& atsp_tour, const AtspProblem& problem,
                                   const SamplingGraph& graph) {
    const int N = problem.size();
    if (static_cast<int>(atsp_tour.size()) != N) throw InvalidSolutionError("tour length differs from node count");
    std::vector<char> seen(at(N), 0);
    for (int i : atsp_tour) {
        if (i < 0 || i >= N || seen[at(i)]) throw InvalidSolutionError("tour is not a permutation");
        seen[at(i)] = 1;
    }
    // Rotate to the node where the tour enters vehicle 1's depot cluster.
    const int d1 = problem.depot_cluster(1);
    std::size_t start = atsp_tour.size();
    for (std::size_t i = 0; i < atsp_tour.size(); ++i) {
        const int cur = atsp_tour[i];
        const int prev = atsp_tour[(i + atsp_tour.size() - 1) % atsp_tour.size()];
        if (problem.cluster_of[at(problem.node_order[at(cur)])] != d1) continue;
        if (start == atsp_tour.size()) start = i;
        if (problem.kind(prev, cur) != EdgeKind::zero) {
            start = i;
            break;
        }
    }

    std::vector<VehicleTour> tours(at(problem.n_vehicles));
    std::vector<CompensatedSum> sums(at(problem.n_vehicles));
    for (int k = 1; k <= problem.n_vehicles; ++k) tours[at(k - 1)].vehicle = k;
    for (std::size_t step = 0; step < atsp_tour.size(); ++step) {
        const int i = atsp_tour[(start + step) % atsp_tour.size()];
        const int j = atsp_tour[(start + step + 1) % atsp_tour.size()];
        const EdgeKind kind = problem.kind(i, j);
        if (kind == EdgeKind::none) throw InvalidSolutionError("tour uses a forbidden edge");
        if (kind == EdgeKind::zero) continue;
        const int u = problem.node_order[at(i)], w = problem.node_order[at(j)];
        const int label = problem.successor[at(u)];
        auto& tour = tours[at(graph.vehicle_of(w) - 1)];
        if (kind == EdgeKind::cost_m) {
            const int src = graph.real_of(label);
            if (tour.nodes.empty()) tour.nodes.push_back(src);
            tour.nodes.push_back(w);
            sums[at(tour.vehicle - 1)].add(graph.edge_cost(src, w));
        } else if (graph.is_terminal_node(w)) {
            tour.nodes = {graph.real_of(label), w};
        } else if (graph.node(w).kind == NodeKind::virtual_nin) {
            tour.nin_nodes.push_back(w);
        }
    }
    for (std::size_t k = 0; k < tours.size(); ++k) tours[k].cost = sums[k].value();
    return tours;
}

double ghmdatsp_cost(const std::vector<VehicleTour>& tours) {
    CompensatedSum sum;
    for (const auto& t : tours) sum.add(t.cost);
    return sum.value();
}

std::vector<int> covered_tasks(const std::vector<VehicleTour>& tours, const SamplingGraph& graph) {
    std::vector<int> out;
    for (const auto& t : tours) {
        for (int s : t.nodes)
            if (graph.is_task_node(s)) out.push_back(graph.task_of(s));
        for (int v : t.nin_nodes) out.push_back(graph.task_of(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> embed_feasible(const std::vector<VehicleTour>& tours, const AtspProblem& problem,
                                const SamplingGraph& graph) {
    const int n = problem.n_tasks, m = problem.n_vehicles;
    if (static_cast<int>(tours.size()) != m) throw InfeasibleError("expected one tour per vehicle");
    std::vector<int> hits(at(n + 1), 0);
    for (int t : covered_tasks(tours, graph)) ++hits[at(t)];
    for (int t = 1; t <= n; ++t) {
        if (hits[at(t)] == 0) throw InfeasibleError("task " + std::to_string(t) + " is not served");
        if (hits[at(t)] > 1) throw InfeasibleError("task " + std::to_string(t) + " is served twice");
    }

    std::vector<int> seq;
    seq.reserve(at(problem.size()));
    for (int k = 1; k <= m; ++k) {
        const auto it = std::find_if(tours.begin(), tours.end(), [k](const VehicleTour& t) { return t.vehicle == k; });
        if (it == tours.end()) throw InfeasibleError("missing tour for vehicle " + std::to_string(k));
        const auto& tour = *it;
        if (tour.nodes.size() < 2 || !graph.is_depot_node(tour.nodes.front()) ||
            !graph.is_terminal_node(tour.nodes.back()))
            throw InfeasibleError("tour of vehicle " + std::to_string(k) + " must run depot to terminal");
        std::size_t placed_virtual = 0;
        for (std::size_t i = 0; i < tour.nodes.size(); ++i) {
            const int s = tour.nodes[i];
            if (graph.vehicle_of(s) != k || graph.node(s).kind != NodeKind::real)
                throw InfeasibleError("tour of vehicle " + std::to_string(k) + " visits a foreign node");
            append_cycle(seq, problem, s);
            for (int v : tour.nin_nodes)
                if (graph.node(v).origin == s) {
                    append_cycle(seq, problem, v);
                    ++placed_virtual;
                }
        }
        if (placed_virtual != tour.nin_nodes.size())
            throw InfeasibleError("virtual node whose origin is not visited");
    }
    std::vector<int> out;
    out.reserve(seq.size());
    for (int s : seq) out.push_back(problem.index_of[at(s)]);
    std::vector<char> seen(at(problem.size()), 0);
    for (int i : out) {
        if (seen[at(i)]) throw InfeasibleError("embedded tour repeats a node");
        seen[at(i)] = 1;
    }
    if (static_cast<int>(out.size()) != problem.size()) throw InfeasibleError("embedded tour misses nodes");
    return out;
}

StructureReport check_cluster_structure(const std::vector<int>& atsp_tour, const AtspProblem& problem,
                                        const SamplingGraph& graph) {
    StructureReport r;
    const std::size_t N = atsp_tour.size();
    std::vector<int> entries(problem.clusters.size(), 0);
    for (std::size_t i = 0; i < N; ++i) {
        const int a = atsp_tour[i], b = atsp_tour[(i + 1) % N];
        const EdgeKind kind = problem.kind(a, b);
        if (kind == EdgeKind::none) {
            r.violations.push_back("forbidden edge at position " + std::to_string(i));
            continue;
        }
        if (kind != EdgeKind::zero) {
            ++r.m_count;
            ++entries[at(problem.cluster_of[at(problem.node_order[at(b)])])];
        }
    }
    for (std::size_t c = 0; c < entries.size(); ++c)
        if (entries[c] != 1)
            r.violations.push_back("cluster " + std::to_string(c) + " entered " + std::to_string(entries[c]) + " times");
    if (r.m_count != problem.expected_m_count())
        r.violations.push_back("tour has " + std::to_string(r.m_count) + " M-increments, expected " +
                               std::to_string(problem.expected_m_count()));

    // Vehicle blocks: D1 T1 D2 T2 ... with only own-vehicle actual visits in between.
    std::size_t start = N;
    for (std::size_t i = 0; i < N && start == N; ++i) {
        const int node = problem.node_order[at(atsp_tour[i])];
        const int prev = atsp_tour[(i + N - 1) % N];
        if (graph.is_depot_node(node) && graph.vehicle_of(node) == 1 &&
            problem.kind(prev, atsp_tour[i]) != EdgeKind::zero)
            start = i;
    }
    if (start == N) {
        r.violations.push_back("vehicle 1 depot cluster is never entered");
    } else {
        int expect_vehicle = 1;
        bool in_block = false;
        int last_real = -1;
        for (std::size_t step = 0; step < N; ++step) {
            const int i = atsp_tour[(start + step) % N];
            const int prev = atsp_tour[(start + step + N - 1) % N];
            if (problem.kind(prev, i) == EdgeKind::zero) continue;
            const int node = problem.node_order[at(i)];
            const int k = graph.vehicle_of(node);
            if (graph.is_depot_node(node)) {
                if (in_block || k != expect_vehicle) r.violations.push_back("depot of vehicle " + std::to_string(k) + " out of order");
                in_block = true;
                last_real = node;
            } else if (graph.is_terminal_node(node)) {
                if (!in_block || k != expect_vehicle) r.violations.push_back("terminal of vehicle " + std::to_string(k) + " out of order");
                in_block = false;
                ++expect_vehicle;
            } else if (!in_block || k != expect_vehicle) {
                r.violations.push_back("node " + std::to_string(node) + " visited outside its vehicle block");
            } else if (graph.node(node).kind == NodeKind::virtual_nin) {
                if (graph.node(node).origin != last_real)
                    r.violations.push_back("virtual node " + std::to_string(node) + " detached from its origin");
            } else {
                last_real = node;
            }
        }
    }
    r.ok = r.violations.empty();
    return r;
}

}  // namespace ninpath
