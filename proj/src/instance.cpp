#include "ninpath/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "ninpath/errors.hpp"

namespace ninpath {

bool Task::eligible(int vehicle) const {
    return std::find(eligible_vehicles.begin(), eligible_vehicles.end(), vehicle) !=
           eligible_vehicles.end();
}

double Scenario::neighborhood_radius(const Task& t, const Vehicle& v) const {
    return t.neighborhood_radius.value_or(v.sensor.r_sen);
}

void Scenario::validate() {
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(tasks.begin(), tasks.end(), by_id);
    std::sort(vehicles.begin(), vehicles.end(), by_id);
    if (tasks.empty()) throw ScenarioError("scenario has no tasks");
    if (vehicles.empty()) throw ScenarioError("scenario has no vehicles");
    if (samples_per_cluster < 1) throw ScenarioError("samples per cluster must be at least 1");
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const auto& v = vehicles[i];
        if (v.id != static_cast<int>(i) + 1)
            throw ScenarioError("vehicle ids must be 1..m without gaps");
        if (!(v.kinematics.speed > 0) || !(v.kinematics.turn_radius > 0))
            throw ScenarioError("vehicle " + std::to_string(v.id) + ": speed and turn radius must be positive");
        try {
            v.sensor.validate();
        } catch (const DomainError& e) {
            throw ScenarioError("vehicle " + std::to_string(v.id) + " sensor: " + e.what());
        }
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& t = tasks[i];
        if (t.id != static_cast<int>(i) + 1) throw ScenarioError("task ids must be 1..n without gaps");
        if (t.neighborhood_radius && !(*t.neighborhood_radius > 0))
            throw ScenarioError("task " + std::to_string(t.id) + ": neighborhood radius must be positive");
        std::sort(t.eligible_vehicles.begin(), t.eligible_vehicles.end());
        t.eligible_vehicles.erase(std::unique(t.eligible_vehicles.begin(), t.eligible_vehicles.end()),
                                  t.eligible_vehicles.end());
        if (t.eligible_vehicles.empty())
            throw ScenarioError("task " + std::to_string(t.id) + " is eligible to no vehicle");
        for (int k : t.eligible_vehicles)
            if (k < 1 || k > m())
                throw ScenarioError("task " + std::to_string(t.id) + " references unknown vehicle " +
                                    std::to_string(k));
    }
}

double halton(std::uint64_t index, unsigned base) {
    if (index < 1) throw DomainError("halton index must be >= 1");
    if (base < 2) throw DomainError("halton base must be >= 2");
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

std::vector<Pose> sample_cluster(const Task& task, const Vehicle& vehicle, double radius, int count,
                                 HaltonCursor& cursor) {
    if (count < 1) throw DomainError("sample count must be at least 1");
    if (!(radius > 0)) throw DomainError("neighborhood radius must be positive");
    const Point offset = vehicle.sensor.center_offset();
    std::vector<Pose> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t idx = cursor.take();
        const double phi = kTwoPi * halton(idx, 2);
        // Inward heading deflected so the chord never passes through the centre.
        const double delta = (2.0 * halton(idx, 3) - 1.0) * std::numbers::pi / 3.0;
        const double heading = phi + std::numbers::pi + delta;
        const Point on_circle = task.position + radius * unit(phi);
        // The footprint centre sits on the circle; the vehicle trails it by the look offset.
        out.emplace_back(on_circle - rotate(offset, heading), heading);
    }
    return out;
}

DepotTerminalPoses sample_depot_terminal(const Vehicle& vehicle, int count, HaltonCursor& cursor) {
    if (count < 1) throw DomainError("sample count must be at least 1");
    DepotTerminalPoses out;
    for (int i = 0; i < count; ++i) out.depot.emplace_back(vehicle.depot, kTwoPi * halton(cursor.take(), 2));
    for (int i = 0; i < count; ++i)
        out.terminal.emplace_back(vehicle.terminal, kTwoPi * halton(cursor.take(), 2));
    return out;
}

int SamplingGraph::real_of(int id) const {
    const auto& nd = node(id);
    return nd.kind == NodeKind::real ? id : *nd.origin;
}

bool SamplingGraph::has_edge(int from, int to) const {
    return std::isfinite(cost(real_of(from), real_of(to)));
}

double SamplingGraph::edge_cost(int from, int to) const { return cost(real_of(from), real_of(to)); }

std::size_t SamplingGraph::edge_count() const {
    std::size_t c = 0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i)
        for (Eigen::Index j = 0; j < cost.cols(); ++j) c += std::isfinite(cost(i, j));
    return c;
}

double SamplingGraph::total_edge_cost() const {
    double s = 0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i)
        for (Eigen::Index j = 0; j < cost.cols(); ++j)
            if (std::isfinite(cost(i, j))) s += cost(i, j);
    return s;
}

const std::vector<int>& SamplingGraph::cluster(int cluster_id, int vehicle) const {
    static const std::vector<int> empty;
    auto it = clusters.find({cluster_id, vehicle});
    return it == clusters.end() ? empty : it->second;
}

SamplingGraph build_graph(const Scenario& scenario) {
    const int n = scenario.n();
    if (n < 1) throw ScenarioError("scenario has no tasks");
    SamplingGraph g;
    g.n_tasks = n;
    g.n_vehicles = scenario.m();
    for (const auto& t : scenario.tasks)
        if (t.eligible_vehicles.empty())
            throw ScenarioError("task " + std::to_string(t.id) + " is eligible to no vehicle");

    HaltonCursor cursor(scenario.seed);
    auto add = [&](ClusterKey key, const Pose& p) {
        SampleNode nd;
        nd.id = static_cast<int>(g.nodes.size());
        nd.cluster = key;
        nd.pose = p;
        g.clusters[key].push_back(nd.id);
        g.nodes.push_back(nd);
    };
    const int count = scenario.samples_per_cluster;
    for (const auto& v : scenario.vehicles) {
        auto dt = sample_depot_terminal(v, count, cursor);
        for (const auto& p : dt.depot) add({n + 1, v.id}, p);
        for (const auto& p : dt.terminal) add({n + 2, v.id}, p);
        for (const auto& t : scenario.tasks) {
            if (!t.eligible(v.id)) continue;
            for (const auto& p : sample_cluster(t, v, scenario.neighborhood_radius(t, v), count, cursor))
                add({t.id, v.id}, p);
        }
    }

    const auto r = static_cast<Eigen::Index>(g.nodes.size());
    g.cost = Eigen::MatrixXd::Constant(r, r, SamplingGraph::kNoEdge);
    for (const auto& a : g.nodes) {
        const auto& v = scenario.vehicle(a.cluster.vehicle);
        const bool a_task = a.cluster.cluster <= n;
        const bool a_depot = a.cluster.cluster == n + 1;
        if (!a_task && !a_depot) continue;  // terminals have no out-edges
        for (const auto& b : g.nodes) {
            if (b.cluster.vehicle != a.cluster.vehicle || b.cluster.cluster == a.cluster.cluster) continue;
            const bool b_task = b.cluster.cluster <= n;
            const bool b_terminal = b.cluster.cluster == n + 2;
            if (!(b_task || (a_task && b_terminal))) continue;
            const auto path = shortest_path(a.pose, b.pose, v.kinematics.turn_radius);
            g.cost(a.id, b.id) = edge_cost(path, v.kinematics.speed);
        }
    }
    g.nin.assign(g.nodes.size(), {});
    g.virtual_of.assign(g.nodes.size(), {});
    return g;
}

std::vector<int> nin_tasks(const SampleNode& sample, const std::vector<Task>& tasks,
                           const Vehicle& vehicle) {
    std::vector<int> out;
    for (const auto& t : tasks) {
        if (t.id == sample.cluster.cluster || !t.eligible(vehicle.id)) continue;
        if (nir_contains(sample.pose, vehicle.sensor, vehicle.kinematics.turn_radius, t.position))
            out.push_back(t.id);
    }
    return out;
}

void attach_virtual_nodes(SamplingGraph& graph, const Scenario& scenario) {
    const int real = graph.real_count();
    if (graph.node_count() != real) throw InvalidSolutionError("virtual nodes already attached");
    for (int id = 0; id < real; ++id) {
        const auto& nd = graph.nodes[static_cast<std::size_t>(id)];
        if (nd.cluster.cluster > graph.n_tasks) continue;
        graph.nin[static_cast<std::size_t>(id)] =
            nin_tasks(nd, scenario.tasks, scenario.vehicle(nd.cluster.vehicle));
    }
    // Creation by origin id keeps each cluster's virtual block sorted by origin.
    for (int id = 0; id < real; ++id) {
        for (int t : graph.nin[static_cast<std::size_t>(id)]) {
            const auto& origin = graph.nodes[static_cast<std::size_t>(id)];
            SampleNode v;
            v.id = graph.node_count();
            v.cluster = {t, origin.cluster.vehicle};
            v.pose = origin.pose;
            v.kind = NodeKind::virtual_nin;
            v.origin = id;
            graph.clusters[v.cluster].push_back(v.id);
            graph.virtual_of[static_cast<std::size_t>(id)].push_back(v.id);
            graph.nodes.push_back(v);
        }
    }
}

}  // namespace ninpath
