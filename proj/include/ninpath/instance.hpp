#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ninpath/dubins.hpp"
#include "ninpath/pose.hpp"
#include "ninpath/sensor.hpp"

namespace ninpath {

struct Task {
    int id = 0;
    Point position = Point::Zero();
    /// Radius of the sampling circle; unset means the visiting vehicle's r_sen.
    std::optional<double> neighborhood_radius;
    std::vector<int> eligible_vehicles;

    bool eligible(int vehicle) const;
};

struct Vehicle {
    int id = 0;
    VehicleKinematics kinematics;
    SensorModel sensor;
    Point depot = Point::Zero();
    Point terminal = Point::Zero();
};

struct Scenario {
    std::vector<Task> tasks;        // ids 1..n, sorted
    std::vector<Vehicle> vehicles;  // ids 1..m, sorted
    int samples_per_cluster = 10;
    std::uint64_t seed = 0;

    int n() const { return static_cast<int>(tasks.size()); }
    int m() const { return static_cast<int>(vehicles.size()); }
    int depot_cluster() const { return n() + 1; }
    int terminal_cluster() const { return n() + 2; }
    const Task& task(int id) const { return tasks.at(static_cast<std::size_t>(id - 1)); }
    const Vehicle& vehicle(int id) const { return vehicles.at(static_cast<std::size_t>(id - 1)); }
    double neighborhood_radius(const Task& t, const Vehicle& v) const;

    /// Sorts by id and checks ids, eligibility and parameters; throws ScenarioError.
    void validate();
};

/// Radical inverse of `index` in `base`.
double halton(std::uint64_t index, unsigned base);

/// Shared position in the Halton stream; every sample node consumes one index.
class HaltonCursor {
public:
    explicit HaltonCursor(std::uint64_t seed = 0) : next_(1 + seed) {}
    std::uint64_t take() { return next_++; }
    std::uint64_t peek() const { return next_; }

private:
    std::uint64_t next_;
};

enum class NodeKind { real, virtual_nin };

struct ClusterKey {
    int cluster = 0;  // task id, n+1 (depot) or n+2 (terminal)
    int vehicle = 0;
    auto operator<=>(const ClusterKey&) const = default;
};

struct SampleNode {
    int id = 0;
    ClusterKey cluster;
    Pose pose;
    NodeKind kind = NodeKind::real;
    std::optional<int> origin;
};

/// Poses of `count` samples for one task seen by one vehicle.
std::vector<Pose> sample_cluster(const Task& task, const Vehicle& vehicle, double radius, int count,
                                 HaltonCursor& cursor);

struct DepotTerminalPoses {
    std::vector<Pose> depot, terminal;
};
DepotTerminalPoses sample_depot_terminal(const Vehicle& vehicle, int count, HaltonCursor& cursor);

class SamplingGraph {
public:
    static constexpr double kNoEdge = std::numeric_limits<double>::infinity();

    int n_tasks = 0;
    int n_vehicles = 0;
    /// Real nodes occupy ids [0, real_count()); virtual ones follow.
    std::vector<SampleNode> nodes;
    std::map<ClusterKey, std::vector<int>> clusters;
    /// Dense cost between real nodes in seconds; kNoEdge where no edge exists.
    Eigen::MatrixXd cost;
    /// Necessarily intersecting tasks of each real node (ascending ids).
    std::vector<std::vector<int>> nin;
    /// Virtual nodes created from each real node, in cluster order of their task.
    std::vector<std::vector<int>> virtual_of;

    int real_count() const { return static_cast<int>(cost.rows()); }
    int node_count() const { return static_cast<int>(nodes.size()); }
    const SampleNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
    /// Real node behind an id (itself, or the origin of a virtual node).
    int real_of(int id) const;
    bool has_edge(int from, int to) const;
    /// Cost between the real nodes behind two ids.
    double edge_cost(int from, int to) const;
    std::size_t edge_count() const;
    /// Sum of all finite edge costs.
    double total_edge_cost() const;
    bool is_task_node(int id) const { return node(id).cluster.cluster <= n_tasks; }
    bool is_depot_node(int id) const { return node(id).cluster.cluster == n_tasks + 1; }
    bool is_terminal_node(int id) const { return node(id).cluster.cluster == n_tasks + 2; }
    int vehicle_of(int id) const { return node(id).cluster.vehicle; }
    int task_of(int id) const { return node(id).cluster.cluster; }
    const std::vector<int>& cluster(int cluster_id, int vehicle) const;
};

/// Real sample nodes and their Dubins edges.
SamplingGraph build_graph(const Scenario& scenario);

/// Tasks other than the node's own whose position lies in the node's NIR.
std::vector<int> nin_tasks(const SampleNode& sample, const std::vector<Task>& tasks,
                           const Vehicle& vehicle);

/// Adds virtual nodes for every necessarily intersecting (node, task) pair.
void attach_virtual_nodes(SamplingGraph& graph, const Scenario& scenario);

}  // namespace ninpath
