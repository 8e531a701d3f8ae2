#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ninpath/instance.hpp"

namespace ninpath {

enum class EdgeKind : std::uint8_t { none, zero, pure_m, cost_m };

struct AtspProblem {
    int n_tasks = 0;
    int n_vehicles = 0;
    /// Matrix index -> sampling-graph node id.
    std::vector<int> node_order;
    /// Sampling-graph node id -> matrix index.
    std::vector<int> index_of;
    Eigen::MatrixXd cost;
    Eigen::Matrix<EdgeKind, Eigen::Dynamic, Eigen::Dynamic> kind;
    double big_m = 1.0;
    double sentinel = 1e6;
    /// Cyclic predecessor / successor of each node inside its cluster (by node id).
    std::vector<int> predecessor;
    std::vector<int> successor;
    /// Cluster index per node id; clusters: tasks 0..n-1, then (depot k, terminal k) pairs.
    std::vector<int> cluster_of;
    std::vector<std::vector<int>> clusters;

    int size() const { return static_cast<int>(node_order.size()); }
    int task_cluster(int task) const { return task - 1; }
    int depot_cluster(int vehicle) const { return n_tasks + 2 * (vehicle - 1); }
    int terminal_cluster(int vehicle) const { return n_tasks + 2 * (vehicle - 1) + 1; }
    /// M-increments of a well-formed tour: n + 2m.
    int expected_m_count() const { return n_tasks + 2 * n_vehicles; }
};

/// Sum of all finite sampling-graph edge costs plus one.
double choose_big_m(const SamplingGraph& graph);

/// Matrix of the transformed instance. An explicit big_m overrides choose_big_m.
AtspProblem to_atsp(const SamplingGraph& graph, double big_m = -1.0);

struct VehicleTour {
    int vehicle = 0;
    /// Actual visits: depot node, real task nodes, terminal node.
    std::vector<int> nodes;
    /// Virtual nodes traversed, each right after its origin's visit.
    std::vector<int> nin_nodes;
    double cost = 0.0;

    friend bool operator==(const VehicleTour&, const VehicleTour&) = default;
};

/// Decodes a cyclic matrix-index sequence into one tour per vehicle (vehicle id order).
/// Throws InvalidSolutionError on non-permutations or non-edges.
std::vector<VehicleTour> from_atsp(const std::vector<int>& atsp_tour, const AtspProblem& problem,
                                   const SamplingGraph& graph);

/// Cost of a tour's actual-visit chain in the sampling graph.
double vehicle_tour_cost(const VehicleTour& tour, const SamplingGraph& graph);

double ghmdatsp_cost(const std::vector<VehicleTour>& tours);

/// Hamiltonian cycle (matrix indices) realising feasible per-vehicle tours.
/// Throws InfeasibleError when a task is missed or covered twice.
std::vector<int> embed_feasible(const std::vector<VehicleTour>& tours, const AtspProblem& problem,
                                const SamplingGraph& graph);

struct StructureReport {
    bool ok = true;
    int m_count = 0;
    std::vector<std::string> violations;
};

/// Each cluster entered once and traversed on zero-cost edges, vehicle blocks not interleaved.
StructureReport check_cluster_structure(const std::vector<int>& atsp_tour, const AtspProblem& problem,
                                        const SamplingGraph& graph);

/// Tasks served by a tour set, either by an actual visit or through a virtual node.
std::vector<int> covered_tasks(const std::vector<VehicleTour>& tours, const SamplingGraph& graph);

}  // namespace ninpath
