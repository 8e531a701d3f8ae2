#pragma once

#include <optional>
#include <vector>

#include "ninpath/instance.hpp"
#include "ninpath/transform.hpp"

namespace ninpath {

/// Waypoint chain flown by one vehicle; consecutive waypoints are joined by shortest Dubins paths.
struct VehiclePath {
    int vehicle = 0;
    std::vector<Pose> waypoints;
    /// An unused vehicle stays at its depot and flies nothing.
    bool active = true;
};

struct VehicleVisits {
    int vehicle = 0;
    bool active = true;
    /// Depot id n+1, claimed task ids, terminal id n+2.
    std::vector<int> visit_order;
    std::vector<Pose> visit_states;
    /// Dense samples of the chain through visit_states.
    std::vector<Pose> path;
    double cost = 0.0;
};

struct VisitPlan {
    std::vector<VehicleVisits> vehicles;
    double total_cost() const;
};

/// Footprint clearance used for claiming: <= 0 means the task is touched.
double touch_clearance(const Scenario& scenario, const Vehicle& vehicle, const Task& task, const Pose& pose);

inline constexpr double kTouchTolerance = 1e-6;

/// Dubins chains through a decoded tour set's actual visits.
std::vector<VehiclePath> tour_paths(const std::vector<VehicleTour>& tours, const SamplingGraph& graph);

struct ClaimResult {
    VisitPlan plan;
    /// Tasks no eligible footprint touched, ascending.
    std::vector<int> untouched;
};

/// Claim pass of extract_visits without the completeness check.
ClaimResult claim_visits(const std::vector<VehiclePath>& paths, const Scenario& scenario);

/// Walks every path from depot to terminal and records the first pose at which each task is touched.
/// Claims go by vehicle id, then arc length. Throws InvalidSolutionError if a task is never touched.
VisitPlan extract_visits(const std::vector<VehiclePath>& paths, const Scenario& scenario);

/// Inserts each untouched task's cheapest own sample into the cheapest slot of an eligible
/// vehicle's state chain. Needed when a NIN task is skipped by an actual flown path.
void repair_coverage(VisitPlan& plan, const std::vector<int>& untouched, const SamplingGraph& graph,
                     const Scenario& scenario);

/// Cost of the chain through `states` for this vehicle, in seconds.
double chain_cost(const std::vector<Pose>& states, const Vehicle& vehicle);

/// Locally optimal replacement for one state with its neighbours fixed. `target` is a task id,
/// or n+1 / n+2 for depot and terminal (position pinned, heading free). Never worse than `initial`.
Pose optimize_state(const Scenario& scenario, int target, const Vehicle& vehicle,
                    const std::optional<Pose>& prev, const std::optional<Pose>& next, const Pose& initial);

struct RefineOptions {
    double relative_tolerance = 1e-4;
    int max_sweeps = 200;
};

struct RefineResult {
    VisitPlan plan;
    /// Total cost before the first sweep, then after each sweep.
    std::vector<double> sweep_costs;
    int sweeps = 0;
    bool converged = false;
};

RefineResult refine_paths(const VisitPlan& plan, const Scenario& scenario, const RefineOptions& options = {});

/// Path sampling step for a vehicle: r_sen / 10.
double path_step(const Vehicle& vehicle);

}  // namespace ninpath
