#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ninpath/instance.hpp"
#include "ninpath/transform.hpp"

namespace ninpath {

struct BruteForceLimits {
    int max_task_nodes = 10;
    int max_tasks = 5;
    int max_vehicles = 3;
};

struct BruteForceResult {
    double cost = 0.0;
    /// One per vehicle, same conventions as from_atsp (virtual nodes only if the graph has them).
    std::vector<VehicleTour> tours;
};

/// Exhaustive GHMDATSP optimum. With `use_nin`, a visited node also covers the tasks in its
/// NIN set. Throws CapacityError beyond the limits.
BruteForceResult brute_force(const SamplingGraph& graph, bool use_nin = true, const BruteForceLimits& limits = {});

enum class Sense { le, eq, ge };

struct LinearTerm {
    double coef;
    int var;
};

struct Constraint {
    std::string name;
    std::vector<LinearTerm> terms;
    Sense sense = Sense::eq;
    double rhs = 0.0;
};

struct MilpModel {
    std::vector<std::string> variables;
    std::vector<LinearTerm> objective;
    std::vector<Constraint> constraints;
    std::vector<std::string> header;
    int edge_variables = 0;
    int node_variables = 0;
    int idle_variables = 0;
    int subset_cap = 0;
};

struct LpOptions {
    int subset_cap = 4;
    /// Adds a zero-cost depot -> terminal arc per vehicle so vehicles may stay unused.
    bool idle_arcs = true;
    /// Subtour-cut rows above this lower the effective subset cap.
    std::size_t max_cut_rows = 1'000'000;
};

MilpModel build_milp(const SamplingGraph& graph, const LpOptions& options = {});

/// CPLEX LP text of the model.
std::string to_lp(const MilpModel& model);

inline std::string export_lp(const SamplingGraph& graph, const LpOptions& options = {}) {
    return to_lp(build_milp(graph, options));
}

inline std::string export_lp(const SamplingGraph& graph, int subset_cap) {
    LpOptions options;
    options.subset_cap = subset_cap;
    return export_lp(graph, options);
}

struct LpCounts {
    std::size_t variables = 0;
    std::size_t constraints = 0;
    std::size_t objective_terms = 0;
};

/// Counts sections of an LP document; throws DomainError on malformed input.
LpCounts parse_lp_counts(std::string_view text);

}  // namespace ninpath
