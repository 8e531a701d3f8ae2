#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ninpath/atsp.hpp"
#include "ninpath/instance.hpp"
#include "ninpath/refine.hpp"

namespace ninpath {

using json = nlohmann::ordered_json;

enum class Method { nonin, nin, ninpr };
Method parse_method(std::string_view name);
std::string_view to_string(Method method);

enum class SolverKind { heuristic, exact };
SolverKind parse_solver(std::string_view name);
std::string_view to_string(SolverKind solver);

struct Region {
    enum class Shape { rectangle, circle } shape = Shape::rectangle;
    Point min = Point::Zero(), max = Point::Zero();  // rectangle
    Point center = Point::Zero();                    // circle
    double radius = 0.0;

    bool contains(const Point& p, double tol = 1e-9) const;
    /// Axis-aligned bounds (min, max).
    std::pair<Point, Point> bounds() const;
};

struct SolverSettings {
    Effort effort = Effort::medium;
    Method method = Method::ninpr;
    SolverKind solver = SolverKind::heuristic;
};

struct ScenarioFile {
    Region region;
    Scenario scenario;
    SolverSettings solver;
};

/// Parses and validates a scenario document; throws ScenarioError with a diagnostic.
ScenarioFile scenario_from_json(const json& doc);
json scenario_to_json(const ScenarioFile& file);
ScenarioFile load_scenario(const std::string& path);

struct SolutionNode {
    int id = 0;
    int task = 0;  // cluster id: task, n+1 depot, n+2 terminal
    bool is_virtual = false;
    std::optional<int> origin;
    Pose pose;
};

struct VehicleSolution {
    int vehicle = 0;
    bool active = true;
    /// Decoded tour nodes: actual visits, each followed by its virtual nodes.
    std::vector<SolutionNode> nodes;
    /// Depot n+1, task ids in visiting order, terminal n+2.
    std::vector<int> visit_order;
    std::vector<Pose> visit_states;
    /// Tasks completed by this vehicle, ascending.
    std::vector<int> claimed_tasks;
    double cost = 0.0;
};

struct Solution {
    Method method = Method::ninpr;
    Effort effort = Effort::medium;
    SolverKind solver = SolverKind::heuristic;
    std::uint64_t seed = 0;
    int samples_per_cluster = 0;
    int real_nodes = 0;
    int total_nodes = 0;
    /// Tasks the flown paths missed and that were re-inserted before refinement.
    int repaired_tasks = 0;
    int refine_sweeps = 0;
    std::vector<VehicleSolution> vehicles;
    /// Wall-clock seconds per stage, in run order.
    std::vector<std::pair<std::string, double>> timings;

    double total_cost() const;
};

struct PipelineOptions {
    std::optional<Method> method;
    std::optional<Effort> effort;
    std::optional<SolverKind> solver;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples_per_cluster;
    RefineOptions refine;
};

/// Scenario with the overrides applied.
ScenarioFile apply_overrides(ScenarioFile file, const PipelineOptions& options);

/// Sampling graph of the method (virtual nodes for nin and ninpr).
SamplingGraph method_graph(const Scenario& scenario, Method method);

/// Full pipeline. Settings come from the file unless overridden.
Solution solve(const ScenarioFile& file, const PipelineOptions& options = {});

/// With `timings` false the document is a pure function of scenario and settings.
json solution_to_json(const Solution& solution, bool timings = false);
Solution solution_from_json(const json& doc);

/// Checks a solution against its scenario; throws ScenarioError on mismatch.
void check_pair(const ScenarioFile& file, const Solution& solution);

/// Deterministic SVG view of a solved scenario.
std::string render_svg(const ScenarioFile& file, const Solution& solution);

struct CheckLine {
    std::string name;
    enum class Status { pass, fail, skip } status = Status::pass;
    std::string detail;
};

struct VerifyOptions {
    std::optional<double> big_m;
    int nin_samples = 200;
};

struct VerifyReport {
    std::vector<CheckLine> lines;
    bool passed() const;
    std::string text() const;
};

VerifyReport verify(const ScenarioFile& file, const VerifyOptions& options = {});

enum class SweepKind { samples, tasks };
SweepKind parse_sweep(std::string_view name);

struct BenchOptions {
    SweepKind sweep = SweepKind::samples;
    std::vector<int> values;
    int seeds = 1;
    SolverKind solver = SolverKind::heuristic;
    Effort effort = Effort::medium;
};

struct BenchRow {
    int value = 0;
    std::uint64_t seed = 0;
    int nodes_nonin = 0, nodes_nin = 0;
    std::map<Method, double> cost, seconds;
};

/// One row per (sweep value, seed). A task sweep draws that many tasks uniformly in the region.
std::vector<BenchRow> bench(const ScenarioFile& base, const BenchOptions& options);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace ninpath
