#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "ninpath/app.hpp"
#include "ninpath/errors.hpp"
#include "ninpath/numeric.hpp"

namespace ninpath {

namespace {

class Stopwatch {
public:
    explicit Stopwatch(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
    void lap(const char* stage) {
        const auto now = std::chrono::steady_clock::now();
        out_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }

private:
    std::vector<std::pair<std::string, double>>& out_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json pose_json(const Pose& p) { return json::array({p.x, p.y, p.theta}); }

Pose pose_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
        throw ScenarioError(where + ": expected [x, y, theta]");
    return Pose(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

const json& need(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ScenarioError(where + ": missing field '" + key + "'");
    return obj[key];
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    try {
        return need(obj, key, where).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(where + "." + key + ": wrong type");
    }
}

VehicleSolution from_tour(const VehicleTour& tour, const SamplingGraph& g) {
    VehicleSolution v;
    v.vehicle = tour.vehicle;
    v.active = tour.nodes.size() > 2;
    v.cost = tour.cost;
    std::set<int> claimed;
    for (int id : tour.nodes) {
        const auto& nd = g.node(id);
        v.nodes.push_back({id, nd.cluster.cluster, false, std::nullopt, nd.pose});
        v.visit_order.push_back(nd.cluster.cluster);
        v.visit_states.push_back(nd.pose);
        if (g.is_task_node(id)) claimed.insert(nd.cluster.cluster);
        for (int w : tour.nin_nodes) {
            const auto& vn = g.node(w);
            if (vn.origin != id) continue;
            v.nodes.push_back({w, vn.cluster.cluster, true, vn.origin, vn.pose});
            claimed.insert(vn.cluster.cluster);
        }
    }
    v.claimed_tasks.assign(claimed.begin(), claimed.end());
    return v;
}

}  // namespace

double Solution::total_cost() const {
    CompensatedSum s;
    for (const auto& v : vehicles) s.add(v.cost);
    return s.value();
}

ScenarioFile apply_overrides(ScenarioFile file, const PipelineOptions& o) {
    if (o.method) file.solver.method = *o.method;
    if (o.effort) file.solver.effort = *o.effort;
    if (o.solver) file.solver.solver = *o.solver;
    if (o.seed) file.scenario.seed = *o.seed;
    if (o.samples_per_cluster) file.scenario.samples_per_cluster = *o.samples_per_cluster;
    file.scenario.validate();
    return file;
}

SamplingGraph method_graph(const Scenario& scenario, Method method) {
    auto g = build_graph(scenario);
    if (method != Method::nonin) attach_virtual_nodes(g, scenario);
    return g;
}

Solution solve(const ScenarioFile& input, const PipelineOptions& options) {
    const ScenarioFile file = apply_overrides(input, options);
    const Scenario& sc = file.scenario;
    Solution sol;
    sol.method = file.solver.method;
    sol.effort = file.solver.effort;
    sol.solver = file.solver.solver;
    sol.seed = sc.seed;
    sol.samples_per_cluster = sc.samples_per_cluster;

    Stopwatch clock(sol.timings);
    auto g = build_graph(sc);
    clock.lap("sampling");
    if (sol.method != Method::nonin) {
        attach_virtual_nodes(g, sc);
        clock.lap("nin");
    }
    sol.real_nodes = g.real_count();
    sol.total_nodes = g.node_count();
    const auto problem = to_atsp(g);
    clock.lap("transform");
    const auto tour = sol.solver == SolverKind::exact ? solve_exact(problem)
                                                      : solve_heuristic(problem, sc.seed, sol.effort);
    clock.lap("solve");
    const auto tours = from_atsp(tour.sequence, problem, g);
    for (const auto& t : tours) sol.vehicles.push_back(from_tour(t, g));
    clock.lap("decode");

    if (sol.method == Method::ninpr) {
        auto claim = claim_visits(tour_paths(tours, g), sc);
        sol.repaired_tasks = static_cast<int>(claim.untouched.size());
        repair_coverage(claim.plan, claim.untouched, g, sc);
        const auto refined = refine_paths(claim.plan, sc, options.refine);
        sol.refine_sweeps = refined.sweeps;
        for (const auto& pv : refined.plan.vehicles) {
            auto& v = sol.vehicles.at(static_cast<std::size_t>(pv.vehicle - 1));
            v.active = pv.active;
            v.visit_order = pv.visit_order;
            v.visit_states = pv.visit_states;
            v.cost = pv.cost;
            v.claimed_tasks.clear();
            for (int t : pv.visit_order)
                if (t <= sc.n()) v.claimed_tasks.push_back(t);
            std::sort(v.claimed_tasks.begin(), v.claimed_tasks.end());
        }
        clock.lap("refine");
    }
    return sol;
}

json solution_to_json(const Solution& sol, bool timings) {
    json doc;
    doc["method"] = std::string(to_string(sol.method));
    doc["solver"] = std::string(to_string(sol.solver));
    doc["effort"] = std::string(to_string(sol.effort));
    doc["seed"] = sol.seed;
    doc["samples_per_cluster"] = sol.samples_per_cluster;
    doc["real_nodes"] = sol.real_nodes;
    doc["total_nodes"] = sol.total_nodes;
    doc["repaired_tasks"] = sol.repaired_tasks;
    doc["refine_sweeps"] = sol.refine_sweeps;
    json vehicles = json::array();
    for (const auto& v : sol.vehicles) {
        json j;
        j["id"] = v.vehicle;
        j["active"] = v.active;
        j["cost"] = v.cost;
        j["visit_order"] = v.visit_order;
        j["claimed_tasks"] = v.claimed_tasks;
        json states = json::array();
        for (const auto& p : v.visit_states) states.push_back(pose_json(p));
        j["visit_states"] = states;
        json nodes = json::array();
        for (const auto& n : v.nodes) {
            json nj;
            nj["id"] = n.id;
            nj["cluster"] = n.task;
            nj["kind"] = n.is_virtual ? "virtual" : "real";
            if (n.origin) nj["origin"] = *n.origin;
            nj["pose"] = pose_json(n.pose);
            nodes.push_back(nj);
        }
        j["nodes"] = nodes;
        vehicles.push_back(j);
    }
    doc["vehicles"] = vehicles;
    doc["total_cost"] = sol.total_cost();
    if (timings) {
        json t = json::object();
        for (const auto& [stage, sec] : sol.timings) t[stage] = sec;
        doc["timings"] = t;
    }
    return doc;
}

Solution solution_from_json(const json& doc) {
    const std::string w = "solution";
    if (!doc.is_object()) throw ScenarioError(w + ": expected an object");
    Solution sol;
    try {
        sol.method = parse_method(get_as<std::string>(doc, "method", w));
        sol.solver = parse_solver(get_as<std::string>(doc, "solver", w));
        sol.effort = parse_effort(get_as<std::string>(doc, "effort", w));
    } catch (const DomainError& e) {
        throw ScenarioError(w + ": " + e.what());
    }
    sol.seed = get_as<std::uint64_t>(doc, "seed", w);
    sol.samples_per_cluster = get_as<int>(doc, "samples_per_cluster", w);
    sol.real_nodes = get_as<int>(doc, "real_nodes", w);
    sol.total_nodes = get_as<int>(doc, "total_nodes", w);
    sol.repaired_tasks = get_as<int>(doc, "repaired_tasks", w);
    sol.refine_sweeps = get_as<int>(doc, "refine_sweeps", w);
    const auto& vs = need(doc, "vehicles", w);
    if (!vs.is_array()) throw ScenarioError(w + ".vehicles: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string vw = w + ".vehicles[" + std::to_string(i) + "]";
        VehicleSolution v;
        v.vehicle = get_as<int>(vs[i], "id", vw);
        v.active = get_as<bool>(vs[i], "active", vw);
        v.cost = get_as<double>(vs[i], "cost", vw);
        v.visit_order = get_as<std::vector<int>>(vs[i], "visit_order", vw);
        v.claimed_tasks = get_as<std::vector<int>>(vs[i], "claimed_tasks", vw);
        const auto& states = need(vs[i], "visit_states", vw);
        if (!states.is_array()) throw ScenarioError(vw + ".visit_states: expected an array");
        for (const auto& p : states) v.visit_states.push_back(pose_from(p, vw + ".visit_states"));
        const auto& nodes = need(vs[i], "nodes", vw);
        if (!nodes.is_array()) throw ScenarioError(vw + ".nodes: expected an array");
        for (const auto& nj : nodes) {
            SolutionNode n;
            n.id = get_as<int>(nj, "id", vw + ".nodes");
            n.task = get_as<int>(nj, "cluster", vw + ".nodes");
            const auto kind = get_as<std::string>(nj, "kind", vw + ".nodes");
            if (kind != "real" && kind != "virtual") throw ScenarioError(vw + ".nodes: kind must be real or virtual");
            n.is_virtual = kind == "virtual";
            if (nj.contains("origin")) n.origin = get_as<int>(nj, "origin", vw + ".nodes");
            n.pose = pose_from(need(nj, "pose", vw + ".nodes"), vw + ".nodes.pose");
            v.nodes.push_back(n);
        }
        sol.vehicles.push_back(std::move(v));
    }
    const double total = get_as<double>(doc, "total_cost", w);
    if (std::abs(total - sol.total_cost()) > 1e-9 * std::max(1.0, std::abs(total)))
        throw ScenarioError(w + ": total_cost differs from the sum of vehicle costs");
    if (doc.contains("timings")) {
        const auto& t = doc["timings"];
        if (!t.is_object()) throw ScenarioError(w + ".timings: expected an object");
        for (const auto& [stage, sec] : t.items()) {
            if (!sec.is_number()) throw ScenarioError(w + ".timings." + stage + ": expected a number");
            sol.timings.emplace_back(stage, sec.get<double>());
        }
    }
    return sol;
}

void check_pair(const ScenarioFile& file, const Solution& sol) {
    const Scenario& sc = file.scenario;
    const int n = sc.n();
    std::set<int> seen_vehicles;
    std::vector<int> claims(static_cast<std::size_t>(n + 1), 0);
    for (const auto& v : sol.vehicles) {
        const std::string w = "vehicle " + std::to_string(v.vehicle);
        if (v.vehicle < 1 || v.vehicle > sc.m()) throw ScenarioError(w + " is not in the scenario");
        if (!seen_vehicles.insert(v.vehicle).second) throw ScenarioError(w + " appears twice");
        if (v.visit_order.size() != v.visit_states.size())
            throw ScenarioError(w + ": visit_order and visit_states differ in length");
        if (v.visit_order.size() < 2 || v.visit_order.front() != n + 1 || v.visit_order.back() != n + 2)
            throw ScenarioError(w + ": visit order must run from depot to terminal");
        const auto& veh = sc.vehicle(v.vehicle);
        if ((v.visit_states.front().position() - veh.depot).norm() > 1e-6 ||
            (v.visit_states.back().position() - veh.terminal).norm() > 1e-6)
            throw ScenarioError(w + ": depot or terminal state does not match the scenario");
        for (std::size_t i = 1; i + 1 < v.visit_order.size(); ++i)
            if (v.visit_order[i] < 1 || v.visit_order[i] > n)
                throw ScenarioError(w + ": visit order names unknown task " + std::to_string(v.visit_order[i]));
        for (int t : v.claimed_tasks) {
            if (t < 1 || t > n) throw ScenarioError(w + " claims unknown task " + std::to_string(t));
            if (!sc.task(t).eligible(v.vehicle))
                throw ScenarioError(w + " claims task " + std::to_string(t) + " it is not eligible for");
            ++claims[static_cast<std::size_t>(t)];
        }
    }
    for (int t = 1; t <= n; ++t)
        if (claims[static_cast<std::size_t>(t)] > 1)
            throw ScenarioError("task " + std::to_string(t) + " is claimed more than once");
}

}  // namespace ninpath
