#include "ninpath/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "ninpath/errors.hpp"
#include "ninpath/numeric.hpp"

namespace ninpath {

namespace {

int depot_id(const Scenario& s) { return s.n() + 1; }
int terminal_id(const Scenario& s) { return s.n() + 2; }

// Upper bound on how far from the vehicle a touched task can lie.
double footprint_reach(const Scenario& scenario, const Vehicle& v) {
    double reach = v.sensor.center_offset().norm() + v.sensor.r_sen;
    if (v.sensor.polygon)
        for (const auto& p : *v.sensor.polygon) reach = std::max(reach, p.norm());
    double r_task = 0;
    for (const auto& t : scenario.tasks) r_task = std::max(r_task, scenario.neighborhood_radius(t, v));
    return std::max(reach, v.sensor.center_offset().norm() + r_task);
}

void sample_chain(const std::vector<Pose>& states, double radius, double step, std::vector<Pose>& out) {
    out.clear();
    if (states.empty()) return;
    out.push_back(states.front());
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const auto p = shortest_path(states[i], states[i + 1], radius);
        auto pts = sample_path(p, states[i], step);
        out.insert(out.end(), pts.begin() + 1, pts.end());
    }
}

// First arc length along `leg` at which the task is touched.
std::optional<double> first_touch(const DubinsPath& leg, const Pose& start, double step, double reach,
                                  double r_min, const std::function<double(const Pose&)>& clearance) {
    auto f = [&](double s) { return clearance(pose_at(leg, start, s)); };
    double a = 0, fa = f(0);
    if (fa <= kTouchTolerance) return 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(leg.length / step)));
    for (int i = 1; i <= pieces; ++i) {
        const double b = i == pieces ? leg.length : leg.length * i / pieces;
        const double fb = f(b);
        const double lip = 1.0 + (reach + std::max(fa, fb) + 2 * step) / r_min;
        if (fa + fb > lip * (b - a)) {
            a = b;
            fa = fb;
            continue;
        }
        auto [sm, fm] = boost::math::tools::brent_find_minima(f, a, b, 40);
        if (fb <= fm) {
            sm = b;
            fm = fb;
        }
        if (fm <= kTouchTolerance) {
            if (fm > 0) return sm;
            double lo = a, hi = sm;  // f(lo) > 0 >= f(hi)
            while (hi - lo > 1e-10 * std::max(1.0, leg.length)) {
                const double mid = 0.5 * (lo + hi);
                (f(mid) <= 0 ? hi : lo) = mid;
            }
            return hi;
        }
        a = b;
        fa = fb;
    }
    return std::nullopt;
}

double path_length(const std::optional<Pose>& prev, const Pose& p, const std::optional<Pose>& next, double r) {
    double len = 0;
    if (prev) len += shortest_path(*prev, p, r).length;
    if (next) len += shortest_path(p, *next, r).length;
    return len;
}

}  // namespace

double VisitPlan::total_cost() const {
    CompensatedSum s;
    for (const auto& v : vehicles) s.add(v.cost);
    return s.value();
}

double path_step(const Vehicle& vehicle) { return vehicle.sensor.r_sen / 10.0; }

double touch_clearance(const Scenario& scenario, const Vehicle& vehicle, const Task& task, const Pose& pose) {
    const double sd = footprint_signed_distance(vehicle.sensor, pose.to_body(task.position));
    const double disk = (footprint_center(pose, vehicle.sensor) - task.position).norm() -
                        scenario.neighborhood_radius(task, vehicle);
    return std::min(sd, disk);
}

std::vector<VehiclePath> tour_paths(const std::vector<VehicleTour>& tours, const SamplingGraph& graph) {
    std::vector<VehiclePath> out;
    for (const auto& t : tours) {
        VehiclePath p;
        p.vehicle = t.vehicle;
        for (int id : t.nodes) p.waypoints.push_back(graph.node(id).pose);
        p.active = !(t.nodes.size() == 2 && graph.is_depot_node(t.nodes[0]) && graph.is_terminal_node(t.nodes[1]));
        out.push_back(std::move(p));
    }
    return out;
}

double chain_cost(const std::vector<Pose>& states, const Vehicle& vehicle) {
    CompensatedSum s;
    for (std::size_t i = 0; i + 1 < states.size(); ++i)
        s.add(edge_cost(shortest_path(states[i], states[i + 1], vehicle.kinematics.turn_radius),
                        vehicle.kinematics.speed));
    return s.value();
}

ClaimResult claim_visits(const std::vector<VehiclePath>& paths, const Scenario& scenario) {
    const int n = scenario.n();
    std::vector<char> claimed(static_cast<std::size_t>(n + 1), 0);
    int remaining = n;
    auto order = paths;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.vehicle < b.vehicle; });

    ClaimResult res;
    auto& plan = res.plan;
    for (const auto& vp : order) {
        const auto& v = scenario.vehicle(vp.vehicle);
        if (vp.waypoints.empty()) throw InvalidSolutionError("vehicle path without waypoints");
        VehicleVisits vv;
        vv.vehicle = vp.vehicle;
        vv.active = vp.active;
        vv.visit_order.push_back(depot_id(scenario));
        vv.visit_states.push_back(vp.waypoints.front());
        const double r = v.kinematics.turn_radius;
        const double step = path_step(v);
        const double reach = footprint_reach(scenario, v);
        for (std::size_t i = 0; vp.active && remaining > 0 && i + 1 < vp.waypoints.size(); ++i) {
            const Pose& start = vp.waypoints[i];
            const auto leg = shortest_path(start, vp.waypoints[i + 1], r);
            std::vector<std::pair<double, int>> hits;
            for (const auto& t : scenario.tasks) {
                if (claimed[static_cast<std::size_t>(t.id)] || !t.eligible(v.id)) continue;
                if ((t.position - start.position()).norm() > leg.length + reach + 1.0) continue;
                auto s = first_touch(leg, start, step, reach, r,
                                     [&](const Pose& p) { return touch_clearance(scenario, v, t, p); });
                if (s) hits.emplace_back(*s, t.id);
            }
            std::sort(hits.begin(), hits.end());
            for (const auto& [s, id] : hits) {
                claimed[static_cast<std::size_t>(id)] = 1;
                --remaining;
                vv.visit_order.push_back(id);
                // pose_at at the leg end can land a hair past the waypoint; the chain would then loop.
                const bool at_end = s >= leg.length * (1 - 1e-9);
                vv.visit_states.push_back(at_end ? vp.waypoints[i + 1] : s <= 0 ? start : pose_at(leg, start, s));
            }
        }
        vv.visit_order.push_back(terminal_id(scenario));
        vv.visit_states.push_back(vp.waypoints.back());
        if (vv.active) {
            sample_chain(vv.visit_states, r, step, vv.path);
            vv.cost = chain_cost(vv.visit_states, v);
        }
        plan.vehicles.push_back(std::move(vv));
    }
    for (int t = 1; t <= n; ++t)
        if (!claimed[static_cast<std::size_t>(t)]) res.untouched.push_back(t);
    return res;
}

VisitPlan extract_visits(const std::vector<VehiclePath>& paths, const Scenario& scenario) {
    auto res = claim_visits(paths, scenario);
    if (!res.untouched.empty())
        throw InvalidSolutionError("task " + std::to_string(res.untouched.front()) + " is never touched by any path");
    return std::move(res.plan);
}

void repair_coverage(VisitPlan& plan, const std::vector<int>& untouched, const SamplingGraph& graph,
                     const Scenario& scenario) {
    for (int t : untouched) {
        VehicleVisits* best_v = nullptr;
        std::size_t best_pos = 0;
        Pose best_pose;
        double best_delta = std::numeric_limits<double>::infinity();
        for (auto& vv : plan.vehicles) {
            if (!scenario.task(t).eligible(vv.vehicle)) continue;
            const auto& v = scenario.vehicle(vv.vehicle);
            const double r = v.kinematics.turn_radius;
            const auto& st = vv.visit_states;
            for (int id : graph.cluster(t, vv.vehicle)) {
                if (graph.node(id).kind != NodeKind::real) continue;
                const Pose& q = graph.node(id).pose;
                for (std::size_t i = 1; i < st.size(); ++i) {
                    const double removed = vv.active ? shortest_path(st[i - 1], st[i], r).length : 0.0;
                    const double delta =
                        (shortest_path(st[i - 1], q, r).length + shortest_path(q, st[i], r).length - removed) /
                        v.kinematics.speed;
                    if (delta < best_delta) {
                        best_delta = delta;
                        best_v = &vv;
                        best_pos = i;
                        best_pose = q;
                    }
                }
            }
        }
        if (!best_v) throw InvalidSolutionError("task " + std::to_string(t) + " cannot be inserted into any plan");
        auto& vv = *best_v;
        const auto& v = scenario.vehicle(vv.vehicle);
        vv.visit_order.insert(vv.visit_order.begin() + static_cast<std::ptrdiff_t>(best_pos), t);
        vv.visit_states.insert(vv.visit_states.begin() + static_cast<std::ptrdiff_t>(best_pos), best_pose);
        vv.active = true;
        vv.cost = chain_cost(vv.visit_states, v);
        sample_chain(vv.visit_states, v.kinematics.turn_radius, path_step(v), vv.path);
    }
}

Pose optimize_state(const Scenario& scenario, int target, const Vehicle& vehicle,
                    const std::optional<Pose>& prev, const std::optional<Pose>& next, const Pose& initial) {
    const double r = vehicle.kinematics.turn_radius;
    const double j0 = path_length(prev, initial, next, r);
    auto better = [](double cand, double cur) { return cand < cur - 1e-9 * (1.0 + cur); };

    if (target == depot_id(scenario) || target == terminal_id(scenario)) {
        auto j = [&](double th) { return path_length(prev, Pose(initial.position(), th), next, r); };
        constexpr int kScan = 72;
        double best_th = initial.theta, best = j0;
        for (int i = 0; i < kScan; ++i) {
            const double th = kTwoPi * i / kScan;
            const double c = j(th);
            if (better(c, best)) {
                best = c;
                best_th = th;
            }
        }
        const double w = kTwoPi / kScan;
        auto [th, c] = boost::math::tools::brent_find_minima(j, best_th - w, best_th + w, 40);
        if (better(c, best)) best_th = th;
        return best_th == initial.theta ? initial : Pose(initial.position(), best_th);
    }

    const Task& task = scenario.task(target);
    const bool disk = !vehicle.sensor.polygon;
    const double rmax = std::max(vehicle.sensor.r_sen, scenario.neighborhood_radius(task, vehicle));
    const double slack = std::max(0.0, touch_clearance(scenario, vehicle, task, initial));
    const Point off = vehicle.sensor.center_offset();

    // Returns a feasible version of the candidate, or nothing.
    auto feasible = [&](Pose p) -> std::optional<Pose> {
        if (touch_clearance(scenario, vehicle, task, p) <= slack) return p;
        if (!disk) return std::nullopt;
        const Point c = footprint_center(p, vehicle.sensor);
        const Point d = c - task.position;
        const Point cp = task.position + d * (rmax * (1.0 - 1e-12) / d.norm());
        p = Pose(cp - rotate(off, p.theta), p.theta);
        if (touch_clearance(scenario, vehicle, task, p) <= slack) return p;
        return std::nullopt;
    };

    static const auto dirs = [] {
        std::vector<std::array<double, 3>> d;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int c = -1; c <= 1; ++c) {
                    const int nz = (a != 0) + (b != 0) + (c != 0);
                    if (nz == 1 || nz == 3) d.push_back({double(a), double(b), double(c)});
                }
        return d;
    }();

    Pose x = initial;
    double jx = j0;
    double dp = std::max(0.25 * rmax, 1.0);
    double dth = std::numbers::pi / 4;
    const double dp_min = 1e-5 * std::max(1.0, rmax);
    for (int it = 0; it < 2000 && dp > dp_min; ++it) {
        std::optional<Pose> best;
        double jb = jx;
        for (const auto& d : dirs) {
            Pose c(x.position() + dp * Point(d[0], d[1]), x.theta + dth * d[2]);
            auto f = feasible(c);
            if (!f) continue;
            const double jc = path_length(prev, *f, next, r);
            if (better(jc, jb)) {
                jb = jc;
                best = f;
            }
        }
        if (best) {
            x = *best;
            jx = jb;
        } else {
            dp *= 0.5;
            dth *= 0.5;
        }
    }
    return x;
}

RefineResult refine_paths(const VisitPlan& plan, const Scenario& scenario, const RefineOptions& options) {
    RefineResult res;
    res.plan = plan;
    for (auto& vv : res.plan.vehicles)
        vv.cost = vv.active ? chain_cost(vv.visit_states, scenario.vehicle(vv.vehicle)) : 0.0;
    double cur = res.plan.total_cost();
    res.sweep_costs.push_back(cur);

    while (res.sweeps < options.max_sweeps) {
        for (auto& vv : res.plan.vehicles) {
            if (!vv.active) continue;
            const auto& v = scenario.vehicle(vv.vehicle);
            auto& st = vv.visit_states;
            const std::size_t count = st.size();
            for (std::size_t parity = 0; parity < 2; ++parity)
                for (std::size_t i = parity; i < count; i += 2) {
                    std::optional<Pose> prev, next;
                    if (i > 0) prev = st[i - 1];
                    if (i + 1 < count) next = st[i + 1];
                    st[i] = optimize_state(scenario, vv.visit_order[i], v, prev, next, st[i]);
                }
            vv.cost = chain_cost(st, v);
        }
        ++res.sweeps;
        const double next = res.plan.total_cost();
        res.sweep_costs.push_back(next);
        const bool small = cur - next <= options.relative_tolerance * cur;
        cur = next;
        if (small) {
            res.converged = true;
            break;
        }
    }
    for (auto& vv : res.plan.vehicles) {
        if (!vv.active) continue;
        const auto& v = scenario.vehicle(vv.vehicle);
        sample_chain(vv.visit_states, v.kinematics.turn_radius, path_step(v), vv.path);
    }
    return res;
}

}  // namespace ninpath
