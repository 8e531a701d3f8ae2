#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ninpath/app.hpp"
#include "ninpath/errors.hpp"

namespace ninpath {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ScenarioError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) fail(where, "unknown field '" + key + "'");
    }
}

const json& field(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, "expected a finite number");
    return x;
}

double positive(const json& v, const std::string& where) {
    const double x = number(v, where);
    if (!(x > 0)) fail(where, "must be positive");
    return x;
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

Point point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(where, "expected [x, y]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

json to_json(const Point& p) { return json::array({p.x(), p.y()}); }

Region parse_region(const json& r) {
    const std::string w = "region";
    Region region;
    const auto shape = text(field(r, w, "shape"), w + ".shape");
    if (shape == "rectangle") {
        only_keys(r, w, {"shape", "min", "max"});
        region.shape = Region::Shape::rectangle;
        region.min = point(field(r, w, "min"), w + ".min");
        region.max = point(field(r, w, "max"), w + ".max");
        if (!(region.min.x() < region.max.x() && region.min.y() < region.max.y()))
            fail(w, "min must lie below and left of max");
    } else if (shape == "circle") {
        only_keys(r, w, {"shape", "center", "radius"});
        region.shape = Region::Shape::circle;
        region.center = point(field(r, w, "center"), w + ".center");
        region.radius = positive(field(r, w, "radius"), w + ".radius");
    } else {
        fail(w + ".shape", "must be 'rectangle' or 'circle'");
    }
    return region;
}

SensorModel parse_sensor(const json& s, const std::string& w) {
    const auto orientation = text(field(s, w, "orientation"), w + ".orientation");
    try {
        if (orientation == "arbitrary") {
            only_keys(s, w, {"orientation", "polygon", "r_sen"});
            const auto& poly = field(s, w, "polygon");
            if (!poly.is_array()) fail(w + ".polygon", "expected an array of points");
            std::vector<Point> pts;
            for (std::size_t i = 0; i < poly.size(); ++i)
                pts.push_back(point(poly[i], w + ".polygon[" + std::to_string(i) + "]"));
            std::optional<double> r;
            if (s.contains("r_sen")) r = positive(s["r_sen"], w + ".r_sen");
            return SensorModel::arbitrary(std::move(pts), r);
        }
        only_keys(s, w, {"orientation", "altitude", "nadir_min_deg", "nadir_max_deg", "a", "b", "r_sen"});
        double a = 0, b = 0;
        if (s.contains("altitude")) {
            if (s.contains("a") || s.contains("b") || s.contains("r_sen"))
                fail(w, "give either altitude and nadir angles or explicit a/b/r_sen");
            const auto g = footprint_geometry(positive(s["altitude"], w + ".altitude"),
                                              number(field(s, w, "nadir_min_deg"), w + ".nadir_min_deg") * kDeg,
                                              number(field(s, w, "nadir_max_deg"), w + ".nadir_max_deg") * kDeg);
            if (orientation == "omni") return SensorModel::omni(g.r_sen);
            a = g.a;
            b = g.b;
        } else if (orientation == "omni") {
            if (s.contains("a") || s.contains("b")) fail(w, "omni sensors take r_sen only");
            return SensorModel::omni(positive(field(s, w, "r_sen"), w + ".r_sen"));
        } else {
            if (s.contains("r_sen")) fail(w, "r_sen follows from a and b for this orientation");
            a = number(field(s, w, "a"), w + ".a");
            b = number(field(s, w, "b"), w + ".b");
        }
        if (orientation == "forward") return SensorModel::forward(a, b);
        if (orientation == "rightward") return SensorModel::rightward(a, b);
    } catch (const DomainError& e) {
        fail(w, e.what());
    }
    fail(w + ".orientation", "must be omni, forward, rightward or arbitrary");
}

json sensor_to_json(const SensorModel& s) {
    json j;
    switch (s.orientation) {
    case Orientation::omni:
        j["orientation"] = "omni";
        j["r_sen"] = s.r_sen;
        break;
    case Orientation::forward:
    case Orientation::rightward:
        j["orientation"] = s.orientation == Orientation::forward ? "forward" : "rightward";
        j["a"] = s.offset_min;
        j["b"] = s.offset_max;
        break;
    case Orientation::arbitrary: {
        j["orientation"] = "arbitrary";
        json poly = json::array();
        for (const auto& p : *s.polygon) poly.push_back(to_json(p));
        j["polygon"] = poly;
        j["r_sen"] = s.r_sen;
        break;
    }
    }
    return j;
}

Vehicle parse_vehicle(const json& v, const std::string& w) {
    only_keys(v, w, {"id", "depot", "terminal", "speed", "load_factor", "gravity", "turn_radius", "sensor"});
    Vehicle out;
    out.id = integer(field(v, w, "id"), w + ".id");
    out.depot = point(field(v, w, "depot"), w + ".depot");
    out.terminal = point(field(v, w, "terminal"), w + ".terminal");
    const double speed = positive(field(v, w, "speed"), w + ".speed");
    if (v.contains("load_factor") == v.contains("turn_radius"))
        fail(w, "give exactly one of load_factor and turn_radius");
    try {
        if (v.contains("load_factor")) {
            const double g = v.contains("gravity") ? positive(v["gravity"], w + ".gravity") : 9.81;
            out.kinematics = VehicleKinematics::from_load_factor(speed, number(v["load_factor"], w + ".load_factor"), g);
        } else {
            if (v.contains("gravity")) fail(w, "gravity only applies with load_factor");
            out.kinematics = VehicleKinematics::with_radius(speed, positive(v["turn_radius"], w + ".turn_radius"));
        }
    } catch (const DomainError& e) {
        fail(w, e.what());
    }
    out.sensor = parse_sensor(field(v, w, "sensor"), w + ".sensor");
    return out;
}

}  // namespace

bool Region::contains(const Point& p, double tol) const {
    if (shape == Shape::circle) return (p - center).norm() <= radius + tol;
    return p.x() >= min.x() - tol && p.x() <= max.x() + tol && p.y() >= min.y() - tol && p.y() <= max.y() + tol;
}

std::pair<Point, Point> Region::bounds() const {
    if (shape == Shape::circle) return {center - Point(radius, radius), center + Point(radius, radius)};
    return {min, max};
}

Method parse_method(std::string_view name) {
    if (name == "nonin") return Method::nonin;
    if (name == "nin") return Method::nin;
    if (name == "ninpr") return Method::ninpr;
    throw DomainError("unknown method '" + std::string(name) + "' (nonin, nin, ninpr)");
}

std::string_view to_string(Method method) {
    switch (method) {
    case Method::nonin: return "nonin";
    case Method::nin: return "nin";
    case Method::ninpr: return "ninpr";
    }
    return "?";
}

SolverKind parse_solver(std::string_view name) {
    if (name == "heuristic") return SolverKind::heuristic;
    if (name == "exact") return SolverKind::exact;
    throw DomainError("unknown solver '" + std::string(name) + "' (heuristic, exact)");
}

std::string_view to_string(SolverKind solver) {
    return solver == SolverKind::exact ? "exact" : "heuristic";
}

ScenarioFile scenario_from_json(const json& doc) {
    only_keys(doc, "scenario", {"region", "tasks", "vehicles", "sampling", "solver"});
    ScenarioFile file;
    file.region = parse_region(field(doc, "scenario", "region"));

    const auto& vs = field(doc, "scenario", "vehicles");
    if (!vs.is_array()) fail("vehicles", "expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i)
        file.scenario.vehicles.push_back(parse_vehicle(vs[i], "vehicles[" + std::to_string(i) + "]"));

    const auto& ts = field(doc, "scenario", "tasks");
    if (!ts.is_array()) fail("tasks", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string w = "tasks[" + std::to_string(i) + "]";
        only_keys(ts[i], w, {"id", "position", "radius", "eligible_vehicles"});
        Task t;
        t.id = integer(field(ts[i], w, "id"), w + ".id");
        t.position = point(field(ts[i], w, "position"), w + ".position");
        if (ts[i].contains("radius")) t.neighborhood_radius = positive(ts[i]["radius"], w + ".radius");
        if (ts[i].contains("eligible_vehicles")) {
            const auto& e = ts[i]["eligible_vehicles"];
            if (!e.is_array()) fail(w + ".eligible_vehicles", "expected an array of vehicle ids");
            std::set<int> ids;
            for (const auto& id : e) ids.insert(integer(id, w + ".eligible_vehicles"));
            t.eligible_vehicles.assign(ids.begin(), ids.end());
        } else {
            for (const auto& v : file.scenario.vehicles) t.eligible_vehicles.push_back(v.id);
            std::sort(t.eligible_vehicles.begin(), t.eligible_vehicles.end());
        }
        if (!file.region.contains(t.position)) fail(w, "position lies outside the region");
        file.scenario.tasks.push_back(std::move(t));
    }

    if (doc.contains("sampling")) {
        const auto& s = doc["sampling"];
        only_keys(s, "sampling", {"nodes_per_cluster", "seed"});
        if (s.contains("nodes_per_cluster"))
            file.scenario.samples_per_cluster = integer(s["nodes_per_cluster"], "sampling.nodes_per_cluster");
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) fail("sampling.seed", "expected a non-negative integer");
            file.scenario.seed = s["seed"].get<std::uint64_t>();
        }
    }
    if (doc.contains("solver")) {
        const auto& s = doc["solver"];
        only_keys(s, "solver", {"effort", "method", "solver"});
        try {
            if (s.contains("effort")) file.solver.effort = parse_effort(text(s["effort"], "solver.effort"));
            if (s.contains("method")) file.solver.method = parse_method(text(s["method"], "solver.method"));
            if (s.contains("solver")) file.solver.solver = parse_solver(text(s["solver"], "solver.solver"));
        } catch (const DomainError& e) {
            fail("solver", e.what());
        }
    }
    file.scenario.validate();
    return file;
}

json scenario_to_json(const ScenarioFile& file) {
    json doc;
    json region;
    if (file.region.shape == Region::Shape::circle) {
        region["shape"] = "circle";
        region["center"] = to_json(file.region.center);
        region["radius"] = file.region.radius;
    } else {
        region["shape"] = "rectangle";
        region["min"] = to_json(file.region.min);
        region["max"] = to_json(file.region.max);
    }
    doc["region"] = region;
    json tasks = json::array();
    for (const auto& t : file.scenario.tasks) {
        json j;
        j["id"] = t.id;
        j["position"] = to_json(t.position);
        if (t.neighborhood_radius) j["radius"] = *t.neighborhood_radius;
        j["eligible_vehicles"] = t.eligible_vehicles;
        tasks.push_back(j);
    }
    doc["tasks"] = tasks;
    json vehicles = json::array();
    for (const auto& v : file.scenario.vehicles) {
        json j;
        j["id"] = v.id;
        j["depot"] = to_json(v.depot);
        j["terminal"] = to_json(v.terminal);
        j["speed"] = v.kinematics.speed;
        if (v.kinematics.load_factor_max > 0) {
            j["load_factor"] = v.kinematics.load_factor_max;
            j["gravity"] = v.kinematics.gravity;
        } else {
            j["turn_radius"] = v.kinematics.turn_radius;
        }
        j["sensor"] = sensor_to_json(v.sensor);
        vehicles.push_back(j);
    }
    doc["vehicles"] = vehicles;
    doc["sampling"] = {{"nodes_per_cluster", file.scenario.samples_per_cluster}, {"seed", file.scenario.seed}};
    doc["solver"] = {{"effort", std::string(to_string(file.solver.effort))},
                     {"method", std::string(to_string(file.solver.method))},
                     {"solver", std::string(to_string(file.solver.solver))}};
    return doc;
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

}  // namespace ninpath
