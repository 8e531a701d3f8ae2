#include <cmath>
#include <sstream>

#include "ninpath/app.hpp"
#include "ninpath/errors.hpp"
#include "ninpath/exact.hpp"

namespace ninpath {

namespace {

constexpr double kIdentityTol = 1e-9;

std::string num(double v) {
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

}  // namespace

bool VerifyReport::passed() const {
    for (const auto& l : lines)
        if (l.status == CheckLine::Status::fail) return false;
    return true;
}

std::string VerifyReport::text() const {
    std::ostringstream o;
    for (const auto& l : lines) {
        const char* tag = l.status == CheckLine::Status::pass ? "PASS" : l.status == CheckLine::Status::fail ? "FAIL" : "SKIP";
        o << tag << ' ' << l.name;
        if (!l.detail.empty()) o << ": " << l.detail;
        o << '\n';
    }
    o << (passed() ? "all checks passed" : "some checks failed") << '\n';
    return o.str();
}

VerifyReport verify(const ScenarioFile& file, const VerifyOptions& options) {
    using S = CheckLine::Status;
    VerifyReport rep;
    const Scenario& sc = file.scenario;
    const auto g = method_graph(sc, file.solver.method);
    const auto problem = options.big_m ? to_atsp(g, *options.big_m) : to_atsp(g);
    const bool exact_ok = problem.size() <= kExactMaxNodes;
    const auto tour = exact_ok ? solve_exact(problem) : solve_heuristic(problem, sc.seed, file.solver.effort);
    const std::string solver = exact_ok ? "exact" : "heuristic";

    // Structure first: decoding assumes it.
    const auto structure = check_cluster_structure(tour.sequence, problem, g);
    {
        CheckLine l{"cluster structure (" + solver + " tour)", structure.ok ? S::pass : S::fail, ""};
        l.detail = "M-count " + std::to_string(structure.m_count) + ", expected " +
                   std::to_string(problem.expected_m_count());
        if (!structure.ok && !structure.violations.empty()) l.detail += "; " + structure.violations.front();
        rep.lines.push_back(l);
    }

    std::vector<VehicleTour> tours;
    try {
        tours = from_atsp(tour.sequence, problem, g);
    } catch (const InvalidSolutionError& e) {
        rep.lines.push_back({"big-M identity", S::fail, std::string("tour does not decode: ") + e.what()});
        return rep;
    }
    {
        const double lhs = tour.cost - problem.big_m * problem.expected_m_count();
        const double rhs = ghmdatsp_cost(tours);
        const double err = std::abs(lhs - rhs);
        rep.lines.push_back({"big-M identity", err <= kIdentityTol ? S::pass : S::fail,
                             "ATSP cost - M(n+2m) = " + num(lhs) + ", vehicle costs = " + num(rhs)});
    }
    try {
        const auto emb = embed_feasible(tours, problem, g);
        const auto back = from_atsp(emb, problem, g);
        rep.lines.push_back({"embed round trip", back == tours ? S::pass : S::fail, ""});
    } catch (const std::exception& e) {
        rep.lines.push_back({"embed round trip", S::fail, e.what()});
    }

    if (!exact_ok) {
        rep.lines.push_back({"exact equivalence", S::skip,
                             "warning: " + std::to_string(problem.size()) + " ATSP nodes exceed the exact limit of " +
                                 std::to_string(kExactMaxNodes)});
    } else {
        try {
            const auto bf = brute_force(g, file.solver.method != Method::nonin);
            const double exact = ghmdatsp_cost(tours);
            rep.lines.push_back({"exact equivalence", std::abs(bf.cost - exact) <= kIdentityTol ? S::pass : S::fail,
                                 "transformed " + num(exact) + ", enumerated " + num(bf.cost)});
        } catch (const CapacityError& e) {
            rep.lines.push_back({"exact equivalence", S::skip, std::string("warning: ") + e.what()});
        }
    }

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < g.real_count(); ++i)
        if (static_cast<std::size_t>(i) < g.nin.size())
            for (int t : g.nin[static_cast<std::size_t>(i)]) pairs.emplace_back(i, t);
    if (pairs.empty()) {
        rep.lines.push_back({"NIN oracle sample", S::skip, "no necessarily intersecting pairs"});
    } else {
        const std::size_t take = std::min(pairs.size(), static_cast<std::size_t>(std::max(1, options.nin_samples)));
        int bad = 0;
        for (std::size_t k = 0; k < take; ++k) {
            const auto [i, t] = pairs[k * pairs.size() / take];
            const auto& veh = sc.vehicle(g.vehicle_of(i));
            if (!nir_oracle(g.node(i).pose, veh.sensor, veh.kinematics.turn_radius, sc.task(t).position,
                            veh.sensor.r_sen / 100.0))
                ++bad;
        }
        rep.lines.push_back({"NIN oracle sample", bad == 0 ? S::pass : S::fail,
                             std::to_string(take) + " pairs checked, " + std::to_string(bad) + " violations"});
    }
    return rep;
}

}  // namespace ninpath
