#include "ninpath/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "ninpath/errors.hpp"
#include "ninpath/numeric.hpp"

namespace ninpath {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Route {
    double cost = kInf;
    std::vector<int> nodes;  // depot, task nodes, terminal
};

// Best route per (actual mask, covered mask) for one vehicle.
using RouteTable = std::map<std::pair<unsigned, unsigned>, Route>;

RouteTable vehicle_routes(const SamplingGraph& g, int k, bool use_nin) {
    const int n = g.n_tasks;
    const auto& depots = g.cluster(n + 1, k);
    const auto& terms = g.cluster(n + 2, k);
    std::vector<int> task_nodes;
    for (int t = 1; t <= n; ++t)
        for (int s : g.cluster(t, k))
            if (g.node(s).kind == NodeKind::real) task_nodes.push_back(s);

    auto nin_mask = [&](int s) {
        unsigned mask = 0;
        if (use_nin && at(s) < g.nin.size())
            for (int t : g.nin[at(s)]) mask |= 1u << (t - 1);
        return mask;
    };

    RouteTable table;
    // Idle vehicle: no flight, no cost.
    table[{0u, 0u}] = {0.0, {depots.front(), terms.front()}};

    std::vector<int> seq;
    auto record = [&](unsigned actual, unsigned covered, double cost_so_far) {
        for (int d : depots) {
            const double head = g.edge_cost(d, seq.front());
            if (!std::isfinite(head)) continue;
            for (int t : terms) {
                const double tail = g.edge_cost(seq.back(), t);
                if (!std::isfinite(tail)) continue;
                CompensatedSum sum;
                sum.add(head);
                sum.add(cost_so_far);
                sum.add(tail);
                auto& best = table[{actual, covered}];
                if (sum.value() < best.cost) {
                    best.cost = sum.value();
                    best.nodes.clear();
                    best.nodes.push_back(d);
                    best.nodes.insert(best.nodes.end(), seq.begin(), seq.end());
                    best.nodes.push_back(t);
                }
            }
        }
    };
    // Depth-first over ordered node sequences with distinct tasks.
    auto dfs = [&](auto&& self, unsigned actual, unsigned covered, double cost) -> void {
        record(actual, covered, cost);
        for (int s : task_nodes) {
            const unsigned bit = 1u << (g.task_of(s) - 1);
            if (actual & bit) continue;
            const double c = g.edge_cost(seq.back(), s);
            if (!std::isfinite(c)) continue;
            seq.push_back(s);
            self(self, actual | bit, covered | bit | nin_mask(s), cost + c);
            seq.pop_back();
        }
    };
    for (int s : task_nodes) {
        const unsigned bit = 1u << (g.task_of(s) - 1);
        seq = {s};
        dfs(dfs, bit, bit | nin_mask(s), 0.0);
    }
    return table;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

BruteForceResult brute_force(const SamplingGraph& g, bool use_nin, const BruteForceLimits& lim) {
    const int n = g.n_tasks, m = g.n_vehicles;
    int task_nodes = 0;
    for (int s = 0; s < g.real_count(); ++s) task_nodes += g.is_task_node(s);
    if (task_nodes > lim.max_task_nodes || n > lim.max_tasks || m > lim.max_vehicles)
        throw CapacityError("brute force is limited to " + std::to_string(lim.max_task_nodes) + " task nodes, " +
                            std::to_string(lim.max_tasks) + " tasks and " + std::to_string(lim.max_vehicles) +
                            " vehicles");
    const unsigned full = (1u << n) - 1;

    // Combine vehicles: state (actual-visit mask, covered mask).
    struct Partial {
        double cost;
        std::vector<const Route*> routes;
    };
    std::map<std::pair<unsigned, unsigned>, Partial> states{{{0u, 0u}, {0.0, {}}}};
    std::vector<RouteTable> tables;
    tables.reserve(at(m));
    for (int k = 1; k <= m; ++k) tables.push_back(vehicle_routes(g, k, use_nin));
    for (const auto& table : tables) {
        std::map<std::pair<unsigned, unsigned>, Partial> next;
        for (const auto& [key, part] : states)
            for (const auto& [rkey, route] : table) {
                if (key.first & rkey.first) continue;  // a task is entered at most once
                const std::pair<unsigned, unsigned> nk{key.first | rkey.first, key.second | rkey.second};
                const double c = part.cost + route.cost;
                auto it = next.find(nk);
                if (it == next.end() || c < it->second.cost) {
                    Partial p{c, part.routes};
                    p.routes.push_back(&route);
                    next[nk] = std::move(p);
                }
            }
        states = std::move(next);
    }

    const Partial* best = nullptr;
    for (const auto& [key, part] : states)
        if (key.second == full && (!best || part.cost < best->cost)) best = &part;
    if (!best) throw InfeasibleError("no assignment covers every task");

    BruteForceResult res;
    unsigned covered = 0;
    for (int k = 1; k <= m; ++k)
        for (int s : best->routes[at(k - 1)]->nodes)
            if (g.is_task_node(s)) covered |= 1u << (g.task_of(s) - 1);
    for (int k = 1; k <= m; ++k) {
        VehicleTour tour;
        tour.vehicle = k;
        tour.nodes = best->routes[at(k - 1)]->nodes;
        // Remaining tasks go to the first origin, in vehicle then visit order, that covers them.
        for (int s : tour.nodes) {
            if (!use_nin || !g.is_task_node(s)) continue;
            for (int v : g.virtual_of[at(s)]) {
                const unsigned bit = 1u << (g.task_of(v) - 1);
                if (covered & bit) continue;
                covered |= bit;
                tour.nin_nodes.push_back(v);
            }
        }
        tour.cost = vehicle_tour_cost(tour, g);
        res.tours.push_back(std::move(tour));
    }
    res.cost = ghmdatsp_cost(res.tours);
    return res;
}

MilpModel build_milp(const SamplingGraph& g, const LpOptions& opt) {
    MilpModel model;
    const int n = g.n_tasks, m = g.n_vehicles;
    const int nodes = g.node_count();
    std::map<std::pair<int, int>, int> xvar;
    std::vector<int> yvar(at(nodes));

    auto add_var = [&](std::string name) {
        model.variables.push_back(std::move(name));
        return static_cast<int>(model.variables.size()) - 1;
    };
    for (int i = 0; i < g.real_count(); ++i)
        for (int j = 0; j < g.real_count(); ++j)
            if (i != j && std::isfinite(g.cost(i, j))) {
                const int v = add_var("x_" + std::to_string(i) + "_" + std::to_string(j));
                xvar[{i, j}] = v;
                model.objective.push_back({g.cost(i, j), v});
                ++model.edge_variables;
            }
    std::vector<std::pair<int, int>> idle;
    if (opt.idle_arcs)
        for (int k = 1; k <= m; ++k)
            for (int d : g.cluster(n + 1, k))
                for (int t : g.cluster(n + 2, k)) {
                    xvar[{d, t}] = add_var("x_" + std::to_string(d) + "_" + std::to_string(t));
                    idle.emplace_back(d, t);
                    ++model.idle_variables;
                }
    for (int s = 0; s < nodes; ++s) {
        yvar[at(s)] = add_var("y_" + std::to_string(s));
        ++model.node_variables;
    }

    auto row = [&](std::string name, std::vector<LinearTerm> terms, Sense sense, double rhs) {
        model.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
    };
    // Each task served by one node of its cluster (virtual nodes included).
    for (int t = 1; t <= n; ++t) {
        std::vector<LinearTerm> terms;
        for (int k = 1; k <= m; ++k)
            for (int s : g.cluster(t, k)) terms.push_back({1.0, yvar[at(s)]});
        row("task_" + std::to_string(t), std::move(terms), Sense::eq, 1.0);
    }
    for (int k = 1; k <= m; ++k)
        for (int c : {n + 1, n + 2}) {
            if (g.cluster(c, k).empty()) continue;
            std::vector<LinearTerm> terms;
            for (int s : g.cluster(c, k)) terms.push_back({1.0, yvar[at(s)]});
            row((c == n + 1 ? "depot_" : "terminal_") + std::to_string(k), std::move(terms), Sense::eq, 1.0);
        }
    // Degree rows; depots have no in-arcs and terminals no out-arcs.
    for (int s = 0; s < g.real_count(); ++s) {
        std::vector<LinearTerm> in, out;
        for (const auto& [e, v] : xvar) {
            if (e.second == s) in.push_back({1.0, v});
            if (e.first == s) out.push_back({1.0, v});
        }
        if (!g.is_depot_node(s)) {
            in.push_back({-1.0, yvar[at(s)]});
            row("in_" + std::to_string(s), std::move(in), Sense::eq, 0.0);
        }
        if (!g.is_terminal_node(s)) {
            out.push_back({-1.0, yvar[at(s)]});
            row("out_" + std::to_string(s), std::move(out), Sense::eq, 0.0);
        }
    }
    // A virtual node only serves its task when its origin is visited.
    for (int s = g.real_count(); s < nodes; ++s) {
        const int o = *g.node(s).origin;
        row("nin_" + std::to_string(s), {{1.0, yvar[at(s)]}, {-1.0, yvar[at(o)]}}, Sense::le, 0.0);
    }

    // Subtour cuts over real task nodes, |S| from 2 up to the cap.
    std::vector<int> pool;
    for (int s = 0; s < g.real_count(); ++s)
        if (g.is_task_node(s)) pool.push_back(s);
    const int P = static_cast<int>(pool.size());
    int cap = std::min(opt.subset_cap, P);
    auto rows_for = [&](int c) {
        std::uint64_t total = 0;
        for (int z = 2; z <= c; ++z) total += binomial(P, z) * static_cast<std::uint64_t>(z);
        return total;
    };
    while (cap >= 2 && rows_for(cap) > opt.max_cut_rows) --cap;
    model.subset_cap = std::max(cap, 1);
    std::vector<int> pick;
    std::vector<char> in_s(at(g.real_count()), 0);
    int cut_id = 0;
    auto emit = [&]() {
        std::vector<LinearTerm> boundary;
        for (const auto& [e, v] : xvar)
            if (in_s[at(e.first)] != in_s[at(e.second)]) boundary.push_back({1.0, v});
        for (int s : pick) {
            auto terms = boundary;
            terms.push_back({-2.0, yvar[at(s)]});
            row("sec_" + std::to_string(cut_id++), std::move(terms), Sense::ge, 0.0);
        }
    };
    auto choose = [&](auto&& self, int from, int left) -> void {
        if (left == 0) {
            emit();
            return;
        }
        for (int i = from; i <= P - left; ++i) {
            pick.push_back(pool[at(i)]);
            in_s[at(pool[at(i)])] = 1;
            self(self, i + 1, left - 1);
            in_s[at(pool[at(i)])] = 0;
            pick.pop_back();
        }
    };
    for (int z = 2; z <= cap; ++z) choose(choose, 0, z);

    auto& h = model.header;
    h.push_back("GHMDATSP model: minimise total flight time over directed sample-node arcs.");
    h.push_back("x_i_j: arc from node i to node j is flown; y_i: node i is used.");
    h.push_back("Subtour cuts enumerate task-node subsets of size 2.." + std::to_string(model.subset_cap) +
                " only; larger subtours are not excluded.");
    if (model.subset_cap < opt.subset_cap && opt.subset_cap <= P)
        h.push_back("Subset cap lowered from " + std::to_string(opt.subset_cap) + " to keep the cut count bounded.");
    if (!idle.empty()) h.push_back("Zero-cost depot->terminal arcs let a vehicle stay unused.");
    h.push_back("Node map (id: cluster vehicle kind x y theta):");
    for (const auto& nd : g.nodes) {
        std::string kind = nd.kind == NodeKind::real ? "real" : "virtual_of_" + std::to_string(*nd.origin);
        std::string cl = nd.cluster.cluster <= n ? "task_" + std::to_string(nd.cluster.cluster)
                         : nd.cluster.cluster == n + 1 ? "depot"
                                                       : "terminal";
        h.push_back("  " + std::to_string(nd.id) + ": " + cl + " vehicle_" + std::to_string(nd.cluster.vehicle) + " " +
                    kind + " " + num(nd.pose.x) + " " + num(nd.pose.y) + " " + num(nd.pose.theta));
    }
    return model;
}

std::string to_lp(const MilpModel& model) {
    std::ostringstream out;
    for (const auto& line : model.header) out << "\\ " << line << "\n";
    const auto& names = model.variables;
    auto write_terms = [&](const std::vector<LinearTerm>& terms) {
        int on_line = 0;
        bool first = true;
        for (const auto& t : terms) {
            if (on_line == 8) {
                out << "\n   ";
                on_line = 0;
            }
            const double mag = std::abs(t.coef);
            out << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            if (mag != 1.0) out << num(mag) << " ";
            out << names[at(t.var)];
            first = false;
            ++on_line;
        }
        if (first) out << "0 " << names.front();
    };
    out << "Minimize\n obj: ";
    write_terms(model.objective);
    out << "\nSubject To\n";
    for (const auto& c : model.constraints) {
        out << " " << c.name << ": ";
        write_terms(c.terms);
        out << (c.sense == Sense::eq ? " = " : c.sense == Sense::le ? " <= " : " >= ") << num(c.rhs) << "\n";
    }
    out << "Binary\n";
    for (std::size_t i = 0; i < names.size(); ++i) out << " " << names[i] << (i % 8 == 7 ? "\n" : "");
    if (names.size() % 8 != 0) out << "\n";
    out << "End\n";
    return out.str();
}

LpCounts parse_lp_counts(std::string_view text) {
    enum class Sec { none, obj, st, bin, end } sec = Sec::none;
    LpCounts c;
    std::size_t pos = 0;
    bool seen_obj = false, seen_st = false, seen_bin = false, seen_end = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        const auto first = line.find_first_not_of(' ');
        if (first == std::string_view::npos || line[first] == '\\') continue;
        line.remove_prefix(first);
        if (line == "Minimize") { sec = Sec::obj; seen_obj = true; continue; }
        if (line == "Subject To") { sec = Sec::st; seen_st = true; continue; }
        if (line == "Binary") { sec = Sec::bin; seen_bin = true; continue; }
        if (line == "End") { sec = Sec::end; seen_end = true; continue; }
        std::istringstream words{std::string(line)};
        std::string w;
        switch (sec) {
        case Sec::obj:
            while (words >> w)
                if (w.rfind("x_", 0) == 0 || w.rfind("y_", 0) == 0) ++c.objective_terms;
            break;
        case Sec::st:
            if (line.find(':') != std::string_view::npos) ++c.constraints;
            break;
        case Sec::bin:
            while (words >> w) ++c.variables;
            break;
        default:
            throw DomainError("LP text outside a section: " + std::string(line));
        }
    }
    if (!seen_obj || !seen_st || !seen_bin || !seen_end) throw DomainError("LP text is missing a section");
    return c;
}

}  // namespace ninpath
