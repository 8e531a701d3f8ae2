#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "ninpath/app.hpp"
#include "ninpath/errors.hpp"

namespace ninpath {

namespace {

Point draw_in(const Region& r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (r.shape == Region::Shape::circle) {
        const double rho = r.radius * std::sqrt(u(rng)), phi = kTwoPi * u(rng);
        return r.center + rho * unit(phi);
    }
    return {r.min.x() + (r.max.x() - r.min.x()) * u(rng), r.min.y() + (r.max.y() - r.min.y()) * u(rng)};
}

}  // namespace

SweepKind parse_sweep(std::string_view name) {
    if (name == "samples") return SweepKind::samples;
    if (name == "tasks") return SweepKind::tasks;
    throw DomainError("unknown sweep '" + std::string(name) + "' (samples, tasks)");
}

std::vector<BenchRow> bench(const ScenarioFile& base, const BenchOptions& options) {
    std::vector<BenchRow> rows;
    for (int value : options.values) {
        if (value < 1) throw DomainError("sweep values must be positive");
        for (int s = 0; s < options.seeds; ++s) {
            ScenarioFile file = base;
            file.scenario.seed = base.scenario.seed + static_cast<std::uint64_t>(s);
            file.solver.effort = options.effort;
            file.solver.solver = options.solver;
            if (options.sweep == SweepKind::samples) {
                file.scenario.samples_per_cluster = value;
            } else {
                std::mt19937_64 rng(file.scenario.seed);
                file.scenario.tasks.clear();
                for (int t = 1; t <= value; ++t) {
                    Task task;
                    task.id = t;
                    task.position = draw_in(file.region, rng);
                    for (const auto& v : file.scenario.vehicles) task.eligible_vehicles.push_back(v.id);
                    file.scenario.tasks.push_back(task);
                }
            }
            file.scenario.validate();
            BenchRow row;
            row.value = value;
            row.seed = file.scenario.seed;
            for (Method m : {Method::nonin, Method::nin, Method::ninpr}) {
                PipelineOptions po;
                po.method = m;
                const auto t0 = std::chrono::steady_clock::now();
                const auto sol = solve(file, po);
                row.seconds[m] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                row.cost[m] = sol.total_cost();
                if (m == Method::nonin) row.nodes_nonin = sol.total_nodes;
                if (m == Method::nin) row.nodes_nin = sol.total_nodes;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream o;
    o << "value,seed,nodes_nonin,nodes_nin,cost_nonin,cost_nin,cost_ninpr,seconds_nonin,seconds_nin,seconds_ninpr\n";
    char buf[64];
    for (const auto& r : rows) {
        o << r.value << ',' << r.seed << ',' << r.nodes_nonin << ',' << r.nodes_nin;
        for (Method m : {Method::nonin, Method::nin, Method::ninpr}) {
            std::snprintf(buf, sizeof buf, ",%.6f", r.cost.at(m));
            o << buf;
        }
        for (Method m : {Method::nonin, Method::nin, Method::ninpr}) {
            std::snprintf(buf, sizeof buf, ",%.6f", r.seconds.at(m));
            o << buf;
        }
        o << '\n';
    }
    return o.str();
}

}  // namespace ninpath
