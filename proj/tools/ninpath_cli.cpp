#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ninpath/app.hpp"
#include "ninpath/errors.hpp"
#include "ninpath/exact.hpp"

using namespace ninpath;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write " + path);
    out << body;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-vehicle sensing path planner with necessarily intersecting nodes"};
    app.require_subcommand(1);

    std::string scenario_path, solution_path, out_path, lp_path, plot_path;
    std::string method, effort, solver;
    std::uint64_t seed = 0;
    int samples = 0;
    bool timings = false;

    auto* solve_cmd = app.add_subcommand("solve", "plan paths for a scenario and write the solution");
    solve_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    solve_cmd->add_option("-o,--output", out_path, "solution file (stdout if omitted)");
    solve_cmd->add_option("--method", method, "nonin, nin or ninpr")->check(CLI::IsMember({"nonin", "nin", "ninpr"}));
    auto* seed_opt = solve_cmd->add_option("--seed", seed, "sampling and solver seed");
    auto* samples_opt =
        solve_cmd->add_option("--samples-per-cluster", samples, "sample nodes per cluster")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--effort", effort, "low, medium or high")->check(CLI::IsMember({"low", "medium", "high"}));
    solve_cmd->add_option("--solver", solver, "heuristic or exact")->check(CLI::IsMember({"heuristic", "exact"}));
    solve_cmd->add_option("--export-lp", lp_path, "also write the MILP model of the method's graph");
    solve_cmd->add_option("--plot", plot_path, "also write an SVG view");
    solve_cmd->add_flag("--timings", timings, "include per-stage wall-clock times in the solution");

    auto* plot_cmd = app.add_subcommand("plot", "render a solution as SVG");
    plot_cmd->add_option("solution", solution_path, "solution file")->required();
    plot_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    plot_cmd->add_option("-o,--output", out_path, "SVG file (stdout if omitted)");

    double big_m = 0;
    auto* verify_cmd = app.add_subcommand("verify", "check the transformation and oracles on a scenario");
    verify_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    auto* big_m_opt = verify_cmd->add_option("--big-m", big_m, "override the transformation constant");

    std::string sweep = "samples";
    std::vector<int> values;
    int seeds = 1;
    auto* bench_cmd = app.add_subcommand("bench", "sweep sample or task counts and tabulate all methods");
    bench_cmd->add_option("scenario", scenario_path, "template scenario file")->required();
    bench_cmd->add_option("--sweep", sweep, "samples or tasks")->check(CLI::IsMember({"samples", "tasks"}));
    bench_cmd->add_option("--values", values, "sweep values")->required()->delimiter(',');
    bench_cmd->add_option("--seeds", seeds, "runs per value")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--effort", effort, "low, medium or high")->check(CLI::IsMember({"low", "medium", "high"}));
    bench_cmd->add_option("--solver", solver, "heuristic or exact")->check(CLI::IsMember({"heuristic", "exact"}));
    bench_cmd->add_option("-o,--output", out_path, "CSV file (stdout if omitted)");

    int subset_cap = 4;
    auto* lp_cmd = app.add_subcommand("export-lp", "write the MILP model of a scenario");
    lp_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    lp_cmd->add_option("-o,--output", out_path, "LP file (stdout if omitted)");
    lp_cmd->add_option("--method", method, "nonin, nin or ninpr")->check(CLI::IsMember({"nonin", "nin", "ninpr"}));
    lp_cmd->add_option("--subset-cap", subset_cap, "largest subtour-cut subset")->check(CLI::Range(2, 16));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*solve_cmd) {
            const auto file = load_scenario(scenario_path);
            PipelineOptions po;
            if (!method.empty()) po.method = parse_method(method);
            if (!effort.empty()) po.effort = parse_effort(effort);
            if (!solver.empty()) po.solver = parse_solver(solver);
            if (*seed_opt) po.seed = seed;
            if (*samples_opt) po.samples_per_cluster = samples;
            const auto sol = solve(file, po);
            if (!lp_path.empty()) {
                const auto used = apply_overrides(file, po);
                write_text(lp_path, export_lp(method_graph(used.scenario, used.solver.method)));
            }
            if (!plot_path.empty()) write_text(plot_path, render_svg(file, sol));
            write_text(out_path, solution_to_json(sol, timings).dump(2) + "\n");
            std::cerr << to_string(sol.method) << " flight time " << sol.total_cost() << " s";
            if (sol.method == Method::ninpr) std::cerr << ", " << sol.repaired_tasks << " tasks re-inserted";
            std::cerr << '\n';
        } else if (*plot_cmd) {
            const auto file = load_scenario(scenario_path);
            const auto sol = solution_from_json(read_json(solution_path));
            write_text(out_path, render_svg(file, sol));
        } else if (*verify_cmd) {
            const auto file = load_scenario(scenario_path);
            VerifyOptions vo;
            if (*big_m_opt) vo.big_m = big_m;
            const auto report = verify(file, vo);
            std::cout << report.text();
            return report.passed() ? 0 : 1;
        } else if (*bench_cmd) {
            const auto file = load_scenario(scenario_path);
            BenchOptions bo;
            bo.sweep = parse_sweep(sweep);
            bo.values = values;
            bo.seeds = seeds;
            if (!effort.empty()) bo.effort = parse_effort(effort);
            if (!solver.empty()) bo.solver = parse_solver(solver);
            write_text(out_path, bench_csv(bench(file, bo)));
        } else if (*lp_cmd) {
            auto file = load_scenario(scenario_path);
            if (!method.empty()) file.solver.method = parse_method(method);
            LpOptions lo;
            lo.subset_cap = subset_cap;
            write_text(out_path, export_lp(method_graph(file.scenario, file.solver.method), lo));
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
