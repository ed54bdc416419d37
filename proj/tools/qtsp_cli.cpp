// Command-line front end: solve (single run), bench (repeated seeded runs
// with CSV/JSON/SVG artifacts), exact (Held-Karp oracle), info (instance
// summary).

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <qtsp/qtsp.hpp>

namespace {

struct CommonOpts {
    std::string instance_path;
    std::string algorithm = "ga";
    std::string metric = "euclid";
    std::string preset;
    std::string bits_rule = "ceil";
    std::string theta_cap = "auto";
    int population = 80;
    double pc = 0.7;
    double pm = 0.3;
    int generations = 500;
    int runs = 10;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

void add_instance_opt(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--instance", o.instance_path, "TSPLIB .tsp file")
        ->required()
        ->check(CLI::ExistingFile);
}

void add_metric_opt(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--metric", o.metric, "Distance function (default euclid)")
        ->check(CLI::IsMember({"euclid", "tsplib"}));
}

void add_solver_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--algorithm", o.algorithm, "Solver (default ga)")
        ->check(CLI::IsMember({"ga", "qga"}));
    cmd->add_option("--pop", o.population, "Population size");
    cmd->add_option("--pc", o.pc, "Crossover probability");
    cmd->add_option("--pm", o.pm, "Mutation probability");
    cmd->add_option("--generations", o.generations, "Generation cap");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--bits-rule", o.bits_rule, "Bits per gene rule (qga)")
        ->check(CLI::IsMember({"ceil", "floor"}));
    cmd->add_option("--theta-cap", o.theta_cap,
                    "Rotation step clamp in radians, or 'none' (qga)");
    cmd->add_option("--out-dir", o.out_dir, "Artifact output directory");
    cmd->add_option("--preset", o.preset,
                    "Parameter preset: paper-small (pop 80, pc 0.7, pm 0.3, 500 generations) "
                    "or paper-large (pop 120, pc 0.9, pm 0.3, 600 generations)")
        ->check(CLI::IsMember({"paper-small", "paper-large"}));
}

// Presets fill anything the user did not set explicitly.
void apply_preset(const CLI::App* cmd, CommonOpts& o) {
    if (o.preset.empty())
        return;
    const bool large = o.preset == "paper-large";
    if (cmd->count("--pop") == 0)
        o.population = large ? 120 : 80;
    if (cmd->count("--pc") == 0)
        o.pc = large ? 0.9 : 0.7;
    if (cmd->count("--pm") == 0)
        o.pm = 0.3;
    if (cmd->count("--generations") == 0)
        o.generations = large ? 600 : 500;
}

qtsp::DistanceMetric pick_metric(const CommonOpts& o, const qtsp::TspInstance& inst) {
    return o.metric == "tsplib" ? qtsp::declared_distance_metric(inst)
                                : qtsp::DistanceMetric::EuclidRaw;
}

qtsp::GaParams make_ga_params(const CommonOpts& o) {
    qtsp::GaParams p;
    p.population_size = o.population;
    p.crossover_prob = o.pc;
    p.mutation_prob = o.pm;
    p.generation_max = o.generations;
    p.seed = o.seed;
    return p;
}

qtsp::QgaParams make_qga_params(const CommonOpts& o) {
    qtsp::QgaParams p;
    p.population_size = o.population;
    p.crossover_prob = o.pc;
    p.pm_chrom = o.pm;
    p.generation_max = o.generations;
    p.bits_rule = o.bits_rule == "floor" ? qtsp::BitsRule::FloorLog2 : qtsp::BitsRule::CeilLog2;
    if (o.theta_cap == "none")
        p.theta_cap = std::numeric_limits<double>::infinity();
    else if (o.theta_cap != "auto")
        p.theta_cap = std::stod(o.theta_cap);
    p.seed = o.seed;
    return p;
}

void print_tour(const qtsp::Tour& tour) {
    std::printf("tour:");
    for (int c : tour)
        std::printf(" %d", c + 1); // 1-based, as in the instance files
    std::printf("\n");
}

int cmd_solve(const CLI::App* cmd, CommonOpts& o) {
    apply_preset(cmd, o);
    const qtsp::TspInstance inst = qtsp::load_instance(o.instance_path);
    const auto metric = pick_metric(o, inst);

    qtsp::bench::ExperimentPlan plan;
    plan.instance_path = o.instance_path;
    plan.metric = metric;
    plan.algorithm =
        o.algorithm == "qga" ? qtsp::bench::Algorithm::QGA : qtsp::bench::Algorithm::GA;
    plan.ga_params = make_ga_params(o);
    plan.qga_params = make_qga_params(o);
    plan.repetitions = 1;
    plan.base_seed = o.seed;

    const auto result = qtsp::bench::run_experiment(plan);
    const auto& rec = result.runs.front();
    std::printf("%s on %s: best length %.6f (reached at generation %d, %.3f s)\n",
                o.algorithm.c_str(), result.instance.name.c_str(), rec.best_length,
                rec.iterations_to_best, rec.wall_time_seconds);
    print_tour(rec.best_tour);
    const auto dir = qtsp::bench::emit_artifacts(result, o.out_dir);
    std::printf("artifacts: %s\n", dir.c_str());
    return 0;
}

int cmd_bench(const CLI::App* cmd, CommonOpts& o) {
    apply_preset(cmd, o);
    const qtsp::TspInstance inst = qtsp::load_instance(o.instance_path);

    qtsp::bench::ExperimentPlan plan;
    plan.instance_path = o.instance_path;
    plan.metric = pick_metric(o, inst);
    plan.algorithm =
        o.algorithm == "qga" ? qtsp::bench::Algorithm::QGA : qtsp::bench::Algorithm::GA;
    plan.ga_params = make_ga_params(o);
    plan.qga_params = make_qga_params(o);
    plan.repetitions = o.runs;
    plan.base_seed = o.seed;

    const auto result = qtsp::bench::run_experiment(plan);
    const auto& s = result.stats;
    std::printf("%s on %s over %d runs\n", o.algorithm.c_str(), result.instance.name.c_str(),
                o.runs);
    std::printf("  optimal solution:          %.6f\n", s.optimal_solution);
    std::printf("  average optimal solution:  %.6f\n", s.average_optimal_solution);
    std::printf("  optimal iterations:        %d\n", s.optimal_iterations);
    std::printf("  average iterations:        %.2f\n", s.average_iterations);
    std::printf("  max execution time (s):    %.3f\n", s.max_execution_time_s);
    std::printf("  average execution time (s):%.3f\n", s.average_execution_time_s);
    const auto dir = qtsp::bench::emit_artifacts(result, o.out_dir);
    std::printf("artifacts: %s\n", dir.c_str());
    return 0;
}

int cmd_exact(CommonOpts& o) {
    const qtsp::TspInstance inst = qtsp::load_instance(o.instance_path);
    const auto metric = pick_metric(o, inst);
    const auto result = qtsp::held_karp(inst, metric);
    std::printf("%s: optimal length %.6f\n", inst.name.c_str(), result.optimal_length);
    print_tour(result.optimal_tour);
    return 0;
}

int cmd_info(CommonOpts& o) {
    const qtsp::TspInstance inst = qtsp::load_instance(o.instance_path);
    const char* ewt = "EUC_2D";
    switch (inst.declared_metric) {
    case qtsp::EdgeWeightType::Geo: ewt = "GEO"; break;
    case qtsp::EdgeWeightType::Att: ewt = "ATT"; break;
    case qtsp::EdgeWeightType::Explicit: ewt = "EXPLICIT"; break;
    case qtsp::EdgeWeightType::Euc2d: break;
    }
    std::printf("name:             %s\n", inst.name.c_str());
    std::printf("dimension:        %d\n", inst.dimension);
    std::printf("edge weight type: %s\n", ewt);
    std::printf("coordinates:      %s\n", inst.has_coords() ? "yes" : "no");
    std::printf("explicit weights: %s\n", inst.explicit_weights ? "yes" : "no");
    if (inst.has_coords()) {
        double min_x = inst.coords[0].x, max_x = min_x;
        double min_y = inst.coords[0].y, max_y = min_y;
        for (const auto& p : inst.coords) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        std::printf("bounding box:     [%g, %g] x [%g, %g]\n", min_x, max_x, min_y, max_y);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TSP solvers: classical and quantum-inspired genetic algorithms"};
    app.require_subcommand(1);

    CommonOpts opts;

    CLI::App* solve = app.add_subcommand("solve", "Run one solver once and report the best tour");
    add_instance_opt(solve, opts);
    add_metric_opt(solve, opts);
    add_solver_opts(solve, opts);

    CLI::App* bench = app.add_subcommand(
        "bench", "Run repeated seeded experiments and write CSV/JSON/SVG artifacts");
    add_instance_opt(bench, opts);
    add_metric_opt(bench, opts);
    add_solver_opts(bench, opts);
    bench->add_option("--runs", opts.runs, "Repetitions per experiment (default 10)");

    CLI::App* exact = app.add_subcommand("exact", "Provably optimal tour via Held-Karp");
    add_instance_opt(exact, opts);
    add_metric_opt(exact, opts);

    CLI::App* info = app.add_subcommand("info", "Print a parsed instance summary");
    add_instance_opt(info, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(solve, opts);
        if (bench->parsed())
            return cmd_bench(bench, opts);
        if (exact->parsed())
            return cmd_exact(opts);
        if (info->parsed())
            return cmd_info(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
