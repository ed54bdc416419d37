#pragma once

/// @file bench.hpp
/// @brief Experiment harness: repeated seeded runs, aggregate statistics in
/// the report column order, and CSV/JSON/SVG artifacts.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include <qtsp/ga.hpp>
#include <qtsp/qga.hpp>
#include <qtsp/tsplib.hpp>

namespace qtsp::bench {

enum class Algorithm { GA, QGA };

inline const char* algorithm_name(Algorithm a) { return a == Algorithm::GA ? "ga" : "qga"; }

struct ExperimentPlan {
    std::string instance_path;
    DistanceMetric metric = DistanceMetric::EuclidRaw;
    Algorithm algorithm = Algorithm::GA;
    GaParams ga_params;
    QgaParams qga_params;
    int repetitions = 10;
    std::uint64_t base_seed = 0;

    void validate() const {
        if (repetitions < 1)
            throw std::invalid_argument("repetitions must be at least 1");
    }
};

/// Six summary columns, in the order they are reported: best and mean of the
/// run bests, min and mean of iterations-to-best, max and mean wall time.
struct AggregateStats {
    double optimal_solution = 0.0;
    double average_optimal_solution = 0.0;
    int optimal_iterations = 0;
    double average_iterations = 0.0;
    double max_execution_time_s = 0.0;
    double average_execution_time_s = 0.0;
};

inline AggregateStats aggregate(const std::vector<RunRecord>& runs) {
    if (runs.empty())
        throw std::invalid_argument("cannot aggregate zero runs");
    AggregateStats s;
    s.optimal_solution = runs.front().best_length;
    s.optimal_iterations = runs.front().iterations_to_best;
    for (const auto& r : runs) {
        s.optimal_solution = std::min(s.optimal_solution, r.best_length);
        s.average_optimal_solution += r.best_length;
        s.optimal_iterations = std::min(s.optimal_iterations, r.iterations_to_best);
        s.average_iterations += r.iterations_to_best;
        s.max_execution_time_s = std::max(s.max_execution_time_s, r.wall_time_seconds);
        s.average_execution_time_s += r.wall_time_seconds;
    }
    s.average_optimal_solution /= runs.size();
    s.average_iterations /= runs.size();
    s.average_execution_time_s /= runs.size();
    return s;
}

struct ExperimentResult {
    ExperimentPlan plan;
    TspInstance instance;
    std::vector<RunRecord> runs;
    AggregateStats stats;
};

/// Execute `repetitions` runs with seeds base_seed + run_index. Runs fan out
/// over worker threads; each one is independent and deterministic, so the
/// results do not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    ExperimentResult result;
    result.plan = plan;
    result.instance = load_instance(plan.instance_path);
    const SquareMatrix dmat = distance_matrix(result.instance, plan.metric);

    auto one_run = [&](int i) -> RunRecord {
        if (plan.algorithm == Algorithm::GA) {
            GaParams p = plan.ga_params;
            p.seed = plan.base_seed + static_cast<std::uint64_t>(i);
            return run_ga(dmat, p);
        }
        QgaParams p = plan.qga_params;
        p.seed = plan.base_seed + static_cast<std::uint64_t>(i);
        return run_qga(dmat, p);
    };

    result.runs.resize(plan.repetitions);
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(plan.repetitions));
    if (workers <= 1) {
        for (int i = 0; i < plan.repetitions; ++i)
            result.runs[i] = one_run(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(plan.repetitions);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i; (i = next.fetch_add(1)) < plan.repetitions;) {
                    try {
                        result.runs[i] = one_run(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool)
            t.join();
        for (int i = 0; i < plan.repetitions; ++i) {
            if (errors[i]) {
                try {
                    std::rethrow_exception(errors[i]);
                } catch (const std::exception& e) {
                    throw std::runtime_error("run " + std::to_string(i) + " failed: " + e.what());
                }
            }
        }
    }

    result.stats = aggregate(result.runs);
    return result;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

/// Minimal SVG: one circle per city on the raw coordinates (y axis flipped so
/// north stays up) and the closed tour as a polyline of N+1 points.
inline std::string tour_svg(const std::vector<Point>& coords, const Tour& tour) {
    double min_x = coords[0].x, max_x = coords[0].x;
    double min_y = coords[0].y, max_y = coords[0].y;
    for (const auto& p : coords) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double margin = extent > 0 ? extent * 0.05 : 1.0;
    const double w = (max_x - min_x) + 2 * margin;
    const double h = (max_y - min_y) + 2 * margin;
    const double r = extent > 0 ? extent * 0.008 : 0.1;

    auto sx = [&](double x) { return x - min_x + margin; };
    auto sy = [&](double y) { return (max_y - y) + margin; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) +
           "\">\n";
    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"" + fmt(r * 0.5) +
           "\" points=\"";
    for (std::size_t i = 0; i <= tour.size(); ++i) {
        const Point& p = coords[tour[i % tour.size()]];
        svg += (i ? " " : "") + fmt(sx(p.x)) + "," + fmt(sy(p.y));
    }
    svg += "\"/>\n";
    for (const auto& p : coords)
        svg += "<circle cx=\"" + fmt(sx(p.x)) + "\" cy=\"" + fmt(sy(p.y)) + "\" r=\"" + fmt(r) +
               "\" fill=\"#d62728\"/>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace detail

/// Write runs.csv, summary.csv, summary.json, per-run fitness curves and the
/// best tour as an SVG under <out_dir>/<instance>/<algorithm>/.
/// Returns the directory the files were written to.
inline std::filesystem::path emit_artifacts(const ExperimentResult& result,
                                            const std::filesystem::path& out_dir) {
    const std::string algo = algorithm_name(result.plan.algorithm);
    const std::string inst_name =
        result.instance.name.empty() ? "instance" : result.instance.name;
    const std::filesystem::path dir = out_dir / inst_name / algo;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    using detail::fmt;

    std::string runs_csv = "algorithm,instance,run_index,seed,best_length,iterations_to_best,"
                           "time_seconds\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const RunRecord& r = result.runs[i];
        runs_csv += algo + "," + inst_name + "," + std::to_string(i) + "," +
                    std::to_string(r.seed) + "," + fmt(r.best_length) + "," +
                    std::to_string(r.iterations_to_best) + "," + fmt(r.wall_time_seconds) + "\n";
    }
    detail::write_file(dir / "runs.csv", runs_csv);

    const AggregateStats& s = result.stats;
    std::string summary_csv =
        "algorithm,instance,optimal_solution,average_optimal_solution,optimal_iterations,"
        "average_iterations,max_execution_time_s,average_execution_time_s\n";
    summary_csv += algo + "," + inst_name + "," + fmt(s.optimal_solution) + "," +
                   fmt(s.average_optimal_solution) + "," + std::to_string(s.optimal_iterations) +
                   "," + fmt(s.average_iterations) + "," + fmt(s.max_execution_time_s) + "," +
                   fmt(s.average_execution_time_s) + "\n";
    detail::write_file(dir / "summary.csv", summary_csv);

    nlohmann::json j{{"algorithm", algo},
                     {"instance", inst_name},
                     {"optimal_solution", s.optimal_solution},
                     {"average_optimal_solution", s.average_optimal_solution},
                     {"optimal_iterations", s.optimal_iterations},
                     {"average_iterations", s.average_iterations},
                     {"max_execution_time_s", s.max_execution_time_s},
                     {"average_execution_time_s", s.average_execution_time_s}};
    detail::write_file(dir / "summary.json", j.dump(2) + "\n");

    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        std::string curve = "generation,best_so_far\n";
        const auto& fc = result.runs[i].fitness_curve;
        for (std::size_t g = 0; g < fc.size(); ++g)
            curve += std::to_string(g) + "," + fmt(fc[g]) + "\n";
        detail::write_file(dir / ("curve_" + algo + "_" + std::to_string(i) + ".csv"), curve);
    }

    if (result.instance.has_coords()) {
        const auto best = std::min_element(result.runs.begin(), result.runs.end(),
                                           [](const RunRecord& a, const RunRecord& b) {
                                               return a.best_length < b.best_length;
                                           });
        detail::write_file(dir / ("tour_" + algo + "_best.svg"),
                           detail::tour_svg(result.instance.coords, best->best_tour));
    }
    return dir;
}

} // namespace qtsp::bench
