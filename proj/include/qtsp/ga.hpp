#pragma once

/// @file ga.hpp
/// @brief Classical genetic algorithm on permutation-encoded tours.
///
/// Selection follows the rank-based scheme: the better half of the population
/// mates, offspring produced by order crossover and swap mutation are merged
/// with the old population, and the best individuals survive by truncation.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <qtsp/tsplib.hpp>

namespace qtsp {

struct GaParams {
    int population_size = 80;
    double crossover_prob = 0.7;
    double mutation_prob = 0.3;
    int generation_max = 500;
    /// 0 means "derive as ceil(population_size / 5)".
    int elite_count = 0;
    std::uint64_t seed = 0;

    int resolved_elite_count() const {
        return elite_count > 0 ? elite_count : (population_size + 4) / 5;
    }

    void validate() const {
        if (population_size < 2)
            throw std::invalid_argument("population_size must be at least 2");
        if (crossover_prob < 0.0 || crossover_prob > 1.0)
            throw std::invalid_argument("crossover_prob must lie in [0,1]");
        if (mutation_prob < 0.0 || mutation_prob > 1.0)
            throw std::invalid_argument("mutation_prob must lie in [0,1]");
        if (generation_max < 1)
            throw std::invalid_argument("generation_max must be positive");
        if (resolved_elite_count() >= population_size)
            throw std::invalid_argument("elite_count must be smaller than population_size");
    }
};

/// Result of one solver run. `fitness_curve[g]` is the best-so-far tour
/// length after generation g; it is nonincreasing and has generation_max
/// entries. `iterations_to_best` is the first generation at which the final
/// best length was reached.
struct RunRecord {
    double best_length = 0.0;
    Tour best_tour;
    int iterations_to_best = 0;
    std::vector<double> fitness_curve;
    double wall_time_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// population_size independent uniform-random permutations of 0..N-1.
inline std::vector<Tour> init_random_population(int n, const GaParams& params,
                                                std::mt19937& rng) {
    if (n < 3)
        throw std::invalid_argument("instance must have at least 3 cities");
    std::vector<Tour> population(params.population_size);
    for (auto& tour : population) {
        tour.resize(n);
        std::iota(tour.begin(), tour.end(), 0);
        std::shuffle(tour.begin(), tour.end(), rng);
    }
    return population;
}

/// Order crossover (OX). child1 keeps p1[a..b) in place; the remaining
/// positions are filled cyclically starting at b with the cities of p2 in
/// circular order from index b, skipping cities already present. child2 is
/// produced symmetrically.
inline std::pair<Tour, Tour> order_crossover(const Tour& p1, const Tour& p2, std::size_t a,
                                             std::size_t b) {
    const std::size_t n = p1.size();
    if (p2.size() != n)
        throw std::invalid_argument("order_crossover: parents differ in length");
    if (a >= b || b > n)
        throw std::invalid_argument("order_crossover: invalid cut indices");

    auto make_child = [&](const Tour& keep, const Tour& fill) {
        Tour child(n, -1);
        std::vector<bool> used(n, false);
        for (std::size_t i = a; i < b; ++i) {
            child[i] = keep[i];
            used[keep[i]] = true;
        }
        std::size_t pos = b % n;
        for (std::size_t k = 0; k < n; ++k) {
            const int city = fill[(b + k) % n];
            if (used[city])
                continue;
            child[pos] = city;
            used[city] = true;
            pos = (pos + 1) % n;
        }
        return child;
    };
    return {make_child(p1, p2), make_child(p2, p1)};
}

/// Exchange two distinct random positions.
inline void swap_mutation(Tour& tour, std::mt19937& rng) {
    const std::size_t n = tour.size();
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    const std::size_t i = dist(rng);
    std::size_t j = dist(rng);
    while (j == i)
        j = dist(rng);
    std::swap(tour[i], tour[j]);
}

struct GenerationBest {
    double length = 0.0;
    Tour tour;
};

/// One generation: rank the population, mate the best half pairwise (crossover
/// with probability pc, one swap mutation per offspring with probability pm),
/// then keep the best population_size individuals of old + offspring. The
/// incumbent best always survives.
inline GenerationBest ga_step(std::vector<Tour>& population, const SquareMatrix& dmat,
                              const GaParams& params, std::mt19937& rng) {
    const std::size_t n_pop = population.size();
    std::vector<double> lengths(n_pop);
    for (std::size_t i = 0; i < n_pop; ++i)
        lengths[i] = tour_length(population[i], dmat);

    std::vector<std::size_t> rank(n_pop);
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](std::size_t x, std::size_t y) {
        return lengths[x] != lengths[y] ? lengths[x] < lengths[y] : x < y;
    });

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> cut_a(0, dmat.size() - 1);

    // Offspring are the individuals actually changed by crossover or
    // mutation; untouched copies would only duplicate their parents in the
    // merge below.
    std::vector<Tour> offspring;
    std::vector<double> offspring_len;
    const std::size_t pool = std::max<std::size_t>(2, n_pop / 2);
    for (std::size_t p = 0; p + 1 < pool; p += 2) {
        const Tour& p1 = population[rank[p]];
        const Tour& p2 = population[rank[p + 1]];
        const bool crossed = coin(rng) < params.crossover_prob;
        Tour c1, c2;
        if (crossed) {
            const std::size_t a = cut_a(rng);
            std::uniform_int_distribution<std::size_t> cut_b(a + 1, dmat.size());
            std::tie(c1, c2) = order_crossover(p1, p2, a, cut_b(rng));
        } else {
            c1 = p1;
            c2 = p2;
        }
        for (Tour* child : {&c1, &c2}) {
            const bool mutated = coin(rng) < params.mutation_prob;
            if (mutated)
                swap_mutation(*child, rng);
            if (crossed || mutated) {
                offspring_len.push_back(tour_length(*child, dmat));
                offspring.push_back(std::move(*child));
            }
        }
    }
    if (pool % 2 == 1) { // unpaired last pool member can still mutate
        Tour c = population[rank[pool - 1]];
        if (coin(rng) < params.mutation_prob) {
            swap_mutation(c, rng);
            offspring_len.push_back(tour_length(c, dmat));
            offspring.push_back(std::move(c));
        }
    }

    // Merged truncation: best n_pop of old + offspring, old first on ties.
    const std::size_t total = n_pop + offspring.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    auto len_of = [&](std::size_t i) { return i < n_pop ? lengths[i] : offspring_len[i - n_pop]; };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return len_of(x) != len_of(y) ? len_of(x) < len_of(y) : x < y;
    });

    std::vector<Tour> next;
    next.reserve(n_pop);
    for (std::size_t i = 0; i < n_pop; ++i) {
        const std::size_t idx = order[i];
        next.push_back(idx < n_pop ? std::move(population[idx])
                                   : std::move(offspring[idx - n_pop]));
    }
    GenerationBest best{len_of(order[0]), next.front()};
    population = std::move(next);
    return best;
}

/// Full GA run on a prebuilt distance matrix.
inline RunRecord run_ga(const SquareMatrix& dmat, const GaParams& params) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(static_cast<std::uint32_t>(params.seed));

    std::vector<Tour> population =
        init_random_population(static_cast<int>(dmat.size()), params, rng);

    RunRecord rec;
    rec.seed = params.seed;
    rec.best_length = std::numeric_limits<double>::infinity();
    for (const Tour& t : population) {
        const double len = tour_length(t, dmat);
        if (len < rec.best_length) {
            rec.best_length = len;
            rec.best_tour = t;
        }
    }

    rec.fitness_curve.reserve(params.generation_max);
    for (int g = 0; g < params.generation_max; ++g) {
        const GenerationBest gen_best = ga_step(population, dmat, params, rng);
        if (gen_best.length < rec.best_length) {
            rec.best_length = gen_best.length;
            rec.best_tour = gen_best.tour;
        }
        rec.fitness_curve.push_back(rec.best_length);
    }

    rec.iterations_to_best = 0;
    while (rec.fitness_curve[rec.iterations_to_best] != rec.best_length)
        ++rec.iterations_to_best;
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

/// Full GA run on a parsed instance.
inline RunRecord run_ga(const TspInstance& inst, DistanceMetric metric, const GaParams& params) {
    return run_ga(distance_matrix(inst, metric), params);
}

} // namespace qtsp
