#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <qtsp/exact.hpp>
#include <qtsp/ga.hpp>

using namespace qtsp;

namespace {

const std::string kDataDir = QTSP_DATA_DIR;

TspInstance points_instance(std::vector<Point> pts) {
    TspInstance inst;
    inst.name = "points";
    inst.dimension = static_cast<int>(pts.size());
    inst.coords = std::move(pts);
    return inst;
}

TspInstance random_instance(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<Point> pts(n);
    for (auto& p : pts)
        p = {u(rng), u(rng)};
    return points_instance(std::move(pts));
}

} // namespace

TEST_CASE("init_random_population produces valid, seed-deterministic tours") {
    GaParams params;
    params.population_size = 4;

    std::mt19937 rng_a(123), rng_b(123);
    const auto pop_a = init_random_population(3, params, rng_a);
    const auto pop_b = init_random_population(3, params, rng_b);
    REQUIRE(pop_a.size() == 4);
    for (const Tour& t : pop_a)
        CHECK(is_valid_tour(t, 3));
    CHECK(pop_a == pop_b);

    CHECK_THROWS_AS(init_random_population(2, params, rng_a), std::invalid_argument);
}

TEST_CASE("init_random_population first cities are uniform") {
    GaParams params;
    params.population_size = 10000;
    std::mt19937 rng(77);
    const auto pop = init_random_population(10, params, rng);

    std::vector<int> first_count(10, 0);
    for (const Tour& t : pop) {
        REQUIRE(is_valid_tour(t, 10));
        ++first_count[t[0]];
    }
    // per-city count is Binomial(10000, 1/10): mean 1000, sigma 30
    for (int c = 0; c < 10; ++c)
        CHECK(std::abs(first_count[c] - 1000) < 150);
}

TEST_CASE("order_crossover reference cases") {
    SECTION("identical parents reproduce themselves") {
        const Tour p{3, 1, 4, 0, 2};
        const auto [c1, c2] = order_crossover(p, p, 1, 3);
        CHECK(c1 == p);
        CHECK(c2 == p);
    }
    SECTION("full-width cut copies parent 1") {
        const Tour p1{3, 1, 4, 0, 2}, p2{2, 0, 4, 1, 3};
        const auto [c1, c2] = order_crossover(p1, p2, 0, 5);
        CHECK(c1 == p1);
        CHECK(c2 == p2);
    }
    SECTION("frozen reference result") {
        const Tour p1{0, 1, 2, 3, 4}, p2{4, 3, 2, 1, 0};
        const auto [c1, c2] = order_crossover(p1, p2, 1, 3);
        CHECK(c1 == Tour{3, 1, 2, 0, 4});
        CHECK(c2 == Tour{1, 3, 2, 4, 0});
    }
    SECTION("invalid cuts are rejected") {
        const Tour p{0, 1, 2};
        CHECK_THROWS_AS(order_crossover(p, p, 2, 2), std::invalid_argument);
        CHECK_THROWS_AS(order_crossover(p, p, 1, 4), std::invalid_argument);
    }
}

TEST_CASE("order_crossover yields permutations for random parents") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 4 + rng() % 61; // 4..64
        Tour p1(n), p2(n);
        std::iota(p1.begin(), p1.end(), 0);
        p2 = p1;
        std::shuffle(p1.begin(), p1.end(), rng);
        std::shuffle(p2.begin(), p2.end(), rng);
        const std::size_t a = rng() % n;
        const std::size_t b = a + 1 + rng() % (n - a);
        const auto [c1, c2] = order_crossover(p1, p2, a, b);
        REQUIRE(is_valid_tour(c1, n));
        REQUIRE(is_valid_tour(c2, n));
        for (std::size_t i = a; i < b; ++i) {
            REQUIRE(c1[i] == p1[i]);
            REQUIRE(c2[i] == p2[i]);
        }
    }
}

TEST_CASE("swap_mutation swaps exactly one pair") {
    std::mt19937 rng(9);
    Tour t{0, 1, 2, 3, 4, 5};
    const Tour before = t;
    swap_mutation(t, rng);
    CHECK(is_valid_tour(t, 6));
    int diffs = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        diffs += t[i] != before[i];
    CHECK(diffs == 2);

    // same seed, same pair: applying it again undoes the swap
    std::mt19937 rng_replay(9);
    swap_mutation(t, rng_replay);
    CHECK(t == before);

    std::multiset<int> cities(t.begin(), t.end());
    swap_mutation(t, rng);
    CHECK(std::multiset<int>(t.begin(), t.end()) == cities);
}

TEST_CASE("ga_step with pc=0 pm=0 is the identity") {
    std::mt19937 rng(17);
    const TspInstance inst = random_instance(8, rng);
    const SquareMatrix dmat = distance_matrix(inst);

    GaParams params;
    params.population_size = 10;
    params.crossover_prob = 0.0;
    params.mutation_prob = 0.0;
    auto population = init_random_population(8, params, rng);
    auto before = population;

    ga_step(population, dmat, params, rng);

    auto key = [](std::vector<Tour> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(key(population) == key(before));
}

TEST_CASE("ga_step generation best is nonincreasing") {
    std::mt19937 rng(23);
    const TspInstance inst = random_instance(12, rng);
    const SquareMatrix dmat = distance_matrix(inst);

    GaParams params;
    params.population_size = 20;
    auto population = init_random_population(12, params, rng);

    double prev = std::numeric_limits<double>::infinity();
    for (int g = 0; g < 60; ++g) {
        const auto best = ga_step(population, dmat, params, rng);
        CHECK(best.length <= prev + 1e-12);
        prev = best.length;
        for (const Tour& t : population)
            REQUIRE(is_valid_tour(t, 12));
    }
}

TEST_CASE("ga finds the exact optimum on 9-city instances") {
    std::mt19937 instance_rng(404);
    const TspInstance inst = random_instance(9, instance_rng);
    const double optimum = held_karp(distance_matrix(inst)).optimal_length;

    GaParams params;
    params.generation_max = 200;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        params.seed = seed;
        const RunRecord rec = run_ga(inst, DistanceMetric::EuclidRaw, params);
        if (rec.best_length <= optimum + 1e-9)
            ++hits;
    }
    CHECK(hits >= 8);
}

TEST_CASE("run_ga on a triangle is optimal at generation 0") {
    const TspInstance tri = points_instance({{0, 0}, {3, 0}, {0, 4}});
    GaParams params;
    params.population_size = 8;
    params.generation_max = 5;
    const RunRecord rec = run_ga(tri, DistanceMetric::EuclidRaw, params);
    CHECK(rec.best_length == Catch::Approx(12.0));
    CHECK(rec.iterations_to_best == 0);
    CHECK(rec.fitness_curve.size() == 5);
}

TEST_CASE("run_ga is reproducible for a fixed seed") {
    std::mt19937 rng(55);
    const TspInstance inst = random_instance(15, rng);
    GaParams params;
    params.generation_max = 80;
    params.seed = 99;
    const RunRecord a = run_ga(inst, DistanceMetric::EuclidRaw, params);
    const RunRecord b = run_ga(inst, DistanceMetric::EuclidRaw, params);
    CHECK(a.fitness_curve == b.fitness_curve);
    CHECK(a.best_tour == b.best_tour);
    CHECK(a.iterations_to_best == b.iterations_to_best);

    // curve is nonincreasing and ends at the best
    for (std::size_t g = 1; g < a.fitness_curve.size(); ++g)
        REQUIRE(a.fitness_curve[g] <= a.fitness_curve[g - 1]);
    CHECK(a.fitness_curve[a.iterations_to_best] == a.best_length);
    CHECK(tour_length(a.best_tour, distance_matrix(inst)) == Catch::Approx(a.best_length));
}

TEST_CASE("run_ga reaches the burma14 optimum region") {
    const TspInstance burma = load_instance(kDataDir + "/burma14.tsp");
    GaParams params; // defaults: pop 80, pc 0.7, pm 0.3, 500 generations
    params.seed = 1;
    const RunRecord rec = run_ga(burma, DistanceMetric::EuclidRaw, params);
    CHECK(rec.best_length <= 30.879 * 1.02);
}

TEST_CASE("run_ga att48 stays within 6% of the reported best", "[slow]") {
    const TspInstance att = load_instance(kDataDir + "/att48.tsp");
    GaParams params;
    params.population_size = 120;
    params.crossover_prob = 0.9;
    params.generation_max = 600;

    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        params.seed = seed;
        best = std::min(best, run_ga(att, DistanceMetric::EuclidRaw, params).best_length);
    }
    CHECK(best <= 33915.24 * 1.06);
}

TEST_CASE("invalid parameters are rejected") {
    GaParams params;
    params.crossover_prob = 1.5;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = GaParams{};
    params.population_size = 1;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = GaParams{};
    params.elite_count = 80;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
