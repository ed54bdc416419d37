#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <qtsp/exact.hpp>
#include <qtsp/tsplib.hpp>

using namespace qtsp;

namespace {

const std::string kDataDir = QTSP_DATA_DIR;

SquareMatrix matrix_from_points(const std::vector<Point>& pts) {
    TspInstance inst;
    inst.dimension = static_cast<int>(pts.size());
    inst.coords = pts;
    return distance_matrix(inst, DistanceMetric::EuclidRaw);
}

// Independent oracle: enumerate every tour with city 0 fixed.
double brute_force_optimum(const SquareMatrix& dmat) {
    const int n = static_cast<int>(dmat.size());
    Tour perm(n - 1);
    std::iota(perm.begin(), perm.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = dmat(0, perm.front());
        for (int i = 0; i + 1 < n - 1; ++i)
            len += dmat(perm[i], perm[i + 1]);
        len += dmat(perm.back(), 0);
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<Point> random_points(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<Point> pts(n);
    for (auto& p : pts)
        p = {u(rng), u(rng)};
    return pts;
}

} // namespace

TEST_CASE("held_karp on toy instances") {
    const auto square = held_karp(matrix_from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK(square.optimal_length == Catch::Approx(4.0));
    CHECK(square.optimal_tour[0] == 0);
    // both 4-length completions exist; the one ending at the lower city wins
    CHECK(square.optimal_tour.back() == 1);

    const auto triangle = held_karp(matrix_from_points({{0, 0}, {3, 0}, {0, 4}}));
    CHECK(triangle.optimal_length == Catch::Approx(12.0));
}

TEST_CASE("held_karp reproduces the reference optima") {
    const auto burma = held_karp(load_instance(kDataDir + "/burma14.tsp"));
    CHECK(burma.optimal_length == Catch::Approx(30.879).margin(0.01));

    const auto ulysses = held_karp(load_instance(kDataDir + "/ulysses16.tsp"));
    CHECK(ulysses.optimal_length == Catch::Approx(73.987).margin(0.02));
}

TEST_CASE("held_karp matches the published GEO optima") {
    // Authenticity check on the shipped coordinate data: the canonical GEO
    // metric yields the well-known optimal lengths.
    const auto burma = held_karp(load_instance(kDataDir + "/burma14.tsp"), DistanceMetric::Geo);
    CHECK(burma.optimal_length == 3323.0);
    const auto ulysses =
        held_karp(load_instance(kDataDir + "/ulysses16.tsp"), DistanceMetric::Geo);
    CHECK(ulysses.optimal_length == 6859.0);
}

TEST_CASE("held_karp equals exhaustive enumeration for small N") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 3 + trial % 7; // 3..9
        const SquareMatrix dmat = matrix_from_points(random_points(n, rng));
        const ExactResult hk = held_karp(dmat);
        CHECK(hk.optimal_length == Catch::Approx(brute_force_optimum(dmat)));
        CHECK(tour_length(hk.optimal_tour, dmat) == Catch::Approx(hk.optimal_length));
    }
}

TEST_CASE("held_karp is invariant under city relabeling") {
    std::mt19937 rng(5);
    const SquareMatrix dmat = matrix_from_points(random_points(8, rng));

    std::vector<int> relabel(8);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    SquareMatrix permuted(8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            permuted(relabel[i], relabel[j]) = dmat(i, j);

    CHECK(held_karp(permuted).optimal_length == Catch::Approx(held_karp(dmat).optimal_length));
}

TEST_CASE("held_karp is deterministic") {
    std::mt19937 rng(11);
    const SquareMatrix dmat = matrix_from_points(random_points(9, rng));
    const ExactResult a = held_karp(dmat);
    const ExactResult b = held_karp(dmat);
    CHECK(a.optimal_tour == b.optimal_tour);
    CHECK(a.optimal_length == b.optimal_length);
}

TEST_CASE("held_karp respects the size limit") {
    SquareMatrix big(20);
    CHECK_THROWS_AS(held_karp(big), std::invalid_argument);
    SquareMatrix tiny(2);
    CHECK_THROWS_AS(held_karp(tiny), std::invalid_argument);
}

TEST_CASE("held_karp never beats nor loses to sampled permutations") {
    std::mt19937 rng(99);
    const SquareMatrix dmat = matrix_from_points(random_points(10, rng));
    const ExactResult hk = held_karp(dmat);
    Tour t(10);
    std::iota(t.begin(), t.end(), 0);
    for (int s = 0; s < 200; ++s) {
        std::shuffle(t.begin(), t.end(), rng);
        CHECK(hk.optimal_length <= tour_length(t, dmat) + 1e-9);
    }
}
