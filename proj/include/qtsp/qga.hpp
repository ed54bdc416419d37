#pragma once

/// @file qga.hpp
/// @brief Quantum-inspired genetic algorithm for the TSP.
///
/// Candidate tours live in qubit-amplitude chromosomes: each city slot is a
/// gene of b qubits, and each qubit is an (alpha, beta) pair with
/// alpha^2 + beta^2 = 1. A generation measures every chromosome into a bit
/// string, decodes and repairs it into a valid tour, evaluates fitness,
/// copies elites over the worst individuals, crosses tours in decimal
/// (permutation) space, mutates amplitudes by swapping pairs, and finally
/// steers every chromosome toward the best known tour with a rotation gate
/// whose angle shrinks over the generations.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <qtsp/ga.hpp>
#include <qtsp/tsplib.hpp>

namespace qtsp {

inline constexpr double kPi = 3.14159265358979323846;

/// (alpha, beta) with alpha^2 the probability of measuring 0 and beta^2 of
/// measuring 1; alpha^2 + beta^2 stays within 1e-9 of 1.
struct QubitAmplitude {
    double alpha = 1.0;
    double beta = 0.0;

    double norm_error() const { return std::abs(alpha * alpha + beta * beta - 1.0); }
};

/// In-place rotation by `theta` (counterclockwise in the (alpha, beta) plane).
inline void apply_rotation(QubitAmplitude& q, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = q.alpha, b = q.beta;
    q.alpha = a * c - b * s;
    q.beta = a * s + b * c;
}

/// Amplitude of U(theta) * H * |0>, i.e. (cos(theta + pi/4), sin(theta + pi/4)).
inline QubitAmplitude amplitude_from_theta(double theta) {
    return {std::cos(theta + kPi / 4.0), std::sin(theta + kPi / 4.0)};
}

/// How many bits encode one gene (city slot).
enum class BitsRule {
    CeilLog2,  ///< Smallest b with 2^b >= N; every city is addressable.
    FloorLog2, ///< b = max(1, floor(log2 N)); cities >= 2^b appear only via repair.
};

/// How a qubit collapses to a bit.
enum class MeasureRule {
    Stochastic,        ///< 1 with probability beta^2.
    CompareAmplitudes, ///< deterministic: 1 iff beta^2 > alpha^2.
};

/// Bit matrix of one chromosome: N genes times b bits, row-major.
using GeneBits = std::vector<std::uint8_t>;

struct QuantumChromosome {
    std::vector<QubitAmplitude> qubits; ///< N * b amplitude pairs.
    GeneBits last_bits;                 ///< outcome of the latest measurement.
    Tour tour;                          ///< decoded and repaired tour.
    double length = std::numeric_limits<double>::quiet_NaN(); ///< cached tour length.
};

struct QgaParams {
    int population_size = 80;
    double crossover_prob = 0.7;
    /// Probability that a chromosome is selected for mutation.
    double pm_chrom = 0.3;
    /// Per-qubit swap probability inside a selected chromosome; 0 means
    /// "derive as 2 / (N * b)" (about two flipped qubits per mutant).
    double pm_qubit = 0.0;
    int generation_max = 500;
    /// 0 means "derive as ceil(population_size / 5)".
    int elite_count = 0;
    /// Rotation schedule: delta = theta_scale * generation_max / (generation + 1).
    double theta_scale = 0.01;
    /// Clamp on the rotation step; the raw schedule starts at
    /// theta_scale * generation_max which is far beyond a sane angle. Set to
    /// +infinity to disable.
    double theta_cap = 0.05 * kPi;
    BitsRule bits_rule = BitsRule::CeilLog2;
    MeasureRule measure_rule = MeasureRule::Stochastic;
    std::uint64_t seed = 0;

    int resolved_elite_count() const {
        return elite_count > 0 ? elite_count : (population_size + 4) / 5;
    }
    double resolved_pm_qubit(int n, int b) const {
        return pm_qubit > 0.0 ? pm_qubit : 2.0 / (static_cast<double>(n) * b);
    }

    void validate() const {
        if (population_size < 2)
            throw std::invalid_argument("population_size must be at least 2");
        for (double p : {crossover_prob, pm_chrom})
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("probabilities must lie in [0,1]");
        if (pm_qubit < 0.0 || pm_qubit > 1.0)
            throw std::invalid_argument("pm_qubit must lie in [0,1]");
        if (generation_max < 1)
            throw std::invalid_argument("generation_max must be positive");
        if (theta_scale <= 0.0)
            throw std::invalid_argument("theta_scale must be positive");
        if (theta_cap <= 0.0)
            throw std::invalid_argument("theta_cap must be positive");
        if (resolved_elite_count() >= population_size)
            throw std::invalid_argument("elite_count must be smaller than population_size");
    }
};

/// Number of bits per gene for an N-city instance.
inline int bits_per_gene(int n, BitsRule rule) {
    if (n < 3)
        throw std::invalid_argument("instance must have at least 3 cities");
    int b = 0;
    while ((1 << b) < n)
        ++b; // now 2^b >= n
    if (rule == BitsRule::FloorLog2 && (1 << b) > n)
        b = std::max(1, b - 1);
    return std::max(1, b);
}

/// Measure every qubit into last_bits.
inline void measure(QuantumChromosome& chrom, MeasureRule rule, std::mt19937& rng) {
    chrom.last_bits.resize(chrom.qubits.size());
    if (rule == MeasureRule::CompareAmplitudes) {
        for (std::size_t i = 0; i < chrom.qubits.size(); ++i) {
            const auto& q = chrom.qubits[i];
            chrom.last_bits[i] = q.beta * q.beta > q.alpha * q.alpha ? 1 : 0;
        }
        return;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < chrom.qubits.size(); ++i) {
        const double beta2 = chrom.qubits[i].beta * chrom.qubits[i].beta;
        chrom.last_bits[i] = u(rng) < beta2 ? 1 : 0;
    }
}

/// Decode gene values (b-bit unsigned, MSB first, taken mod N) into a
/// provisional city sequence, then repair duplicates: the first occurrence of
/// each city is kept, every later duplicate is replaced -- left to right --
/// by the smallest city index that appears nowhere in the sequence.
inline Tour decode_and_repair(const GeneBits& bits, int n) {
    const int b = static_cast<int>(bits.size()) / n;
    Tour tour(n);
    std::vector<bool> used(n, false);
    for (int g = 0; g < n; ++g) {
        unsigned v = 0;
        for (int k = 0; k < b; ++k)
            v = (v << 1) | bits[g * b + k];
        tour[g] = static_cast<int>(v % static_cast<unsigned>(n));
    }
    std::vector<bool> keep(n, false);
    for (int g = 0; g < n; ++g) {
        if (!used[tour[g]]) {
            used[tour[g]] = true;
            keep[g] = true;
        }
    }
    std::vector<int> missing;
    for (int c = 0; c < n; ++c)
        if (!used[c])
            missing.push_back(c);
    std::size_t next_missing = 0;
    for (int g = 0; g < n; ++g)
        if (!keep[g])
            tour[g] = missing[next_missing++];
    return tour;
}

/// Inverse of decoding for in-range tours: each city index as b bits, MSB
/// first. Throws when a city does not fit in b bits (possible only under
/// BitsRule::FloorLog2).
inline GeneBits encode_tour(const Tour& tour, int b) {
    GeneBits bits(tour.size() * b);
    for (std::size_t g = 0; g < tour.size(); ++g) {
        const int city = tour[g];
        if (city >= (1 << b))
            throw std::invalid_argument("encode_tour: city " + std::to_string(city) +
                                        " does not fit in " + std::to_string(b) + " bits");
        for (int k = 0; k < b; ++k)
            bits[g * b + k] = static_cast<std::uint8_t>((city >> (b - 1 - k)) & 1);
    }
    return bits;
}

/// Each qubit independently set to U(theta) * H * |0> with theta uniform on
/// [0, pi/2], then measured, decoded and repaired so the chromosome invariants
/// hold from the start. Lengths remain unset until fitness evaluation.
inline std::vector<QuantumChromosome> init_quantum_population(int n, const QgaParams& params,
                                                              std::mt19937& rng) {
    const int b = bits_per_gene(n, params.bits_rule);
    std::uniform_real_distribution<double> theta(0.0, kPi / 2.0);
    std::vector<QuantumChromosome> population(params.population_size);
    for (auto& chrom : population) {
        chrom.qubits.resize(static_cast<std::size_t>(n) * b);
        for (auto& q : chrom.qubits)
            q = amplitude_from_theta(theta(rng));
        measure(chrom, params.measure_rule, rng);
        chrom.tour = decode_and_repair(chrom.last_bits, n);
    }
    return population;
}

/// Sort by tour length ascending and overwrite the worst `elite_count`
/// individuals with copies of the best `elite_count`.
inline void elite_replace(std::vector<QuantumChromosome>& population, const SquareMatrix& dmat,
                          int elite_count) {
    if (elite_count >= static_cast<int>(population.size()))
        throw std::invalid_argument("elite_count must be smaller than the population");
    for (auto& chrom : population)
        if (std::isnan(chrom.length))
            chrom.length = tour_length(chrom.tour, dmat);
    std::stable_sort(population.begin(), population.end(),
                     [](const QuantumChromosome& x, const QuantumChromosome& y) {
                         return x.length < y.length;
                     });
    const std::size_t n_pop = population.size();
    for (int e = 0; e < elite_count; ++e)
        population[n_pop - 1 - e] = population[e];
}

/// Cross adjacent pairs with probability pc: order crossover on the decoded
/// tours, children replacing the parents' tours. Amplitudes are untouched;
/// the rotation update re-aligns them with the surviving tours. Returns the
/// number of pairs crossed; crossed chromosomes get their cached length
/// invalidated.
inline int quantum_crossover(std::vector<QuantumChromosome>& population, double pc,
                             std::mt19937& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int crossed = 0;
    for (std::size_t p = 0; p + 1 < population.size(); p += 2) {
        if (coin(rng) >= pc)
            continue;
        QuantumChromosome& x = population[p];
        QuantumChromosome& y = population[p + 1];
        const std::size_t n = x.tour.size();
        std::uniform_int_distribution<std::size_t> cut_a(0, n - 1);
        const std::size_t a = cut_a(rng);
        std::uniform_int_distribution<std::size_t> cut_b(a + 1, n);
        auto [c1, c2] = order_crossover(x.tour, y.tour, a, cut_b(rng));
        x.tour = std::move(c1);
        y.tour = std::move(c2);
        x.length = y.length = std::numeric_limits<double>::quiet_NaN();
        ++crossed;
    }
    return crossed;
}

/// Select each chromosome with probability pm_chrom; inside a selected one,
/// swap (alpha, beta) of each qubit with probability pm_qubit. Swapping
/// exchanges the roles of |0> and |1>, preserving the norm exactly.
inline void quantum_mutation(std::vector<QuantumChromosome>& population, double pm_chrom,
                             double pm_qubit, std::mt19937& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto& chrom : population) {
        if (coin(rng) >= pm_chrom)
            continue;
        for (auto& q : chrom.qubits)
            if (coin(rng) < pm_qubit)
                std::swap(q.alpha, q.beta);
    }
}

/// Rotation step for the given generation:
/// min(theta_cap, theta_scale * generation_max / (generation + 1)).
inline double delta_theta(int generation, int generation_max, double theta_scale,
                          double theta_cap) {
    if (generation < 0 || generation >= generation_max)
        throw std::invalid_argument("generation out of range");
    return std::min(theta_cap, theta_scale * generation_max / (generation + 1));
}

namespace detail {

// Re-encoded bits of a chromosome's current tour, for comparison against the
// best individual's encoding. Under FloorLog2 some cities exceed b bits; those
// genes are marked unencodable and skipped by the rotation.
inline void encode_for_rotation(const Tour& tour, int b, GeneBits& bits,
                                std::vector<std::uint8_t>& gene_ok) {
    const std::size_t n = tour.size();
    bits.assign(n * b, 0);
    gene_ok.assign(n, 1);
    for (std::size_t g = 0; g < n; ++g) {
        const int city = tour[g];
        if (city >= (1 << b)) {
            gene_ok[g] = 0;
            continue;
        }
        for (int k = 0; k < b; ++k)
            bits[g * b + k] = static_cast<std::uint8_t>((city >> (b - 1 - k)) & 1);
    }
}

} // namespace detail

/// Rotate every chromosome's amplitudes toward the best tour's encoding.
/// Compared bit by bit against the chromosome's own re-encoded tour: where
/// the best bit is 1 and the chromosome's is 0 the qubit rotates by +delta,
/// in the opposite case by -delta, and matching bits are left alone. A
/// chromosome whose tour equals the best tour is therefore untouched.
///
/// `best_gene_ok`, when nonempty, marks genes of the best tour that are
/// encodable in b bits; the rest are skipped (FloorLog2 only).
inline void rotation_update(std::vector<QuantumChromosome>& population, const GeneBits& best_bits,
                            int generation, const QgaParams& params,
                            const std::vector<std::uint8_t>& best_gene_ok = {}) {
    if (population.empty())
        return;
    const int n = static_cast<int>(population.front().tour.size());
    const int b = static_cast<int>(best_bits.size()) / n;
    const double delta =
        delta_theta(generation, params.generation_max, params.theta_scale, params.theta_cap);

    GeneBits own;
    std::vector<std::uint8_t> gene_ok;
    for (auto& chrom : population) {
        detail::encode_for_rotation(chrom.tour, b, own, gene_ok);
        for (int g = 0; g < n; ++g) {
            if (!gene_ok[g] || (!best_gene_ok.empty() && !best_gene_ok[g]))
                continue;
            for (int k = 0; k < b; ++k) {
                const std::size_t i = static_cast<std::size_t>(g) * b + k;
                if (best_bits[i] == own[i])
                    continue;
                apply_rotation(chrom.qubits[i], best_bits[i] ? delta : -delta);
            }
        }
    }
}

/// Full QGA run on a prebuilt distance matrix.
inline RunRecord run_qga(const SquareMatrix& dmat, const QgaParams& params) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int n = static_cast<int>(dmat.size());
    const int b = bits_per_gene(n, params.bits_rule);
    const int elites = params.resolved_elite_count();
    const double pm_qubit = params.resolved_pm_qubit(n, b);

    std::mt19937 rng(static_cast<std::uint32_t>(params.seed));
    std::vector<QuantumChromosome> population = init_quantum_population(n, params, rng);

    RunRecord rec;
    rec.seed = params.seed;
    rec.best_length = std::numeric_limits<double>::infinity();
    auto note_best = [&](const QuantumChromosome& chrom) {
        if (chrom.length < rec.best_length) {
            rec.best_length = chrom.length;
            rec.best_tour = chrom.tour;
        }
    };

    GeneBits best_bits;
    std::vector<std::uint8_t> best_gene_ok;
    rec.fitness_curve.reserve(params.generation_max);
    for (int g = 0; g < params.generation_max; ++g) {
        for (auto& chrom : population) {
            measure(chrom, params.measure_rule, rng);
            chrom.tour = decode_and_repair(chrom.last_bits, n);
            chrom.length = tour_length(chrom.tour, dmat);
            note_best(chrom);
        }

        elite_replace(population, dmat, elites);
        const int crossed = quantum_crossover(population, params.crossover_prob, rng);
        quantum_mutation(population, params.pm_chrom, pm_qubit, rng);
        if (crossed > 0) {
            for (auto& chrom : population) {
                if (std::isnan(chrom.length)) {
                    chrom.length = tour_length(chrom.tour, dmat);
                    note_best(chrom);
                }
            }
        }

        detail::encode_for_rotation(rec.best_tour, b, best_bits, best_gene_ok);
        rotation_update(population, best_bits, g, params, best_gene_ok);
        rec.fitness_curve.push_back(rec.best_length);
    }

    rec.iterations_to_best = 0;
    while (rec.fitness_curve[rec.iterations_to_best] != rec.best_length)
        ++rec.iterations_to_best;
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

/// Full QGA run on a parsed instance.
inline RunRecord run_qga(const TspInstance& inst, DistanceMetric metric, const QgaParams& params) {
    return run_qga(distance_matrix(inst, metric), params);
}

} // namespace qtsp
