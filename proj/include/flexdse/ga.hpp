#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "flexdse/cost_model.hpp"
#include "flexdse/mapspace.hpp"

namespace flexdse {

/// No legal mapping exists (even the smallest tiles overflow the buffer).
class InfeasibleSpace : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GaConfig {
    std::int64_t population = 100;
    std::int64_t generations = 100;
    double mutation_rate = 0.5;
    double crossover_rate = 0.5;
    std::int64_t elite_count = 5;
    std::uint64_t seed = 0;
    Objective objective = Objective::Runtime;

    void validate() const;
    /// Evaluations a full run performs: population + (generations-1) * (population-elite).
    std::int64_t budget() const;
};

nlohmann::json to_json(const GaConfig& cfg);

/// Index-encoded mapping. The order gene indexes the admitted orders left after projection dedup.
struct Genome {
    DimArray<std::size_t> tile_idx{};
    std::size_t order_idx = 0;
    std::size_t pair_idx = 0;
    std::size_t shape_idx = 0;

    friend bool operator==(const Genome&, const Genome&) = default;
};

using Rng = std::mt19937_64;

/// What the genetic search explores: per-gene choice lists, a tile feasibility test used by
/// repair, and a fitness function (lower is better).
struct GaProblem {
    SearchSpace space;
    std::function<bool(const DimSizes&)> tiles_fit;
    std::function<double(const Mapping&)> fitness;
};

Mapping decode(const Genome& g, const SearchSpace& space);
Genome random_genome(const SearchSpace& space, Rng& rng);

/// Shrinks tiles until `fits` holds: dims are visited in a seeded random order and each is
/// reduced to its largest fitting choice. Returns false when even the smallest tiles fail.
bool repair(Genome& g, const GaProblem& problem, Rng& rng);

/// Each gene group (tiles, order, parallel, shape) is redrawn with probability `rate`;
/// for the tile group one uniformly chosen dim is redrawn. Followed by repair.
Genome mutate(const Genome& g, const GaProblem& problem, double rate, Rng& rng);

/// Uniform per-group choice between the parents, followed by repair.
Genome crossover(const Genome& a, const Genome& b, const GaProblem& problem, Rng& rng);

struct GaRun {
    Mapping best;
    double best_fitness = 0.0;
    std::vector<double> history;  // incumbent fitness after each generation
    std::int64_t evaluations = 0;
};

GaRun run_ga(const GaProblem& problem, const GaConfig& cfg);

struct GaResult {
    Mapping mapping;
    CostReport report;
    std::vector<double> history;
    std::int64_t evaluations = 0;
};

/// Map-space search for one layer over the accelerator's constrained space.
GaResult search(const Layer& layer, const AcceleratorSpec& accel, const GaConfig& cfg,
                const EnergyParams& ep);

GaProblem layer_problem(const Layer& layer, const AcceleratorSpec& accel, const GaConfig& cfg,
                        const EnergyParams& ep);

}  // namespace flexdse
