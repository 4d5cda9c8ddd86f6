#include "flexdse/ga.hpp"

#include <algorithm>
#include <numeric>

#include "flexdse/legality.hpp"
#include "flexdse/oracle.hpp"

namespace flexdse {

void GaConfig::validate() const {
    if (population < 1) throw ValidationError("GA population must be >= 1");
    if (generations < 1) throw ValidationError("GA generations must be >= 1");
    if (elite_count < 0 || elite_count >= population)
        throw ValidationError("GA elite_count must be in [0, population)");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) throw ValidationError("mutation_rate must be in [0, 1]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0) throw ValidationError("crossover_rate must be in [0, 1]");
}

std::int64_t GaConfig::budget() const { return population + (generations - 1) * (population - elite_count); }

nlohmann::json to_json(const GaConfig& cfg) {
    return {{"population", cfg.population},         {"generations", cfg.generations},
            {"mutation_rate", cfg.mutation_rate},   {"crossover_rate", cfg.crossover_rate},
            {"elite_count", cfg.elite_count},       {"seed", cfg.seed},
            {"objective", std::string(to_string(cfg.objective))}};
}

namespace {

std::size_t pick(std::size_t n, Rng& rng) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(double p, Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

DimSizes decode_tiles(const DimArray<std::size_t>& idx, const SearchSpace& space) {
    DimSizes t;
    for (Dim d : kAllDims)
        t[d] = space.tile_choices[d][idx[d]];
    return t;
}

struct Individual {
    Genome genome;
    Mapping mapping;
    double fitness = 0.0;
    std::string key;
};

bool ranks_before(const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness)
        return a.fitness < b.fitness;
    return a.key < b.key;
}

}  // namespace

Mapping decode(const Genome& g, const SearchSpace& space) {
    Mapping m;
    m.tiles = decode_tiles(g.tile_idx, space);
    m.order = space.orders[g.order_idx];
    m.parallel = space.pairs[g.pair_idx];
    m.shape = space.shapes[g.shape_idx];
    return m;
}

Genome random_genome(const SearchSpace& space, Rng& rng) {
    Genome g;
    for (Dim d : kAllDims)
        g.tile_idx[d] = pick(space.tile_choices[d].size(), rng);
    g.order_idx = pick(space.orders.size(), rng);
    g.pair_idx = pick(space.pairs.size(), rng);
    g.shape_idx = pick(space.shapes.size(), rng);
    return g;
}

bool repair(Genome& g, const GaProblem& problem, Rng& rng) {
    const auto& space = problem.space;
    if (problem.tiles_fit(decode_tiles(g.tile_idx, space)))
        return true;
    std::array<Dim, kNumDims> visit = kAllDims;
    std::shuffle(visit.begin(), visit.end(), rng);
    for (Dim d : visit) {
        auto& idx = g.tile_idx[d];
        const auto original = idx;
        for (std::size_t j = original + 1; j-- > 0;) {
            idx = j;
            if (problem.tiles_fit(decode_tiles(g.tile_idx, space)))
                return true;
        }
        idx = 0;
    }
    return false;
}

Genome mutate(const Genome& g, const GaProblem& problem, double rate, Rng& rng) {
    const auto& space = problem.space;
    Genome out = g;
    if (coin(rate, rng)) {
        const Dim d = kAllDims[pick(kNumDims, rng)];
        out.tile_idx[d] = pick(space.tile_choices[d].size(), rng);
    }
    if (coin(rate, rng))
        out.order_idx = pick(space.orders.size(), rng);
    if (coin(rate, rng))
        out.pair_idx = pick(space.pairs.size(), rng);
    if (coin(rate, rng))
        out.shape_idx = pick(space.shapes.size(), rng);
    if (!repair(out, problem, rng))
        throw InfeasibleSpace("mutate: no buffer-legal tiles");
    return out;
}

Genome crossover(const Genome& a, const Genome& b, const GaProblem& problem, Rng& rng) {
    Genome child;
    child.tile_idx = coin(0.5, rng) ? a.tile_idx : b.tile_idx;
    child.order_idx = coin(0.5, rng) ? a.order_idx : b.order_idx;
    child.pair_idx = coin(0.5, rng) ? a.pair_idx : b.pair_idx;
    child.shape_idx = coin(0.5, rng) ? a.shape_idx : b.shape_idx;
    if (!repair(child, problem, rng))
        throw InfeasibleSpace("crossover: no buffer-legal tiles");
    return child;
}

GaRun run_ga(const GaProblem& problem, const GaConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    GaRun run;

    auto evaluate = [&](Genome g) {
        Individual ind;
        ind.genome = g;
        ind.mapping = decode(g, problem.space);
        ind.fitness = problem.fitness(ind.mapping);
        ind.key = serialize(ind.mapping);
        ++run.evaluations;
        return ind;
    };

    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(cfg.population));
    for (std::int64_t i = 0; i < cfg.population; ++i) {
        Genome g = random_genome(problem.space, rng);
        if (!repair(g, problem, rng))
            throw InfeasibleSpace("GA: no buffer-legal tiles");
        population.push_back(evaluate(g));
    }
    std::sort(population.begin(), population.end(), ranks_before);
    Individual incumbent = population.front();
    run.history.push_back(incumbent.fitness);

    auto tournament = [&]() -> const Individual& {
        const auto& a = population[pick(population.size(), rng)];
        const auto& b = population[pick(population.size(), rng)];
        return ranks_before(a, b) ? a : b;
    };

    for (std::int64_t gen = 1; gen < cfg.generations; ++gen) {
        std::vector<Individual> next(population.begin(), population.begin() + cfg.elite_count);
        while (static_cast<std::int64_t>(next.size()) < cfg.population) {
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            Genome child = coin(cfg.crossover_rate, rng) ? crossover(p1.genome, p2.genome, problem, rng)
                                                         : p1.genome;
            child = mutate(child, problem, cfg.mutation_rate, rng);
            next.push_back(evaluate(child));
        }
        population = std::move(next);
        std::sort(population.begin(), population.end(), ranks_before);
        if (ranks_before(population.front(), incumbent))
            incumbent = population.front();
        run.history.push_back(incumbent.fitness);
    }
    run.best = incumbent.mapping;
    run.best_fitness = incumbent.fitness;
    return run;
}

GaProblem layer_problem(const Layer& layer, const AcceleratorSpec& accel, const GaConfig& cfg,
                        const EnergyParams& ep) {
    GaProblem problem;
    problem.space = make_search_space(layer, accel);
    problem.tiles_fit = [layer, buffer = accel.buffer](const DimSizes& t) {
        return static_cast<bool>(buffer_fits(layer, buffer, t));
    };
    problem.fitness = [layer, accel, ep, objective = cfg.objective](const Mapping& m) {
        if (auto v = is_legal(layer, accel, m); !v)
            throw std::logic_error("GA produced an illegal mapping: " + v.reason);
        return evaluate(layer, accel, m, ep).objective(objective);
    };
    return problem;
}

GaResult search(const Layer& layer, const AcceleratorSpec& accel, const GaConfig& cfg,
                const EnergyParams& ep) {
    const auto baseline = clamp_baseline(layer, accel);
    if (!is_legal(layer, accel, baseline))
        throw InfeasibleSpace("layer '" + layer.name + "': clamped baseline is not legal on '" +
                              accel.name + "'");
    const auto problem = layer_problem(layer, accel, cfg, ep);
    auto run = run_ga(problem, cfg);
    GaResult result;
    result.mapping = run.best;
    result.report = evaluate(layer, accel, run.best, ep);
    result.history = std::move(run.history);
    result.evaluations = run.evaluations;
    return result;
}

}  // namespace flexdse
