#include "flexdse/oracle.hpp"

#include "flexdse/legality.hpp"
#include "flexdse/mapspace.hpp"

namespace flexdse {

TraceStats simulate(const Layer& layer, const Mapping& m, std::ostream* trace) {
    const auto n = trip_counts(layer, m.tiles);
    std::int64_t total = 1;
    for (auto trips : n) {
        total *= trips;
        if (total > kSimulationGuard)
            throw SpaceTooLarge("simulate: more than " + std::to_string(kSimulationGuard) + " tiles");
    }
    const auto td = tensor_dims(layer.kind);

    TraceStats stats;
    std::array<DimSizes, 3> resident{};
    std::array<bool, 3> loaded{};
    DimSizes index{};  // current tile index per dim
    std::array<std::int64_t, kNumDims> counter{};  // per loop position

    if (trace)
        *trace << "step,tensor,coordinate\n";

    for (std::int64_t step = 0; step < total; ++step) {
        for (std::size_t pos = 0; pos < kNumDims; ++pos)
            index[m.order[pos]] = counter[pos];
        for (Tensor t : kAllTensors) {
            const auto i = static_cast<std::size_t>(t);
            DimSizes coord{};
            for (Dim d : kAllDims)
                coord[d] = td(t, d) ? index[d] : 0;
            if (!loaded[i] || coord != resident[i]) {
                if (loaded[i])
                    ++stats.evictions[i];
                ++stats.fetches[i];
                resident[i] = coord;
                loaded[i] = true;
                if (trace) {
                    *trace << step << ',' << to_string(t) << ',';
                    for (Dim d : kAllDims)
                        *trace << (d == Dim::K ? "" : ":") << coord[d];
                    *trace << '\n';
                }
            }
        }
        ++stats.visited_tiles;
        // Innermost position advances fastest.
        for (std::size_t pos = kNumDims; pos > 0; --pos) {
            if (++counter[pos - 1] < n[m.order[pos - 1]])
                break;
            counter[pos - 1] = 0;
        }
    }
    return stats;
}

double tie_metric(const CostReport& r, Objective objective) {
    return objective == Objective::Runtime ? r.energy : static_cast<double>(r.runtime_cycles);
}

BestMapping exhaustive_best(const Layer& layer, const AcceleratorSpec& accel, Objective objective,
                            const EnergyParams& ep, std::int64_t cap) {
    const auto s = stats(layer, accel);
    if (s.combined_a > cap)
        throw SpaceTooLarge("exhaustive_best: feasible space " + to_string(s.combined_a) +
                            " exceeds cap " + std::to_string(cap));
    BestMapping best;
    bool have = false;
    double best_obj = 0.0;
    double best_tie = 0.0;
    std::string best_key;
    best.evaluated = for_each_feasible(layer, accel, [&](const Mapping& m) {
        auto report = evaluate(layer, accel, m, ep);
        const double obj = report.objective(objective);
        const double tie = tie_metric(report, objective);
        if (have && (obj > best_obj || (obj == best_obj && tie > best_tie)))
            return;
        std::string key = serialize(m);
        if (!have || obj < best_obj || tie < best_tie || key < best_key) {
            best.mapping = m;
            best.report = report;
            best_obj = obj;
            best_tie = tie;
            best_key = std::move(key);
            have = true;
        }
    });
    if (!have)
        throw ValidationError("exhaustive_best: layer '" + layer.name + "' has no feasible mapping on '" +
                              accel.name + "'");
    return best;
}

}  // namespace flexdse
