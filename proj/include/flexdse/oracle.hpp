#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "flexdse/cost_model.hpp"
#include "flexdse/mapping.hpp"

namespace flexdse {

/// Thrown when a brute-force routine would exceed its size guard.
class SpaceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TraceStats {
    std::array<std::int64_t, 3> fetches{};
    std::array<std::int64_t, 3> evictions{};
    std::int64_t visited_tiles = 0;

    std::int64_t operator[](Tensor t) const { return fetches[static_cast<std::size_t>(t)]; }
};

inline constexpr std::int64_t kSimulationGuard = 1'000'000;

/// Walks the inter-tile loop nest in `m.order` and counts, per tensor, how often the
/// resident tile changes. Flexibility pins are ignored. If `trace` is non-null, writes one
/// CSV row per tile-coordinate transition.
TraceStats simulate(const Layer& layer, const Mapping& m, std::ostream* trace = nullptr);

struct BestMapping {
    Mapping mapping;
    CostReport report;
    std::int64_t evaluated = 0;
};

inline constexpr std::int64_t kExhaustiveCap = 100'000;

/// Minimizes `objective` over the accelerator's entire feasible space for the layer.
/// Ties go to the lower secondary metric (energy for a runtime objective, runtime otherwise),
/// then to the lexicographically smallest serialized mapping.
BestMapping exhaustive_best(const Layer& layer, const AcceleratorSpec& accel, Objective objective,
                            const EnergyParams& ep, std::int64_t cap = kExhaustiveCap);

/// Secondary key used to break objective ties.
double tie_metric(const CostReport& r, Objective objective);

}  // namespace flexdse
