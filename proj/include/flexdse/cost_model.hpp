#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "flexdse/accel.hpp"
#include "flexdse/mapping.hpp"

namespace flexdse {

/// Energy per element moved / per MAC, in relative units.
struct EnergyParams {
    double e_dram = 160.0;
    double e_buf = 0.16;
    double e_mac = 0.02;

    friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

EnergyParams energy_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnergyParams& ep);
EnergyParams load_energy_params(const std::filesystem::path& path);

enum class Objective : std::uint8_t { Runtime, Energy, Edp };
std::string_view to_string(Objective o);
Objective parse_objective(std::string_view name);

/// Dims that index each tensor.
struct TensorDims {
    std::array<DimArray<bool>, 3> relevant{};

    bool operator()(Tensor t, Dim d) const { return relevant[static_cast<std::size_t>(t)][d]; }
};

TensorDims tensor_dims(LayerKind kind);

/// Inter-tile trip counts ceil(D_d / t_d).
DimSizes trip_counts(const Layer& layer, const DimSizes& tiles);

struct TrafficBreakdown {
    std::array<std::int64_t, 3> fetches{};   // tile loads per tensor
    std::array<std::int64_t, 3> traffic{};   // elements per tensor, outputs include write-back doubling
    bool output_revisited = false;
    std::int64_t total = 0;

    std::int64_t operator[](Tensor t) const { return traffic[static_cast<std::size_t>(t)]; }
};

/// Number of tile loads of tensor `t`: the product of trip counts outside the innermost run
/// of loops that are irrelevant to `t` or have a single trip.
std::int64_t fetch_count(const Layer& layer, const Mapping& m, Tensor t);

TrafficBreakdown dram_traffic(const Layer& layer, const Mapping& m);

std::int64_t macs(const Layer& layer);
std::int64_t compute_cycles(const Layer& layer, const Mapping& m);

struct CostReport {
    std::int64_t compute_cycles = 0;
    std::int64_t dram_traffic = 0;
    std::int64_t buffer_accesses = 0;
    std::int64_t macs = 0;
    double utilization = 0.0;
    std::int64_t runtime_cycles = 0;
    double energy = 0.0;
    double edp = 0.0;
    TrafficBreakdown traffic;

    double objective(Objective o) const;

    friend bool operator==(const CostReport& a, const CostReport& b) {
        return a.compute_cycles == b.compute_cycles && a.dram_traffic == b.dram_traffic &&
               a.buffer_accesses == b.buffer_accesses && a.macs == b.macs &&
               a.utilization == b.utilization && a.runtime_cycles == b.runtime_cycles &&
               a.energy == b.energy && a.edp == b.edp && a.traffic.traffic == b.traffic.traffic;
    }
};

/// Precondition: is_legal(layer, accel, m). The caller folds any per-access
/// flexibility energy adders into `ep.e_buf`.
CostReport evaluate(const Layer& layer, const AcceleratorSpec& accel, const Mapping& m,
                    const EnergyParams& ep);

nlohmann::json to_json(const CostReport& r);

}  // namespace flexdse
