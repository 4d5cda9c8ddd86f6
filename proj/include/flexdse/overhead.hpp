#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "flexdse/accel.hpp"
#include "flexdse/cost_model.hpp"

namespace flexdse {

struct FeatureCost {
    double area_units = 0.0;
    double energy_adder_per_access = 0.0;
};

/// Area/energy cost of each hardware feature that enables flexibility.
/// Values are configuration; the shipped table is an example calibration.
struct FeatureCostTable {
    FeatureCost tile_regs;
    FeatureCost soft_partition_mux;
    FeatureCost order_addr_gens;
    FeatureCost order_pe_counter_reg;  // per PE
    FeatureCost parallel_addr_counters;
    FeatureCost parallel_pe_mux;       // per PE
    FeatureCost shape_multicast_noc;
    FeatureCost shape_pe_demux;        // per PE
    FeatureCost reduction_noc;

    double area_per_pe = 0.0;
    double area_per_buffer_element = 0.0;
    double area_fixed_noc = 0.0;
};

FeatureCostTable cost_table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FeatureCostTable& t);
FeatureCostTable load_cost_table(const std::filesystem::path& path);

/// Built-in copy of fixtures/cost_table.json.
FeatureCostTable default_cost_table();

struct OverheadReport {
    double baseline_area = 0.0;
    double flex_area = 0.0;
    double overhead_fraction = 0.0;
    double energy_adder = 0.0;         // added to every on-chip buffer access
    std::map<std::string, double> feature_area;
};

OverheadReport overhead(const AcceleratorSpec& accel, const FeatureCostTable& table);

nlohmann::json to_json(const OverheadReport& r);

/// `ep` with the accelerator's per-access adders folded into e_buf.
EnergyParams with_adders(const EnergyParams& ep, const OverheadReport& r);

}  // namespace flexdse
