#pragma once

#include <map>
#include <string>

#include "flexdse/accel.hpp"
#include "flexdse/cost_model.hpp"
#include "flexdse/overhead.hpp"
#include "flexdse/workload.hpp"

namespace flexdse {

/// Shipped workloads and accelerators. `desk` accelerators have 1024 PEs and a 4096-element
/// buffer; `tiny` ones have 4 PEs and a 64-element buffer so every tiny layer can be searched
/// exhaustively.
struct Fixture {
    std::map<std::string, Model> models;
    std::map<std::string, Model> tiny_models;
    std::map<std::string, AcceleratorSpec> desk;
    std::map<std::string, AcceleratorSpec> tiny;
    FeatureCostTable cost_table;
    EnergyParams energy;
};

/// Output-stationary (YXKCRS), K-C parallel, square-array inflexible baseline.
AcceleratorSpec desk_base();
AcceleratorSpec tiny_base();

/// InFlex-0000, PartFlex/FullFlex per axis, and FullFlex-1111 around `base`.
std::map<std::string, AcceleratorSpec> variant_family(const AcceleratorSpec& base);

const Fixture& fixtures();

}  // namespace flexdse
