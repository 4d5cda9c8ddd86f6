#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "flexdse/workload.hpp"

namespace flexdse {

/// Inter-tile loop order, outermost first.
using LoopOrder = std::array<Dim, kNumDims>;

inline constexpr LoopOrder kCanonicalOrder = kAllDims;

/// Two-way spatial parallelism: `rows` is unrolled over array rows, `cols` over columns.
struct ParallelPair {
    Dim rows = Dim::K;
    Dim cols = Dim::C;

    friend constexpr bool operator==(const ParallelPair&, const ParallelPair&) = default;
    friend constexpr auto operator<=>(const ParallelPair&, const ParallelPair&) = default;
};

/// Logical PE array shape.
struct ArrayShape {
    std::int64_t rows = 1;
    std::int64_t cols = 1;

    std::int64_t pes() const { return rows * cols; }

    friend constexpr bool operator==(const ArrayShape&, const ArrayShape&) = default;
    friend constexpr auto operator<=>(const ArrayShape&, const ArrayShape&) = default;
};

/// One point of the map space: concrete tile sizes, loop order, parallel dims and shape.
struct Mapping {
    DimSizes tiles{{1, 1, 1, 1, 1, 1}};
    LoopOrder order = kCanonicalOrder;
    ParallelPair parallel;
    ArrayShape shape;

    friend bool operator==(const Mapping&, const Mapping&) = default;
};

/// Per-tensor on-chip tile sizes in elements.
struct TileFootprint {
    std::int64_t weights = 0;
    std::int64_t inputs = 0;
    std::int64_t outputs = 0;

    std::int64_t total() const { return weights + inputs + outputs; }

    friend bool operator==(const TileFootprint&, const TileFootprint&) = default;
};

/// Footprint of one tile. Input extents include the filter halo: (t-1)*stride + filter.
/// Throws std::invalid_argument when a tile is outside [1, dim].
TileFootprint footprint(const Layer& layer, const DimSizes& tiles);

bool is_permutation_of_dims(const LoopOrder& order);
std::string order_string(const LoopOrder& order);
std::string pair_string(const ParallelPair& pair);

/// Parses "YXKCRS" or a JSON array of single-letter dims.
LoopOrder order_from_json(const nlohmann::json& j);
ParallelPair pair_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Mapping& m);
Mapping mapping_from_json(const nlohmann::json& j);

/// Compact, key-sorted JSON text; used as the deterministic tie-break key.
std::string serialize(const Mapping& m);

}  // namespace flexdse
