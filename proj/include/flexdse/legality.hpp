#pragma once

#include <string>

#include "flexdse/accel.hpp"
#include "flexdse/mapping.hpp"

namespace flexdse {

/// Legality verdict; `reason` names the first failed clause and is empty when legal.
struct Verdict {
    bool legal = true;
    std::string reason;

    explicit operator bool() const { return legal; }
};

/// Buffer clause only: soft fits the sum, hard fits each floor(P_t * S_B) share.
Verdict buffer_fits(const Layer& layer, const BufferConfig& buffer, const DimSizes& tiles);

/// Full legality of `m` for `layer` on `accel`, clauses checked in this order:
/// factor rule, buffer, PE count, pinned (bit-0) axes, partial-flexibility sets, native dims.
Verdict is_legal(const Layer& layer, const AcceleratorSpec& accel, const Mapping& m);

/// Baseline mapping with each tile reduced to the largest divisor of the layer
/// dimension that does not exceed the baseline tile.
Mapping clamp_baseline(const Layer& layer, const AcceleratorSpec& accel);
DimSizes clamp_tiles(const Layer& layer, const DimSizes& tiles);

/// The same resources with every axis fully flexible (soft buffer, all orders/pairs/shapes).
AcceleratorSpec fully_flexible(const AcceleratorSpec& accel);

}  // namespace flexdse
