#pragma once

#include <filesystem>
#include <string>

#include "flexdse/accel.hpp"
#include "flexdse/legality.hpp"
#include "flexdse/workload.hpp"

namespace testing {

using namespace flexdse;

inline std::filesystem::path fixture_dir() { return FLEXDSE_FIXTURE_DIR; }

inline Layer layer(DimSizes dims, std::int64_t stride = 1, LayerKind kind = LayerKind::Conv2d,
                   std::string name = "l") {
    Layer l;
    l.name = std::move(name);
    l.dims = dims;
    l.stride = stride;
    l.kind = kind;
    return l;
}

/// Inflexible accelerator with an all-ones baseline tile, YXKCRS order, K-C pair, 1x1 shape.
inline AcceleratorSpec inflex(std::int64_t n_pe, std::int64_t buffer, bool hard = false) {
    using enum Dim;
    AcceleratorSpec a;
    a.name = "test";
    a.n_pe = n_pe;
    a.buffer.size = buffer;
    a.buffer.hard = hard;
    a.baseline.order = {Y, X, K, C, R, S};
    a.baseline.parallel = {K, C};
    a.baseline.shape = {1, 1};
    return a;
}

/// Turns on one axis at full flexibility.
inline AcceleratorSpec with_full(AcceleratorSpec a, Axis axis) {
    a.flex_class[axis] = true;
    switch (axis) {
        case Axis::Tile: a.constraints.tile = AxisMode::All; break;
        case Axis::Order: a.constraints.order = AxisMode::All; break;
        case Axis::Parallel: a.constraints.parallel = AxisMode::All; break;
        case Axis::Shape: a.constraints.shape = AxisMode::All; break;
    }
    return a;
}

inline AcceleratorSpec full_flex(std::int64_t n_pe, std::int64_t buffer) {
    auto a = inflex(n_pe, buffer);
    for (Axis axis : {Axis::Tile, Axis::Order, Axis::Parallel, Axis::Shape})
        a = with_full(a, axis);
    return a;
}

/// Divisor count by trial division, independent of the library's divisors().
inline std::int64_t divisor_count(std::int64_t n) {
    std::int64_t c = 0;
    for (std::int64_t d = 1; d <= n; ++d)
        c += n % d == 0;
    return c;
}

/// Footprint by counting touched element coordinates, independent of the closed form.
struct CountedFootprint {
    std::int64_t weights, inputs, outputs;
};
CountedFootprint counted_footprint(const Layer& l, const DimSizes& t);

}  // namespace testing

#include <algorithm>
#include <random>

namespace testing {

/// Random factor tiles, permutation, pair and shape (h*w <= n_pe). Buffer is not considered.
inline flexdse::Mapping random_mapping(const flexdse::Layer& l, std::int64_t n_pe, std::mt19937_64& rng) {
    using namespace flexdse;
    Mapping m;
    for (Dim d : kAllDims) {
        auto divs = divisors(l.dims[d]);
        m.tiles[d] = divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)];
    }
    m.order = kCanonicalOrder;
    std::shuffle(m.order.begin(), m.order.end(), rng);
    auto pairs = all_native_pairs(6);
    m.parallel = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
    const auto h = std::uniform_int_distribution<std::int64_t>(1, n_pe)(rng);
    m.shape = {h, std::uniform_int_distribution<std::int64_t>(1, n_pe / h)(rng)};
    return m;
}

}  // namespace testing
