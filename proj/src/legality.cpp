#include "flexdse/legality.hpp"

#include <algorithm>

namespace flexdse {

namespace {

Verdict fail(std::string reason) { return {false, std::move(reason)}; }

bool contains_dim(const std::vector<Dim>& dims, Dim d) {
    return std::find(dims.begin(), dims.end(), d) != dims.end();
}

}  // namespace

Verdict buffer_fits(const Layer& layer, const BufferConfig& buffer, const DimSizes& tiles) {
    const auto fp = footprint(layer, tiles);
    if (buffer.hard) {
        if (fp.weights > buffer.share(Tensor::Weights)) return fail("buffer(hard:weights)");
        if (fp.inputs > buffer.share(Tensor::Inputs)) return fail("buffer(hard:inputs)");
        if (fp.outputs > buffer.share(Tensor::Outputs)) return fail("buffer(hard:outputs)");
        return {};
    }
    if (!buffer.unlimited() && fp.total() > buffer.size) return fail("buffer(soft)");
    return {};
}

DimSizes clamp_tiles(const Layer& layer, const DimSizes& tiles) {
    DimSizes out;
    for (Dim d : kAllDims) {
        const auto divs = divisors(layer.dims[d]);
        auto it = std::upper_bound(divs.begin(), divs.end(), tiles[d]);
        out[d] = it == divs.begin() ? 1 : *std::prev(it);
    }
    return out;
}

Mapping clamp_baseline(const Layer& layer, const AcceleratorSpec& accel) {
    Mapping m = accel.baseline;
    m.tiles = clamp_tiles(layer, accel.baseline.tiles);
    return m;
}

Verdict is_legal(const Layer& layer, const AcceleratorSpec& accel, const Mapping& m) {
    // (1) factor rule
    for (Dim d : kAllDims) {
        if (m.tiles[d] < 1 || m.tiles[d] > layer.dims[d] || layer.dims[d] % m.tiles[d] != 0)
            return fail(std::string("factor(") + dim_char(d) + ")");
    }
    // (2) buffer fit
    if (auto v = buffer_fits(layer, accel.buffer, m.tiles); !v) return v;
    // (3) PE count
    if (m.shape.rows < 1 || m.shape.cols < 1 || m.shape.pes() > accel.n_pe) return fail("pe_count");
    if (!is_permutation_of_dims(m.order)) return fail("order invalid");
    if (m.parallel.rows == m.parallel.cols) return fail("parallel invalid");

    // (4) pinned axes
    const auto& fc = accel.flex_class;
    if (!fc.tile && m.tiles != clamp_tiles(layer, accel.baseline.tiles)) return fail("tile fixed");
    if (!fc.order && m.order != accel.baseline.order) return fail("order fixed");
    if (!fc.parallel && m.parallel != accel.baseline.parallel) return fail("parallel fixed");
    if (!fc.shape && m.shape != accel.baseline.shape) return fail("shape fixed");

    // (5) partial-flexibility sets
    const auto& c = accel.constraints;
    if (c.order == AxisMode::Allowed &&
        std::find(c.allowed_orders.begin(), c.allowed_orders.end(), m.order) == c.allowed_orders.end())
        return fail("order not allowed");
    if (c.parallel == AxisMode::Allowed &&
        std::find(c.allowed_pairs.begin(), c.allowed_pairs.end(), m.parallel) == c.allowed_pairs.end())
        return fail("parallel not allowed");
    if (c.shape == AxisMode::Allowed &&
        (m.shape.rows % c.shape_block != 0 || m.shape.cols % c.shape_block != 0))
        return fail("shape block");

    // (6) native operator
    const auto native = native_dim_set(accel.native_dims);
    if (!contains_dim(native, m.parallel.rows) || !contains_dim(native, m.parallel.cols))
        return fail("parallel native");
    if (accel.native_dims == 3) {
        const auto orders = all_native_orders(3);
        if (std::find(orders.begin(), orders.end(), m.order) == orders.end())
            return fail("order native");
    }
    return {};
}

AcceleratorSpec fully_flexible(const AcceleratorSpec& accel) {
    AcceleratorSpec full = accel;
    full.name = accel.name + "-fullflex";
    full.buffer.hard = false;
    full.flex_class = FlexClass{true, true, true, true};
    full.constraints = FlexConstraints{};
    full.constraints.tile = AxisMode::All;
    full.constraints.order = AxisMode::All;
    full.constraints.parallel = AxisMode::All;
    full.constraints.shape = AxisMode::All;
    return full;
}

}  // namespace flexdse
