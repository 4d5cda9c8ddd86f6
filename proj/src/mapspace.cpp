#include "flexdse/mapspace.hpp"

#include <algorithm>
#include <set>

namespace flexdse {

std::string to_string(const BigCount& n) { return n.str(); }

double ratio(const BigCount& num, const BigCount& den) {
    if (den == 0)
        return 0.0;
    if (num == den)
        return 1.0;
    return static_cast<double>(num.convert_to<long double>() / den.convert_to<long double>());
}

namespace {

BigCount factorial(std::int64_t n) {
    BigCount f = 1;
    for (std::int64_t i = 2; i <= n; ++i)
        f *= i;
    return f;
}

BigCount choose3(std::int64_t n) {
    if (n < 3)
        return 0;
    BigCount b = n;
    return b * (n - 1) * (n - 2) / 6;
}

bool is_effective(const Layer& layer, Dim d) { return layer.dims[d] > 1; }

/// Parallel choices that count as distinct for the layer: admitted pairs with both dims
/// effective. When none qualifies, every admitted pair degenerates to one class.
std::vector<ParallelPair> pair_classes(const Layer& layer, const std::vector<ParallelPair>& admitted) {
    std::vector<ParallelPair> out;
    for (const auto& p : admitted)
        if (is_effective(layer, p.rows) && is_effective(layer, p.cols))
            out.push_back(p);
    if (out.empty() && !admitted.empty())
        out.push_back(admitted.front());
    return out;
}

std::vector<DimSizes> tile_candidates(const Layer& layer, const AcceleratorSpec& accel) {
    std::vector<DimSizes> out;
    if (!accel.flex_class.tile) {
        out.push_back(clamp_tiles(layer, accel.baseline.tiles));
        return out;
    }
    for_each_factor_tiles(layer, [&](const DimSizes& t) { out.push_back(t); });
    return out;
}

BigCount joint_count(const Layer& layer, const AcceleratorSpec& accel) {
    const auto tiles = tile_candidates(layer, accel);
    const auto orders = dedupe_orders(layer, admitted_orders(accel));
    const auto pairs = pair_classes(layer, admitted_pairs(accel));
    const auto shapes = admitted_shapes(accel);
    std::int64_t count = 0;
    Mapping m;
    for (const auto& t : tiles) {
        m.tiles = t;
        for (const auto& o : orders) {
            m.order = o;
            for (const auto& p : pairs) {
                m.parallel = p;
                for (const auto& s : shapes) {
                    m.shape = s;
                    if (is_legal(layer, accel, m))
                        ++count;
                }
            }
        }
    }
    return count;
}

}  // namespace

void for_each_factor_tiles(const Layer& layer, const std::function<void(const DimSizes&)>& visit) {
    DimArray<std::vector<std::int64_t>> divs;
    for (Dim d : kAllDims)
        divs[d] = divisors(layer.dims[d]);
    std::array<std::size_t, kNumDims> idx{};
    DimSizes t;
    while (true) {
        for (Dim d : kAllDims)
            t[d] = divs[d][idx[index_of(d)]];
        visit(t);
        std::size_t pos = kNumDims;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < divs[kAllDims[pos]].size())
                break;
            idx[pos] = 0;
            if (pos == 0)
                return;
        }
    }
}

BufferConfigCounts buffer_config_counts(const BufferConfig& buffer) {
    BufferConfigCounts out;
    out.potential = choose3(buffer.size);
    if (buffer.hard) {
        out.supported = BigCount(buffer.share(Tensor::Weights)) * buffer.share(Tensor::Inputs) *
                        buffer.share(Tensor::Outputs);
    } else {
        out.supported = out.potential;
    }
    return out;
}

double hard_partition_flexion(const BufferConfig& buffer) {
    if (!buffer.hard)
        return 1.0;
    const double sum = static_cast<double>(buffer.ratios[0] + buffer.ratios[1] + buffer.ratios[2]);
    return 6.0 * (buffer.ratios[0] / sum) * (buffer.ratios[1] / sum) * (buffer.ratios[2] / sum);
}

AxisCounts count_tiles(const Layer& layer, const AcceleratorSpec& accel) {
    AxisCounts c;
    c.axis = Axis::Tile;
    std::int64_t w = 0, a = 0, soft = 0;
    BufferConfig soft_buffer = accel.buffer;
    soft_buffer.hard = false;
    for_each_factor_tiles(layer, [&](const DimSizes& t) {
        ++w;
        if (buffer_fits(layer, soft_buffer, t)) {
            ++soft;
            if (buffer_fits(layer, accel.buffer, t))
                ++a;
        }
    });
    c.w_count = w;
    c.c_count = soft;
    c.a_count = accel.flex_class.tile ? a : 1;
    if (!accel.flex_class.tile) {
        const auto cfg = buffer_config_counts(soft_buffer);
        c.hw_flexion = accel.buffer.unlimited() || cfg.potential == 0 ? 0.0 : ratio(1, cfg.potential);
    } else {
        c.hw_flexion = accel.buffer.hard ? hard_partition_flexion(accel.buffer) : 1.0;
    }
    c.wl_flexion = ratio(c.a_count, c.w_count);
    return c;
}

std::vector<Dim> project_order(const Layer& layer, const LoopOrder& order) {
    std::vector<Dim> out;
    for (Dim d : order)
        if (is_effective(layer, d))
            out.push_back(d);
    return out;
}

std::vector<LoopOrder> dedupe_orders(const Layer& layer, const std::vector<LoopOrder>& orders) {
    std::set<std::vector<Dim>> seen;
    std::vector<LoopOrder> out;
    for (const auto& o : orders)
        if (seen.insert(project_order(layer, o)).second)
            out.push_back(o);
    return out;
}

AxisCounts count_orders(const Layer& layer, const AcceleratorSpec& accel) {
    AxisCounts c;
    c.axis = Axis::Order;
    const auto m = static_cast<std::int64_t>(effective_dims(layer).size());
    c.w_count = factorial(m);
    c.c_count = factorial(accel.native_dims);
    const auto admitted = admitted_orders(accel);
    if (!accel.flex_class.order) {
        c.a_count = 1;
    } else {
        BigCount distinct = dedupe_orders(layer, admitted).size();
        c.a_count = std::min(distinct, c.w_count);
    }
    c.hw_flexion = ratio(admitted.size(), c.c_count);
    c.wl_flexion = ratio(c.a_count, c.w_count);
    return c;
}

AxisCounts count_parallel(const Layer& layer, const AcceleratorSpec& accel) {
    AxisCounts c;
    c.axis = Axis::Parallel;
    const auto n = static_cast<std::int64_t>(accel.native_dims);
    const auto m = static_cast<std::int64_t>(effective_dims(layer).size());
    c.c_count = n * (n - 1);
    // Fewer than two effective dims leaves a single degenerate two-way choice.
    c.w_count = m >= 2 ? m * (m - 1) : 1;
    const auto admitted = admitted_pairs(accel);
    if (!accel.flex_class.parallel) {
        c.a_count = 1;
    } else {
        BigCount classes = pair_classes(layer, admitted).size();
        c.a_count = std::min(classes, c.w_count);
    }
    c.hw_flexion = ratio(admitted.size(), c.c_count);
    c.wl_flexion = ratio(c.a_count, c.w_count);
    return c;
}

AxisCounts count_shapes(const AcceleratorSpec& accel) {
    AxisCounts c;
    c.axis = Axis::Shape;
    c.c_count = accel.n_pe;
    c.w_count = accel.n_pe;
    c.a_count = accel.flex_class.shape ? BigCount(admitted_shapes(accel).size()) : BigCount(1);
    c.hw_flexion = ratio(c.a_count, c.c_count);
    c.wl_flexion = ratio(c.a_count, c.w_count);
    return c;
}

MapSpaceStats stats(const Layer& layer, const AcceleratorSpec& accel, std::int64_t enumeration_cap) {
    MapSpaceStats s;
    s.per_axis = {count_tiles(layer, accel), count_orders(layer, accel), count_parallel(layer, accel),
                  count_shapes(accel)};
    s.combined_w = 1;
    BigCount product_a = 1;
    for (const auto& ax : s.per_axis) {
        s.combined_w *= ax.w_count;
        product_a *= ax.a_count;
    }
    if (s.combined_w <= enumeration_cap) {
        s.combined_a = joint_count(layer, accel);
        s.approximate = false;
    } else {
        s.combined_a = product_a;
        s.approximate = true;
    }
    s.combined_wf = ratio(s.combined_a, s.combined_w);
    return s;
}

VennReport venn_report(const Layer& layer, const AcceleratorSpec& accel, std::int64_t enumeration_cap) {
    const auto target = stats(layer, accel, enumeration_cap);
    const auto full = stats(layer, fully_flexible(accel), enumeration_cap);
    VennReport r;
    for (std::size_t i = 0; i < 4; ++i) {
        r.per_axis[i].workload = target.per_axis[i].w_count;
        r.per_axis[i].supported = target.per_axis[i].a_count;
        r.per_axis[i].potential = full.per_axis[i].a_count;
    }
    r.combined = {target.combined_w, target.combined_a, full.combined_a};
    r.approximate = target.approximate || full.approximate;
    return r;
}

BigCount SearchSpace::raw_size() const {
    BigCount n = 1;
    for (Dim d : kAllDims)
        n *= tile_choices[d].size();
    n *= orders.size();
    n *= pairs.size();
    n *= shapes.size();
    return n;
}

SearchSpace make_search_space(const Layer& layer, const AcceleratorSpec& accel) {
    SearchSpace space;
    const auto clamped = clamp_tiles(layer, accel.baseline.tiles);
    for (Dim d : kAllDims) {
        if (accel.flex_class.tile)
            space.tile_choices[d] = divisors(layer.dims[d]);
        else
            space.tile_choices[d] = {clamped[d]};
    }
    space.orders = dedupe_orders(layer, admitted_orders(accel));
    space.pairs = admitted_pairs(accel);
    space.shapes = admitted_shapes(accel);
    return space;
}

std::int64_t for_each_feasible(const Layer& layer, const AcceleratorSpec& accel,
                               const std::function<void(const Mapping&)>& visit) {
    const auto space = make_search_space(layer, accel);
    std::vector<DimSizes> tiles;
    if (accel.flex_class.tile) {
        for_each_factor_tiles(layer, [&](const DimSizes& t) {
            if (buffer_fits(layer, accel.buffer, t))
                tiles.push_back(t);
        });
    } else {
        DimSizes t;
        for (Dim d : kAllDims)
            t[d] = space.tile_choices[d].front();
        tiles.push_back(t);
    }
    std::int64_t visited = 0;
    Mapping m;
    for (const auto& t : tiles) {
        m.tiles = t;
        for (const auto& o : space.orders) {
            m.order = o;
            for (const auto& p : space.pairs) {
                m.parallel = p;
                for (const auto& s : space.shapes) {
                    m.shape = s;
                    if (is_legal(layer, accel, m)) {
                        visit(m);
                        ++visited;
                    }
                }
            }
        }
    }
    return visited;
}

}  // namespace flexdse
