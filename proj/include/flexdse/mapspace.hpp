#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flexdse/accel.hpp"
#include "flexdse/legality.hpp"

namespace flexdse {

using BigCount = boost::multiprecision::cpp_int;

/// Counts along one axis.
///   w_count: workload map space W (hardware-agnostic)
///   a_count: feasible space A^w (supported by this accelerator and the workload)
///   c_count: what a fully flexible accelerator with the same resources reaches
struct AxisCounts {
    Axis axis = Axis::Tile;
    BigCount w_count = 1;
    BigCount a_count = 1;
    BigCount c_count = 1;
    double hw_flexion = 1.0;  // H-F: supported / potential hardware configurations
    double wl_flexion = 1.0;  // W-F: a_count / w_count
};

struct MapSpaceStats {
    std::array<AxisCounts, 4> per_axis;
    BigCount combined_w = 1;
    BigCount combined_a = 1;
    double combined_wf = 1.0;
    /// True when combined_a is the per-axis product instead of a joint enumeration.
    bool approximate = false;

    const AxisCounts& axis(Axis a) const { return per_axis[static_cast<std::size_t>(a)]; }
};

/// Default ceiling on combined_w for exact joint enumeration.
inline constexpr std::int64_t kJointEnumerationCap = 1'000'000;

/// Hard/soft buffer allocation space: the number of positive (weights, inputs, outputs)
/// capacity triples the partitioning can realize versus an addressable buffer (C(S_B, 3)).
struct BufferConfigCounts {
    BigCount supported;
    BigCount potential;
};
BufferConfigCounts buffer_config_counts(const BufferConfig& buffer);

/// 3! * P_W * P_I * P_O: the large-buffer limit of supported/potential for a hard partition.
/// A soft buffer gives 1.
double hard_partition_flexion(const BufferConfig& buffer);

AxisCounts count_tiles(const Layer& layer, const AcceleratorSpec& accel);
AxisCounts count_orders(const Layer& layer, const AcceleratorSpec& accel);
AxisCounts count_parallel(const Layer& layer, const AcceleratorSpec& accel);
AxisCounts count_shapes(const AcceleratorSpec& accel);

MapSpaceStats stats(const Layer& layer, const AcceleratorSpec& accel,
                    std::int64_t enumeration_cap = kJointEnumerationCap);

struct VennCounts {
    BigCount workload;      // |W|
    BigCount supported;     // |A ∩ W|
    BigCount potential;     // |C ∩ W|
};

struct VennReport {
    std::array<VennCounts, 4> per_axis;
    VennCounts combined;
    bool approximate = false;
};

VennReport venn_report(const Layer& layer, const AcceleratorSpec& accel,
                       std::int64_t enumeration_cap = kJointEnumerationCap);

/// Orders that differ only in where unit-extent dims sit are one class; keeps the
/// first member of each class in input order.
std::vector<LoopOrder> dedupe_orders(const Layer& layer, const std::vector<LoopOrder>& orders);

/// Restriction of `order` to the layer's effective dims.
std::vector<Dim> project_order(const Layer& layer, const LoopOrder& order);

/// Per-axis candidate lists spanning the accelerator's feasible space for one layer.
/// Orders are deduplicated by projection; every admitted pair and shape is kept.
struct SearchSpace {
    DimArray<std::vector<std::int64_t>> tile_choices;
    std::vector<LoopOrder> orders;
    std::vector<ParallelPair> pairs;
    std::vector<ArrayShape> shapes;

    /// Number of raw candidate combinations (before buffer legality).
    BigCount raw_size() const;
};

SearchSpace make_search_space(const Layer& layer, const AcceleratorSpec& accel);

/// Calls `visit` for every legal mapping of the search space. Returns the number visited.
std::int64_t for_each_feasible(const Layer& layer, const AcceleratorSpec& accel,
                               const std::function<void(const Mapping&)>& visit);

/// Calls `visit` for every factor tile tuple of the layer (odometer order, K outermost).
void for_each_factor_tiles(const Layer& layer, const std::function<void(const DimSizes&)>& visit);

std::string to_string(const BigCount& n);
double ratio(const BigCount& num, const BigCount& den);

}  // namespace flexdse
