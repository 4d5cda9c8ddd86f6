#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "flexdse/mapping.hpp"
#include "flexdse/workload.hpp"

namespace flexdse {

enum class Axis : std::uint8_t { Tile = 0, Order, Parallel, Shape };

inline constexpr std::array<Axis, 4> kAllAxes = {Axis::Tile, Axis::Order, Axis::Parallel,
                                                 Axis::Shape};

char axis_char(Axis a);
std::optional<Axis> parse_axis(std::string_view name);

/// The four flexibility bits (tile, order, parallelism, shape).
struct FlexClass {
    bool tile = false;
    bool order = false;
    bool parallel = false;
    bool shape = false;

    bool operator[](Axis a) const;
    bool& operator[](Axis a);

    /// Four-character form such as "1010".
    std::string str() const;
    static FlexClass parse(std::string_view bits);

    friend bool operator==(const FlexClass&, const FlexClass&) = default;
};

/// Buffer capacity meaning "no limit".
inline constexpr std::int64_t kUnlimitedBuffer = std::numeric_limits<std::int64_t>::max() / 8;

enum class Tensor : std::uint8_t { Weights = 0, Inputs, Outputs };
inline constexpr std::array<Tensor, 3> kAllTensors = {Tensor::Weights, Tensor::Inputs,
                                                      Tensor::Outputs};
std::string_view to_string(Tensor t);

struct BufferConfig {
    std::int64_t size = 4096;
    bool hard = false;
    /// Relative shares for weights, inputs, outputs (hard partitioning only).
    std::array<std::int64_t, 3> ratios{1, 1, 1};

    bool unlimited() const { return size >= kUnlimitedBuffer; }
    /// floor(P_t * size) for a hard partition.
    std::int64_t share(Tensor t) const;

    friend bool operator==(const BufferConfig&, const BufferConfig&) = default;
};

enum class AxisMode : std::uint8_t {
    Fixed,    // pinned to the baseline
    Allowed,  // explicit set (order/parallel) or block-composable shapes
    All,      // every choice the resources admit
};

struct FlexConstraints {
    AxisMode tile = AxisMode::Fixed;
    AxisMode order = AxisMode::Fixed;
    std::vector<LoopOrder> allowed_orders;
    AxisMode parallel = AxisMode::Fixed;
    std::vector<ParallelPair> allowed_pairs;
    AxisMode shape = AxisMode::Fixed;
    std::int64_t shape_block = 1;

    AxisMode mode(Axis a) const;

    friend bool operator==(const FlexConstraints&, const FlexConstraints&) = default;
};

struct AcceleratorSpec {
    std::string name;
    std::int64_t n_pe = 1024;
    BufferConfig buffer;
    double bandwidth = 16.0;  // DRAM elements per cycle
    int native_dims = 6;
    FlexClass flex_class;
    FlexConstraints constraints;
    Mapping baseline;

    /// Throws ValidationError on any class/constraint/baseline inconsistency.
    void validate() const;

    friend bool operator==(const AcceleratorSpec&, const AcceleratorSpec&) = default;
};

inline FlexClass class_of(const AcceleratorSpec& spec) { return spec.flex_class; }

/// Dims that may be ordered/parallelized natively (all six, or K, C, Y for a GEMM engine).
std::vector<Dim> native_dim_set(int native_dims);

/// Hardware-level choice lists (the accelerator's A_X per axis, workload-agnostic).
std::vector<LoopOrder> admitted_orders(const AcceleratorSpec& spec);
std::vector<ParallelPair> admitted_pairs(const AcceleratorSpec& spec);
/// Shapes are row-indexed: for each admitted row count h, the widest admitted w.
std::vector<ArrayShape> admitted_shapes(const AcceleratorSpec& spec);

/// Every full-dimension order a native_dims engine can run, in lexicographic rank.
std::vector<LoopOrder> all_native_orders(int native_dims);
std::vector<ParallelPair> all_native_pairs(int native_dims);
std::vector<ArrayShape> block_shapes(std::int64_t n_pe, std::int64_t block);

AcceleratorSpec accel_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AcceleratorSpec& spec);
AcceleratorSpec load_accel(const std::filesystem::path& path);

}  // namespace flexdse
