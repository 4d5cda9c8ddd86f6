#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flexdse/ga.hpp"
#include "flexdse/mapspace.hpp"
#include "flexdse/oracle.hpp"
#include "flexdse/overhead.hpp"

namespace flexdse {

enum class SearchMode : std::uint8_t { Auto, Exhaustive, Ga };
std::string_view to_string(SearchMode m);
SearchMode parse_search_mode(std::string_view name);

struct MseOptions {
    GaConfig ga;
    EnergyParams energy;
    FeatureCostTable cost_table = default_cost_table();
    SearchMode mode = SearchMode::Auto;
    /// Auto mode searches exhaustively when the feasible space is at most this large.
    std::int64_t exhaustive_cap = kExhaustiveCap;
    int jobs = 1;
};

struct LayerResult {
    std::string layer;
    Mapping mapping;
    CostReport report;
    SearchMode mode = SearchMode::Exhaustive;  // the mode actually used
    std::int64_t evaluations = 0;
    std::vector<double> history;  // GA only
};

struct ModelResult {
    std::string model;
    std::string variant;
    std::vector<LayerResult> layers;
    std::int64_t total_runtime = 0;
    double total_energy = 0.0;
    OverheadReport overhead;

    double total_edp() const { return total_energy * static_cast<double>(total_runtime); }
    double objective(Objective o) const;
};

/// Per-layer seed: a splitmix64 mix of the run seed and the layer index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Best mapping for one layer, exhaustive or GA per `opts.mode`.
LayerResult run_mse_layer(const Layer& layer, const AcceleratorSpec& accel, const MseOptions& opts,
                          std::uint64_t seed);

/// Independent per-layer searches; totals are sums over layers.
ModelResult run_mse_over_model(const Model& model, const AcceleratorSpec& accel, const MseOptions& opts);

enum class ExperimentKind : std::uint8_t { AxisIsolation, BufferSweep, ArraySweep, ClassSweep, FutureProof };
std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view name);

struct Experiment {
    ExperimentKind kind = ExperimentKind::ClassSweep;
    std::vector<Model> models;               // evaluation models (rows)
    std::vector<AcceleratorSpec> variants;   // columns
    std::string baseline_variant;            // normalization column; defaults to the first variant
    std::optional<Model> design_model;       // future_proof only
    std::vector<std::string> fixed_design;   // future_proof: variants whose fixed config is searched
    std::optional<AcceleratorSpec> base;     // axis_isolation / sweeps
    std::optional<Axis> axis;                // axis_isolation
    std::vector<std::int64_t> buffer_sizes;  // buffer_sweep
    std::vector<std::int64_t> pe_counts;     // array_sweep
    MseOptions options;
};

/// Relative paths inside the file resolve against the file's directory.
Experiment experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
Experiment load_experiment(const std::filesystem::path& path);

struct DseCell {
    std::size_t model = 0;
    std::size_t variant = 0;
    ModelResult result;
    std::vector<VennReport> venn;  // one per layer
};

struct DesignPoint {
    std::string variant;
    Mapping configuration;
    double design_objective = 0.0;
    std::int64_t evaluations = 0;
};

struct DseResult {
    ExperimentKind kind = ExperimentKind::ClassSweep;
    Objective objective = Objective::Runtime;
    std::uint64_t seed = 0;
    std::vector<Model> models;
    std::vector<AcceleratorSpec> variants;
    std::size_t baseline = 0;
    std::vector<DseCell> cells;  // row-major: model * variants.size() + variant
    std::vector<DesignPoint> designs;

    const DseCell& cell(std::size_t model, std::size_t variant) const;
    /// Runtime, energy and EDP of a cell divided by the baseline column of the same row.
    double normalized_runtime(std::size_t model, std::size_t variant) const;
    double normalized_energy(std::size_t model, std::size_t variant) const;
    double normalized_edp(std::size_t model, std::size_t variant) const;
    /// Geometric mean over models of baseline_runtime / variant_runtime.
    double geomean_speedup(std::size_t variant) const;
};

/// InFlex / PartFlex / FullFlex variants of `base` that differ only along `axis`.
std::vector<AcceleratorSpec> make_axis_variants(const AcceleratorSpec& base, Axis axis);
std::vector<AcceleratorSpec> make_buffer_sweep(const AcceleratorSpec& base, const std::vector<std::int64_t>& sizes);
std::vector<AcceleratorSpec> make_array_sweep(const AcceleratorSpec& base, const std::vector<std::int64_t>& pe_counts);

/// Output-, weight- and input-stationary orders (reduction, weight-irrelevant and
/// input-irrelevant dims innermost respectively).
std::vector<LoopOrder> stationarity_orders();

/// Searches one fixed (class 0000) configuration for `variant` that minimizes the model-level
/// objective on `design`, applying it to every layer with tile clamping.
DesignPoint design_fixed_accelerator(const Model& design, const AcceleratorSpec& variant,
                                     const MseOptions& opts);

DseResult run_experiment(const Experiment& exp);

DseResult axis_isolation(const Model& model, const AcceleratorSpec& base, Axis axis, const MseOptions& opts);
DseResult future_proof(const Model& design_model, const std::vector<Model>& eval_models,
                       const std::vector<AcceleratorSpec>& variants,
                       const std::vector<std::string>& fixed_design, const std::string& baseline_variant,
                       const MseOptions& opts);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace flexdse
