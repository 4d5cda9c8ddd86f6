#include "flexdse/dse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "flexdse/legality.hpp"
#include "flexdse/oracle.hpp"

namespace flexdse {

std::string_view to_string(SearchMode m) {
    switch (m) {
        case SearchMode::Auto: return "auto";
        case SearchMode::Exhaustive: return "exhaustive";
        case SearchMode::Ga: return "ga";
    }
    return "?";
}

SearchMode parse_search_mode(std::string_view name) {
    if (name == "auto") return SearchMode::Auto;
    if (name == "exhaustive") return SearchMode::Exhaustive;
    if (name == "ga") return SearchMode::Ga;
    throw ValidationError("unknown search mode '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::AxisIsolation: return "axis_isolation";
        case ExperimentKind::BufferSweep: return "buffer_sweep";
        case ExperimentKind::ArraySweep: return "array_sweep";
        case ExperimentKind::ClassSweep: return "class_sweep";
        case ExperimentKind::FutureProof: return "future_proof";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    if (name == "axis_isolation") return ExperimentKind::AxisIsolation;
    if (name == "buffer_sweep") return ExperimentKind::BufferSweep;
    if (name == "array_sweep") return ExperimentKind::ArraySweep;
    if (name == "class_sweep") return ExperimentKind::ClassSweep;
    if (name == "future_proof") return ExperimentKind::FutureProof;
    throw ValidationError("unknown experiment kind '" + std::string(name) + "'");
}

double ModelResult::objective(Objective o) const {
    switch (o) {
        case Objective::Runtime: return static_cast<double>(total_runtime);
        case Objective::Energy: return total_energy;
        case Objective::Edp: return total_edp();
    }
    return 0.0;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

LayerResult run_mse_layer(const Layer& layer, const AcceleratorSpec& accel, const MseOptions& opts,
                          std::uint64_t seed) {
    const auto ep = with_adders(opts.energy, overhead(accel, opts.cost_table));
    SearchMode mode = opts.mode;
    if (mode == SearchMode::Auto)
        mode = stats(layer, accel).combined_a <= opts.exhaustive_cap ? SearchMode::Exhaustive : SearchMode::Ga;

    LayerResult r;
    r.layer = layer.name;
    r.mode = mode;
    if (mode == SearchMode::Exhaustive) {
        auto best = exhaustive_best(layer, accel, opts.ga.objective, ep, opts.exhaustive_cap);
        r.mapping = best.mapping;
        r.report = best.report;
        r.evaluations = best.evaluated;
    } else {
        GaConfig cfg = opts.ga;
        cfg.seed = seed;
        auto ga = search(layer, accel, cfg, ep);
        r.mapping = ga.mapping;
        r.report = ga.report;
        r.evaluations = ga.evaluations;
        r.history = std::move(ga.history);
    }
    return r;
}

namespace {

ModelResult assemble(const Model& model, const AcceleratorSpec& accel, const MseOptions& opts,
                     std::vector<LayerResult> layers) {
    ModelResult out;
    out.model = model.name;
    out.variant = accel.name;
    out.overhead = overhead(accel, opts.cost_table);
    out.layers = std::move(layers);
    for (const auto& l : out.layers) {
        out.total_runtime += l.report.runtime_cycles;
        out.total_energy += l.report.energy;
    }
    return out;
}

}  // namespace

ModelResult run_mse_over_model(const Model& model, const AcceleratorSpec& accel, const MseOptions& opts) {
    std::vector<LayerResult> layers(model.layers.size());
    parallel_for(layers.size(), opts.jobs, [&](std::size_t i) {
        layers[i] = run_mse_layer(model.layers[i], accel, opts, derive_seed(opts.ga.seed, i));
    });
    return assemble(model, accel, opts, std::move(layers));
}

std::vector<LoopOrder> stationarity_orders() {
    using enum Dim;
    return {
        {Y, X, K, C, R, S},  // output stationary
        {K, C, R, S, Y, X},  // weight stationary
        {C, Y, X, R, S, K},  // input stationary
    };
}

std::vector<AcceleratorSpec> make_axis_variants(const AcceleratorSpec& base, Axis axis) {
    std::string bits = "0000";
    bits[static_cast<std::size_t>(axis)] = '1';

    auto pinned = base;
    pinned.flex_class[axis] = false;
    switch (axis) {
        case Axis::Tile: pinned.constraints.tile = AxisMode::Fixed; break;
        case Axis::Order: pinned.constraints.order = AxisMode::Fixed; pinned.constraints.allowed_orders.clear(); break;
        case Axis::Parallel: pinned.constraints.parallel = AxisMode::Fixed; pinned.constraints.allowed_pairs.clear(); break;
        case Axis::Shape: pinned.constraints.shape = AxisMode::Fixed; pinned.constraints.shape_block = 1; break;
    }

    std::vector<AcceleratorSpec> out;
    auto in = pinned;
    in.name = "InFlex-" + bits;
    in.validate();
    out.push_back(in);

    auto flexible = pinned;
    flexible.flex_class[axis] = true;

    switch (axis) {
        case Axis::Tile: {
            auto part = flexible;
            part.name = "PartFlex-" + bits;
            part.constraints.tile = AxisMode::All;
            part.buffer.hard = true;
            part.buffer.ratios = {1, 1, 1};
            part.validate();
            out.push_back(part);
            break;
        }
        case Axis::Order: {
            auto part = flexible;
            part.name = "PartFlex-" + bits;
            part.constraints.order = AxisMode::Allowed;
            std::vector<LoopOrder> orders = {base.baseline.order};
            for (const auto& o : stationarity_orders())
                if (std::find(orders.begin(), orders.end(), o) == orders.end())
                    orders.push_back(o);
            if (orders.size() > 3)
                orders.resize(3);
            part.constraints.allowed_orders = orders;
            part.validate();
            out.push_back(part);
            break;
        }
        case Axis::Parallel: {
            auto part = flexible;
            part.name = "PartFlex-" + bits;
            part.constraints.parallel = AxisMode::Allowed;
            std::vector<ParallelPair> pairs = {base.baseline.parallel};
            for (ParallelPair p : {ParallelPair{Dim::K, Dim::C}, ParallelPair{Dim::Y, Dim::X}})
                if (pairs.size() < 2 && std::find(pairs.begin(), pairs.end(), p) == pairs.end())
                    pairs.push_back(p);
            part.constraints.allowed_pairs = pairs;
            part.validate();
            out.push_back(part);
            break;
        }
        case Axis::Shape: {
            const std::pair<const char*, std::int64_t> blocks[] = {{"-A", 16}, {"-B", 4}};
            for (const auto& [suffix, b] : blocks) {
                auto part = flexible;
                part.name = "PartFlex-" + bits + suffix;
                part.constraints.shape = AxisMode::Allowed;
                part.constraints.shape_block = b;
                try {
                    part.validate();
                } catch (const ValidationError&) {
                    continue;  // block does not compose the array (too few PEs or odd baseline)
                }
                out.push_back(part);
            }
            break;
        }
    }

    auto full = flexible;
    full.name = "FullFlex-" + bits;
    switch (axis) {
        case Axis::Tile: full.constraints.tile = AxisMode::All; full.buffer.hard = false; break;
        case Axis::Order: full.constraints.order = AxisMode::All; break;
        case Axis::Parallel: full.constraints.parallel = AxisMode::All; break;
        case Axis::Shape: full.constraints.shape = AxisMode::All; break;
    }
    full.validate();
    out.push_back(full);
    return out;
}

std::vector<AcceleratorSpec> make_buffer_sweep(const AcceleratorSpec& base, const std::vector<std::int64_t>& sizes) {
    std::vector<AcceleratorSpec> out;
    for (auto size : sizes) {
        auto v = base;
        v.buffer.size = size;
        v.name = base.name + "-SB" + std::to_string(size);
        v.validate();
        out.push_back(v);
    }
    return out;
}

std::vector<AcceleratorSpec> make_array_sweep(const AcceleratorSpec& base, const std::vector<std::int64_t>& pe_counts) {
    std::vector<AcceleratorSpec> out;
    for (auto n : pe_counts) {
        auto v = base;
        v.n_pe = n;
        v.name = base.name + "-PE" + std::to_string(n);
        if (v.baseline.shape.pes() > n || base.constraints.shape == AxisMode::All) {
            auto h = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
            while (h * h > n) --h;
            while ((h + 1) * (h + 1) <= n) ++h;
            v.baseline.shape = {h, n / h};
        }
        v.validate();
        out.push_back(v);
    }
    return out;
}

DesignPoint design_fixed_accelerator(const Model& design, const AcceleratorSpec& variant,
                                     const MseOptions& opts) {
    if (variant.flex_class.str() != "0000")
        throw ValidationError("fixed-design search needs an inflexible (0000) variant, got '" +
                              variant.name + "' of class " + variant.flex_class.str());
    design.validate();

    // A synthetic layer whose dims are effective wherever any design layer's are.
    Layer envelope;
    for (const auto& l : design.layers)
        for (Dim d : kAllDims)
            envelope.dims[d] = std::max(envelope.dims[d], l.dims[d]);

    GaProblem problem;
    for (Dim d : kAllDims) {
        std::set<std::int64_t> values;
        for (const auto& l : design.layers)
            for (auto v : divisors(l.dims[d]))
                values.insert(v);
        problem.space.tile_choices[d].assign(values.begin(), values.end());
    }
    problem.space.orders = dedupe_orders(envelope, all_native_orders(variant.native_dims));
    problem.space.pairs = all_native_pairs(variant.native_dims);
    problem.space.shapes = block_shapes(variant.n_pe, 1);

    problem.tiles_fit = [buffer = variant.buffer](const DimSizes& t) {
        Layer ref;
        ref.dims = t;
        return static_cast<bool>(buffer_fits(ref, buffer, t));
    };
    const auto ep = with_adders(opts.energy, overhead(variant, opts.cost_table));
    const auto objective = opts.ga.objective;
    problem.fitness = [&design, variant, ep, objective](const Mapping& config) {
        auto accel = variant;
        accel.baseline = config;
        std::int64_t runtime = 0;
        double energy = 0.0;
        for (const auto& layer : design.layers) {
            const auto m = clamp_baseline(layer, accel);
            if (!is_legal(layer, accel, m))
                return std::numeric_limits<double>::infinity();
            const auto r = evaluate(layer, accel, m, ep);
            runtime += r.runtime_cycles;
            energy += r.energy;
        }
        switch (objective) {
            case Objective::Runtime: return static_cast<double>(runtime);
            case Objective::Energy: return energy;
            case Objective::Edp: return energy * static_cast<double>(runtime);
        }
        return 0.0;
    };

    GaConfig cfg = opts.ga;
    cfg.seed = derive_seed(opts.ga.seed, 0xD5E);
    const auto run = run_ga(problem, cfg);
    if (!std::isfinite(run.best_fitness))
        throw InfeasibleSpace("no fixed configuration of '" + variant.name + "' runs every design layer");
    return {variant.name, run.best, run.best_fitness, run.evaluations};
}

const DseCell& DseResult::cell(std::size_t model, std::size_t variant) const {
    return cells.at(model * variants.size() + variant);
}

double DseResult::normalized_runtime(std::size_t model, std::size_t variant) const {
    return static_cast<double>(cell(model, variant).result.total_runtime) /
           static_cast<double>(cell(model, baseline).result.total_runtime);
}

double DseResult::normalized_energy(std::size_t model, std::size_t variant) const {
    return cell(model, variant).result.total_energy / cell(model, baseline).result.total_energy;
}

double DseResult::normalized_edp(std::size_t model, std::size_t variant) const {
    return cell(model, variant).result.total_edp() / cell(model, baseline).result.total_edp();
}

double DseResult::geomean_speedup(std::size_t variant) const {
    double log_sum = 0.0;
    for (std::size_t m = 0; m < models.size(); ++m)
        log_sum -= std::log(normalized_runtime(m, variant));
    return std::exp(log_sum / static_cast<double>(models.size()));
}

namespace {

DseResult evaluate_matrix(ExperimentKind kind, const std::vector<Model>& models,
                          const std::vector<AcceleratorSpec>& variants, const std::string& baseline_variant,
                          const MseOptions& opts) {
    if (models.empty())
        throw ValidationError("experiment needs at least one model");
    if (variants.empty())
        throw ValidationError("experiment needs at least one accelerator variant");

    DseResult result;
    result.kind = kind;
    result.objective = opts.ga.objective;
    result.seed = opts.ga.seed;
    result.models = models;
    result.variants = variants;
    if (!baseline_variant.empty()) {
        auto it = std::find_if(variants.begin(), variants.end(),
                               [&](const AcceleratorSpec& v) { return v.name == baseline_variant; });
        if (it == variants.end())
            throw ValidationError("baseline variant '" + baseline_variant + "' is not in the variant list");
        result.baseline = static_cast<std::size_t>(it - variants.begin());
    }
    std::set<std::string> names;
    for (const auto& v : variants)
        if (!names.insert(v.name).second)
            throw ValidationError("duplicate variant name '" + v.name + "'");

    struct Item {
        std::size_t model, variant, layer;
    };
    std::vector<Item> items;
    for (std::size_t m = 0; m < models.size(); ++m)
        for (std::size_t v = 0; v < variants.size(); ++v)
            for (std::size_t l = 0; l < models[m].layers.size(); ++l)
                items.push_back({m, v, l});

    std::vector<LayerResult> layer_results(items.size());
    std::vector<VennReport> venn(items.size());
    parallel_for(items.size(), opts.jobs, [&](std::size_t i) {
        const auto& it = items[i];
        const auto& layer = models[it.model].layers[it.layer];
        const auto& accel = variants[it.variant];
        layer_results[i] = run_mse_layer(layer, accel, opts, derive_seed(opts.ga.seed, it.layer));
        venn[i] = venn_report(layer, accel);
    });

    std::size_t pos = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (std::size_t v = 0; v < variants.size(); ++v) {
            DseCell cell;
            cell.model = m;
            cell.variant = v;
            std::vector<LayerResult> layers;
            for (std::size_t l = 0; l < models[m].layers.size(); ++l, ++pos) {
                layers.push_back(std::move(layer_results[pos]));
                cell.venn.push_back(std::move(venn[pos]));
            }
            cell.result = assemble(models[m], variants[v], opts, std::move(layers));
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

}  // namespace

DseResult axis_isolation(const Model& model, const AcceleratorSpec& base, Axis axis, const MseOptions& opts) {
    auto variants = make_axis_variants(base, axis);
    return evaluate_matrix(ExperimentKind::AxisIsolation, {model}, variants, variants.front().name, opts);
}

DseResult future_proof(const Model& design_model, const std::vector<Model>& eval_models,
                       const std::vector<AcceleratorSpec>& variants,
                       const std::vector<std::string>& fixed_design, const std::string& baseline_variant,
                       const MseOptions& opts) {
    auto designed = variants;
    std::vector<DesignPoint> designs;
    for (const auto& name : fixed_design) {
        auto it = std::find_if(designed.begin(), designed.end(),
                               [&](const AcceleratorSpec& v) { return v.name == name; });
        if (it == designed.end())
            throw ValidationError("fixed_design names unknown variant '" + name + "'");
        auto point = design_fixed_accelerator(design_model, *it, opts);
        it->baseline = point.configuration;
        it->validate();
        designs.push_back(std::move(point));
    }
    std::string baseline = baseline_variant;
    if (baseline.empty() && !fixed_design.empty())
        baseline = fixed_design.front();
    auto result = evaluate_matrix(ExperimentKind::FutureProof, eval_models, designed, baseline, opts);
    result.designs = std::move(designs);
    return result;
}

DseResult run_experiment(const Experiment& exp) {
    const auto& opts = exp.options;
    switch (exp.kind) {
        case ExperimentKind::ClassSweep:
            return evaluate_matrix(exp.kind, exp.models, exp.variants, exp.baseline_variant, opts);
        case ExperimentKind::AxisIsolation: {
            if (!exp.base || !exp.axis)
                throw ValidationError("axis_isolation needs 'base' and 'axis'");
            auto variants = make_axis_variants(*exp.base, *exp.axis);
            auto baseline = exp.baseline_variant.empty() ? variants.front().name : exp.baseline_variant;
            return evaluate_matrix(exp.kind, exp.models, variants, baseline, opts);
        }
        case ExperimentKind::BufferSweep: {
            if (!exp.base || exp.buffer_sizes.empty())
                throw ValidationError("buffer_sweep needs 'base' and 'buffer_sizes'");
            return evaluate_matrix(exp.kind, exp.models, make_buffer_sweep(*exp.base, exp.buffer_sizes),
                                   exp.baseline_variant, opts);
        }
        case ExperimentKind::ArraySweep: {
            if (!exp.base || exp.pe_counts.empty())
                throw ValidationError("array_sweep needs 'base' and 'pe_counts'");
            return evaluate_matrix(exp.kind, exp.models, make_array_sweep(*exp.base, exp.pe_counts),
                                   exp.baseline_variant, opts);
        }
        case ExperimentKind::FutureProof: {
            if (!exp.design_model)
                throw ValidationError("future_proof needs 'design_model'");
            return future_proof(*exp.design_model, exp.models, exp.variants, exp.fixed_design,
                                exp.baseline_variant, opts);
        }
    }
    throw ValidationError("unsupported experiment kind");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
}

Model model_entry(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (j.is_string())
        return load_model(resolve(base_dir, j.get<std::string>()));
    return model_from_json(j);
}

AcceleratorSpec accel_entry(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (j.is_string())
        return load_accel(resolve(base_dir, j.get<std::string>()));
    return accel_from_json(j);
}

GaConfig ga_from_json(const nlohmann::json& j, GaConfig cfg) {
    for (const auto& [key, v] : j.items()) {
        if (key == "population") cfg.population = v.get<std::int64_t>();
        else if (key == "generations") cfg.generations = v.get<std::int64_t>();
        else if (key == "mutation_rate") cfg.mutation_rate = v.get<double>();
        else if (key == "crossover_rate") cfg.crossover_rate = v.get<double>();
        else if (key == "elite_count") cfg.elite_count = v.get<std::int64_t>();
        else throw ValidationError("experiment.ga: unknown field '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

}  // namespace

Experiment experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object())
        throw ParseError("experiment: expected an object");
    static const std::set<std::string> kKeys = {
        "kind",      "models",       "variants",     "baseline_variant", "design_model",
        "fixed_design", "base",      "axis",         "buffer_sizes",     "pe_counts",
        "objective", "seed",         "mode",         "ga",               "energy",
        "exhaustive_cap", "name"};
    for (const auto& [key, _] : j.items())
        if (!kKeys.contains(key))
            throw ValidationError("experiment: unknown field '" + key + "'");

    Experiment exp;
    exp.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    for (const auto& m : j.at("models"))
        exp.models.push_back(model_entry(m, base_dir));
    if (j.contains("variants"))
        for (const auto& v : j.at("variants"))
            exp.variants.push_back(accel_entry(v, base_dir));
    exp.baseline_variant = j.value("baseline_variant", std::string());
    if (j.contains("design_model"))
        exp.design_model = model_entry(j.at("design_model"), base_dir);
    if (j.contains("fixed_design"))
        exp.fixed_design = j.at("fixed_design").get<std::vector<std::string>>();
    if (j.contains("base"))
        exp.base = accel_entry(j.at("base"), base_dir);
    if (j.contains("axis")) {
        auto axis = parse_axis(j.at("axis").get<std::string>());
        if (!axis)
            throw ValidationError("experiment: unknown axis '" + j.at("axis").get<std::string>() + "'");
        exp.axis = axis;
    }
    if (j.contains("buffer_sizes"))
        exp.buffer_sizes = j.at("buffer_sizes").get<std::vector<std::int64_t>>();
    if (j.contains("pe_counts"))
        exp.pe_counts = j.at("pe_counts").get<std::vector<std::int64_t>>();

    auto& opts = exp.options;
    if (j.contains("ga"))
        opts.ga = ga_from_json(j.at("ga"), opts.ga);
    if (j.contains("objective"))
        opts.ga.objective = parse_objective(j.at("objective").get<std::string>());
    if (j.contains("seed"))
        opts.ga.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode"))
        opts.mode = parse_search_mode(j.at("mode").get<std::string>());
    if (j.contains("energy")) {
        const auto& e = j.at("energy");
        opts.energy = e.is_string() ? load_energy_params(resolve(base_dir, e.get<std::string>()))
                                    : energy_params_from_json(e);
    }
    if (j.contains("exhaustive_cap"))
        opts.exhaustive_cap = j.at("exhaustive_cap").get<std::int64_t>();
    return exp;
}

Experiment load_experiment(const std::filesystem::path& path) {
    auto j = read_json_file(path);
    try {
        return experiment_from_json(j, path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace flexdse
