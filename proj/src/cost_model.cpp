#include "flexdse/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace flexdse {

EnergyParams energy_params_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("energy params: expected an object");
    EnergyParams ep;
    for (const auto& [key, v] : j.items()) {
        if (!v.is_number())
            throw ParseError("energy params: '" + key + "' must be a number");
        if (key == "e_dram") ep.e_dram = v.get<double>();
        else if (key == "e_buf") ep.e_buf = v.get<double>();
        else if (key == "e_mac") ep.e_mac = v.get<double>();
        else throw ValidationError("energy params: unknown field '" + key + "'");
    }
    if (ep.e_dram < 0 || ep.e_buf < 0 || ep.e_mac < 0)
        throw ValidationError("energy params must be non-negative");
    return ep;
}

nlohmann::json to_json(const EnergyParams& ep) {
    return {{"e_dram", ep.e_dram}, {"e_buf", ep.e_buf}, {"e_mac", ep.e_mac}};
}

EnergyParams load_energy_params(const std::filesystem::path& path) {
    try {
        return energy_params_from_json(read_json_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::Runtime: return "runtime";
        case Objective::Energy: return "energy";
        case Objective::Edp: return "edp";
    }
    return "?";
}

Objective parse_objective(std::string_view name) {
    if (name == "runtime") return Objective::Runtime;
    if (name == "energy") return Objective::Energy;
    if (name == "edp") return Objective::Edp;
    throw ValidationError("unknown objective '" + std::string(name) + "'");
}

TensorDims tensor_dims(LayerKind kind) {
    TensorDims td;
    auto set = [&](Tensor t, std::initializer_list<Dim> dims) {
        for (Dim d : dims)
            td.relevant[static_cast<std::size_t>(t)][d] = true;
    };
    if (kind == LayerKind::DwConv) {
        set(Tensor::Weights, {Dim::K, Dim::R, Dim::S});
        set(Tensor::Inputs, {Dim::K, Dim::Y, Dim::X, Dim::R, Dim::S});
    } else {
        set(Tensor::Weights, {Dim::K, Dim::C, Dim::R, Dim::S});
        set(Tensor::Inputs, {Dim::C, Dim::Y, Dim::X, Dim::R, Dim::S});
    }
    set(Tensor::Outputs, {Dim::K, Dim::Y, Dim::X});
    return td;
}

DimSizes trip_counts(const Layer& layer, const DimSizes& tiles) {
    DimSizes n;
    for (Dim d : kAllDims)
        n[d] = (layer.dims[d] + tiles[d] - 1) / tiles[d];
    return n;
}

std::int64_t fetch_count(const Layer& layer, const Mapping& m, Tensor t) {
    const auto td = tensor_dims(layer.kind);
    const auto n = trip_counts(layer, m.tiles);
    // Walk inward-out; stop at the first loop that both indexes t and actually iterates.
    std::size_t stop = 0;
    for (std::size_t pos = kNumDims; pos > 0; --pos) {
        const Dim d = m.order[pos - 1];
        if (td(t, d) && n[d] > 1) {
            stop = pos;
            break;
        }
    }
    std::int64_t fetches = 1;
    for (std::size_t pos = 0; pos < stop; ++pos)
        fetches *= n[m.order[pos]];
    return fetches;
}

TrafficBreakdown dram_traffic(const Layer& layer, const Mapping& m) {
    const auto fp = footprint(layer, m.tiles);
    const std::array<std::int64_t, 3> sizes = {fp.weights, fp.inputs, fp.outputs};
    const auto td = tensor_dims(layer.kind);
    const auto n = trip_counts(layer, m.tiles);

    TrafficBreakdown out;
    for (Tensor t : kAllTensors) {
        const auto i = static_cast<std::size_t>(t);
        out.fetches[i] = fetch_count(layer, m, t);
        out.traffic[i] = sizes[i] * out.fetches[i];
    }
    std::int64_t distinct_outputs = 1;
    for (Dim d : kAllDims)
        if (td(Tensor::Outputs, d))
            distinct_outputs *= n[d];
    const auto o = static_cast<std::size_t>(Tensor::Outputs);
    if (out.fetches[o] > distinct_outputs) {
        out.output_revisited = true;
        out.traffic[o] *= 2;
    }
    out.total = out.traffic[0] + out.traffic[1] + out.traffic[2];
    return out;
}

std::int64_t macs(const Layer& layer) {
    std::int64_t total = 1;
    for (Dim d : kAllDims) {
        if (layer.kind == LayerKind::DwConv && d == Dim::C)
            continue;
        total *= layer.dims[d];
    }
    return total;
}

std::int64_t compute_cycles(const Layer& layer, const Mapping& m) {
    const auto rows = m.parallel.rows, cols = m.parallel.cols;
    const auto fold_rows = (m.tiles[rows] + m.shape.rows - 1) / m.shape.rows;
    const auto fold_cols = (m.tiles[cols] + m.shape.cols - 1) / m.shape.cols;
    std::int64_t per_tile = fold_rows * fold_cols;
    for (Dim d : kAllDims) {
        if (d == rows || d == cols)
            continue;
        if (layer.kind == LayerKind::DwConv && d == Dim::C)
            continue;
        per_tile *= m.tiles[d];
    }
    std::int64_t tiles = 1;
    for (auto trips : trip_counts(layer, m.tiles))
        tiles *= trips;
    return per_tile * tiles;
}

double CostReport::objective(Objective o) const {
    switch (o) {
        case Objective::Runtime: return static_cast<double>(runtime_cycles);
        case Objective::Energy: return energy;
        case Objective::Edp: return edp;
    }
    return 0.0;
}

CostReport evaluate(const Layer& layer, const AcceleratorSpec& accel, const Mapping& m,
                    const EnergyParams& ep) {
    CostReport r;
    r.traffic = dram_traffic(layer, m);
    r.dram_traffic = r.traffic.total;
    r.macs = macs(layer);
    r.compute_cycles = compute_cycles(layer, m);
    r.buffer_accesses = 3 * r.macs;
    r.utilization = static_cast<double>(r.macs) /
                    (static_cast<double>(m.shape.pes()) * static_cast<double>(r.compute_cycles));
    const auto memory_cycles =
        static_cast<std::int64_t>(std::ceil(static_cast<double>(r.dram_traffic) / accel.bandwidth));
    r.runtime_cycles = std::max(r.compute_cycles, memory_cycles);
    r.energy = ep.e_dram * static_cast<double>(r.dram_traffic) +
               ep.e_buf * static_cast<double>(r.buffer_accesses) +
               ep.e_mac * static_cast<double>(r.macs);
    r.edp = r.energy * static_cast<double>(r.runtime_cycles);
    return r;
}

nlohmann::json to_json(const CostReport& r) {
    nlohmann::json j;
    j["runtime_cycles"] = r.runtime_cycles;
    j["compute_cycles"] = r.compute_cycles;
    j["dram_traffic"] = r.dram_traffic;
    j["dram_traffic_by_tensor"] = {{"weights", r.traffic.traffic[0]},
                                   {"inputs", r.traffic.traffic[1]},
                                   {"outputs", r.traffic.traffic[2]}};
    j["buffer_accesses"] = r.buffer_accesses;
    j["macs"] = r.macs;
    j["utilization"] = r.utilization;
    j["energy"] = r.energy;
    j["edp"] = r.edp;
    return j;
}

}  // namespace flexdse
