#include "flexdse/overhead.hpp"

namespace flexdse {

namespace {

struct FeatureField {
    const char* name;
    FeatureCost FeatureCostTable::*member;
};

constexpr FeatureField kFeatures[] = {
    {"tile_regs", &FeatureCostTable::tile_regs},
    {"soft_partition_mux", &FeatureCostTable::soft_partition_mux},
    {"order_addr_gens", &FeatureCostTable::order_addr_gens},
    {"order_pe_counter_reg", &FeatureCostTable::order_pe_counter_reg},
    {"parallel_addr_counters", &FeatureCostTable::parallel_addr_counters},
    {"parallel_pe_mux", &FeatureCostTable::parallel_pe_mux},
    {"shape_multicast_noc", &FeatureCostTable::shape_multicast_noc},
    {"shape_pe_demux", &FeatureCostTable::shape_pe_demux},
    {"reduction_noc", &FeatureCostTable::reduction_noc},
};

double non_negative(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ParseError(where + "." + key + " must be a number");
    const double x = v.get<double>();
    if (x < 0.0)
        throw ValidationError(where + "." + key + " must be non-negative");
    return x;
}

}  // namespace

FeatureCostTable cost_table_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("cost table: expected an object");
    FeatureCostTable t;
    for (const auto& [key, v] : j.items()) {
        if (key == "baseline" || key == "comment")
            continue;
        bool known = false;
        for (const auto& f : kFeatures) {
            if (key != f.name)
                continue;
            known = true;
            if (!v.is_object())
                throw ParseError("cost table: '" + key + "' must be an object");
            for (const auto& [k, _] : v.items())
                if (k != "area_units" && k != "energy_adder_per_access")
                    throw ValidationError("cost table: unknown field '" + key + "." + k + "'");
            (t.*f.member).area_units = non_negative(v, "area_units", key);
            (t.*f.member).energy_adder_per_access = non_negative(v, "energy_adder_per_access", key);
        }
        if (!known)
            throw ValidationError("cost table: unknown feature '" + key + "'");
    }
    for (const auto& f : kFeatures)
        if (!j.contains(f.name))
            throw ValidationError(std::string("cost table: missing feature '") + f.name + "'");
    const auto& b = j.at("baseline");
    for (const auto& [k, _] : b.items())
        if (k != "area_per_pe" && k != "area_per_buffer_element" && k != "area_fixed_noc")
            throw ValidationError("cost table: unknown field 'baseline." + k + "'");
    t.area_per_pe = non_negative(b, "area_per_pe", "baseline");
    t.area_per_buffer_element = non_negative(b, "area_per_buffer_element", "baseline");
    t.area_fixed_noc = non_negative(b, "area_fixed_noc", "baseline");
    return t;
}

nlohmann::json to_json(const FeatureCostTable& t) {
    nlohmann::json j;
    for (const auto& f : kFeatures)
        j[f.name] = {{"area_units", (t.*f.member).area_units},
                     {"energy_adder_per_access", (t.*f.member).energy_adder_per_access}};
    j["baseline"] = {{"area_per_pe", t.area_per_pe},
                     {"area_per_buffer_element", t.area_per_buffer_element},
                     {"area_fixed_noc", t.area_fixed_noc}};
    return j;
}

FeatureCostTable load_cost_table(const std::filesystem::path& path) {
    try {
        return cost_table_from_json(read_json_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

FeatureCostTable default_cost_table() {
    FeatureCostTable t;
    t.tile_regs = {200.0, 0.0};
    t.soft_partition_mux = {600.0, 0.003};
    t.order_addr_gens = {400.0, 0.001};
    t.order_pe_counter_reg = {1.5, 0.0};
    t.parallel_addr_counters = {300.0, 0.002};
    t.parallel_pe_mux = {2.0, 0.0};
    t.shape_multicast_noc = {1500.0, 0.002};
    t.shape_pe_demux = {2.5, 0.0};
    t.reduction_noc = {1000.0, 0.001};
    t.area_per_pe = 1000.0;
    t.area_per_buffer_element = 50.0;
    t.area_fixed_noc = 20000.0;
    return t;
}

OverheadReport overhead(const AcceleratorSpec& accel, const FeatureCostTable& table) {
    OverheadReport r;
    const double pes = static_cast<double>(accel.n_pe);
    const double buffer = accel.buffer.unlimited() ? 0.0 : static_cast<double>(accel.buffer.size);
    r.baseline_area = table.area_per_pe * pes + table.area_per_buffer_element * buffer + table.area_fixed_noc;

    auto add = [&](const char* name, const FeatureCost& f, double count) {
        r.feature_area[name] = f.area_units * count;
        r.flex_area += f.area_units * count;
        r.energy_adder += f.energy_adder_per_access;
    };
    const auto& fc = accel.flex_class;
    if (fc.tile) {
        add("tile_regs", table.tile_regs, 1.0);
        if (!accel.buffer.hard)
            add("soft_partition_mux", table.soft_partition_mux, 1.0);
    }
    if (fc.order) {
        add("order_addr_gens", table.order_addr_gens, 1.0);
        add("order_pe_counter_reg", table.order_pe_counter_reg, pes);
    }
    if (fc.parallel) {
        add("parallel_addr_counters", table.parallel_addr_counters, 1.0);
        add("parallel_pe_mux", table.parallel_pe_mux, pes);
    }
    if (fc.shape) {
        add("shape_multicast_noc", table.shape_multicast_noc, 1.0);
        add("shape_pe_demux", table.shape_pe_demux, pes);
        add("reduction_noc", table.reduction_noc, 1.0);
    }
    r.overhead_fraction = r.baseline_area > 0.0 ? r.flex_area / r.baseline_area : 0.0;
    return r;
}

nlohmann::json to_json(const OverheadReport& r) {
    return {{"baseline_area", r.baseline_area},
            {"flex_area", r.flex_area},
            {"overhead_fraction", r.overhead_fraction},
            {"energy_adder_per_access", r.energy_adder},
            {"feature_area", r.feature_area}};
}

EnergyParams with_adders(const EnergyParams& ep, const OverheadReport& r) {
    EnergyParams out = ep;
    out.e_buf += r.energy_adder;
    return out;
}

}  // namespace flexdse
