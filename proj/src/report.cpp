#include "flexdse/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace flexdse {

std::string fixed(double value, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << value;
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out)
            throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void commit(const std::filesystem::path& dir, const FileSet& files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : files) {
        std::filesystem::create_directories((dir / name).parent_path());
        write_atomic(dir / name, contents);
    }
}

namespace {

nlohmann::json count_json(const BigCount& n) {
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return n.convert_to<std::uint64_t>();
    return n.str();
}

std::string safe_name(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    return out;
}

std::string csv_header(std::string_view what) {
    return "# flexdse " + std::string(what) + " v" + std::to_string(kResultFormatVersion) + "\n";
}

std::string axis_name(Axis a) { return std::string(1, axis_char(a)); }

}  // namespace

nlohmann::json to_json(const AxisCounts& c) {
    return {{"axis", axis_name(c.axis)},
            {"w_count", count_json(c.w_count)},
            {"a_count", count_json(c.a_count)},
            {"c_count", count_json(c.c_count)},
            {"hw_flexion", c.hw_flexion},
            {"wl_flexion", c.wl_flexion}};
}

nlohmann::json to_json(const MapSpaceStats& s) {
    nlohmann::json j;
    j["per_axis"] = nlohmann::json::array();
    for (const auto& a : s.per_axis)
        j["per_axis"].push_back(to_json(a));
    j["combined_w"] = count_json(s.combined_w);
    j["combined_a"] = count_json(s.combined_a);
    j["combined_wf"] = s.combined_wf;
    j["combined_a_approximate"] = s.approximate;
    return j;
}

nlohmann::json to_json(const VennReport& v) {
    auto counts = [](const VennCounts& c) {
        return nlohmann::json{{"workload", count_json(c.workload)},
                              {"supported", count_json(c.supported)},
                              {"potential", count_json(c.potential)}};
    };
    nlohmann::json j;
    for (Axis a : kAllAxes)
        j[axis_name(a)] = counts(v.per_axis[static_cast<std::size_t>(a)]);
    j["combined"] = counts(v.combined);
    j["approximate"] = v.approximate;
    return j;
}

nlohmann::json to_json(const LayerResult& r) {
    return {{"layer", r.layer},
            {"mode", std::string(to_string(r.mode))},
            {"evaluations", r.evaluations},
            {"mapping", to_json(r.mapping)},
            {"cost", to_json(r.report)}};
}

nlohmann::json to_json(const ModelResult& r) {
    nlohmann::json j;
    j["model"] = r.model;
    j["variant"] = r.variant;
    j["total_runtime"] = r.total_runtime;
    j["total_energy"] = r.total_energy;
    j["total_edp"] = r.total_edp();
    j["overhead"] = to_json(r.overhead);
    j["layers"] = nlohmann::json::array();
    for (const auto& l : r.layers)
        j["layers"].push_back(to_json(l));
    return j;
}

FileSet flexion_files(const Model& model, const AcceleratorSpec& accel, const nlohmann::json& config) {
    nlohmann::json j;
    j["format_version"] = kResultFormatVersion;
    j["config"] = config;
    j["model"] = model.name;
    j["accelerator"] = accel.name;
    j["flex_class"] = accel.flex_class.str();
    j["layers"] = nlohmann::json::array();

    std::ostringstream csv;
    csv << csv_header("flexion");
    csv << "layer,axis,w_count,a_count,c_count,hw_flexion,wl_flexion,approximate\n";
    for (const auto& layer : model.layers) {
        const auto s = stats(layer, accel);
        auto rec = to_json(s);
        rec["layer"] = layer.name;
        rec["dims"] = to_json(layer);
        j["layers"].push_back(rec);
        for (const auto& a : s.per_axis)
            csv << layer.name << ',' << axis_name(a.axis) << ',' << a.w_count << ',' << a.a_count << ','
                << a.c_count << ',' << fixed(a.hw_flexion) << ',' << fixed(a.wl_flexion) << ",0\n";
        csv << layer.name << ",combined," << s.combined_w << ',' << s.combined_a << ",,,"
            << fixed(s.combined_wf) << ',' << (s.approximate ? 1 : 0) << '\n';
    }
    return {{"flexion.json", j.dump(2) + "\n"}, {"flexion.csv", csv.str()}};
}

FileSet mse_files(const ModelResult& result, const nlohmann::json& config) {
    nlohmann::json j = to_json(result);
    j["format_version"] = kResultFormatVersion;
    j["config"] = config;

    std::ostringstream csv;
    csv << csv_header("mse_history");
    csv << "layer,generation,best_objective\n";
    for (const auto& l : result.layers)
        for (std::size_t g = 0; g < l.history.size(); ++g)
            csv << l.layer << ',' << g << ',' << fixed(l.history[g]) << '\n';
    return {{"mse.json", j.dump(2) + "\n"}, {"mse_history.csv", csv.str()}};
}

FileSet dse_files(const DseResult& result, const nlohmann::json& config) {
    FileSet files;
    nlohmann::json manifest;
    manifest["format_version"] = kResultFormatVersion;
    manifest["kind"] = std::string(to_string(result.kind));
    manifest["objective"] = std::string(to_string(result.objective));
    manifest["seed"] = result.seed;
    manifest["config"] = config;
    manifest["baseline_variant"] = result.variants[result.baseline].name;
    manifest["models"] = nlohmann::json::array();
    for (const auto& m : result.models)
        manifest["models"].push_back(m.name);
    manifest["variants"] = nlohmann::json::array();
    for (const auto& v : result.variants)
        manifest["variants"].push_back(
            {{"name", v.name}, {"file", "variant_" + safe_name(v.name) + ".json"}});
    manifest["designs"] = nlohmann::json::array();
    for (const auto& d : result.designs)
        manifest["designs"].push_back({{"variant", d.variant},
                                       {"configuration", to_json(d.configuration)},
                                       {"design_objective", d.design_objective},
                                       {"evaluations", d.evaluations}});
    files["manifest.json"] = manifest.dump(2) + "\n";

    std::ostringstream venn;
    venn << csv_header("venn");
    venn << "model,layer,variant,axis,workload,supported,potential,approximate\n";

    for (std::size_t v = 0; v < result.variants.size(); ++v) {
        const auto& spec = result.variants[v];
        nlohmann::json vj;
        vj["format_version"] = kResultFormatVersion;
        vj["variant"] = spec.name;
        vj["spec"] = to_json(spec);
        vj["models"] = nlohmann::json::array();
        for (std::size_t m = 0; m < result.models.size(); ++m) {
            const auto& cell = result.cell(m, v);
            auto mj = to_json(cell.result);
            for (std::size_t l = 0; l < cell.venn.size(); ++l)
                mj["layers"][l]["venn"] = to_json(cell.venn[l]);
            vj["models"].push_back(mj);

            for (std::size_t l = 0; l < cell.venn.size(); ++l) {
                const auto& vr = cell.venn[l];
                auto row = [&](const std::string& axis, const VennCounts& c) {
                    venn << result.models[m].name << ',' << cell.result.layers[l].layer << ',' << spec.name
                         << ',' << axis << ',' << c.workload << ',' << c.supported << ',' << c.potential
                         << ',' << (vr.approximate ? 1 : 0) << '\n';
                };
                for (Axis a : kAllAxes)
                    row(axis_name(a), vr.per_axis[static_cast<std::size_t>(a)]);
                row("combined", vr.combined);
            }
        }
        files["variant_" + safe_name(spec.name) + ".json"] = vj.dump(2) + "\n";
    }
    files["venn.csv"] = venn.str();

    std::ostringstream matrix;
    matrix << csv_header("matrix");
    matrix << "model,variant,flex_class,total_runtime,total_energy,total_edp,norm_runtime,norm_energy,"
              "norm_edp,speedup,overhead_fraction,modes\n";
    for (std::size_t m = 0; m < result.models.size(); ++m) {
        for (std::size_t v = 0; v < result.variants.size(); ++v) {
            const auto& cell = result.cell(m, v);
            std::string modes;
            for (const auto& l : cell.result.layers) {
                if (!modes.empty()) modes += ';';
                modes += to_string(l.mode);
            }
            matrix << result.models[m].name << ',' << result.variants[v].name << ','
                   << result.variants[v].flex_class.str() << ',' << cell.result.total_runtime << ','
                   << fixed(cell.result.total_energy) << ',' << fixed(cell.result.total_edp()) << ','
                   << fixed(result.normalized_runtime(m, v)) << ',' << fixed(result.normalized_energy(m, v))
                   << ',' << fixed(result.normalized_edp(m, v)) << ','
                   << fixed(1.0 / result.normalized_runtime(m, v)) << ','
                   << fixed(cell.result.overhead.overhead_fraction) << ',' << modes << '\n';
        }
    }
    for (std::size_t v = 0; v < result.variants.size(); ++v)
        matrix << "geomean," << result.variants[v].name << ',' << result.variants[v].flex_class.str()
               << ",,,,,,," << fixed(result.geomean_speedup(v)) << ",,\n";
    files["matrix.csv"] = matrix.str();
    return files;
}

std::string report_csv(const std::filesystem::path& result_dir) {
    const auto manifest_path = result_dir / "manifest.json";
    if (!std::filesystem::exists(manifest_path))
        throw ValidationError("'" + result_dir.string() + "' has no manifest.json");
    const auto manifest = read_json_file(manifest_path);
    if (!manifest.contains("format_version") || manifest.at("format_version") != kResultFormatVersion)
        throw ValidationError("'" + manifest_path.string() + "': incompatible result format version");

    const auto models = manifest.at("models").get<std::vector<std::string>>();
    std::vector<std::string> variants;
    std::vector<nlohmann::json> variant_docs;
    for (const auto& v : manifest.at("variants")) {
        variants.push_back(v.at("name").get<std::string>());
        auto doc = read_json_file(result_dir / v.at("file").get<std::string>());
        if (doc.value("format_version", 0) != kResultFormatVersion)
            throw ValidationError("variant file for '" + variants.back() + "' has an incompatible version");
        variant_docs.push_back(std::move(doc));
    }
    const auto baseline_name = manifest.at("baseline_variant").get<std::string>();
    const auto base_it = std::find(variants.begin(), variants.end(), baseline_name);
    if (base_it == variants.end())
        throw ValidationError("manifest baseline variant '" + baseline_name + "' missing");
    const auto base = static_cast<std::size_t>(base_it - variants.begin());

    auto total = [&](std::size_t v, std::size_t m, const char* key) {
        return variant_docs[v].at("models").at(m).at(key).get<double>();
    };

    std::ostringstream out;
    out << csv_header("report");
    out << "metric,model";
    for (const auto& v : variants)
        out << ',' << v;
    out << '\n';
    for (const char* metric : {"runtime", "energy", "edp"}) {
        const std::string key = std::string("total_") + metric;
        std::vector<double> log_sum(variants.size(), 0.0);
        for (std::size_t m = 0; m < models.size(); ++m) {
            out << metric << ',' << models[m];
            const double denom = total(base, m, key.c_str());
            for (std::size_t v = 0; v < variants.size(); ++v) {
                const double ratio = total(v, m, key.c_str()) / denom;
                log_sum[v] += std::log(ratio);
                out << ',' << fixed(ratio);
            }
            out << '\n';
        }
        out << metric << ",geomean";
        for (std::size_t v = 0; v < variants.size(); ++v)
            out << ',' << fixed(std::exp(log_sum[v] / static_cast<double>(models.size())));
        out << '\n';
    }
    return out.str();
}

}  // namespace flexdse
