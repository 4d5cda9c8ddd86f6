// JSON strings cross the boundary; the Python package converts to and from dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flexdse/cli.hpp"
#include "flexdse/dse.hpp"
#include "flexdse/fixtures.hpp"
#include "flexdse/legality.hpp"
#include "flexdse/report.hpp"

namespace py = pybind11;
using namespace flexdse;
using nlohmann::json;

namespace {

Layer layer_from(const json& j) {
    return model_from_json({{"name", "_"}, {"layers", json::array({j})}}).layers.front();
}

MseOptions options(const std::string& objective, std::optional<std::uint64_t> seed, const std::string& mode,
                   int jobs, const std::string& energy, const std::string& cost_table) {
    MseOptions opts;
    opts.ga.objective = parse_objective(objective);
    if (seed)
        opts.ga.seed = *seed;
    opts.mode = parse_search_mode(mode);
    opts.jobs = std::max(1, jobs);
    if (!energy.empty())
        opts.energy = energy_params_from_json(json::parse(energy));
    if (!cost_table.empty())
        opts.cost_table = cost_table_from_json(json::parse(cost_table));
    return opts;
}

std::string flexion(const std::string& model, const std::string& accel, std::int64_t cap) {
    const auto m = model_from_json(json::parse(model));
    const auto a = accel_from_json(json::parse(accel));
    json out = {{"model", m.name}, {"accelerator", a.name}, {"layers", json::array()}};
    for (const auto& l : m.layers) {
        auto rec = to_json(stats(l, a, cap));
        rec["layer"] = l.name;
        rec["venn"] = to_json(venn_report(l, a, cap));
        out["layers"].push_back(rec);
    }
    return out.dump();
}

std::string evaluate_mapping(const std::string& layer, const std::string& accel, const std::string& mapping,
                             const std::string& energy) {
    const auto l = layer_from(json::parse(layer));
    const auto a = accel_from_json(json::parse(accel));
    const auto m = mapping_from_json(json::parse(mapping));
    const auto ep = energy.empty() ? EnergyParams{} : energy_params_from_json(json::parse(energy));
    const auto verdict = is_legal(l, a, m);
    json out = {{"legal", static_cast<bool>(verdict)}, {"reason", verdict.reason}};
    if (verdict)
        out["cost"] = to_json(evaluate(l, a, m, ep));
    return out.dump();
}

std::string mse(const std::string& model, const std::string& accel, const std::string& objective,
                std::optional<std::uint64_t> seed, const std::string& mode, int jobs, const std::string& energy,
                const std::string& cost_table) {
    const auto m = model_from_json(json::parse(model));
    const auto a = accel_from_json(json::parse(accel));
    const auto opts = options(objective, seed, mode, jobs, energy, cost_table);
    py::gil_scoped_release release;
    return to_json(run_mse_over_model(m, a, opts)).dump();
}

std::string hw_overhead(const std::string& accel, const std::string& cost_table) {
    const auto a = accel_from_json(json::parse(accel));
    const auto t = cost_table.empty() ? default_cost_table() : cost_table_from_json(json::parse(cost_table));
    return to_json(overhead(a, t)).dump();
}

std::map<std::string, std::string> experiment(const std::string& path, int jobs) {
    auto exp = load_experiment(path);
    exp.options.jobs = std::max(1, jobs);
    const json config = {{"command", "dse"}, {"experiment_file", path}, {"experiment", read_json_file(path)}};
    DseResult result;
    {
        py::gil_scoped_release release;
        result = run_experiment(exp);
    }
    auto files = dse_files(result, config);
    return {files.begin(), files.end()};
}

py::tuple cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
        py::gil_scoped_release release;
        code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

std::map<std::string, std::string> fixture_files() {
    const auto& f = fixtures();
    std::map<std::string, std::string> out;
    for (const auto& [name, m] : f.models)
        out["models/" + name + ".json"] = to_json(m).dump();
    for (const auto& [name, m] : f.tiny_models)
        out["models/" + name + ".json"] = to_json(m).dump();
    for (const auto& [name, a] : f.desk)
        out["accels/desk/" + name + ".json"] = to_json(a).dump();
    for (const auto& [name, a] : f.tiny)
        out["accels/tiny/" + name + ".json"] = to_json(a).dump();
    out["cost_table.json"] = to_json(f.cost_table).dump();
    out["energy.json"] = to_json(f.energy).dump();
    return out;
}

}  // namespace

PYBIND11_MODULE(_flexdse, m) {
    m.doc() = "flexdse native core";
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SpaceTooLarge>(m, "SpaceTooLarge", PyExc_RuntimeError);

    m.def("flexion", &flexion, py::arg("model"), py::arg("accel"), py::arg("cap") = kJointEnumerationCap);
    m.def("evaluate", &evaluate_mapping, py::arg("layer"), py::arg("accel"), py::arg("mapping"),
          py::arg("energy") = "");
    m.def("mse", &mse, py::arg("model"), py::arg("accel"), py::arg("objective") = "runtime",
          py::arg("seed") = py::none(), py::arg("mode") = "auto", py::arg("jobs") = 1, py::arg("energy") = "",
          py::arg("cost_table") = "");
    m.def("overhead", &hw_overhead, py::arg("accel"), py::arg("cost_table") = "");
    m.def("run_experiment", &experiment, py::arg("path"), py::arg("jobs") = 1);
    m.def("run_cli", &cli, py::arg("args"));
    m.def("fixture_files", &fixture_files);
}
