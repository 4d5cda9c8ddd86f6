#include "flexdse/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "flexdse/dse.hpp"
#include "flexdse/report.hpp"

namespace flexdse {

namespace {

namespace fs = std::filesystem;

constexpr const char* kCostTableEnv = "FLEXDSE_COST_TABLE";

struct CommonFlags {
    std::string objective = "runtime";
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string format = "both";
    std::string out;
    std::string cost_table;
    std::string energy;
    std::string mode = "auto";
};

void require_file(const std::string& path, const char* what) {
    if (path.empty())
        throw ValidationError(std::string("missing --") + what);
    if (!fs::is_regular_file(path))
        throw ValidationError(std::string(what) + " file '" + path + "' does not exist");
}

FileSet filter_format(FileSet files, const std::string& format) {
    if (format == "both")
        return files;
    const std::string keep = "." + format;
    FileSet out;
    for (auto& [name, contents] : files)
        if (name.size() >= keep.size() && name.compare(name.size() - keep.size(), keep.size(), keep) == 0)
            out.emplace(name, std::move(contents));
    return out;
}

FeatureCostTable resolve_cost_table(const std::string& flag, nlohmann::json& config) {
    std::string path = flag;
    if (path.empty()) {
        if (const char* env = std::getenv(kCostTableEnv))
            path = env;
    }
    FeatureCostTable table = default_cost_table();
    if (!path.empty()) {
        require_file(path, "cost-table");
        table = load_cost_table(path);
    }
    config["cost_table"] = to_json(table);
    return table;
}

MseOptions resolve_options(const CommonFlags& f, nlohmann::json& config, MseOptions opts = {}) {
    opts.ga.objective = parse_objective(f.objective);
    if (f.seed)
        opts.ga.seed = *f.seed;
    opts.mode = parse_search_mode(f.mode);
    opts.jobs = std::max(1, f.jobs);
    if (!f.energy.empty()) {
        require_file(f.energy, "energy");
        opts.energy = load_energy_params(f.energy);
    }
    opts.cost_table = resolve_cost_table(f.cost_table, config);
    config["energy"] = to_json(opts.energy);
    config["ga"] = to_json(opts.ga);
    config["mode"] = std::string(to_string(opts.mode));
    config["exhaustive_cap"] = opts.exhaustive_cap;
    return opts;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool search_flags) {
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
    if (!search_flags)
        return;
    cmd->add_option("--objective", f.objective, "runtime | energy | edp")
        ->check(CLI::IsMember({"runtime", "energy", "edp"}));
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--mode", f.mode, "auto | exhaustive | ga")->check(CLI::IsMember({"auto", "exhaustive", "ga"}));
    cmd->add_option("--cost-table", f.cost_table,
                    std::string("Feature cost table JSON (default: $") + kCostTableEnv + " or built-in)");
    cmd->add_option("--energy", f.energy, "Energy parameters JSON");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flexibility-aware map-space and design-space exploration for DNN accelerators", "flexdse"};
    app.require_subcommand(1);

    std::string model_path, accel_path, experiment_path, results_dir;
    std::int64_t population = 0, generations = 0, cap = kJointEnumerationCap;
    CommonFlags flexion_flags, mse_flags, dse_flags, report_flags;

    auto* flexion = app.add_subcommand("flexion", "Count map spaces and flexion per layer");
    flexion->add_option("--model", model_path, "Model JSON")->required();
    flexion->add_option("--accel", accel_path, "Accelerator JSON")->required();
    flexion->add_option("--cap", cap, "Joint enumeration cap")->check(CLI::PositiveNumber);
    add_common(flexion, flexion_flags, false);

    auto* mse = app.add_subcommand("mse", "Best mapping per layer on one accelerator");
    mse->add_option("--model", model_path, "Model JSON")->required();
    mse->add_option("--accel", accel_path, "Accelerator JSON")->required();
    mse->add_option("--population", population, "GA population override")->check(CLI::PositiveNumber);
    mse->add_option("--generations", generations, "GA generations override")->check(CLI::PositiveNumber);
    add_common(mse, mse_flags, true);

    auto* dse = app.add_subcommand("dse", "Run an experiment file");
    dse->add_option("--experiment", experiment_path, "Experiment JSON")->required();
    add_common(dse, dse_flags, true);

    auto* report = app.add_subcommand("report", "Summarize a dse result directory");
    report->add_option("results", results_dir, "Result directory")->required();
    report->add_option("--out", report_flags.out, "Output CSV file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (flexion->parsed()) {
            require_file(model_path, "model");
            require_file(accel_path, "accel");
            const auto model = load_model(model_path);
            const auto accel = load_accel(accel_path);
            nlohmann::json config = {{"command", "flexion"},
                                     {"model_file", model_path},
                                     {"accel_file", accel_path},
                                     {"model", to_json(model)},
                                     {"accelerator", to_json(accel)},
                                     {"enumeration_cap", cap}};
            FileSet files;
            {
                // flexion_files uses the default cap; re-run with an explicit one when given.
                nlohmann::json j;
                files = flexion_files(model, accel, config);
                if (cap != kJointEnumerationCap) {
                    j = nlohmann::json::parse(files["flexion.json"]);
                    for (std::size_t i = 0; i < model.layers.size(); ++i) {
                        auto rec = to_json(stats(model.layers[i], accel, cap));
                        rec["layer"] = model.layers[i].name;
                        rec["dims"] = to_json(model.layers[i]);
                        j["layers"][i] = rec;
                    }
                    files["flexion.json"] = j.dump(2) + "\n";
                }
            }
            commit(flexion_flags.out.empty() ? "." : flexion_flags.out, filter_format(files, flexion_flags.format));
            return kExitOk;
        }
        if (mse->parsed()) {
            require_file(model_path, "model");
            require_file(accel_path, "accel");
            const auto model = load_model(model_path);
            const auto accel = load_accel(accel_path);
            nlohmann::json config = {{"command", "mse"},
                                     {"model_file", model_path},
                                     {"accel_file", accel_path},
                                     {"model", to_json(model)},
                                     {"accelerator", to_json(accel)}};
            MseOptions base;
            if (population) base.ga.population = population;
            if (generations) base.ga.generations = generations;
            if (base.ga.elite_count >= base.ga.population)
                base.ga.elite_count = base.ga.population - 1;
            const auto opts = resolve_options(mse_flags, config, base);
            const auto result = run_mse_over_model(model, accel, opts);
            commit(mse_flags.out.empty() ? "." : mse_flags.out,
                   filter_format(mse_files(result, config), mse_flags.format));
            return kExitOk;
        }
        if (dse->parsed()) {
            require_file(experiment_path, "experiment");
            auto exp = load_experiment(experiment_path);
            nlohmann::json config = {{"command", "dse"}, {"experiment_file", experiment_path}};
            config["experiment"] = read_json_file(experiment_path);
            // Explicit flags override the experiment file.
            auto flags = dse_flags;
            if (!flags.seed)
                flags.seed = exp.options.ga.seed;
            if (flags.objective == "runtime")
                flags.objective = std::string(to_string(exp.options.ga.objective));
            if (flags.mode == "auto")
                flags.mode = std::string(to_string(exp.options.mode));
            exp.options = resolve_options(flags, config, exp.options);
            const auto result = run_experiment(exp);
            commit(dse_flags.out.empty() ? "dse_results" : dse_flags.out, dse_files(result, config));
            return kExitOk;
        }
        if (report->parsed()) {
            if (!fs::is_directory(results_dir))
                throw ValidationError("result directory '" + results_dir + "' does not exist");
            const auto csv = report_csv(results_dir);
            if (report_flags.out.empty())
                out << csv;
            else
                write_atomic(report_flags.out, csv);
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        err << "flexdse: validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParseError& e) {
        err << "flexdse: parse error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "flexdse: error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace flexdse
