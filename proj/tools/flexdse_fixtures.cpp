// Writes the shipped fixtures to disk, or checks that the files on disk match and that every
// tiny layer stays small enough for exhaustive search.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flexdse/fixtures.hpp"
#include "flexdse/mapspace.hpp"
#include "flexdse/oracle.hpp"
#include "flexdse/report.hpp"

namespace fs = std::filesystem;
using namespace flexdse;

namespace {

FileSet fixture_files() {
    const auto& f = fixtures();
    FileSet files;
    auto put = [&](const std::string& name, const nlohmann::json& j) { files[name] = j.dump(2) + "\n"; };
    for (const auto& [name, m] : f.models)
        put("models/" + name + ".json", to_json(m));
    for (const auto& [name, m] : f.tiny_models)
        put("models/" + name + ".json", to_json(m));
    for (const auto& [name, a] : f.desk)
        put("accels/desk/" + name + ".json", to_json(a));
    for (const auto& [name, a] : f.tiny)
        put("accels/tiny/" + name + ".json", to_json(a));
    put("cost_table.json", to_json(f.cost_table));
    put("energy.json", to_json(f.energy));
    return files;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int check(const fs::path& dir, bool verbose) {
    int failures = 0;
    for (const auto& [name, contents] : fixture_files()) {
        if (!fs::exists(dir / name)) {
            std::cerr << "missing fixture file " << (dir / name) << "\n";
            ++failures;
        } else if (slurp(dir / name) != contents) {
            std::cerr << "fixture file " << (dir / name) << " differs from fixtures()\n";
            ++failures;
        }
    }
    const auto& f = fixtures();
    for (const auto& [mname, m] : f.tiny_models) {
        for (const auto& layer : m.layers) {
            for (const auto& [aname, a] : f.tiny) {
                const auto s = stats(layer, a);
                if (verbose)
                    std::cout << mname << "/" << layer.name << " on " << aname << ": " << to_string(s.combined_a)
                              << (s.approximate ? " (approx)" : "") << "\n";
                if (s.approximate || s.combined_a > kExhaustiveCap) {
                    std::cerr << "tiny layer " << mname << "/" << layer.name << " on " << aname
                              << " has feasible space " << to_string(s.combined_a) << " > " << kExhaustiveCap << "\n";
                    ++failures;
                }
            }
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3 || (std::string(argv[1]) != "write" && std::string(argv[1]) != "check" &&
                      std::string(argv[1]) != "sizes")) {
        std::cerr << "usage: flexdse_fixtures write|check|sizes <fixtures-dir>\n";
        return 1;
    }
    const std::string cmd = argv[1];
    const fs::path dir = argv[2];
    try {
        if (cmd == "write") {
            for (const auto& sub : {"models", "accels/desk", "accels/tiny"})
                fs::create_directories(dir / sub);
            commit(dir, fixture_files());
            return 0;
        }
        return check(dir, cmd == "sizes");
    } catch (const std::exception& e) {
        std::cerr << "flexdse_fixtures: " << e.what() << "\n";
        return 2;
    }
}
