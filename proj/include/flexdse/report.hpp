#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "flexdse/dse.hpp"
#include "flexdse/mapspace.hpp"

namespace flexdse {

/// Version stamped into every result manifest and CSV header line.
inline constexpr int kResultFormatVersion = 1;
/// Digits after the decimal point for every non-integer number in CSV output.
inline constexpr int kCsvPrecision = 6;

std::string fixed(double value, int precision = kCsvPrecision);

/// Output bundle: relative file name -> contents. Built fully in memory, then committed.
using FileSet = std::map<std::string, std::string>;

/// Writes each file to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
void commit(const std::filesystem::path& dir, const FileSet& files);

nlohmann::json to_json(const AxisCounts& c);
nlohmann::json to_json(const MapSpaceStats& s);
nlohmann::json to_json(const VennReport& v);
nlohmann::json to_json(const LayerResult& r);
nlohmann::json to_json(const ModelResult& r);

/// flexion.json / flexion.csv for every layer of `model` on `accel`.
FileSet flexion_files(const Model& model, const AcceleratorSpec& accel, const nlohmann::json& config);

/// mse.json (best mapping + cost per layer) and mse_history.csv (GA convergence).
FileSet mse_files(const ModelResult& result, const nlohmann::json& config);

/// manifest.json, variant_<name>.json, matrix.csv, venn.csv.
FileSet dse_files(const DseResult& result, const nlohmann::json& config);

/// Normalized runtime/energy/EDP matrices plus geomean rows, from a dse result directory.
/// Throws ValidationError on a missing or incompatible manifest.
std::string report_csv(const std::filesystem::path& result_dir);

}  // namespace flexdse
