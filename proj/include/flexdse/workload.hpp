#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace flexdse {

/// Malformed input file (bad JSON, wrong types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The six convolution loop dimensions in canonical order.
enum class Dim : std::uint8_t { K = 0, C, Y, X, R, S };

inline constexpr std::size_t kNumDims = 6;
inline constexpr std::array<Dim, kNumDims> kAllDims = {Dim::K, Dim::C, Dim::Y,
                                                       Dim::X, Dim::R, Dim::S};

constexpr std::size_t index_of(Dim d) { return static_cast<std::size_t>(d); }
char dim_char(Dim d);
std::optional<Dim> parse_dim(std::string_view name);

/// Fixed-size map Dim -> T.
template <typename T>
struct DimArray {
    std::array<T, kNumDims> values{};

    constexpr T& operator[](Dim d) { return values[index_of(d)]; }
    constexpr const T& operator[](Dim d) const { return values[index_of(d)]; }

    constexpr auto begin() { return values.begin(); }
    constexpr auto end() { return values.end(); }
    constexpr auto begin() const { return values.begin(); }
    constexpr auto end() const { return values.end(); }

    friend constexpr bool operator==(const DimArray&, const DimArray&) = default;
    friend constexpr auto operator<=>(const DimArray&, const DimArray&) = default;
};

using DimSizes = DimArray<std::int64_t>;

enum class LayerKind : std::uint8_t { Conv2d, DwConv, Gemm };

std::string_view to_string(LayerKind kind);
std::optional<LayerKind> parse_layer_kind(std::string_view name);

/// How a GEMM (M, N, K) is folded onto the six convolution loops.
enum class GemmEmbedding : std::uint8_t {
    Contraction,  // M->K, N->Y, K->C (reduction stays on C)
    Literal,      // M->K, N->C, K->Y
};

/// One DNN layer as a bounded 6-deep loop nest. Y and X are output extents.
struct Layer {
    std::string name;
    DimSizes dims{{1, 1, 1, 1, 1, 1}};
    std::int64_t stride = 1;
    LayerKind kind = LayerKind::Conv2d;

    std::int64_t operator[](Dim d) const { return dims[d]; }

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct Model {
    std::string name;
    std::vector<Layer> layers;

    void validate() const;

    friend bool operator==(const Model&, const Model&) = default;
};

Layer embed_gemm(std::int64_t m, std::int64_t n, std::int64_t k,
                 GemmEmbedding mode = GemmEmbedding::Contraction);

/// Ascending divisors of n; n must be >= 1.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Dims with extent > 1, in canonical order.
std::vector<Dim> effective_dims(const Layer& layer);

Model model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Model& model);
nlohmann::json to_json(const Layer& layer);
Model load_model(const std::filesystem::path& path);

/// Reads a whole JSON file, mapping I/O and syntax problems to ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace flexdse
