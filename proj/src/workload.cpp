#include "flexdse/workload.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace flexdse {

namespace {

constexpr std::array<char, kNumDims> kDimChars = {'K', 'C', 'Y', 'X', 'R', 'S'};

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         std::string_view where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key))
            throw ValidationError(std::string(where) + ": unknown field '" + key + "'");
    }
}

std::int64_t positive_int(const nlohmann::json& j, const std::string& key,
                          std::string_view where) {
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw ParseError(std::string(where) + ": field '" + key + "' must be an integer");
    auto value = v.get<std::int64_t>();
    if (value < 1)
        throw ValidationError(std::string(where) + ": field '" + key + "' must be >= 1");
    return value;
}

Layer layer_from_json(const nlohmann::json& j, std::size_t idx) {
    std::string where = "layer[" + std::to_string(idx) + "]";
    if (!j.is_object())
        throw ParseError(where + ": expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ParseError(where + ": missing string field 'kind'");
    auto kind = parse_layer_kind(j.at("kind").get<std::string>());
    if (!kind)
        throw ValidationError(where + ": unknown kind '" + j.at("kind").get<std::string>() + "'");

    std::string name = where;
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw ParseError(where + ": 'name' must be a string");
        name = j.at("name").get<std::string>();
    }

    if (*kind == LayerKind::Gemm && j.contains("M")) {
        reject_unknown_keys(j, {"name", "kind", "M", "N", "K", "embedding"}, where);
        auto mode = GemmEmbedding::Contraction;
        if (j.contains("embedding")) {
            auto e = j.at("embedding").get<std::string>();
            if (e == "literal")
                mode = GemmEmbedding::Literal;
            else if (e != "contraction")
                throw ValidationError(where + ": unknown embedding '" + e + "'");
        }
        Layer layer = embed_gemm(positive_int(j, "M", where), positive_int(j, "N", where),
                                 positive_int(j, "K", where), mode);
        layer.name = std::move(name);
        return layer;
    }

    reject_unknown_keys(j, {"name", "kind", "K", "C", "Y", "X", "R", "S", "stride"}, where);
    Layer layer;
    layer.name = std::move(name);
    layer.kind = *kind;
    for (Dim d : kAllDims) {
        std::string key(1, dim_char(d));
        layer.dims[d] = j.contains(key) ? positive_int(j, key, where) : 1;
    }
    if (j.contains("stride"))
        layer.stride = positive_int(j, "stride", where);
    return layer;
}

}  // namespace

char dim_char(Dim d) { return kDimChars[index_of(d)]; }

std::optional<Dim> parse_dim(std::string_view name) {
    if (name.size() != 1)
        return std::nullopt;
    for (Dim d : kAllDims)
        if (kDimChars[index_of(d)] == name[0])
            return d;
    return std::nullopt;
}

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv2d: return "CONV2D";
        case LayerKind::DwConv: return "DWCONV";
        case LayerKind::Gemm: return "GEMM";
    }
    return "?";
}

std::optional<LayerKind> parse_layer_kind(std::string_view name) {
    if (name == "CONV2D") return LayerKind::Conv2d;
    if (name == "DWCONV") return LayerKind::DwConv;
    if (name == "GEMM") return LayerKind::Gemm;
    return std::nullopt;
}

void Layer::validate() const {
    for (Dim d : kAllDims) {
        if (dims[d] < 1)
            throw ValidationError("layer '" + name + "': dimension " + dim_char(d) + " must be >= 1");
    }
    if (stride < 1)
        throw ValidationError("layer '" + name + "': stride must be >= 1");
    switch (kind) {
        case LayerKind::Conv2d:
            break;
        case LayerKind::DwConv:
            // Channels live on K; C carries no cross-channel reduction.
            if (dims[Dim::C] != 1)
                throw ValidationError("layer '" + name + "': DWCONV requires C = 1 (channels on K)");
            break;
        case LayerKind::Gemm:
            if (dims[Dim::R] != 1 || dims[Dim::S] != 1 || dims[Dim::X] != 1)
                throw ValidationError("layer '" + name + "': GEMM layers require X = R = S = 1");
            if (stride != 1)
                throw ValidationError("layer '" + name + "': GEMM layers require stride 1");
            break;
    }
}

void Model::validate() const {
    if (layers.empty())
        throw ValidationError("model '" + name + "' has no layers");
    for (const auto& layer : layers)
        layer.validate();
}

Layer embed_gemm(std::int64_t m, std::int64_t n, std::int64_t k, GemmEmbedding mode) {
    if (m < 1 || n < 1 || k < 1)
        throw ValidationError("GEMM dimensions must be >= 1");
    Layer layer;
    layer.kind = LayerKind::Gemm;
    layer.dims[Dim::K] = m;
    if (mode == GemmEmbedding::Contraction) {
        layer.dims[Dim::C] = k;
        layer.dims[Dim::Y] = n;
    } else {
        layer.dims[Dim::C] = n;
        layer.dims[Dim::Y] = k;
    }
    std::ostringstream os;
    os << "gemm_" << m << "x" << n << "x" << k;
    layer.name = os.str();
    return layer;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    if (n < 1)
        throw ValidationError("divisors: n must be >= 1");
    std::vector<std::int64_t> low, high;
    for (std::int64_t i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            low.push_back(i);
            if (i != n / i)
                high.push_back(n / i);
        }
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

std::vector<Dim> effective_dims(const Layer& layer) {
    std::vector<Dim> out;
    for (Dim d : kAllDims)
        if (layer.dims[d] > 1)
            out.push_back(d);
    return out;
}

Model model_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("model: expected a JSON object");
    reject_unknown_keys(j, {"name", "layers"}, "model");
    Model model;
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw ParseError("model: 'name' must be a string");
        model.name = j.at("name").get<std::string>();
    }
    if (!j.contains("layers") || !j.at("layers").is_array())
        throw ParseError("model: missing array field 'layers'");
    const auto& layers = j.at("layers");
    for (std::size_t i = 0; i < layers.size(); ++i)
        model.layers.push_back(layer_from_json(layers[i], i));
    model.validate();
    return model;
}

nlohmann::json to_json(const Layer& layer) {
    nlohmann::json j;
    j["name"] = layer.name;
    j["kind"] = std::string(to_string(layer.kind));
    for (Dim d : kAllDims)
        j[std::string(1, dim_char(d))] = layer.dims[d];
    j["stride"] = layer.stride;
    return j;
}

nlohmann::json to_json(const Model& model) {
    nlohmann::json j;
    j["name"] = model.name;
    j["layers"] = nlohmann::json::array();
    for (const auto& layer : model.layers)
        j["layers"].push_back(to_json(layer));
    return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

Model load_model(const std::filesystem::path& path) {
    auto j = read_json_file(path);
    try {
        return model_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace flexdse
