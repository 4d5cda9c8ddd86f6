#include "flexdse/mapping.hpp"

#include <stdexcept>

namespace flexdse {

TileFootprint footprint(const Layer& layer, const DimSizes& tiles) {
    for (Dim d : kAllDims) {
        if (tiles[d] < 1 || tiles[d] > layer.dims[d])
            throw std::invalid_argument(std::string("footprint: tile ") + dim_char(d) +
                                        " outside [1, " + std::to_string(layer.dims[d]) + "]");
    }
    const auto tk = tiles[Dim::K], tc = tiles[Dim::C];
    const auto ty = tiles[Dim::Y], tx = tiles[Dim::X];
    const auto tr = tiles[Dim::R], ts = tiles[Dim::S];
    const auto in_h = (ty - 1) * layer.stride + tr;
    const auto in_w = (tx - 1) * layer.stride + ts;

    TileFootprint fp;
    fp.outputs = tk * ty * tx;
    if (layer.kind == LayerKind::DwConv) {
        fp.weights = tk * tr * ts;
        fp.inputs = tk * in_h * in_w;
    } else {
        fp.weights = tk * tc * tr * ts;
        fp.inputs = tc * in_h * in_w;
    }
    return fp;
}

bool is_permutation_of_dims(const LoopOrder& order) {
    std::array<bool, kNumDims> seen{};
    for (Dim d : order) {
        if (index_of(d) >= kNumDims || seen[index_of(d)])
            return false;
        seen[index_of(d)] = true;
    }
    return true;
}

std::string order_string(const LoopOrder& order) {
    std::string s;
    for (Dim d : order)
        s += dim_char(d);
    return s;
}

std::string pair_string(const ParallelPair& pair) {
    return {dim_char(pair.rows), dim_char(pair.cols)};
}

namespace {

Dim dim_from_json(const nlohmann::json& j) {
    if (!j.is_string())
        throw ParseError("expected a dimension letter");
    auto d = parse_dim(j.get<std::string>());
    if (!d)
        throw ValidationError("unknown dimension '" + j.get<std::string>() + "'");
    return *d;
}

std::vector<Dim> dims_from_json(const nlohmann::json& j) {
    std::vector<Dim> out;
    if (j.is_string()) {
        for (char c : j.get<std::string>()) {
            auto d = parse_dim(std::string_view(&c, 1));
            if (!d)
                throw ValidationError(std::string("unknown dimension '") + c + "'");
            out.push_back(*d);
        }
    } else if (j.is_array()) {
        for (const auto& e : j)
            out.push_back(dim_from_json(e));
    } else {
        throw ParseError("expected a dimension string or array");
    }
    return out;
}

}  // namespace

LoopOrder order_from_json(const nlohmann::json& j) {
    auto dims = dims_from_json(j);
    if (dims.size() != kNumDims)
        throw ValidationError("loop order must list all six dimensions");
    LoopOrder order;
    std::copy(dims.begin(), dims.end(), order.begin());
    if (!is_permutation_of_dims(order))
        throw ValidationError("loop order '" + order_string(order) + "' is not a permutation");
    return order;
}

ParallelPair pair_from_json(const nlohmann::json& j) {
    auto dims = dims_from_json(j);
    if (dims.size() != 2)
        throw ValidationError("parallel pair must name exactly two dimensions");
    if (dims[0] == dims[1])
        throw ValidationError("parallel pair dimensions must differ");
    return {dims[0], dims[1]};
}

nlohmann::json to_json(const Mapping& m) {
    nlohmann::json j;
    nlohmann::json tiles;
    for (Dim d : kAllDims)
        tiles[std::string(1, dim_char(d))] = m.tiles[d];
    j["tiles"] = tiles;
    j["order"] = nlohmann::json::array();
    for (Dim d : m.order)
        j["order"].push_back(std::string(1, dim_char(d)));
    j["parallel"] = {std::string(1, dim_char(m.parallel.rows)),
                     std::string(1, dim_char(m.parallel.cols))};
    j["shape"] = {m.shape.rows, m.shape.cols};
    return j;
}

Mapping mapping_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("mapping: expected an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "tiles" && key != "order" && key != "parallel" && key != "shape")
            throw ValidationError("mapping: unknown field '" + key + "'");
    }
    Mapping m;
    const auto& tiles = j.at("tiles");
    if (!tiles.is_object() || tiles.size() != kNumDims)
        throw ParseError("mapping: 'tiles' must be an object with all six dimensions");
    for (const auto& [key, value] : tiles.items()) {
        auto d = parse_dim(key);
        if (!d)
            throw ValidationError("mapping: unknown tile dimension '" + key + "'");
        if (!value.is_number_integer() || value.get<std::int64_t>() < 1)
            throw ValidationError("mapping: tile " + key + " must be a positive integer");
        m.tiles[*d] = value.get<std::int64_t>();
    }
    m.order = order_from_json(j.at("order"));
    m.parallel = pair_from_json(j.at("parallel"));
    const auto& shape = j.at("shape");
    if (!shape.is_array() || shape.size() != 2)
        throw ParseError("mapping: 'shape' must be [rows, cols]");
    m.shape = {shape[0].get<std::int64_t>(), shape[1].get<std::int64_t>()};
    if (m.shape.rows < 1 || m.shape.cols < 1)
        throw ValidationError("mapping: shape extents must be >= 1");
    return m;
}

std::string serialize(const Mapping& m) { return to_json(m).dump(); }

}  // namespace flexdse
