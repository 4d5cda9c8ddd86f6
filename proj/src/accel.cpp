#include "flexdse/accel.hpp"

#include <algorithm>
#include <set>

namespace flexdse {

char axis_char(Axis a) {
    static constexpr std::array<char, 4> kChars = {'T', 'O', 'P', 'S'};
    return kChars[static_cast<std::size_t>(a)];
}

std::optional<Axis> parse_axis(std::string_view name) {
    if (name == "T" || name == "tile") return Axis::Tile;
    if (name == "O" || name == "order") return Axis::Order;
    if (name == "P" || name == "parallel") return Axis::Parallel;
    if (name == "S" || name == "shape") return Axis::Shape;
    return std::nullopt;
}

bool FlexClass::operator[](Axis a) const {
    switch (a) {
        case Axis::Tile: return tile;
        case Axis::Order: return order;
        case Axis::Parallel: return parallel;
        case Axis::Shape: return shape;
    }
    return false;
}

bool& FlexClass::operator[](Axis a) {
    switch (a) {
        case Axis::Tile: return tile;
        case Axis::Order: return order;
        case Axis::Parallel: return parallel;
        case Axis::Shape: break;
    }
    return shape;
}

std::string FlexClass::str() const {
    std::string s;
    for (Axis a : kAllAxes)
        s += (*this)[a] ? '1' : '0';
    return s;
}

FlexClass FlexClass::parse(std::string_view bits) {
    if (bits.size() != 4)
        throw ValidationError("flex class must be four bits, got '" + std::string(bits) + "'");
    FlexClass fc;
    for (std::size_t i = 0; i < 4; ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw ValidationError("flex class must be four bits, got '" + std::string(bits) + "'");
        fc[kAllAxes[i]] = bits[i] == '1';
    }
    return fc;
}

std::string_view to_string(Tensor t) {
    switch (t) {
        case Tensor::Weights: return "weights";
        case Tensor::Inputs: return "inputs";
        case Tensor::Outputs: return "outputs";
    }
    return "?";
}

std::int64_t BufferConfig::share(Tensor t) const {
    const auto sum = static_cast<__int128>(ratios[0]) + ratios[1] + ratios[2];
    return static_cast<std::int64_t>(static_cast<__int128>(size) *
                                     ratios[static_cast<std::size_t>(t)] / sum);
}

AxisMode FlexConstraints::mode(Axis a) const {
    switch (a) {
        case Axis::Tile: return tile;
        case Axis::Order: return order;
        case Axis::Parallel: return parallel;
        case Axis::Shape: return shape;
    }
    return AxisMode::Fixed;
}

std::vector<Dim> native_dim_set(int native_dims) {
    if (native_dims == 3)
        return {Dim::K, Dim::C, Dim::Y};
    return {kAllDims.begin(), kAllDims.end()};
}

std::vector<LoopOrder> all_native_orders(int native_dims) {
    std::vector<LoopOrder> out;
    if (native_dims == 3) {
        std::array<Dim, 3> head = {Dim::K, Dim::C, Dim::Y};
        do {
            out.push_back({head[0], head[1], head[2], Dim::X, Dim::R, Dim::S});
        } while (std::next_permutation(head.begin(), head.end()));
        return out;
    }
    LoopOrder order = kCanonicalOrder;
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

std::vector<ParallelPair> all_native_pairs(int native_dims) {
    std::vector<ParallelPair> out;
    auto dims = native_dim_set(native_dims);
    for (Dim r : dims)
        for (Dim c : dims)
            if (r != c)
                out.push_back({r, c});
    return out;
}

std::vector<ArrayShape> block_shapes(std::int64_t n_pe, std::int64_t block) {
    std::vector<ArrayShape> out;
    const std::int64_t rows_choices = n_pe / (block * block);
    for (std::int64_t k = 1; k <= rows_choices; ++k) {
        const std::int64_t h = k * block;
        out.push_back({h, block * (n_pe / (h * block))});
    }
    return out;
}

std::vector<LoopOrder> admitted_orders(const AcceleratorSpec& spec) {
    switch (spec.constraints.order) {
        case AxisMode::Fixed: return {spec.baseline.order};
        case AxisMode::Allowed: return spec.constraints.allowed_orders;
        case AxisMode::All: return all_native_orders(spec.native_dims);
    }
    return {};
}

std::vector<ParallelPair> admitted_pairs(const AcceleratorSpec& spec) {
    switch (spec.constraints.parallel) {
        case AxisMode::Fixed: return {spec.baseline.parallel};
        case AxisMode::Allowed: return spec.constraints.allowed_pairs;
        case AxisMode::All: return all_native_pairs(spec.native_dims);
    }
    return {};
}

std::vector<ArrayShape> admitted_shapes(const AcceleratorSpec& spec) {
    switch (spec.constraints.shape) {
        case AxisMode::Fixed: return {spec.baseline.shape};
        case AxisMode::Allowed: return block_shapes(spec.n_pe, spec.constraints.shape_block);
        case AxisMode::All: return block_shapes(spec.n_pe, 1);
    }
    return {};
}

namespace {

void fail(const AcceleratorSpec& spec, const std::string& what) {
    throw ValidationError("accelerator '" + spec.name + "': " + what);
}

bool in_native(const std::vector<Dim>& native, Dim d) {
    return std::find(native.begin(), native.end(), d) != native.end();
}

}  // namespace

void AcceleratorSpec::validate() const {
    if (n_pe < 1) fail(*this, "n_pe must be >= 1");
    if (buffer.size < 1) fail(*this, "buffer size must be >= 1");
    if (buffer.hard) {
        for (auto r : buffer.ratios)
            if (r < 1) fail(*this, "hard partition ratios must be positive");
    }
    if (!(bandwidth > 0.0)) fail(*this, "bandwidth must be positive");
    if (native_dims != 3 && native_dims != 6) fail(*this, "native_dims must be 3 or 6");

    const auto& c = constraints;
    for (Axis a : kAllAxes) {
        const bool fixed = c.mode(a) == AxisMode::Fixed;
        if (flex_class[a] == fixed)
            fail(*this, std::string("class bit ") + axis_char(a) + "=" + (flex_class[a] ? "1" : "0") +
                            " inconsistent with its constraint");
    }
    if (c.tile == AxisMode::Allowed) fail(*this, "tile axis admits only fixed or flexible");

    const auto native = native_dim_set(native_dims);
    const auto native_orders = all_native_orders(native_dims);

    // Baseline.
    if (!is_permutation_of_dims(baseline.order)) fail(*this, "baseline order is not a permutation");
    if (std::find(native_orders.begin(), native_orders.end(), baseline.order) == native_orders.end())
        fail(*this, "baseline order not supported by the native operator");
    if (baseline.parallel.rows == baseline.parallel.cols)
        fail(*this, "baseline parallel dims must differ");
    if (!in_native(native, baseline.parallel.rows) || !in_native(native, baseline.parallel.cols))
        fail(*this, "baseline parallel dims not native");
    if (baseline.shape.rows < 1 || baseline.shape.cols < 1)
        fail(*this, "baseline shape must be positive");
    if (baseline.shape.pes() > n_pe) fail(*this, "baseline shape exceeds n_pe");
    for (Dim d : kAllDims)
        if (baseline.tiles[d] < 1) fail(*this, "baseline tiles must be >= 1");

    // Baseline tiles must fit the buffer on a stride-1 convolution of exactly that size.
    Layer ref;
    ref.dims = baseline.tiles;
    const auto fp = footprint(ref, baseline.tiles);
    if (buffer.hard) {
        if (fp.weights > buffer.share(Tensor::Weights) || fp.inputs > buffer.share(Tensor::Inputs) ||
            fp.outputs > buffer.share(Tensor::Outputs))
            fail(*this, "baseline tiles exceed the hard buffer partition");
    } else if (!buffer.unlimited() && fp.total() > buffer.size) {
        fail(*this, "baseline tiles exceed the buffer");
    }

    // Partial-flexibility sets.
    if (c.order == AxisMode::Allowed) {
        std::set<LoopOrder> uniq(c.allowed_orders.begin(), c.allowed_orders.end());
        if (uniq.size() != c.allowed_orders.size()) fail(*this, "duplicate allowed orders");
        if (uniq.size() < 2) fail(*this, "partially flexible order needs at least two orders");
        for (const auto& o : c.allowed_orders)
            if (std::find(native_orders.begin(), native_orders.end(), o) == native_orders.end())
                fail(*this, "allowed order " + order_string(o) + " not native");
        if (!uniq.contains(baseline.order)) fail(*this, "allowed orders must contain the baseline");
    }
    if (c.parallel == AxisMode::Allowed) {
        std::set<ParallelPair> uniq(c.allowed_pairs.begin(), c.allowed_pairs.end());
        if (uniq.size() != c.allowed_pairs.size()) fail(*this, "duplicate allowed parallel pairs");
        if (uniq.size() < 2) fail(*this, "partially flexible parallelism needs at least two pairs");
        for (const auto& p : c.allowed_pairs)
            if (p.rows == p.cols || !in_native(native, p.rows) || !in_native(native, p.cols))
                fail(*this, "allowed parallel pair " + pair_string(p) + " invalid");
        if (!uniq.contains(baseline.parallel)) fail(*this, "allowed pairs must contain the baseline");
    }
    if (c.shape == AxisMode::Allowed) {
        const auto b = c.shape_block;
        if (b < 1) fail(*this, "shape block must be >= 1");
        if (n_pe / (b * b) < 2) fail(*this, "shape block admits fewer than two shapes");
        if (baseline.shape.rows % b != 0 || baseline.shape.cols % b != 0)
            fail(*this, "baseline shape is not block-composable");
    }
}

namespace {

FlexConstraints constraints_from_json(const nlohmann::json& j, const FlexClass& fc) {
    FlexConstraints c;
    c.tile = fc.tile ? AxisMode::All : AxisMode::Fixed;
    c.order = fc.order ? AxisMode::All : AxisMode::Fixed;
    c.parallel = fc.parallel ? AxisMode::All : AxisMode::Fixed;
    c.shape = fc.shape ? AxisMode::All : AxisMode::Fixed;
    if (j.is_null())
        return c;
    if (!j.is_object())
        throw ParseError("constraints: expected an object");

    auto simple = [](const nlohmann::json& v, std::string_view flexible_word) -> std::optional<AxisMode> {
        if (!v.is_string())
            return std::nullopt;
        auto s = v.get<std::string>();
        if (s == "fixed") return AxisMode::Fixed;
        if (s == "all" || s == flexible_word) return AxisMode::All;
        throw ValidationError("constraints: unknown mode '" + s + "'");
    };

    for (const auto& [key, v] : j.items()) {
        if (key == "tile") {
            auto m = simple(v, "flexible");
            if (!m) throw ParseError("constraints.tile: expected \"fixed\" or \"flexible\"");
            c.tile = *m;
        } else if (key == "order") {
            if (auto m = simple(v, "all")) {
                c.order = *m;
            } else if (v.is_array()) {
                c.order = AxisMode::Allowed;
                for (const auto& o : v)
                    c.allowed_orders.push_back(order_from_json(o));
            } else {
                throw ParseError("constraints.order: expected mode string or list of orders");
            }
        } else if (key == "parallel") {
            if (auto m = simple(v, "all")) {
                c.parallel = *m;
            } else if (v.is_array()) {
                c.parallel = AxisMode::Allowed;
                for (const auto& p : v)
                    c.allowed_pairs.push_back(pair_from_json(p));
            } else {
                throw ParseError("constraints.parallel: expected mode string or list of pairs");
            }
        } else if (key == "shape") {
            if (auto m = simple(v, "all")) {
                c.shape = *m;
            } else if (v.is_object() && v.contains("block") && v.size() == 1) {
                c.shape = AxisMode::Allowed;
                c.shape_block = v.at("block").get<std::int64_t>();
            } else {
                throw ParseError("constraints.shape: expected mode string or {\"block\": b}");
            }
        } else {
            throw ValidationError("constraints: unknown field '" + key + "'");
        }
    }
    return c;
}

nlohmann::json constraints_to_json(const FlexConstraints& c) {
    auto mode_word = [](AxisMode m, const char* flexible) -> nlohmann::json {
        return m == AxisMode::Fixed ? "fixed" : flexible;
    };
    nlohmann::json j;
    j["tile"] = mode_word(c.tile, "flexible");
    if (c.order == AxisMode::Allowed) {
        j["order"] = nlohmann::json::array();
        for (const auto& o : c.allowed_orders)
            j["order"].push_back(order_string(o));
    } else {
        j["order"] = mode_word(c.order, "all");
    }
    if (c.parallel == AxisMode::Allowed) {
        j["parallel"] = nlohmann::json::array();
        for (const auto& p : c.allowed_pairs)
            j["parallel"].push_back(pair_string(p));
    } else {
        j["parallel"] = mode_word(c.parallel, "all");
    }
    if (c.shape == AxisMode::Allowed)
        j["shape"] = {{"block", c.shape_block}};
    else
        j["shape"] = mode_word(c.shape, "all");
    return j;
}

}  // namespace

AcceleratorSpec accel_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError("accelerator: expected a JSON object");
    static const std::set<std::string> kKeys = {"name",        "n_pe",       "buffer",
                                                "bandwidth",   "native_dims", "flex_class",
                                                "constraints", "baseline"};
    for (const auto& [key, _] : j.items())
        if (!kKeys.contains(key))
            throw ValidationError("accelerator: unknown field '" + key + "'");

    AcceleratorSpec spec;
    spec.name = j.value("name", std::string("accelerator"));
    spec.n_pe = j.at("n_pe").get<std::int64_t>();

    const auto& b = j.at("buffer");
    if (!b.is_object())
        throw ParseError("accelerator.buffer: expected an object");
    for (const auto& [key, _] : b.items())
        if (key != "size" && key != "partitioning" && key != "ratios")
            throw ValidationError("accelerator.buffer: unknown field '" + key + "'");
    const auto& size = b.at("size");
    if (size.is_string()) {
        if (size.get<std::string>() != "inf")
            throw ValidationError("accelerator.buffer.size: expected integer or \"inf\"");
        spec.buffer.size = kUnlimitedBuffer;
    } else {
        spec.buffer.size = size.get<std::int64_t>();
    }
    const auto part = b.value("partitioning", std::string("soft"));
    if (part == "hard")
        spec.buffer.hard = true;
    else if (part != "soft")
        throw ValidationError("accelerator.buffer.partitioning: expected soft or hard");
    if (b.contains("ratios")) {
        const auto& r = b.at("ratios");
        if (!r.is_array() || r.size() != 3)
            throw ParseError("accelerator.buffer.ratios: expected [weights, inputs, outputs]");
        for (std::size_t i = 0; i < 3; ++i)
            spec.buffer.ratios[i] = r[i].get<std::int64_t>();
    }

    spec.bandwidth = j.value("bandwidth", 16.0);
    spec.native_dims = j.value("native_dims", 6);
    spec.flex_class = FlexClass::parse(j.at("flex_class").get<std::string>());
    spec.constraints =
        constraints_from_json(j.contains("constraints") ? j.at("constraints") : nlohmann::json(),
                              spec.flex_class);
    spec.baseline = mapping_from_json(j.at("baseline"));
    spec.validate();
    return spec;
}

nlohmann::json to_json(const AcceleratorSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["n_pe"] = spec.n_pe;
    nlohmann::json b;
    if (spec.buffer.unlimited())
        b["size"] = "inf";
    else
        b["size"] = spec.buffer.size;
    b["partitioning"] = spec.buffer.hard ? "hard" : "soft";
    b["ratios"] = spec.buffer.ratios;
    j["buffer"] = b;
    j["bandwidth"] = spec.bandwidth;
    j["native_dims"] = spec.native_dims;
    j["flex_class"] = spec.flex_class.str();
    j["constraints"] = constraints_to_json(spec.constraints);
    j["baseline"] = to_json(spec.baseline);
    return j;
}

AcceleratorSpec load_accel(const std::filesystem::path& path) {
    auto j = read_json_file(path);
    try {
        return accel_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace flexdse
