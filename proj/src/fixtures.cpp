#include "flexdse/fixtures.hpp"

#include "flexdse/dse.hpp"

namespace flexdse {

namespace {

Layer conv(std::string name, DimSizes dims, std::int64_t stride = 1, LayerKind kind = LayerKind::Conv2d) {
    Layer l;
    l.name = std::move(name);
    l.dims = dims;
    l.stride = stride;
    l.kind = kind;
    l.validate();
    return l;
}

Layer gemm(std::string name, std::int64_t m, std::int64_t n, std::int64_t k) {
    auto l = embed_gemm(m, n, k);
    l.name = std::move(name);
    return l;
}

Model model(std::string name, std::vector<Layer> layers) {
    Model m{std::move(name), std::move(layers)};
    m.validate();
    return m;
}

AcceleratorSpec base_accel(std::string name, std::int64_t n_pe, std::int64_t buffer, DimSizes tiles,
                           ArrayShape shape) {
    using enum Dim;
    AcceleratorSpec a;
    a.name = std::move(name);
    a.n_pe = n_pe;
    a.buffer.size = buffer;
    a.baseline.tiles = tiles;
    a.baseline.order = {Y, X, K, C, R, S};
    a.baseline.parallel = {K, C};
    a.baseline.shape = shape;
    a.validate();
    return a;
}

Fixture build() {
    using enum LayerKind;
    Fixture f;

    f.models.emplace("toy_cnn", model("toy_cnn", {
        conv("conv1", {{16, 3, 32, 32, 3, 3}}),
        conv("conv2", {{32, 16, 16, 16, 3, 3}}),
        conv("dw3", {{32, 1, 16, 16, 3, 3}}, 1, DwConv),
        conv("pw4", {{64, 32, 16, 16, 1, 1}}),
        conv("conv5", {{64, 64, 8, 8, 3, 3}}, 1),
    }));
    f.models.emplace("toy_gemm_square", model("toy_gemm_square", {gemm("square", 128, 128, 128)}));
    f.models.emplace("toy_gemm_tall", model("toy_gemm_tall", {gemm("tall_skinny", 1024, 16, 64)}));
    f.models.emplace("toy_gemv", model("toy_gemv", {gemm("matvec", 512, 1, 512)}));
    f.models.emplace("toy_gemm_suite", model("toy_gemm_suite", {
        gemm("square", 128, 128, 128),
        gemm("tall_skinny", 1024, 16, 64),
        gemm("matvec", 512, 1, 512),
    }));
    f.models.emplace("resnet_conv2_1", model("resnet_conv2_1", {conv("conv2_1", {{64, 64, 56, 56, 3, 3}})}));

    // One-dimensional (X = S = 1) so that spatial parallelism means Y.
    f.tiny_models.emplace("tiny_cnn", model("tiny_cnn", {
        conv("t_conv1", {{2, 1, 8, 1, 3, 1}}),
        conv("t_conv2", {{2, 2, 8, 1, 3, 1}}),
        conv("t_dw3", {{2, 1, 8, 1, 3, 1}}, 1, DwConv),
        conv("t_pw4", {{4, 2, 4, 1, 1, 1}}),
        conv("t_conv5", {{4, 2, 4, 1, 3, 1}}),
    }));
    f.tiny_models.emplace("tiny_gemm_square", model("tiny_gemm_square", {gemm("t_square", 4, 4, 4)}));
    f.tiny_models.emplace("tiny_gemm_tall", model("tiny_gemm_tall", {gemm("t_tall", 16, 2, 4)}));
    f.tiny_models.emplace("tiny_gemv", model("tiny_gemv", {gemm("t_matvec", 8, 1, 8)}));

    f.desk = variant_family(desk_base());
    f.tiny = variant_family(tiny_base());
    f.cost_table = default_cost_table();
    return f;
}

}  // namespace

AcceleratorSpec desk_base() {
    return base_accel("InFlex-0000", 1024, 4096, {{8, 8, 8, 8, 3, 3}}, {32, 32});
}

AcceleratorSpec tiny_base() {
    return base_accel("InFlex-0000", 4, 64, {{2, 2, 2, 2, 1, 1}}, {2, 2});
}

std::map<std::string, AcceleratorSpec> variant_family(const AcceleratorSpec& base) {
    std::map<std::string, AcceleratorSpec> out;
    auto in = base;
    in.name = "InFlex-0000";
    out.emplace(in.name, in);
    for (Axis axis : {Axis::Tile, Axis::Order, Axis::Parallel, Axis::Shape})
        for (auto& v : make_axis_variants(base, axis))
            if (v.name.rfind("InFlex-", 0) != 0)
                out.emplace(v.name, v);

    auto full = base;
    full.name = "FullFlex-1111";
    full.flex_class = FlexClass::parse("1111");
    full.buffer.hard = false;
    full.constraints = {};
    full.constraints.tile = full.constraints.order = full.constraints.parallel = full.constraints.shape =
        AxisMode::All;
    full.validate();
    out.emplace(full.name, full);
    return out;
}

const Fixture& fixtures() {
    static const Fixture f = build();
    return f;
}

}  // namespace flexdse
