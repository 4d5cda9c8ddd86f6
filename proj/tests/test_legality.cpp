#include "doctest.h"
#include "flexdse/mapspace.hpp"
#include "support.hpp"

using namespace flexdse;
using namespace testing;

TEST_SUITE("legality") {

TEST_CASE("clause reasons") {
    using enum Dim;
    auto conv = layer({{64, 64, 56, 56, 3, 3}});
    auto full = full_flex(1024, 4096);
    Mapping m;
    m.tiles = {{8, 8, 4, 4, 3, 3}};
    m.parallel = {K, C};
    m.shape = {32, 32};
    CHECK(is_legal(conv, full, m));

    auto bad = m;
    bad.tiles[K] = 3;
    CHECK(is_legal(conv, full, bad).reason.starts_with("factor"));

    auto l = layer({{4, 2, 4, 4, 3, 3}});
    auto hard = full;
    hard.buffer = {90, true, {1, 1, 1}};
    Mapping h;
    h.tiles = {{2, 2, 2, 2, 3, 3}};  // weights 36 > floor(90 / 3)
    auto v = is_legal(l, hard, h);
    CHECK_FALSE(v.legal);
    CHECK(v.reason == "buffer(hard:weights)");

    auto soft = full;
    soft.buffer = {60, false, {1, 1, 1}};
    CHECK(is_legal(l, soft, h).reason == "buffer(soft)");  // 36 + 32 + 8 > 60

    auto big = m;
    big.shape = {64, 32};
    CHECK(is_legal(conv, full, big).reason == "pe_count");

    auto in = inflex(1024, 4096);
    in.baseline.tiles = {{8, 8, 4, 4, 3, 3}};
    in.baseline.shape = {32, 32};
    auto base = clamp_baseline(conv, in);
    CHECK(is_legal(conv, in, base));
    auto reordered = base;
    reordered.order = kCanonicalOrder;
    CHECK(is_legal(conv, in, reordered).reason == "order fixed");
    auto retiled = base;
    retiled.tiles[K] = 4;
    CHECK(is_legal(conv, in, retiled).reason == "tile fixed");
    auto repaired = base;
    repaired.parallel = {Y, X};
    CHECK(is_legal(conv, in, repaired).reason == "parallel fixed");
    auto reshaped = base;
    reshaped.shape = {16, 64};
    CHECK(is_legal(conv, in, reshaped).reason == "shape fixed");

    auto part = in;
    part.flex_class.parallel = true;
    part.constraints.parallel = AxisMode::Allowed;
    part.constraints.allowed_pairs = {{K, C}, {Y, X}};
    repaired.parallel = {Y, X};
    CHECK(is_legal(conv, part, repaired));
    repaired.parallel = {K, Y};
    CHECK(is_legal(conv, part, repaired).reason == "parallel not allowed");

    auto blocky = in;
    blocky.flex_class.shape = true;
    blocky.constraints.shape = AxisMode::Allowed;
    blocky.constraints.shape_block = 4;
    reshaped.shape = {16, 64};
    CHECK(is_legal(conv, blocky, reshaped));
    reshaped.shape = {6, 64};
    CHECK(is_legal(conv, blocky, reshaped).reason == "shape block");

    auto gemm_accel = full;
    gemm_accel.native_dims = 3;
    auto native = m;
    native.parallel = {R, S};
    CHECK(is_legal(conv, gemm_accel, native).reason == "parallel native");
}

TEST_CASE("clamping") {
    using enum Dim;
    auto l = layer({{4, 3, 6, 4, 1, 1}});
    auto t = clamp_tiles(l, {{8, 64, 4, 4, 3, 3}});
    CHECK(t[K] == 4);
    CHECK(t[C] == 3);
    CHECK(t[Y] == 3);
    CHECK(t[X] == 4);
    CHECK(t[R] == 1);
    CHECK(clamp_tiles(l, l.dims) == l.dims);
}

TEST_CASE("hard legality implies soft legality") {
    auto l = layer({{4, 4, 6, 6, 3, 3}});
    for (std::int64_t size : {30, 64, 90, 200, 500}) {
        BufferConfig hard{size, true, {1, 1, 1}};
        BufferConfig soft{size, false, {1, 1, 1}};
        for_each_factor_tiles(l, [&](const DimSizes& t) {
            if (buffer_fits(l, hard, t))
                REQUIRE(buffer_fits(l, soft, t));
        });
    }
}

TEST_CASE("monotone relaxation") {
    using enum Dim;
    // Every mapping legal under a constrained spec stays legal under any looser one.
    auto l = layer({{2, 2, 4, 1, 1, 1}});
    auto in = inflex(4, 16);
    in.baseline.shape = {2, 2};

    auto part = in;
    part.flex_class = FlexClass::parse("0111");
    part.constraints.order = AxisMode::Allowed;
    part.constraints.allowed_orders = {in.baseline.order, {K, C, R, S, Y, X}};
    part.constraints.parallel = AxisMode::Allowed;
    part.constraints.allowed_pairs = {{K, C}, {Y, X}};
    part.constraints.shape = AxisMode::All;

    auto looser = part;
    looser.flex_class = FlexClass::parse("1111");
    looser.constraints.tile = AxisMode::All;
    looser.constraints.order = AxisMode::All;
    looser.constraints.parallel = AxisMode::All;

    const auto space = make_search_space(l, fully_flexible(in));
    std::int64_t checked = 0;
    for_each_factor_tiles(l, [&](const DimSizes& t) {
        for (const auto& o : all_native_orders(6))
            for (const auto& p : space.pairs)
                for (auto s : space.shapes) {
                    Mapping m{t, o, p, s};
                    if (is_legal(l, in, m))
                        REQUIRE(is_legal(l, part, m));
                    if (is_legal(l, part, m)) {
                        REQUIRE(is_legal(l, looser, m));
                        ++checked;
                    }
                }
    });
    CHECK(checked > 1);
}

TEST_CASE("fully flexible spec") {
    auto in = inflex(16, 100, true);
    auto f = fully_flexible(in);
    CHECK(f.flex_class.str() == "1111");
    CHECK_FALSE(f.buffer.hard);
    CHECK(f.n_pe == in.n_pe);
    CHECK(f.buffer.size == in.buffer.size);
}

}
