#include "doctest.h"
#include "flexdse/mapping.hpp"
#include "support.hpp"

using namespace flexdse;
using namespace testing;

TEST_SUITE("mapping") {

TEST_CASE("footprint closed form") {
    using enum Dim;
    auto g = embed_gemm(8, 8, 4);
    DimSizes t{{4, 4, 8, 1, 1, 1}};
    auto f = footprint(g, t);
    CHECK(f.weights == 16);
    CHECK(f.inputs == 32);
    CHECK(f.outputs == 32);

    CHECK(footprint(layer({{4, 2, 4, 4, 1, 1}}), {{1, 1, 1, 1, 1, 1}}) == TileFootprint{1, 1, 1});

    auto f2 = footprint(layer({{4, 2, 4, 4, 3, 3}}), {{2, 2, 2, 2, 3, 3}});
    CHECK(f2.weights == 36);
    CHECK(f2.inputs == 32);
    CHECK(f2.outputs == 8);

    CHECK_THROWS(footprint(layer({{4, 2, 4, 4, 3, 3}}), {{8, 2, 2, 2, 3, 3}}));
}

TEST_CASE("footprint matches counted coordinates") {
    const Layer layers[] = {
        layer({{4, 2, 6, 4, 3, 3}}, 1),
        layer({{4, 2, 6, 4, 3, 1}}, 2),
        layer({{6, 1, 4, 4, 3, 3}}, 1, LayerKind::DwConv),
        layer({{4, 3, 4, 2, 2, 2}}, 3),
    };
    for (const auto& l : layers) {
        for (auto k : divisors(l.dims[Dim::K]))
            for (auto c : divisors(l.dims[Dim::C]))
                for (auto y : divisors(l.dims[Dim::Y]))
                    for (auto x : divisors(l.dims[Dim::X]))
                        for (auto r : divisors(l.dims[Dim::R]))
                            for (auto s : divisors(l.dims[Dim::S])) {
                                DimSizes t{{k, c, y, x, r, s}};
                                auto f = footprint(l, t);
                                auto ref = counted_footprint(l, t);
                                REQUIRE(f.weights == ref.weights);
                                REQUIRE(f.inputs == ref.inputs);
                                REQUIRE(f.outputs == ref.outputs);
                            }
    }
}

TEST_CASE("mapping json round trip") {
    using enum Dim;
    Mapping m;
    m.tiles = {{2, 4, 8, 1, 3, 3}};
    m.order = {C, K, Y, X, S, R};
    m.parallel = {Y, X};
    m.shape = {16, 64};
    auto j = to_json(m);
    CHECK(j.at("order").size() == 6);
    CHECK(mapping_from_json(j) == m);
    CHECK(serialize(m) == serialize(mapping_from_json(nlohmann::json::parse(serialize(m)))));

    auto s = nlohmann::json::parse(R"({"tiles":{"K":1,"C":1,"Y":1,"X":1,"R":1,"S":1},
        "order":"YXKCRS","parallel":["K","C"],"shape":[32,32]})");
    auto parsed = mapping_from_json(s);
    CHECK(order_string(parsed.order) == "YXKCRS");
    CHECK(pair_string(parsed.parallel) == "KC");

    CHECK_THROWS(order_from_json("YXKCRR"));
    CHECK_THROWS(pair_from_json(nlohmann::json::parse(R"(["K","K"])")));
    CHECK_THROWS(mapping_from_json(nlohmann::json::parse(R"({"tiles":{"K":1},"order":"YXKCRS",
        "parallel":["K","C"],"shape":[1,1]})")));
}

}
