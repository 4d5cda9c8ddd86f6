#include <random>
#include <sstream>

#include "doctest.h"
#include "flexdse/cost_model.hpp"
#include "flexdse/fixtures.hpp"
#include "flexdse/mapspace.hpp"
#include "flexdse/oracle.hpp"
#include "support.hpp"

using namespace flexdse;
using namespace testing;

TEST_SUITE("oracle") {

TEST_CASE("unit trips fetch once") {
    auto l = layer({{4, 2, 4, 4, 3, 3}});
    Mapping m;
    m.tiles = l.dims;
    auto s = simulate(l, m);
    for (Tensor t : kAllTensors)
        CHECK(s[t] == 1);
    CHECK(s.visited_tiles == 1);
}

TEST_CASE("resident tensor survives irrelevant inner loop") {
    using enum Dim;
    Mapping m;
    m.tiles = {{2, 2, 1, 1, 1, 1}};
    m.order = {K, C, R, S, X, Y};
    auto a = simulate(layer({{4, 4, 1, 1, 1, 1}}), m);
    auto b = simulate(layer({{4, 4, 4, 1, 1, 1}}), m);
    CHECK(a[Tensor::Weights] == b[Tensor::Weights]);
    CHECK(b.visited_tiles == 4 * a.visited_tiles);
}

TEST_CASE("worked example matches closed form") {
    using enum Dim;
    auto l = layer({{4, 2, 4, 4, 3, 3}});
    Mapping m;
    m.tiles = {{2, 2, 2, 2, 3, 3}};
    m.order = {K, C, Y, X, R, S};
    auto s = simulate(l, m);
    // Trips: K 2, C 1, Y 2, X 2. Weights only change with K.
    CHECK(s[Tensor::Weights] == 2);
    CHECK(s[Tensor::Outputs] == 8);
    CHECK(s[Tensor::Inputs] == 8);
    CHECK(s.visited_tiles == 8);
    for (Tensor t : kAllTensors)
        CHECK(s[t] == fetch_count(l, m, t));
}

TEST_CASE("trace output") {
    auto l = layer({{4, 1, 2, 1, 1, 1}});
    Mapping m;
    m.tiles = {{2, 1, 1, 1, 1, 1}};
    std::ostringstream trace;
    auto s = simulate(l, m, &trace);
    const auto text = trace.str();
    CHECK(text.rfind("step,tensor,coordinate\n", 0) == 0);
    std::int64_t lines = std::count(text.begin(), text.end(), '\n') - 1;
    CHECK(lines == s[Tensor::Weights] + s[Tensor::Inputs] + s[Tensor::Outputs]);
}

TEST_CASE("equivalence with cost model on random mappings") {
    std::mt19937_64 rng(2024);
    const Layer layers[] = {
        layer({{4, 2, 4, 4, 3, 3}}),
        layer({{8, 4, 6, 2, 1, 3}}, 2),
        layer({{6, 1, 4, 4, 3, 3}}, 1, LayerKind::DwConv),
        embed_gemm(16, 4, 8),
        layer({{2, 6, 3, 8, 2, 1}}),
    };
    for (const auto& l : layers) {
        for (int i = 0; i < 150; ++i) {
            auto m = random_mapping(l, 16, rng);
            auto s = simulate(l, m);
            auto t = dram_traffic(l, m);
            const auto f = footprint(l, m.tiles);
            const std::int64_t fp[] = {f.weights, f.inputs, f.outputs};
            for (Tensor tensor : kAllTensors) {
                const auto k = static_cast<std::size_t>(tensor);
                REQUIRE(s[tensor] == t.fetches[k]);
                const auto expected = s[tensor] * fp[k] * (tensor == Tensor::Outputs && t.output_revisited ? 2 : 1);
                REQUIRE(t.traffic[k] == expected);
            }
            std::int64_t trips = 1;
            for (auto n : trip_counts(l, m.tiles))
                trips *= n;
            CHECK(s.visited_tiles == trips);
        }
    }
}

TEST_CASE("guard") {
    auto l = layer({{64, 64, 56, 56, 3, 3}});
    Mapping m;  // all-ones tiles: far too many steps
    CHECK_THROWS_AS(simulate(l, m), SpaceTooLarge);
}

TEST_CASE("exhaustive best") {
    const auto& tiny = fixtures().tiny;
    const auto& l = fixtures().tiny_models.at("tiny_cnn").layers.at(1);
    auto in = exhaustive_best(l, tiny.at("InFlex-0000"), Objective::Runtime, {});
    CHECK(in.mapping == clamp_baseline(l, tiny.at("InFlex-0000")));
    CHECK(in.evaluated == 1);

    const auto& full = tiny.at("FullFlex-1111");
    auto best = exhaustive_best(l, full, Objective::Runtime, {});
    std::int64_t seen = 0;
    for_each_feasible(l, full, [&](const Mapping& m) {
        ++seen;
        REQUIRE(evaluate(l, full, m, {}).runtime_cycles >= best.report.runtime_cycles);
    });
    CHECK(seen == best.evaluated);
    CHECK(is_legal(l, full, best.mapping));

    for (auto [part, fl] : {std::pair{"PartFlex-0100", "FullFlex-0100"}, {"PartFlex-0010", "FullFlex-0010"},
                            {"PartFlex-1000", "FullFlex-1000"}}) {
        auto p = exhaustive_best(l, tiny.at(part), Objective::Runtime, {});
        auto f = exhaustive_best(l, tiny.at(fl), Objective::Runtime, {});
        CHECK(f.report.runtime_cycles <= p.report.runtime_cycles);
    }

    auto repeat = exhaustive_best(l, full, Objective::Runtime, {});
    CHECK(repeat.mapping == best.mapping);

    const auto& big = fixtures().models.at("resnet_conv2_1").layers.at(0);
    CHECK_THROWS_AS(exhaustive_best(big, fixtures().desk.at("FullFlex-1111"), Objective::Runtime, {}),
                    SpaceTooLarge);
}

}
