#include <cmath>
#include <fstream>

#include "doctest.h"
#include "flexdse/dse.hpp"
#include "flexdse/fixtures.hpp"
#include "support.hpp"

using namespace flexdse;
using namespace testing;

namespace {

MseOptions exhaustive() {
    MseOptions o;
    o.mode = SearchMode::Exhaustive;
    return o;
}

}  // namespace

TEST_SUITE("dse") {

TEST_CASE("model totals are layer sums") {
    const auto& f = fixtures();
    const auto& accel = f.tiny.at("FullFlex-1111");
    const auto& l = f.tiny_models.at("tiny_cnn").layers.at(3);
    auto single = run_mse_over_model({"one", {l}}, accel, exhaustive());
    auto best = run_mse_layer(l, accel, exhaustive(), 0);
    CHECK(single.total_runtime == best.report.runtime_cycles);
    CHECK(single.total_energy == best.report.energy);

    auto twice = run_mse_over_model({"two", {l, l}}, accel, exhaustive());
    CHECK(twice.total_runtime == 2 * single.total_runtime);
    CHECK(twice.total_energy == doctest::Approx(2 * single.total_energy));

    const auto& cnn = f.tiny_models.at("tiny_cnn");
    auto full = run_mse_over_model(cnn, accel, exhaustive());
    auto in = run_mse_over_model(cnn, f.tiny.at("InFlex-0000"), exhaustive());
    CHECK(full.total_runtime <= in.total_runtime);
    std::int64_t sum = 0;
    for (const auto& r : full.layers)
        sum += r.report.runtime_cycles;
    CHECK(full.total_runtime == sum);
}

TEST_CASE("auto mode picks by feasible space size") {
    const auto& f = fixtures();
    MseOptions opts;
    opts.ga.population = 10;
    opts.ga.generations = 3;
    opts.ga.elite_count = 1;
    auto tiny = run_mse_layer(f.tiny_models.at("tiny_gemv").layers[0], f.tiny.at("FullFlex-1111"), opts, 0);
    CHECK(tiny.mode == SearchMode::Exhaustive);
    auto big = run_mse_layer(f.models.at("resnet_conv2_1").layers[0], f.desk.at("FullFlex-1111"), opts, 0);
    CHECK(big.mode == SearchMode::Ga);
    CHECK(big.evaluations == opts.ga.budget());
}

TEST_CASE("concurrency does not change results") {
    const auto& f = fixtures();
    auto serial = exhaustive();
    auto parallel = serial;
    parallel.jobs = 4;
    for (const auto& [name, m] : f.tiny_models) {
        auto a = run_mse_over_model(m, f.tiny.at("FullFlex-1111"), serial);
        auto b = run_mse_over_model(m, f.tiny.at("FullFlex-1111"), parallel);
        CHECK(a.total_runtime == b.total_runtime);
        for (std::size_t i = 0; i < a.layers.size(); ++i)
            CHECK(a.layers[i].mapping == b.layers[i].mapping);
    }
    CHECK(derive_seed(7, 0) != derive_seed(7, 1));
    CHECK(derive_seed(7, 0) == derive_seed(7, 0));
}

TEST_CASE("axis variants differ only on their axis") {
    auto base = desk_base();
    for (Axis axis : {Axis::Tile, Axis::Order, Axis::Parallel, Axis::Shape}) {
        auto v = make_axis_variants(base, axis);
        REQUIRE(v.size() >= 3);
        CHECK(v.front().name.rfind("InFlex-", 0) == 0);
        CHECK(v.back().name.rfind("FullFlex-", 0) == 0);
        for (const auto& a : v) {
            CHECK(a.n_pe == base.n_pe);
            CHECK(a.buffer.size == base.buffer.size);
            CHECK(a.baseline == base.baseline);
            for (Axis other : {Axis::Tile, Axis::Order, Axis::Parallel, Axis::Shape})
                if (other != axis)
                    CHECK(a.constraints.mode(other) == AxisMode::Fixed);
        }
    }
    auto tile = make_axis_variants(base, Axis::Tile);
    CHECK(tile[1].buffer.hard);
    CHECK(tile[1].buffer.ratios == std::array<std::int64_t, 3>{1, 1, 1});
    CHECK_FALSE(tile[2].buffer.hard);
    auto order = make_axis_variants(base, Axis::Order);
    CHECK(order[1].constraints.allowed_orders.size() == 3);
    auto shape = make_axis_variants(base, Axis::Shape);
    REQUIRE(shape.size() == 4);
    CHECK(shape[1].constraints.shape_block == 16);
    CHECK(shape[2].constraints.shape_block == 4);
    // Four PEs cannot host a 4x4 block alongside another shape.
    CHECK(make_axis_variants(tiny_base(), Axis::Shape).size() == 2);
}

TEST_CASE("axis isolation normalizes to the inflexible variant") {
    const auto& f = fixtures();
    auto r = axis_isolation(f.tiny_models.at("tiny_cnn"), tiny_base(), Axis::Parallel, exhaustive());
    CHECK(r.variants[r.baseline].name.rfind("InFlex-", 0) == 0);
    CHECK(r.normalized_runtime(0, r.baseline) == 1.0);
    CHECK(r.normalized_energy(0, r.baseline) == 1.0);
    for (std::size_t v = 0; v < r.variants.size(); ++v) {
        CHECK(r.normalized_runtime(0, v) <= 1.0);
        CHECK(r.cell(0, v).venn.size() == 5);
    }
    CHECK(r.geomean_speedup(r.variants.size() - 1) >= 1.0);
}

TEST_CASE("sweeps") {
    auto base = fixtures().desk.at("FullFlex-1000");
    auto sizes = make_buffer_sweep(base, {2048, 4096, 8192});
    REQUIRE(sizes.size() == 3);
    CHECK(sizes[0].buffer.size == 2048);
    CHECK(sizes[2].name == "FullFlex-1000-SB8192");
    auto arrays = make_array_sweep(fixtures().desk.at("FullFlex-0001"), {16, 64, 4096});
    REQUIRE(arrays.size() == 3);
    CHECK(arrays[0].baseline.shape.pes() <= 16);
    CHECK(arrays[2].n_pe == 4096);
    CHECK_THROWS_AS(make_buffer_sweep(fixtures().desk.at("InFlex-0000"), {64}), ValidationError);
}

TEST_CASE("future proof") {
    const auto& f = fixtures();
    const auto& cnn = f.tiny_models.at("tiny_cnn");
    auto r = future_proof(cnn, {cnn}, {f.tiny.at("InFlex-0000"), f.tiny.at("FullFlex-1111")}, {"InFlex-0000"}, "",
                          exhaustive());
    REQUIRE(r.designs.size() == 1);
    CHECK(r.variants[r.baseline].name == "InFlex-0000");
    CHECK(r.variants[0].baseline == r.designs[0].configuration);
    CHECK(r.geomean_speedup(1) >= 1.0);
    CHECK_THROWS_AS(design_fixed_accelerator(cnn, f.tiny.at("FullFlex-1111"), exhaustive()), ValidationError);
    CHECK_THROWS_AS(future_proof(cnn, {cnn}, {f.tiny.at("InFlex-0000")}, {"Nope"}, "", exhaustive()),
                    ValidationError);
}

TEST_CASE("experiment files") {
    for (const auto& entry : std::filesystem::directory_iterator(fixture_dir() / "experiments")) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_experiment(entry.path()));
    }
    auto e = load_experiment(fixture_dir() / "experiments" / "tiny_future_proof.json");
    CHECK(e.kind == ExperimentKind::FutureProof);
    CHECK(e.models.size() == 4);
    CHECK(e.options.ga.seed == 7);
    CHECK(e.options.mode == SearchMode::Exhaustive);

    auto dir = std::filesystem::temp_directory_path();
    auto bad = nlohmann::json::parse(R"({"kind":"class_sweep","models":[],"typo":1})");
    CHECK_THROWS_AS(experiment_from_json(bad, dir), ValidationError);
    auto unknown = nlohmann::json::parse(R"({"kind":"grid","models":[]})");
    CHECK_THROWS_AS(experiment_from_json(unknown, dir), ValidationError);
    Experiment empty;
    CHECK_THROWS_AS(run_experiment(empty), ValidationError);
}

}
