#include "doctest.h"
#include "flexdse/fixtures.hpp"
#include "flexdse/mapspace.hpp"
#include "support.hpp"

using namespace flexdse;
using namespace testing;

namespace {

nlohmann::json accel_json(const std::string& cls, const std::string& constraints, const std::string& shape = "[32,32]") {
    return nlohmann::json::parse(R"({
        "name": "a", "n_pe": 1024, "buffer": {"size": 4096}, "flex_class": ")" + cls + R"(",
        "constraints": )" + constraints + R"(,
        "baseline": {"tiles": {"K":8,"C":8,"Y":8,"X":8,"R":3,"S":3}, "order": "YXKCRS",
                     "parallel": ["K","C"], "shape": )" + shape + "}}");
}

}  // namespace

TEST_SUITE("accel") {

TEST_CASE("flex class strings") {
    CHECK(FlexClass::parse("1010").str() == "1010");
    CHECK(FlexClass::parse("1010").tile);
    CHECK_FALSE(FlexClass::parse("1010").order);
    CHECK_THROWS(FlexClass::parse("10"));
    CHECK_THROWS(FlexClass::parse("10a0"));
}

TEST_CASE("load and validate") {
    auto in = accel_from_json(accel_json("0000", "{}"));
    CHECK(class_of(in).str() == "0000");
    CHECK(in.n_pe == 1024);
    CHECK(in.buffer.size == 4096);

    CHECK_THROWS_AS(accel_from_json(accel_json("1000", R"({"tile":"fixed"})")), ValidationError);
    CHECK_NOTHROW(accel_from_json(accel_json("0000", "{}", "[16,64]")));
    CHECK_THROWS_AS(accel_from_json(accel_json("0000", "{}", "[64,64]")), ValidationError);

    CHECK(class_of(accel_from_json(accel_json("1111", "{}"))).str() == "1111");
    CHECK(class_of(accel_from_json(accel_json("1000", "{}"))).str() == "1000");
    CHECK(class_of(accel_from_json(accel_json("0001", "{}"))).str() == "0001");

    // Allowed lists must hold the baseline and more than one entry.
    CHECK_THROWS_AS(accel_from_json(accel_json("0010", R"({"parallel":["YX","KY"]})")), ValidationError);
    CHECK_THROWS_AS(accel_from_json(accel_json("0010", R"({"parallel":["KC"]})")), ValidationError);
    CHECK_NOTHROW(accel_from_json(accel_json("0010", R"({"parallel":["KC","YX"]})")));
    CHECK_NOTHROW(accel_from_json(accel_json("0001", R"({"shape":{"block":4}})")));
    CHECK_THROWS_AS(accel_from_json(accel_json("0001", R"({"shape":{"block":64}})")), ValidationError);
    CHECK_THROWS(accel_from_json(accel_json("0000", R"({"speed":"fast"})")));
}

TEST_CASE("json round trip") {
    for (const auto* family : {&fixtures().desk, &fixtures().tiny})
        for (const auto& [name, a] : *family) {
            CAPTURE(name);
            CHECK(accel_from_json(to_json(a)) == a);
            CHECK(load_accel(fixture_dir() / "accels" / (family == &fixtures().desk ? "desk" : "tiny") /
                             (name + ".json")) == a);
        }
}

TEST_CASE("admitted sets") {
    auto full = accel_from_json(accel_json("1111", "{}"));
    CHECK(admitted_orders(full).size() == 720);
    CHECK(admitted_pairs(full).size() == 30);
    CHECK(admitted_shapes(full).size() == 1024);
    auto gemm = full;
    gemm.native_dims = 3;
    CHECK(admitted_orders(gemm).size() == 6);
    CHECK(admitted_pairs(gemm).size() == 6);
    CHECK(block_shapes(1024, 4).size() == 64);
    CHECK(block_shapes(1024, 16).size() == 4);
    for (auto s : block_shapes(1024, 4)) {
        CHECK(s.rows % 4 == 0);
        CHECK(s.cols % 4 == 0);
        CHECK(s.pes() <= 1024);
    }
}

}
