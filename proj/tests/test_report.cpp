#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "kzt/report.hpp"

using kzt::report::Json;

TEST_CASE("reports are schema-stable and round-trip through a JSON parser") {
    Json root = Json::object();
    root.set("schema", "1")
        .set("lemma", "g1-csigma")
        .set("lhs_partial", 0.58438692103737155)
        .set("c_max", 20000.0)
        .set("tail_bound", 2.3539116573750496)
        .set("rhs", 18.757223627292777)
        .set("pass", true)
        .set("list", Json::array().push(1).push(-2.5).push("x"));
    std::string text = root.dump(2);

    auto parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("schema") == "1");
    CHECK(parsed.at("lemma") == "g1-csigma");
    CHECK(parsed.at("pass") == true);
    CHECK(parsed.at("list").size() == 3);

    // 17 significant digits round-trip doubles exactly
    for (double v : {0.58438692103737155, 2.3539116573750496, 18.757223627292777, 1e-300,
                     123456789.12345678})
        CHECK(nlohmann::json::parse(Json::object().set("v", v).dump()).at("v").get<double>() == v);

    // identical construction gives identical bytes
    CHECK(text == root.dump(2));

    // key order is insertion order
    auto pos_schema = text.find("\"schema\"");
    auto pos_rhs = text.find("\"rhs\"");
    auto pos_pass = text.find("\"pass\"");
    CHECK(pos_schema < pos_rhs);
    CHECK(pos_rhs < pos_pass);
}
