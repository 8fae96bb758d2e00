#include <catch2/catch_amalgamated.hpp>

#include "lcakit/json_io.hpp"
#include "lcakit/model.hpp"

using namespace lcakit;

namespace {
const std::string kData = LCAKIT_DATA_DIR;

bool has_rule(const ValidationReport& report, const std::string& ruleId) {
    for (const auto& v : report)
        if (v.ruleId == ruleId) return true;
    return false;
}
}  // namespace

TEST_CASE("shipped files validate cleanly") {
    CHECK(validate_bom(load_bom(kData + "/antminer_s9_bom.json")).empty());
    CHECK(validate_database(load_database(kData + "/db_demo_sphera.json")).empty());
    CHECK(validate_database(load_database(kData + "/db_demo_ecoinvent.json")).empty());
    CHECK(validate_method(load_method(kData + "/method_recipe2016_demo.json")).empty());
}

TEST_CASE("shipped S9 bill of materials has 189 mining ASICs") {
    auto bom = load_bom(kData + "/antminer_s9_bom.json");
    int asics = 0;
    for (const auto& c : bom.components)
        if (c.category == ComponentCategory::Ic &&
            c.name.find("BM1387B") != std::string::npos)
            ++asics;
    CHECK(asics == 189);
}

TEST_CASE("database validation flags broken invariants") {
    BackgroundDatabase db;
    db.id = "t";
    db.mode = DatabaseMode::Aggregated;
    db.flows.push_back({"co2-air", "co2", Compartment::Air, "kg"});

    SECTION("well-formed database gives an empty report") {
        db.processes.push_back({"p1", "", "kg", {{"co2-air", 1.0}}, {}});
        CHECK(validate_database(db).empty());
    }
    SECTION("unknown flow reference") {
        db.processes.push_back({"p1", "", "kg", {{"xx", 1.0}}, {}});
        CHECK(has_rule(validate_database(db), "unknown-flow"));
    }
    SECTION("aggregated database with tech inputs") {
        db.processes.push_back({"p1", "", "kg", {}, {}});
        db.processes.push_back({"p2", "", "kg", {}, {{"p1", 0.5}}});
        CHECK(has_rule(validate_database(db), "mode-mismatch"));
    }
    SECTION("negative amounts are rejected") {
        db.processes.push_back({"p1", "", "kg", {{"co2-air", -1.0}}, {}});
        CHECK(has_rule(validate_database(db), "negative-amount"));
    }
    SECTION("duplicate process id") {
        db.processes.push_back({"p1", "", "kg", {}, {}});
        db.processes.push_back({"p1", "", "kg", {}, {}});
        CHECK(has_rule(validate_database(db), "duplicate-process"));
    }
}

TEST_CASE("bom validation flags broken invariants") {
    BillOfMaterials bom;
    bom.deviceId = "t";

    SECTION("negative quantity") {
        bom.components.push_back({"a", "", ComponentCategory::Other, -1.0, {}});
        CHECK(has_rule(validate_bom(bom), "negative-quantity"));
    }
    SECTION("duplicate component id") {
        bom.components.push_back({"a", "", ComponentCategory::Other, 1.0, {}});
        bom.components.push_back({"a", "", ComponentCategory::Other, 1.0, {}});
        CHECK(has_rule(validate_bom(bom), "duplicate-id"));
    }
    SECTION("bad layer count") {
        bom.components.push_back({"a", "", ComponentCategory::Pcb, 1.0,
                                  {{"layerCount", 5.0}}});
        CHECK(has_rule(validate_bom(bom), "layer-count"));
    }
    SECTION("unknown subassembly member") {
        bom.subassemblies["g"] = {"missing"};
        CHECK(has_rule(validate_bom(bom), "unknown-subassembly-member"));
    }
}

TEST_CASE("validation is pure") {
    auto bom = load_bom(kData + "/antminer_s9_bom.json");
    bom.components[0].quantity = -2;
    auto a = validate_bom(bom);
    auto b = validate_bom(bom);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].entityId == b[i].entityId);
        CHECK(a[i].ruleId == b[i].ruleId);
    }
}

TEST_CASE("parse/serialize round trip on shipped files") {
    auto bom = load_bom(kData + "/antminer_s9_bom.json");
    CHECK(bom_from_json(bom_to_json(bom)) == bom);

    for (const char* f : {"/db_demo_sphera.json", "/db_demo_ecoinvent.json"}) {
        auto db = load_database(kData + f);
        CHECK(database_from_json(database_to_json(db)) == db);
    }
    auto method = load_method(kData + "/method_recipe2016_demo.json");
    CHECK(method_from_json(method_to_json(method)) == method);
}

TEST_CASE("files without schemaVersion are rejected") {
    json j = bom_to_json(load_bom(kData + "/antminer_s9_bom.json"));
    j.erase("schemaVersion");
    auto path = std::string("/tmp/lcakit_no_version.json");
    save_json(j, path);
    CHECK_THROWS_AS(load_bom(path), ValidationError);
}

TEST_CASE("malformed json reports a parse error") {
    std::string path = "/tmp/lcakit_malformed.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_bom(path), ValidationError);
}
