#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lcakit/errors.hpp"
#include "lcakit/model.hpp"
#include "lcakit/scaling.hpp"
#include "lcakit/scenario.hpp"

namespace lcakit {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

namespace io {

inline json parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot open file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("parse error in '" + path + "': " + e.what());
    }
}

inline void check_schema_version(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("schemaVersion") || !j["schemaVersion"].is_string() ||
        j["schemaVersion"].get<std::string>() != kSchemaVersion)
        throw ValidationError("file '" + path + "' lacks schemaVersion \"" +
                              kSchemaVersion + "\"");
}

inline const json& require(const json& j, const char* key, const std::string& context) {
    if (!j.contains(key))
        throw ValidationError(context + ": missing field '" + key + "'");
    return j.at(key);
}

inline double number(const json& j, const std::string& context) {
    if (!j.is_number())
        throw ValidationError(context + ": expected a number");
    return j.get<double>();
}

inline SparseVector sparse_vector(const json& j, const std::string& context) {
    SparseVector out;
    if (j.is_null()) return out;
    if (!j.is_object())
        throw ValidationError(context + ": expected an object of id -> amount");
    for (const auto& [key, value] : j.items())
        out[key] = number(value, context + "." + key);
    return out;
}

inline json to_json(const SparseVector& v) {
    json j = json::object();
    for (const auto& [key, value] : v)
        j[key] = value;
    return j;
}

}  // namespace io

// --------------------------------------------------------------------------
// BillOfMaterials

inline BillOfMaterials bom_from_json(const json& j) {
    BillOfMaterials bom;
    bom.deviceId = io::require(j, "deviceId", "bill of materials").get<std::string>();
    for (const auto& cj : io::require(j, "components", "bill of materials")) {
        Component c;
        c.id = io::require(cj, "id", "component").get<std::string>();
        c.name = cj.value("name", "");
        std::string cat = io::require(cj, "category", "component '" + c.id + "'").get<std::string>();
        auto category = component_category_from_string(cat);
        if (!category)
            throw ValidationError("component '" + c.id + "': unknown category '" + cat + "'");
        c.category = *category;
        c.quantity = io::number(io::require(cj, "quantity", "component '" + c.id + "'"),
                                "component '" + c.id + "'.quantity");
        if (cj.contains("attributes"))
            for (const auto& [key, value] : cj.at("attributes").items())
                c.attributes[key] = io::number(value, "component '" + c.id + "'." + key);
        bom.components.push_back(std::move(c));
    }
    if (j.contains("subassemblies"))
        for (const auto& [name, members] : j.at("subassemblies").items())
            for (const auto& m : members)
                bom.subassemblies[name].push_back(m.get<std::string>());
    return bom;
}

inline json bom_to_json(const BillOfMaterials& bom) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["deviceId"] = bom.deviceId;
    j["components"] = json::array();
    for (const auto& c : bom.components) {
        json cj;
        cj["id"] = c.id;
        cj["name"] = c.name;
        cj["category"] = to_string(c.category);
        cj["quantity"] = c.quantity;
        if (!c.attributes.empty()) cj["attributes"] = io::to_json(c.attributes);
        j["components"].push_back(std::move(cj));
    }
    if (!bom.subassemblies.empty()) {
        j["subassemblies"] = json::object();
        for (const auto& [name, members] : bom.subassemblies)
            j["subassemblies"][name] = members;
    }
    return j;
}

// --------------------------------------------------------------------------
// BackgroundDatabase

inline BackgroundDatabase database_from_json(const json& j) {
    BackgroundDatabase db;
    db.id = io::require(j, "id", "database").get<std::string>();
    std::string mode = io::require(j, "mode", "database '" + db.id + "'").get<std::string>();
    if (mode == "aggregated")
        db.mode = DatabaseMode::Aggregated;
    else if (mode == "linked")
        db.mode = DatabaseMode::Linked;
    else
        throw ValidationError("database '" + db.id + "': unknown mode '" + mode + "'");
    for (const auto& fj : io::require(j, "flows", "database '" + db.id + "'")) {
        ElementaryFlow f;
        f.id = io::require(fj, "id", "flow").get<std::string>();
        f.name = fj.value("name", "");
        std::string comp = io::require(fj, "compartment", "flow '" + f.id + "'").get<std::string>();
        auto c = compartment_from_string(comp);
        if (!c)
            throw ValidationError("flow '" + f.id + "': unknown compartment '" + comp + "'");
        f.compartment = *c;
        f.unit = io::require(fj, "unit", "flow '" + f.id + "'").get<std::string>();
        db.flows.push_back(std::move(f));
    }
    for (const auto& pj : io::require(j, "processes", "database '" + db.id + "'")) {
        UnitProcess p;
        p.id = io::require(pj, "id", "process").get<std::string>();
        p.name = pj.value("name", "");
        p.referenceUnit = io::require(pj, "referenceUnit", "process '" + p.id + "'")
                              .get<std::string>();
        if (pj.contains("directFlows"))
            p.directFlows = io::sparse_vector(pj.at("directFlows"), "process '" + p.id + "'");
        if (pj.contains("techInputs"))
            p.techInputs = io::sparse_vector(pj.at("techInputs"), "process '" + p.id + "'");
        db.processes.push_back(std::move(p));
    }
    return db;
}

inline json database_to_json(const BackgroundDatabase& db) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["id"] = db.id;
    j["mode"] = to_string(db.mode);
    j["flows"] = json::array();
    for (const auto& f : db.flows)
        j["flows"].push_back({{"id", f.id},
                              {"name", f.name},
                              {"compartment", to_string(f.compartment)},
                              {"unit", f.unit}});
    j["processes"] = json::array();
    for (const auto& p : db.processes) {
        json pj;
        pj["id"] = p.id;
        pj["name"] = p.name;
        pj["referenceUnit"] = p.referenceUnit;
        if (!p.directFlows.empty()) pj["directFlows"] = io::to_json(p.directFlows);
        if (!p.techInputs.empty()) pj["techInputs"] = io::to_json(p.techInputs);
        j["processes"].push_back(std::move(pj));
    }
    return j;
}

// --------------------------------------------------------------------------
// CharacterizationMethod

inline CharacterizationMethod method_from_json(const json& j) {
    CharacterizationMethod m;
    m.id = io::require(j, "id", "method").get<std::string>();
    for (const auto& cj : io::require(j, "categories", "method '" + m.id + "'")) {
        ImpactCategory c;
        c.id = io::require(cj, "id", "category").get<std::string>();
        c.name = cj.value("name", "");
        c.abbreviation = cj.value("abbreviation", "");
        c.unit = io::require(cj, "unit", "category '" + c.id + "'").get<std::string>();
        m.categories.push_back(std::move(c));
    }
    for (const auto& [cid, factors] : io::require(j, "factors", "method '" + m.id + "'").items())
        m.factors[cid] = io::sparse_vector(factors, "factors." + cid);
    return m;
}

inline json method_to_json(const CharacterizationMethod& m) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["id"] = m.id;
    j["categories"] = json::array();
    for (const auto& c : m.categories)
        j["categories"].push_back({{"id", c.id},
                                   {"name", c.name},
                                   {"abbreviation", c.abbreviation},
                                   {"unit", c.unit}});
    j["factors"] = json::object();
    for (const auto& [cid, factors] : m.factors)
        j["factors"][cid] = io::to_json(factors);
    return j;
}

// --------------------------------------------------------------------------
// RuleSet

inline RuleSet rules_from_json(const json& j) {
    RuleSet rules;
    for (const auto& rj : io::require(j, "mappingRules", "rules file")) {
        MappingRule r;
        r.databaseId = io::require(rj, "databaseId", "mapping rule").get<std::string>();
        const json& sel = io::require(rj, "selector", "mapping rule");
        if (sel.contains("componentId")) r.componentId = sel.at("componentId").get<std::string>();
        if (sel.contains("category")) {
            std::string cat = sel.at("category").get<std::string>();
            auto c = component_category_from_string(cat);
            if (!c)
                throw ValidationError("mapping rule: unknown selector category '" + cat + "'");
            r.category = *c;
        }
        std::string scaling = io::require(rj, "scaling", "mapping rule").get<std::string>();
        auto kind = scaling_kind_from_string(scaling);
        if (!kind)
            throw ValidationError("mapping rule: unknown scaling '" + scaling + "'");
        r.scaling = *kind;
        if (rj.contains("processId")) r.processId = rj.at("processId").get<std::string>();
        if (rj.contains("parameters"))
            r.parameters = io::sparse_vector(rj.at("parameters"), "rule parameters");
        if (rj.contains("layerProcesses"))
            for (const auto& [layer, pid] : rj.at("layerProcesses").items())
                r.layerProcesses[std::stoi(layer)] = pid.get<std::string>();
        if (rj.contains("transportModes"))
            for (const auto& [mode, mj] : rj.at("transportModes").items()) {
                r.modeProcesses[mode] =
                    io::require(mj, "processId", "transport mode '" + mode + "'")
                        .get<std::string>();
                r.modeDistancesKm[mode] =
                    io::number(io::require(mj, "distanceKm", "transport mode '" + mode + "'"),
                               "transport distance");
            }
        rules.mappingRules.push_back(std::move(r));
    }
    if (j.contains("cutoffPolicies"))
        for (const auto& pj : j.at("cutoffPolicies")) {
            CutoffPolicy p;
            p.databaseId = io::require(pj, "databaseId", "cutoff policy").get<std::string>();
            for (const auto& cat : io::require(pj, "excludedCategories", "cutoff policy")) {
                auto c = component_category_from_string(cat.get<std::string>());
                if (!c)
                    throw ValidationError("cutoff policy: unknown category '" +
                                          cat.get<std::string>() + "'");
                p.excludedCategories.insert(*c);
            }
            rules.cutoffPolicies.push_back(std::move(p));
        }
    if (j.contains("componentGroups"))
        for (const auto& [cid, group] : j.at("componentGroups").items())
            rules.componentGroups[cid] = group.get<std::string>();
    return rules;
}

// --------------------------------------------------------------------------
// Scenario file

inline ScenarioFile scenarios_from_json(const json& j) {
    ScenarioFile file;
    if (j.contains("mixes"))
        for (const auto& mj : j.at("mixes")) {
            ElectricityMix m;
            m.id = io::require(mj, "id", "electricity mix").get<std::string>();
            m.databaseId = io::require(mj, "databaseId", "mix '" + m.id + "'").get<std::string>();
            if (mj.contains("processId")) m.processId = mj.at("processId").get<std::string>();
            if (mj.contains("blend"))
                m.blend = io::sparse_vector(mj.at("blend"), "mix '" + m.id + "'.blend");
            if (m.processId.empty() == m.blend.empty())
                throw ValidationError("mix '" + m.id +
                                      "' needs exactly one of processId or blend");
            file.mixes.push_back(std::move(m));
        }
    for (const auto& sj : io::require(j, "scenarios", "scenario file")) {
        UsePhaseScenario s;
        s.id = io::require(sj, "id", "scenario").get<int>();
        std::string ctx = "scenario " + std::to_string(s.id);
        s.databaseId = io::require(sj, "database", ctx).get<std::string>();
        s.mixId = io::require(sj, "mix", ctx).get<std::string>();
        s.powerKw = io::number(io::require(sj, "powerKw", ctx), ctx + ".powerKw");
        s.lifespanYears = io::number(io::require(sj, "lifespanYears", ctx), ctx + ".lifespanYears");
        file.scenarios.push_back(std::move(s));
    }
    return file;
}

// --------------------------------------------------------------------------
// Sensitivity bounds

inline SensitivityBounds bounds_from_json(const json& j) {
    SensitivityBounds bounds;
    for (const auto& bj : io::require(j, "bounds", "bounds file")) {
        SensitivityBound b;
        b.path = io::require(bj, "path", "bound").get<std::string>();
        b.low = io::number(io::require(bj, "low", b.path), b.path + ".low");
        b.typical = io::number(io::require(bj, "typical", b.path), b.path + ".typical");
        b.high = io::number(io::require(bj, "high", b.path), b.path + ".high");
        if (!(b.low <= b.typical && b.typical <= b.high))
            throw ValidationError("bounds for '" + b.path + "' violate low <= typical <= high");
        bounds.push_back(std::move(b));
    }
    return bounds;
}

// --------------------------------------------------------------------------
// Extrapolation spec

inline ExtrapolationSpec extrapolation_from_json(const json& j) {
    ExtrapolationSpec spec;
    spec.baseDeviceId = io::require(j, "baseDeviceId", "extrapolation spec").get<std::string>();
    spec.targetName = j.value("targetName", "");
    for (const auto& fj : io::require(j, "factors", "extrapolation spec")) {
        ExtrapolationFactor f;
        if (fj.contains("componentId")) f.componentId = fj.at("componentId").get<std::string>();
        if (fj.contains("category")) {
            std::string cat = fj.at("category").get<std::string>();
            auto c = component_category_from_string(cat);
            if (!c)
                throw ValidationError("extrapolation factor: unknown category '" + cat + "'");
            f.category = *c;
        }
        if (f.componentId.empty() && !f.category)
            throw ValidationError("extrapolation factor needs componentId or category");
        if (fj.contains("quantityFactor"))
            f.quantityFactor = io::number(fj.at("quantityFactor"), "quantityFactor");
        if (fj.contains("attributeFactors"))
            f.attributeFactors = io::sparse_vector(fj.at("attributeFactors"), "attributeFactors");
        spec.factors.push_back(std::move(f));
    }
    return spec;
}

// --------------------------------------------------------------------------
// File-level loaders

inline BillOfMaterials load_bom(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return bom_from_json(j);
}

inline BackgroundDatabase load_database(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return database_from_json(j);
}

inline CharacterizationMethod load_method(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return method_from_json(j);
}

inline RuleSet load_rules(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return rules_from_json(j);
}

inline ScenarioFile load_scenarios(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return scenarios_from_json(j);
}

inline SensitivityBounds load_bounds(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return bounds_from_json(j);
}

inline ExtrapolationSpec load_extrapolation(const std::string& path) {
    json j = io::parse_file(path);
    io::check_schema_version(j, path);
    return extrapolation_from_json(j);
}

inline void save_json(const json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open output file '" + path + "'");
    f << j.dump(2) << "\n";
}

}  // namespace lcakit
