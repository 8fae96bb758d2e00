#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcakit/errors.hpp"

namespace lcakit {

// Sparse vectors keyed by id. std::map keeps iteration order stable, which
// the deterministic-output contract relies on.
using SparseVector = std::map<std::string, double>;

enum class Compartment { Air, Water, Soil, Resource };

inline const char* to_string(Compartment c) {
    switch (c) {
        case Compartment::Air: return "air";
        case Compartment::Water: return "water";
        case Compartment::Soil: return "soil";
        case Compartment::Resource: return "resource";
    }
    return "?";
}

inline std::optional<Compartment> compartment_from_string(const std::string& s) {
    if (s == "air") return Compartment::Air;
    if (s == "water") return Compartment::Water;
    if (s == "soil") return Compartment::Soil;
    if (s == "resource") return Compartment::Resource;
    return std::nullopt;
}

struct ElementaryFlow {
    std::string id;
    std::string name;
    Compartment compartment = Compartment::Air;
    std::string unit;

    bool operator==(const ElementaryFlow&) const = default;
};

struct ImpactCategory {
    std::string id;
    std::string name;
    std::string abbreviation;
    std::string unit;

    bool operator==(const ImpactCategory&) const = default;
};

struct CharacterizationMethod {
    std::string id;
    std::vector<ImpactCategory> categories;
    // category-id -> flow-id -> factor (category unit per flow unit)
    std::map<std::string, SparseVector> factors;

    bool has_category(const std::string& cid) const {
        for (const auto& c : categories)
            if (c.id == cid) return true;
        return false;
    }

    bool operator==(const CharacterizationMethod&) const = default;
};

struct UnitProcess {
    std::string id;
    std::string name;
    std::string referenceUnit;
    SparseVector directFlows;   // flow-id -> amount per reference unit
    SparseVector techInputs;    // process-id -> input amount per reference unit

    bool operator==(const UnitProcess&) const = default;
};

enum class DatabaseMode { Aggregated, Linked };

inline const char* to_string(DatabaseMode m) {
    return m == DatabaseMode::Aggregated ? "aggregated" : "linked";
}

struct BackgroundDatabase {
    std::string id;
    DatabaseMode mode = DatabaseMode::Aggregated;
    std::vector<ElementaryFlow> flows;
    std::vector<UnitProcess> processes;

    const UnitProcess* find_process(const std::string& pid) const {
        for (const auto& p : processes)
            if (p.id == pid) return &p;
        return nullptr;
    }
    const ElementaryFlow* find_flow(const std::string& fid) const {
        for (const auto& f : flows)
            if (f.id == fid) return &f;
        return nullptr;
    }

    bool operator==(const BackgroundDatabase&) const = default;
};

enum class ComponentCategory {
    Ic,
    Passive,
    Pcb,
    Fan,
    Heatsink,
    Casing,
    Cable,
    Assembly,
    Transport,
    Connector,
    CrystalOscillator,
    Other,
};

inline const char* to_string(ComponentCategory c) {
    switch (c) {
        case ComponentCategory::Ic: return "ic";
        case ComponentCategory::Passive: return "passive";
        case ComponentCategory::Pcb: return "pcb";
        case ComponentCategory::Fan: return "fan";
        case ComponentCategory::Heatsink: return "heatsink";
        case ComponentCategory::Casing: return "casing";
        case ComponentCategory::Cable: return "cable";
        case ComponentCategory::Assembly: return "assembly";
        case ComponentCategory::Transport: return "transport";
        case ComponentCategory::Connector: return "connector";
        case ComponentCategory::CrystalOscillator: return "crystal-oscillator";
        case ComponentCategory::Other: return "other";
    }
    return "?";
}

inline std::optional<ComponentCategory> component_category_from_string(const std::string& s) {
    static const std::map<std::string, ComponentCategory> table = {
        {"ic", ComponentCategory::Ic},
        {"passive", ComponentCategory::Passive},
        {"pcb", ComponentCategory::Pcb},
        {"fan", ComponentCategory::Fan},
        {"heatsink", ComponentCategory::Heatsink},
        {"casing", ComponentCategory::Casing},
        {"cable", ComponentCategory::Cable},
        {"assembly", ComponentCategory::Assembly},
        {"transport", ComponentCategory::Transport},
        {"connector", ComponentCategory::Connector},
        {"crystal-oscillator", ComponentCategory::CrystalOscillator},
        {"other", ComponentCategory::Other},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// Attribute units are fixed by convention: mass kg, dieArea/packageArea mm2,
// boardArea m2, length m. No runtime unit conversion.
struct Component {
    std::string id;
    std::string name;
    ComponentCategory category = ComponentCategory::Other;
    double quantity = 0.0;
    std::map<std::string, double> attributes;

    std::optional<double> attribute(const std::string& key) const {
        auto it = attributes.find(key);
        if (it == attributes.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Component&) const = default;
};

struct BillOfMaterials {
    std::string deviceId;
    std::vector<Component> components;
    std::map<std::string, std::vector<std::string>> subassemblies;

    const Component* find_component(const std::string& cid) const {
        for (const auto& c : components)
            if (c.id == cid) return &c;
        return nullptr;
    }

    bool operator==(const BillOfMaterials&) const = default;
};

struct ImpactVector {
    std::string methodId;
    SparseVector values;  // category-id -> score in category unit

    bool operator==(const ImpactVector&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::string entityId;
    std::string ruleId;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

inline bool is_valid_layer_count(double v) {
    return v == 1 || v == 2 || v == 4 || v == 6 || v == 8 || v == 10;
}

inline ValidationReport validate_database(const BackgroundDatabase& db) {
    ValidationReport report;
    std::set<std::string> flow_ids;
    for (const auto& f : db.flows) {
        if (!flow_ids.insert(f.id).second)
            report.push_back({f.id, "duplicate-flow", "duplicate flow id '" + f.id + "'"});
    }
    std::set<std::string> process_ids;
    for (const auto& p : db.processes)
        process_ids.insert(p.id);

    std::set<std::string> seen;
    for (const auto& p : db.processes) {
        if (!seen.insert(p.id).second)
            report.push_back({p.id, "duplicate-process", "duplicate process id '" + p.id + "'"});
        if (p.referenceUnit.empty())
            report.push_back({p.id, "empty-reference-unit",
                              "process '" + p.id + "' has no reference unit"});
        for (const auto& [fid, amount] : p.directFlows) {
            if (!flow_ids.count(fid))
                report.push_back({p.id, "unknown-flow",
                                  "process '" + p.id + "' references unknown flow '" + fid + "'"});
            if (!std::isfinite(amount))
                report.push_back({p.id, "nonfinite-amount",
                                  "flow '" + fid + "' of process '" + p.id + "' is not finite"});
            else if (amount < 0)
                report.push_back({p.id, "negative-amount",
                                  "flow '" + fid + "' of process '" + p.id + "' is negative"});
        }
        for (const auto& [pid, amount] : p.techInputs) {
            if (!process_ids.count(pid))
                report.push_back({p.id, "unknown-process",
                                  "process '" + p.id + "' references unknown input '" + pid + "'"});
            if (!std::isfinite(amount))
                report.push_back({p.id, "nonfinite-amount",
                                  "input '" + pid + "' of process '" + p.id + "' is not finite"});
            else if (amount < 0)
                report.push_back({p.id, "negative-amount",
                                  "input '" + pid + "' of process '" + p.id + "' is negative"});
            if (db.mode == DatabaseMode::Aggregated)
                report.push_back({p.id, "mode-mismatch",
                                  "aggregated database '" + db.id + "' has technosphere inputs on '" +
                                      p.id + "'"});
        }
    }
    return report;
}

inline ValidationReport validate_method(const CharacterizationMethod& m) {
    ValidationReport report;
    std::set<std::string> category_ids;
    for (const auto& c : m.categories) {
        if (!category_ids.insert(c.id).second)
            report.push_back({c.id, "duplicate-category", "duplicate category id '" + c.id + "'"});
    }
    for (const auto& [cid, flows] : m.factors) {
        if (!category_ids.count(cid))
            report.push_back({cid, "unknown-category",
                              "factors reference unknown category '" + cid + "'"});
        for (const auto& [fid, factor] : flows) {
            if (!std::isfinite(factor))
                report.push_back({cid, "nonfinite-factor",
                                  "factor (" + cid + ", " + fid + ") is not finite"});
        }
    }
    return report;
}

inline ValidationReport validate_bom(const BillOfMaterials& bom) {
    ValidationReport report;
    std::set<std::string> ids;
    for (const auto& c : bom.components) {
        if (!ids.insert(c.id).second)
            report.push_back({c.id, "duplicate-id", "duplicate component id '" + c.id + "'"});
        if (!std::isfinite(c.quantity) || c.quantity < 0)
            report.push_back({c.id, "negative-quantity",
                              "component '" + c.id + "' has quantity < 0"});
        for (const auto& [key, value] : c.attributes) {
            if (!std::isfinite(value) || value < 0)
                report.push_back({c.id, "bad-attribute",
                                  "attribute '" + key + "' of '" + c.id +
                                      "' must be finite and >= 0"});
            else if (key == "layerCount" && !is_valid_layer_count(value))
                report.push_back({c.id, "layer-count",
                                  "layerCount of '" + c.id + "' must be one of {1,2,4,6,8,10}"});
        }
    }
    for (const auto& [name, members] : bom.subassemblies) {
        for (const auto& member : members) {
            if (!ids.count(member))
                report.push_back({name, "unknown-subassembly-member",
                                  "subassembly '" + name + "' references unknown component '" +
                                      member + "'"});
        }
    }
    return report;
}

inline void require_valid(const ValidationReport& report, const std::string& what) {
    if (report.empty()) return;
    std::string msg = what + " failed validation:";
    for (const auto& v : report)
        msg += "\n  [" + v.ruleId + "] " + v.entityId + ": " + v.message;
    throw ValidationError(msg);
}

}  // namespace lcakit
