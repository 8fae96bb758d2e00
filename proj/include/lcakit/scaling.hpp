#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcakit/errors.hpp"
#include "lcakit/model.hpp"

namespace lcakit {

enum class ScalingKind {
    ByCount,
    ByMass,
    ByArea,
    ByLength,
    ByDieArea,
    ByPackageArea,
    PcbLayerBlend,
    TransportTkm,
};

inline const char* to_string(ScalingKind k) {
    switch (k) {
        case ScalingKind::ByCount: return "by-count";
        case ScalingKind::ByMass: return "by-mass";
        case ScalingKind::ByArea: return "by-area";
        case ScalingKind::ByLength: return "by-length";
        case ScalingKind::ByDieArea: return "by-die-area";
        case ScalingKind::ByPackageArea: return "by-package-area";
        case ScalingKind::PcbLayerBlend: return "pcb-layer-blend";
        case ScalingKind::TransportTkm: return "transport-tkm";
    }
    return "?";
}

inline std::optional<ScalingKind> scaling_kind_from_string(const std::string& s) {
    static const std::map<std::string, ScalingKind> table = {
        {"by-count", ScalingKind::ByCount},
        {"by-mass", ScalingKind::ByMass},
        {"by-area", ScalingKind::ByArea},
        {"by-length", ScalingKind::ByLength},
        {"by-die-area", ScalingKind::ByDieArea},
        {"by-package-area", ScalingKind::ByPackageArea},
        {"pcb-layer-blend", ScalingKind::PcbLayerBlend},
        {"transport-tkm", ScalingKind::TransportTkm},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

struct MappingRule {
    // Selector. Empty componentId and no category means match-all, which is
    // only allowed for transport rules.
    std::string componentId;
    std::optional<ComponentCategory> category;

    std::string databaseId;
    std::string processId;  // unused for pcb-layer-blend and transport-tkm
    ScalingKind scaling = ScalingKind::ByCount;
    std::map<std::string, double> parameters;            // waferAreaPerKg, dieToPackageRatio, ...
    std::map<int, std::string> layerProcesses;           // pcb-layer-blend: layer count -> process
    std::map<std::string, std::string> modeProcesses;    // transport-tkm: mode -> process
    std::map<std::string, double> modeDistancesKm;       // transport-tkm: mode -> km

    bool matches(const Component& c) const {
        if (!componentId.empty()) return componentId == c.id;
        if (category) return *category == c.category;
        return scaling == ScalingKind::TransportTkm;  // match-all transport
    }
};

struct CutoffPolicy {
    std::string databaseId;
    std::set<ComponentCategory> excludedCategories;
};

struct ScaledDemand {
    std::string processId;
    double amount = 0.0;  // in the process's reference unit
    std::string sourceComponentId;
};

struct CutoffEntry {
    std::string componentId;
    std::string databaseId;
    std::string reason;
};

struct ResolveResult {
    std::vector<ScaledDemand> demands;
    std::vector<CutoffEntry> cutoffReport;
    std::vector<std::string> warnings;
};

// Mapping rules, cutoff policies and contribution grouping travel together
// in one rules file.
struct RuleSet {
    std::vector<MappingRule> mappingRules;
    std::vector<CutoffPolicy> cutoffPolicies;
    std::map<std::string, std::string> componentGroups;  // component-id -> group label

    CutoffPolicy cutoff_for(const std::string& databaseId) const {
        for (const auto& p : cutoffPolicies)
            if (p.databaseId == databaseId) return p;
        return CutoffPolicy{databaseId, {}};
    }
};

// Transport demands keep their originating component visible but are
// attributed to a separate source so contribution reports can group them.
inline std::string transport_source_id(const std::string& componentId) {
    return "transport#" + componentId;
}

inline bool is_transport_source(const std::string& sourceId) {
    return sourceId.rfind("transport#", 0) == 0;
}

// --------------------------------------------------------------------------
// Scaling formulas

inline double ic_mass_from_die_area(double dieAreaMm2, double waferAreaPerKg) {
    if (waferAreaPerKg <= 0)
        throw ValidationError("waferAreaPerKg must be > 0");
    if (dieAreaMm2 < 0)
        throw ValidationError("die area must be >= 0");
    return dieAreaMm2 / waferAreaPerKg;
}

inline double die_area_from_package(double packageAreaMm2, double dieToPackageRatio) {
    if (dieToPackageRatio <= 0 || dieToPackageRatio > 1)
        throw ValidationError("dieToPackageRatio must be in (0, 1]");
    if (packageAreaMm2 < 0)
        throw ValidationError("package area must be >= 0");
    return packageAreaMm2 * dieToPackageRatio;
}

// Available background processes cover 2, 4 and 8 layer boards; a 6-layer
// board is modeled as an even split of 4- and 8-layer production.
inline std::map<int, double> pcb_layer_blend(int layerCount) {
    switch (layerCount) {
        case 2: return {{2, 1.0}};
        case 4: return {{4, 1.0}};
        case 8: return {{8, 1.0}};
        case 6: return {{4, 0.5}, {8, 0.5}};
        default:
            throw ResolutionError("no layer blend defined for " + std::to_string(layerCount) +
                                  "-layer PCB");
    }
}

inline std::vector<ScaledDemand> transport_demands(
    double totalMassKg,
    const std::map<std::string, double>& distancesKm,
    const std::map<std::string, std::string>& modeProcesses,
    const std::string& sourceId) {
    if (totalMassKg < 0)
        throw ValidationError("transport mass must be >= 0");
    std::vector<ScaledDemand> out;
    for (const auto& [mode, km] : distancesKm) {
        auto it = modeProcesses.find(mode);
        if (it == modeProcesses.end())
            throw ResolutionError("unknown transport mode '" + mode + "'");
        if (km < 0)
            throw ValidationError("transport distance must be >= 0");
        out.push_back({it->second, totalMassKg / 1000.0 * km, sourceId});
    }
    return out;
}

// --------------------------------------------------------------------------
// Rule validation

inline ValidationReport validate_rules(const std::vector<MappingRule>& rules,
                                       const BackgroundDatabase& db) {
    ValidationReport report;
    for (size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        if (r.databaseId != db.id) continue;
        std::string rid = "rule[" + std::to_string(i) + "]";
        auto need_param = [&](const char* name) {
            if (!r.parameters.count(name))
                report.push_back({rid, "missing-parameter",
                                  std::string(rid) + " (" + to_string(r.scaling) +
                                      ") requires parameter '" + name + "'"});
        };
        switch (r.scaling) {
            case ScalingKind::ByDieArea:
                need_param("waferAreaPerKg");
                break;
            case ScalingKind::PcbLayerBlend:
                if (r.layerProcesses.empty())
                    report.push_back({rid, "missing-parameter",
                                      rid + " needs layerProcesses"});
                for (const auto& [layer, pid] : r.layerProcesses)
                    if (!db.find_process(pid))
                        report.push_back({rid, "unknown-process",
                                          rid + " references unknown process '" + pid + "'"});
                break;
            case ScalingKind::TransportTkm:
                for (const auto& [mode, pid] : r.modeProcesses)
                    if (!db.find_process(pid))
                        report.push_back({rid, "unknown-process",
                                          rid + " references unknown process '" + pid + "'"});
                break;
            default:
                break;
        }
        if (r.scaling != ScalingKind::PcbLayerBlend && r.scaling != ScalingKind::TransportTkm) {
            if (r.processId.empty())
                report.push_back({rid, "missing-process", rid + " has no processId"});
            else if (!db.find_process(r.processId))
                report.push_back({rid, "unknown-process",
                                  rid + " references unknown process '" + r.processId + "'"});
            if (r.componentId.empty() && !r.category)
                report.push_back({rid, "empty-selector", rid + " matches nothing"});
        }
    }
    // Duplicate exact component-id matches are a data error: one rule per
    // component class.
    std::map<std::pair<std::string, std::string>, int> exact;
    for (const auto& r : rules)
        if (!r.componentId.empty() && r.scaling != ScalingKind::TransportTkm)
            if (++exact[{r.databaseId, r.componentId}] == 2)
                report.push_back({r.componentId, "duplicate-rule",
                                  "duplicate exact rule for component '" + r.componentId +
                                      "' in database '" + r.databaseId + "'"});
    return report;
}

// --------------------------------------------------------------------------
// Resolution

namespace detail {

inline double required_attribute(const Component& c, const char* key) {
    auto v = c.attribute(key);
    if (!v)
        throw ResolutionError("component '" + c.id + "' lacks attribute '" + key +
                              "' required by its scaling rule");
    return *v;
}

inline std::vector<ScaledDemand> apply_rule(const Component& c, const MappingRule& r) {
    std::vector<ScaledDemand> out;
    switch (r.scaling) {
        case ScalingKind::ByCount: {
            double perItem = 1.0;
            if (auto it = r.parameters.find("unitsPerItem"); it != r.parameters.end())
                perItem = it->second;
            out.push_back({r.processId, c.quantity * perItem, c.id});
            break;
        }
        case ScalingKind::ByMass:
            out.push_back({r.processId, c.quantity * required_attribute(c, "mass"), c.id});
            break;
        case ScalingKind::ByArea:
            out.push_back({r.processId, c.quantity * required_attribute(c, "boardArea"), c.id});
            break;
        case ScalingKind::ByLength:
            out.push_back({r.processId, c.quantity * required_attribute(c, "length"), c.id});
            break;
        case ScalingKind::ByDieArea: {
            double wafer = r.parameters.at("waferAreaPerKg");
            double die;
            if (auto v = c.attribute("dieArea")) {
                die = *v;
            } else {
                auto ratio = r.parameters.find("dieToPackageRatio");
                if (ratio == r.parameters.end())
                    throw ResolutionError("component '" + c.id +
                                          "' has no dieArea and rule has no dieToPackageRatio");
                die = die_area_from_package(required_attribute(c, "packageArea"), ratio->second);
            }
            out.push_back({r.processId, c.quantity * ic_mass_from_die_area(die, wafer), c.id});
            break;
        }
        case ScalingKind::ByPackageArea:
            out.push_back({r.processId, c.quantity * required_attribute(c, "packageArea"), c.id});
            break;
        case ScalingKind::PcbLayerBlend: {
            int layers = static_cast<int>(required_attribute(c, "layerCount"));
            double area = required_attribute(c, "boardArea");
            for (const auto& [layer, weight] : pcb_layer_blend(layers)) {
                auto it = r.layerProcesses.find(layer);
                if (it == r.layerProcesses.end())
                    throw ResolutionError("no process for " + std::to_string(layer) +
                                          "-layer PCB (component '" + c.id + "')");
                out.push_back({it->second, c.quantity * area * weight, c.id});
            }
            break;
        }
        case ScalingKind::TransportTkm:
            throw ResolutionError("transport rule cannot be a primary mapping");
    }
    return out;
}

}  // namespace detail

inline ResolveResult resolve(const BillOfMaterials& bom,
                             const std::vector<MappingRule>& rules,
                             const CutoffPolicy& cutoff,
                             const std::string& databaseId,
                             const BackgroundDatabase& db) {
    ResolveResult result;
    std::vector<const MappingRule*> primary;
    std::vector<const MappingRule*> transport;
    for (const auto& r : rules) {
        if (r.databaseId != databaseId) continue;
        (r.scaling == ScalingKind::TransportTkm ? transport : primary).push_back(&r);
    }

    for (const auto& c : bom.components) {
        if (cutoff.excludedCategories.count(c.category)) {
            result.cutoffReport.push_back({c.id, databaseId, "database-cutoff"});
            continue;
        }

        // Exact component-id match beats category match; among equals,
        // first-in-file wins.
        const MappingRule* match = nullptr;
        for (const auto* r : primary)
            if (!r->componentId.empty() && r->matches(c)) {
                match = r;
                break;
            }
        if (!match)
            for (const auto* r : primary)
                if (r->matches(c)) {
                    match = r;
                    break;
                }
        if (!match)
            throw ResolutionError("no mapping rule matches component '" + c.id +
                                  "' for database '" + databaseId + "'");

        for (auto& d : detail::apply_rule(c, *match)) {
            if (!db.find_process(d.processId))
                throw ResolutionError("rule for component '" + c.id +
                                      "' references missing process '" + d.processId + "'");
            result.demands.push_back(std::move(d));
        }

        for (const auto* t : transport) {
            if (!t->matches(c)) continue;
            double mass = 0.0;
            if (auto v = c.attribute("mass")) {
                mass = *v;
            } else {
                result.warnings.push_back("component '" + c.id +
                                          "' has no mass; transport demand set to 0");
            }
            for (auto& d : transport_demands(c.quantity * mass, t->modeDistancesKm,
                                             t->modeProcesses, transport_source_id(c.id))) {
                if (!db.find_process(d.processId))
                    throw ResolutionError("transport rule references missing process '" +
                                          d.processId + "'");
                result.demands.push_back(std::move(d));
            }
        }
    }

    std::stable_sort(result.demands.begin(), result.demands.end(),
                     [](const ScaledDemand& a, const ScaledDemand& b) {
                         if (a.sourceComponentId != b.sourceComponentId)
                             return a.sourceComponentId < b.sourceComponentId;
                         return a.processId < b.processId;
                     });
    return result;
}

}  // namespace lcakit
