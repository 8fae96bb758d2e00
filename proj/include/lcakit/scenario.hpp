#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcakit/errors.hpp"
#include "lcakit/impact.hpp"
#include "lcakit/inventory.hpp"
#include "lcakit/model.hpp"
#include "lcakit/pipeline.hpp"

namespace lcakit {

// 365 x 24; fixed convention, echoed in every output metadata header.
inline constexpr double kHoursPerYear = 8760.0;

struct ElectricityMix {
    std::string id;
    std::string databaseId;
    std::string processId;               // direct per-kWh process, or
    std::map<std::string, double> blend; // weighted combination of other mixes
};

struct UsePhaseScenario {
    int id = 0;
    std::string databaseId;
    std::string mixId;
    double powerKw = 0.0;
    double lifespanYears = 0.0;
};

struct SensitivityBound {
    std::string path;  // component/<id>/<field> or rule/<index>/<parameter>
    double low = 0.0;
    double typical = 0.0;
    double high = 0.0;
};

using SensitivityBounds = std::vector<SensitivityBound>;

struct ExtrapolationFactor {
    std::string componentId;  // exactly one of componentId / category set
    std::optional<ComponentCategory> category;
    std::optional<double> quantityFactor;
    std::map<std::string, double> attributeFactors;
};

struct ExtrapolationSpec {
    std::string baseDeviceId;
    std::string targetName;
    std::vector<ExtrapolationFactor> factors;
};

struct ScenarioFile {
    std::vector<ElectricityMix> mixes;
    std::vector<UsePhaseScenario> scenarios;
};

// --------------------------------------------------------------------------

inline double use_phase_energy(double powerKw, double lifespanYears) {
    if (powerKw <= 0)
        throw ValidationError("power must be > 0");
    if (lifespanYears <= 0)
        throw ValidationError("lifespan must be > 0");
    // annual energy first: kW ratings are short decimals, and their
    // product with 8760 rounds to the exact decimal result
    return powerKw * kHoursPerYear * lifespanYears;
}

inline SparseVector blend_inventories(const std::map<std::string, double>& weights,
                                      const std::map<std::string, SparseVector>& inventories) {
    double total = 0.0;
    for (const auto& [id, w] : weights) {
        if (w <= 0)
            throw ValidationError("blend weight for '" + id + "' must be > 0");
        total += w;
    }
    if (total <= 0)
        throw ValidationError("blend has no positive weights");
    SparseVector out;
    for (const auto& [id, w] : weights) {
        auto it = inventories.find(id);
        if (it == inventories.end())
            throw ResolutionError("blend references unknown mix '" + id + "'");
        for (const auto& [fid, v] : it->second)
            out[fid] += w / total * v;
    }
    return out;
}

namespace detail {

inline const ElectricityMix& find_mix(const std::vector<ElectricityMix>& mixes,
                                      const std::string& mixId,
                                      const std::string& databaseId) {
    for (const auto& m : mixes)
        if (m.id == mixId && m.databaseId == databaseId) return m;
    throw ResolutionError("electricity mix '" + mixId + "' not defined for database '" +
                          databaseId + "'");
}

inline SparseVector per_kwh_inventory(const ElectricityMix& mix,
                                      const std::vector<ElectricityMix>& mixes,
                                      const BackgroundDatabase& db,
                                      double tol,
                                      std::set<std::string>& visiting) {
    if (!visiting.insert(mix.id).second)
        throw ValidationError("cyclic electricity-mix blend involving '" + mix.id + "'");
    SparseVector result;
    if (mix.blend.empty()) {
        std::vector<ScaledDemand> demand{{mix.processId, 1.0, mix.id}};
        result = compute_lci(demand, db, tol).entries;
    } else {
        std::map<std::string, SparseVector> parts;
        for (const auto& [subId, w] : mix.blend) {
            (void)w;
            const auto& sub = find_mix(mixes, subId, mix.databaseId);
            parts[subId] = per_kwh_inventory(sub, mixes, db, tol, visiting);
        }
        result = blend_inventories(mix.blend, parts);
    }
    visiting.erase(mix.id);
    return result;
}

}  // namespace detail

inline SparseVector mix_per_kwh_inventory(const ElectricityMix& mix,
                                          const std::vector<ElectricityMix>& mixes,
                                          const BackgroundDatabase& db,
                                          double tol = kDefaultSolverTolerance) {
    if (mix.databaseId != db.id)
        throw ResolutionError("mix '" + mix.id + "' targets database '" + mix.databaseId +
                              "', got '" + db.id + "'");
    std::set<std::string> visiting;
    return detail::per_kwh_inventory(mix, mixes, db, tol, visiting);
}

inline ImpactVector use_phase_impacts(const UsePhaseScenario& scenario,
                                      const std::vector<ElectricityMix>& mixes,
                                      const BackgroundDatabase& db,
                                      const CharacterizationMethod& method,
                                      double tol = kDefaultSolverTolerance) {
    const auto& mix = detail::find_mix(mixes, scenario.mixId, scenario.databaseId);
    double energy = use_phase_energy(scenario.powerKw, scenario.lifespanYears);
    SparseVector perKwh = mix_per_kwh_inventory(mix, mixes, db, tol);
    SparseVector inventory;
    for (const auto& [fid, v] : perKwh)
        inventory[fid] = energy * v;
    return characterize(inventory, method).impacts;
}

// Per-category production / (production + use). nullopt when both are 0.
inline std::map<std::string, std::optional<double>> production_share(const ImpactVector& prod,
                                                                     const ImpactVector& use) {
    if (prod.methodId != use.methodId)
        throw ValidationError("production and use impacts use different methods ('" +
                              prod.methodId + "' vs '" + use.methodId + "')");
    std::map<std::string, std::optional<double>> shares;
    for (const auto& [cid, p] : prod.values) {
        auto it = use.values.find(cid);
        double u = it == use.values.end() ? 0.0 : it->second;
        double sum = p + u;
        if (sum == 0.0)
            shares[cid] = std::nullopt;
        else
            shares[cid] = p / sum;
    }
    return shares;
}

struct ScenarioShareRow {
    int scenarioId = 0;
    std::string databaseId;
    std::string mixId;
    double powerKw = 0.0;
    double lifespanYears = 0.0;
    std::map<std::string, std::optional<double>> shares;
};

inline std::vector<ScenarioShareRow> run_scenarios(
    const ScenarioFile& file,
    const BillOfMaterials& bom,
    const RuleSet& rules,
    const std::map<std::string, BackgroundDatabase>& dbs,
    const CharacterizationMethod& method,
    double tol = kDefaultSolverTolerance) {
    // Production impacts depend only on the database; computed once each.
    std::map<std::string, ImpactVector> production;
    std::vector<ScenarioShareRow> rows;
    auto ordered = file.scenarios;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& sc : ordered) {
        try {
            auto db = dbs.find(sc.databaseId);
            if (db == dbs.end())
                throw ResolutionError("unknown database '" + sc.databaseId + "'");
            if (!production.count(sc.databaseId))
                production[sc.databaseId] =
                    assess(bom, rules, db->second, method, tol).characterized.impacts;
            ImpactVector use = use_phase_impacts(sc, file.mixes, db->second, method, tol);
            ScenarioShareRow row;
            row.scenarioId = sc.id;
            row.databaseId = sc.databaseId;
            row.mixId = sc.mixId;
            row.powerKw = sc.powerKw;
            row.lifespanYears = sc.lifespanYears;
            row.shares = production_share(production[sc.databaseId], use);
            rows.push_back(std::move(row));
        } catch (const Error& e) {
            throw Error(e.code(), "scenario " + std::to_string(sc.id) + ": " + e.what());
        }
    }
    return rows;
}

// --------------------------------------------------------------------------
// Sensitivity

namespace detail {

// Substitutes one parameter value at a path of the form
// component/<id>/quantity, component/<id>/<attribute> or
// rule/<index>/<parameter>.
inline void apply_parameter(BillOfMaterials& bom, RuleSet& rules,
                            const std::string& path, double value) {
    auto fail = [&]() -> void {
        throw ValidationError("sensitivity parameter path '" + path + "' does not resolve");
    };
    auto first = path.find('/');
    auto last = path.rfind('/');
    if (first == std::string::npos || first == last) fail();
    std::string kind = path.substr(0, first);
    std::string target = path.substr(first + 1, last - first - 1);
    std::string field = path.substr(last + 1);
    if (kind == "component") {
        for (auto& c : bom.components) {
            if (c.id != target) continue;
            if (field == "quantity")
                c.quantity = value;
            else if (c.attributes.count(field))
                c.attributes[field] = value;
            else
                fail();
            return;
        }
        fail();
    } else if (kind == "rule") {
        size_t index = 0;
        try {
            index = std::stoul(target);
        } catch (...) {
            fail();
        }
        if (index >= rules.mappingRules.size()) fail();
        auto& params = rules.mappingRules[index].parameters;
        if (!params.count(field)) fail();
        params[field] = value;
    } else {
        fail();
    }
}

}  // namespace detail

struct SensitivityResult {
    ImpactVector low;
    ImpactVector typical;
    ImpactVector high;
    // per category: (high - typical)/typical and (typical - low)/typical;
    // nullopt when typical is 0
    std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> spreads;
};

inline SensitivityResult run_sensitivity(const SensitivityBounds& bounds,
                                         const BillOfMaterials& bom,
                                         const RuleSet& rules,
                                         const BackgroundDatabase& db,
                                         const CharacterizationMethod& method,
                                         double tol = kDefaultSolverTolerance) {
    for (const auto& b : bounds)
        if (!(b.low <= b.typical && b.typical <= b.high))
            throw ValidationError("bounds for '" + b.path + "' violate low <= typical <= high");

    auto evaluate = [&](auto pick) {
        BillOfMaterials scenarioBom = bom;
        RuleSet scenarioRules = rules;
        for (const auto& b : bounds)
            detail::apply_parameter(scenarioBom, scenarioRules, b.path, pick(b));
        return assess(scenarioBom, scenarioRules, db, method, tol).characterized.impacts;
    };

    SensitivityResult r;
    r.low = evaluate([](const SensitivityBound& b) { return b.low; });
    r.typical = evaluate([](const SensitivityBound& b) { return b.typical; });
    r.high = evaluate([](const SensitivityBound& b) { return b.high; });
    for (const auto& [cid, typical] : r.typical.values) {
        if (typical == 0.0) {
            r.spreads[cid] = {std::nullopt, std::nullopt};
        } else {
            r.spreads[cid] = {(r.high.values.at(cid) - typical) / typical,
                              (typical - r.low.values.at(cid)) / typical};
        }
    }
    return r;
}

// --------------------------------------------------------------------------
// Extrapolation

inline BillOfMaterials extrapolate(const BillOfMaterials& bom, const ExtrapolationSpec& spec) {
    for (const auto& f : spec.factors) {
        if (auto q = f.quantityFactor; q && (!std::isfinite(*q) || *q <= 0))
            throw ValidationError("extrapolation quantity factor must be finite and > 0");
        for (const auto& [key, v] : f.attributeFactors)
            if (!std::isfinite(v) || v <= 0)
                throw ValidationError("extrapolation factor for attribute '" + key +
                                      "' must be finite and > 0");
        if (!f.componentId.empty() && !bom.find_component(f.componentId))
            throw ResolutionError("extrapolation targets unknown component '" + f.componentId +
                                  "'");
    }

    BillOfMaterials out = bom;
    if (!spec.targetName.empty()) out.deviceId = spec.targetName;
    for (const auto& f : spec.factors) {
        bool matched = false;
        for (auto& c : out.components) {
            bool match = !f.componentId.empty() ? c.id == f.componentId
                                                : (f.category && *f.category == c.category);
            if (!match) continue;
            matched = true;
            if (f.quantityFactor) c.quantity *= *f.quantityFactor;
            for (const auto& [key, factor] : f.attributeFactors) {
                auto it = c.attributes.find(key);
                if (it != c.attributes.end()) it->second *= factor;
            }
        }
        if (!matched)
            throw ResolutionError("extrapolation factor matches no component");
    }
    return out;
}

}  // namespace lcakit
