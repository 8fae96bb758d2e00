#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcakit/errors.hpp"
#include "lcakit/inventory.hpp"
#include "lcakit/model.hpp"

namespace lcakit {

struct CharacterizationResult {
    ImpactVector impacts;
    std::vector<std::string> uncharacterizedFlows;  // flows with no factor in any category
};

struct ContributionTable {
    std::string methodId;
    std::map<std::string, ImpactVector> rows;  // component group -> impacts
    ImpactVector total;
};

struct ComparisonTable {
    std::string referenceDatabaseId;
    // database -> category -> ratio; nullopt when the reference value is 0
    std::map<std::string, std::map<std::string, std::optional<double>>> rows;
    std::vector<std::string> warnings;
};

inline CharacterizationResult characterize(const SparseVector& inventory,
                                           const CharacterizationMethod& method) {
    require_valid(validate_method(method), "characterization method '" + method.id + "'");
    CharacterizationResult result;
    result.impacts.methodId = method.id;
    for (const auto& c : method.categories) {
        double score = 0.0;
        auto factors = method.factors.find(c.id);
        if (factors != method.factors.end()) {
            for (const auto& [fid, amount] : inventory) {
                auto f = factors->second.find(fid);
                if (f != factors->second.end()) score += f->second * amount;
            }
        }
        result.impacts.values[c.id] = score;
    }
    for (const auto& [fid, amount] : inventory) {
        bool covered = false;
        for (const auto& [cid, factors] : method.factors)
            if (factors.count(fid)) {
                covered = true;
                break;
            }
        if (!covered) result.uncharacterizedFlows.push_back(fid);
    }
    return result;
}

inline CharacterizationResult characterize(const InventoryVector& inv,
                                           const CharacterizationMethod& method) {
    return characterize(inv.entries, method);
}

// Groups attributed inventories by component group and characterizes each.
// Sources without a grouping entry fall into "other"; synthetic transport
// sources fall into "transport".
inline ContributionTable contributions(const InventoryVector& inv,
                                       const CharacterizationMethod& method,
                                       const std::map<std::string, std::string>& grouping) {
    if (inv.attribution.empty())
        throw ValidationError("contribution analysis requires an attributed inventory");
    ContributionTable table;
    table.methodId = method.id;
    table.total = characterize(inv, method).impacts;

    std::map<std::string, SparseVector> groupInventories;
    for (const auto& [source, sub] : inv.attribution) {
        std::string group;
        if (auto it = grouping.find(source); it != grouping.end())
            group = it->second;
        else if (is_transport_source(source))
            group = "transport";
        else
            group = "other";
        SparseVector& acc = groupInventories[group];
        for (const auto& [fid, v] : sub)
            acc[fid] += v;
    }
    for (const auto& [group, groupInv] : groupInventories)
        table.rows[group] = characterize(groupInv, method).impacts;
    return table;
}

struct HotspotRanking {
    std::vector<std::pair<std::string, double>> shares;  // descending share
    bool degenerate = false;  // zero total in the category
};

inline HotspotRanking hotspot_ranking(const ContributionTable& table,
                                      const std::string& categoryId) {
    HotspotRanking ranking;
    auto total = table.total.values.find(categoryId);
    if (total == table.total.values.end())
        throw ValidationError("unknown impact category '" + categoryId + "'");
    if (total->second == 0.0) {
        ranking.degenerate = true;
        return ranking;
    }
    for (const auto& [group, impacts] : table.rows) {
        auto v = impacts.values.find(categoryId);
        double value = v == impacts.values.end() ? 0.0 : v->second;
        ranking.shares.emplace_back(group, value / total->second);
    }
    std::stable_sort(ranking.shares.begin(), ranking.shares.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;  // ties: ascending label
                     });
    return ranking;
}

inline ComparisonTable compare_databases(const std::map<std::string, ImpactVector>& results,
                                         const std::string& referenceId) {
    if (results.size() < 2)
        throw UsageError("database comparison needs at least two result sets");
    auto ref = results.find(referenceId);
    if (ref == results.end())
        throw UsageError("reference database '" + referenceId + "' has no result set");
    for (const auto& [dbId, impacts] : results)
        if (impacts.methodId != ref->second.methodId)
            throw ValidationError("result set '" + dbId + "' uses method '" + impacts.methodId +
                                  "', reference uses '" + ref->second.methodId + "'");

    ComparisonTable table;
    table.referenceDatabaseId = referenceId;
    for (const auto& [dbId, impacts] : results) {
        auto& row = table.rows[dbId];
        for (const auto& [cid, value] : impacts.values) {
            double refValue = ref->second.values.at(cid);
            if (refValue == 0.0) {
                row[cid] = std::nullopt;
                table.warnings.push_back("reference value is 0 in category '" + cid +
                                         "'; ratio undefined for '" + dbId + "'");
            } else if (dbId == referenceId) {
                row[cid] = 1.0;  // exact by convention
            } else {
                row[cid] = value / refValue;
            }
        }
    }
    return table;
}

}  // namespace lcakit
