#pragma once

#include <string>

#include "lcakit/impact.hpp"
#include "lcakit/inventory.hpp"
#include "lcakit/model.hpp"
#include "lcakit/scaling.hpp"

namespace lcakit {

// One full cradle-to-gate assessment of a bill of materials against a
// single background database.
struct AssessmentResult {
    ResolveResult resolved;
    InventoryVector inventory;
    CharacterizationResult characterized;
    ContributionTable contributionTable;
};

inline AssessmentResult assess(const BillOfMaterials& bom,
                               const RuleSet& rules,
                               const BackgroundDatabase& db,
                               const CharacterizationMethod& method,
                               double tol = kDefaultSolverTolerance,
                               SolverDump* dump = nullptr) {
    AssessmentResult r;
    r.resolved = resolve(bom, rules.mappingRules, rules.cutoff_for(db.id), db.id, db);
    r.inventory = compute_lci(r.resolved.demands, db, tol, dump);
    r.characterized = characterize(r.inventory, method);
    if (!r.inventory.attribution.empty())
        r.contributionTable = contributions(r.inventory, method, rules.componentGroups);
    return r;
}

}  // namespace lcakit
