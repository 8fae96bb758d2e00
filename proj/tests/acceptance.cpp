// Acceptance suite: one pass/fail line per criterion. Exits non-zero if
// any criterion fails. Uses only the public library headers plus the CLI
// binary (path injected at build time) for the determinism check.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lcakit/json_io.hpp"
#include "lcakit/pipeline.hpp"
#include "lcakit/scenario.hpp"

namespace fs = std::filesystem;
using namespace lcakit;

namespace {

const std::string kData = LCAKIT_DATA_DIR;
const std::string kCli = LCAKIT_CLI_PATH;

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << what;
    if (!ok && !detail.empty()) std::cout << " — " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
}

bool close_rel(double a, double b, double rel) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= rel * scale;
}

struct Inputs {
    BillOfMaterials bom;
    RuleSet rules;
    BackgroundDatabase sphera;
    BackgroundDatabase ecoinvent;
    CharacterizationMethod method;
    ScenarioFile scenarios;

    Inputs() {
        bom = load_bom(kData + "/antminer_s9_bom.json");
        rules = load_rules(kData + "/rules_s9.json");
        sphera = load_database(kData + "/db_demo_sphera.json");
        ecoinvent = load_database(kData + "/db_demo_ecoinvent.json");
        method = load_method(kData + "/method_recipe2016_demo.json");
        scenarios = load_scenarios(kData + "/scenarios_table2.json");
    }
};

// ---- random linked systems for the solver criteria -----------------------

struct RandomSystem {
    BackgroundDatabase db;
    std::vector<ScaledDemand> demands;
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    Eigen::VectorXd f;
    std::vector<std::string> flowIds;
};

RandomSystem make_random_system(std::mt19937& rng, int maxProcs, double maxColSum) {
    std::uniform_int_distribution<int> nProc(2, maxProcs);
    std::uniform_int_distribution<int> nFlow(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RandomSystem sys;
    int n = nProc(rng);
    int m = nFlow(rng);
    sys.db.id = "random";
    sys.db.mode = DatabaseMode::Linked;
    for (int k = 0; k < m; ++k) {
        std::string fid = "flow" + std::to_string(k);
        sys.flowIds.push_back(fid);
        sys.db.flows.push_back({fid, "", Compartment::Air, "kg"});
    }
    sys.a = Eigen::MatrixXd::Zero(n, n);
    sys.b = Eigen::MatrixXd::Zero(m, n);
    sys.f = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            if (i != j && unit(rng) < 0.4) col[i] = unit(rng);
        double sum = col.sum();
        if (sum > 0) col *= unit(rng) * maxColSum / sum;
        sys.a.col(j) = col;
        for (int k = 0; k < m; ++k)
            if (unit(rng) < 0.7) sys.b(k, j) = 3.0 * unit(rng);
        if (unit(rng) < 0.6) sys.f[j] = 2.0 * unit(rng);
    }
    if (sys.f.sum() == 0) sys.f[0] = 1.0;
    for (int j = 0; j < n; ++j) {
        UnitProcess p;
        p.id = "p" + std::to_string(j);
        p.referenceUnit = "kg";
        for (int k = 0; k < m; ++k)
            if (sys.b(k, j) != 0) p.directFlows[sys.flowIds[k]] = sys.b(k, j);
        for (int i = 0; i < n; ++i)
            if (sys.a(i, j) != 0) p.techInputs["p" + std::to_string(i)] = sys.a(i, j);
        sys.db.processes.push_back(std::move(p));
    }
    for (int j = 0; j < n; ++j)
        if (sys.f[j] != 0) sys.demands.push_back({"p" + std::to_string(j), sys.f[j], "src"});
    return sys;
}

Eigen::VectorXd neumann_inventory(const RandomSystem& sys, int terms) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(sys.f.size());
    Eigen::VectorXd term = sys.f;
    for (int k = 0; k < terms; ++k) {
        s += term;
        term = sys.a * term;
    }
    return sys.b * s;
}

// ---- criteria ------------------------------------------------------------

void criterion_1() {
    // 200 random linked systems (n <= 12, column sums <= 0.9) solved to
    // within 1e-9 relative of an independent truncated Neumann series,
    // in under 10 seconds.
    auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(424242);
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        auto sys = make_random_system(rng, 12, 0.9);
        InventoryVector inv;
        try {
            inv = lci_linked(sys.demands, sys.db, 1e-9);
        } catch (const Error& e) {
            ok = false;
            detail = "trial " + std::to_string(trial) + ": " + e.what();
            break;
        }
        Eigen::VectorXd oracle = neumann_inventory(sys, 260);
        for (int k = 0; k < oracle.size(); ++k) {
            auto it = inv.entries.find(sys.flowIds[k]);
            double got = it == inv.entries.end() ? 0.0 : it->second;
            if (!close_rel(got, oracle[k], 1e-9)) {
                ok = false;
                detail = "trial " + std::to_string(trial) + " flow " + std::to_string(k);
                break;
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs >= 10.0) {
        ok = false;
        detail = "took " + std::to_string(secs) + " s";
    }
    report(1, "solver matches the Neumann-series oracle on 200 random systems", ok, detail);
}

void criterion_2(const Inputs& in) {
    // Doubling every demand doubles every flow and every impact score to
    // 1e-12 relative, in both database modes, over 100 random fixtures.
    std::mt19937 rng(171717);
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        auto sys = make_random_system(rng, 10, 0.85);
        auto doubled = sys.demands;
        for (auto& d : doubled) d.amount *= 2;
        for (auto mode : {DatabaseMode::Linked, DatabaseMode::Aggregated}) {
            auto db = sys.db;
            db.mode = mode;
            if (mode == DatabaseMode::Aggregated)
                for (auto& p : db.processes) p.techInputs.clear();
            auto base = compute_lci(sys.demands, db);
            auto twice = compute_lci(doubled, db);
            for (const auto& [fid, v] : base.entries)
                if (!close_rel(2.0 * v, twice.entries.at(fid), 1e-12)) {
                    ok = false;
                    detail = "flow " + fid + " trial " + std::to_string(trial);
                }
            // characterize against the shipped method's gwp factors applied
            // to the synthetic flow names: build a one-category method
            CharacterizationMethod m;
            m.id = "lin";
            m.categories.push_back({"cat", "", "", "u"});
            for (const auto& f : db.flows) m.factors["cat"][f.id] = 1.5;
            double a = characterize(base, m).impacts.values.at("cat");
            double b = characterize(twice, m).impacts.values.at("cat");
            if (!close_rel(2.0 * a, b, 1e-12)) {
                ok = false;
                detail = "impact linearity, trial " + std::to_string(trial);
            }
        }
    }
    (void)in;
    report(2, "inventory and impacts are linear in demand (100 fixtures, both modes)", ok,
           detail);
}

void criterion_3(const Inputs& in) {
    // Per-category group contributions sum to the total score.
    bool ok = true;
    std::string detail;
    for (const BackgroundDatabase* db : {&in.sphera, &in.ecoinvent}) {
        auto r = assess(in.bom, in.rules, *db, in.method);
        for (const auto& [cid, total] : r.contributionTable.total.values) {
            double sum = 0.0;
            for (const auto& [group, impacts] : r.contributionTable.rows)
                sum += impacts.values.at(cid);
            if (!close_rel(sum, total, 1e-9)) {
                ok = false;
                detail = db->id + " category " + cid;
            }
        }
    }
    report(3, "contribution analysis closes: group scores sum to the total", ok, detail);
}

void criterion_4(const Inputs& in) {
    // The ASIC group is the top contributor in every impact category in
    // both databases. Group scores are re-summed here directly from the
    // attributed inventory rather than taken from the contribution table.
    bool ok = true;
    std::string detail;
    for (const BackgroundDatabase* db : {&in.sphera, &in.ecoinvent}) {
        auto resolved = resolve(in.bom, in.rules.mappingRules, in.rules.cutoff_for(db->id),
                                db->id, *db);
        auto inv = compute_lci(resolved.demands, *db);
        std::map<std::string, SparseVector> groupInv;
        for (const auto& [source, sub] : inv.attribution) {
            std::string group;
            if (auto it = in.rules.componentGroups.find(source);
                it != in.rules.componentGroups.end())
                group = it->second;
            else if (is_transport_source(source))
                group = "transport";
            else
                group = "other";
            for (const auto& [fid, v] : sub) groupInv[group][fid] += v;
        }
        std::map<std::string, ImpactVector> groupImpacts;
        for (const auto& [group, gi] : groupInv)
            groupImpacts[group] = characterize(gi, in.method).impacts;
        for (const auto& c : in.method.categories) {
            std::string best;
            double bestValue = -1.0;
            for (const auto& [group, impacts] : groupImpacts) {
                double v = impacts.values.at(c.id);
                if (v > bestValue) {
                    bestValue = v;
                    best = group;
                }
            }
            if (best != "ASICs") {
                ok = false;
                detail = db->id + " category " + c.id + ": top group is '" + best + "'";
            }
        }
        // cross-check against the library's own ranking
        auto r = assess(in.bom, in.rules, *db, in.method);
        for (const auto& c : in.method.categories) {
            auto ranking = hotspot_ranking(r.contributionTable, c.id);
            if (ranking.degenerate || ranking.shares.empty() ||
                ranking.shares.front().first != "ASICs") {
                ok = false;
                detail = db->id + " hotspot ranking disagrees in " + c.id;
            }
        }
    }
    report(4, "ASICs are the top hotspot in every category of both databases", ok, detail);
}

void criterion_5(const Inputs& in) {
    // Database-specific cutoffs: connectors are excluded under demo-sphera,
    // crystal oscillators under demo-ecoinvent; every excluded component is
    // named in the cutoff report with reason "database-cutoff" and
    // contributes no demand.
    bool ok = true;
    std::string detail;
    struct Case {
        const BackgroundDatabase* db;
        std::vector<std::string> expected;
    };
    std::vector<Case> cases{{&in.sphera, {"connectors-pcie"}},
                            {&in.ecoinvent, {"ctrl-xtal", "hb-xtal"}}};
    for (const auto& c : cases) {
        auto r = resolve(in.bom, in.rules.mappingRules, in.rules.cutoff_for(c.db->id),
                         c.db->id, *c.db);
        std::set<std::string> cut;
        for (const auto& e : r.cutoffReport) {
            cut.insert(e.componentId);
            if (e.reason != "database-cutoff") {
                ok = false;
                detail = c.db->id + ": reason '" + e.reason + "'";
            }
        }
        std::set<std::string> expected(c.expected.begin(), c.expected.end());
        if (cut != expected) {
            ok = false;
            detail = c.db->id + ": cutoff set has " + std::to_string(cut.size()) + " entries";
        }
        for (const auto& d : r.demands)
            if (expected.count(d.sourceComponentId) ||
                (is_transport_source(d.sourceComponentId) &&
                 expected.count(d.sourceComponentId.substr(d.sourceComponentId.find('#') + 1)))) {
                ok = false;
                detail = c.db->id + ": cut component still produced demand";
            }
    }
    report(5, "database cutoffs are reported by name and produce no demand", ok, detail);
}

void criterion_6(const Inputs& in) {
    // The shipped scenario table yields all eight rows; shortening the
    // lifespan raises the production share; and the share formula is exact
    // on a hand value (10 vs 30 -> 0.25).
    bool ok = true;
    std::string detail;
    try {
        std::map<std::string, BackgroundDatabase> dbs{{in.sphera.id, in.sphera},
                                                      {in.ecoinvent.id, in.ecoinvent}};
        auto rows = run_scenarios(in.scenarios, in.bom, in.rules, dbs, in.method);
        if (rows.size() != 8) {
            ok = false;
            detail = std::to_string(rows.size()) + " rows";
        } else {
            for (const auto& [cid, s7] : rows[6].shares) {
                auto s8 = rows[7].shares.at(cid);
                if (!s7 || !s8 || (*s7 < 1.0 && !(*s7 > *s8))) {
                    ok = false;
                    detail = "lifespan ordering fails in " + cid;
                }
            }
        }
        ImpactVector prod, use;
        prod.methodId = use.methodId = "m";
        prod.values["gwp"] = 10.0;
        use.values["gwp"] = 30.0;
        if (production_share(prod, use).at("gwp") != 0.25) {
            ok = false;
            detail = "hand share is not exactly 0.25";
        }
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(6, "eight use-phase scenarios run; shorter lifespan raises the production share",
           ok, detail);
}

void criterion_7(const Inputs& in) {
    // Cross-database comparison: the reference row is exactly 1.0, and
    // swapping the reference inverts every ratio to 1e-12.
    bool ok = true;
    std::string detail;
    std::map<std::string, ImpactVector> results;
    for (const BackgroundDatabase* db : {&in.sphera, &in.ecoinvent})
        results[db->id] = assess(in.bom, in.rules, *db, in.method).characterized.impacts;
    auto fwd = compare_databases(results, in.sphera.id);
    auto rev = compare_databases(results, in.ecoinvent.id);
    for (const auto& [cid, ratio] : fwd.rows.at(in.sphera.id))
        if (!ratio || *ratio != 1.0) {
            ok = false;
            detail = "reference row not exactly 1 in " + cid;
        }
    for (const auto& [cid, ratio] : rev.rows.at(in.ecoinvent.id))
        if (!ratio || *ratio != 1.0) {
            ok = false;
            detail = "reference row not exactly 1 in " + cid;
        }
    for (const auto& [cid, ratio] : fwd.rows.at(in.ecoinvent.id)) {
        auto back = rev.rows.at(in.sphera.id).at(cid);
        if (!ratio || !back || !close_rel(*ratio * *back, 1.0, 1e-12)) {
            ok = false;
            detail = "ratios do not invert in " + cid;
        }
    }
    report(7, "comparison reference row is exactly 1 and swaps invert ratios", ok, detail);
}

void criterion_8() {
    // Scaling-formula oracles: die-area mass, PCB layer blend, transport tkm.
    bool ok = true;
    std::string detail;
    if (!close_rel(ic_mass_from_die_area(20.0, 70000.0), 2.0 / 7000.0, 1e-12)) {
        ok = false;
        detail = "die-area mass";
    }
    auto blend = pcb_layer_blend(6);
    if (blend.size() != 2 || blend.at(4) != 0.5 || blend.at(8) != 0.5) {
        ok = false;
        detail = "6-layer blend";
    }
    std::map<std::string, std::string> procs{{"train", "p1"}, {"truck", "p2"}};
    auto t = transport_demands(4.2, {{"train", 20.0}, {"truck", 20.0}}, procs, "c");
    if (t.size() != 2 || !close_rel(t[0].amount, 0.084, 1e-12) ||
        !close_rel(t[1].amount, 0.084, 1e-12)) {
        ok = false;
        detail = "transport tkm";
    }
    if (die_area_from_package(81.0, 0.25) != 20.25) {
        ok = false;
        detail = "die-to-package ratio";
    }
    report(8, "scaling formulas match hand-computed oracles", ok, detail);
}

void criterion_9() {
    bool ok = use_phase_energy(1.4, 3.0) == 36792.0 &&
              use_phase_energy(1.0, 1.0) == 8760.0;
    report(9, "use-phase energy is exactly power × lifespan × 8760 h", ok);
}

void criterion_10(const Inputs& in) {
    // Sensitivity: low <= typical <= high per category on the shipped
    // bounds, and fully degenerate bounds give zero spreads everywhere.
    bool ok = true;
    std::string detail;
    try {
        auto bounds = load_bounds(kData + "/bounds_demo.json");
        auto r = run_sensitivity(bounds, in.bom, in.rules, in.sphera, in.method);
        for (const auto& [cid, typical] : r.typical.values) {
            double lo = r.low.values.at(cid);
            double hi = r.high.values.at(cid);
            double eps = 1e-12 * std::max({std::abs(lo), std::abs(typical), std::abs(hi)});
            if (!(lo <= typical + eps && typical <= hi + eps)) {
                ok = false;
                detail = "ordering fails in " + cid;
            }
        }
        auto degenerate = bounds;
        for (auto& b : degenerate) b.low = b.high = b.typical;
        auto d = run_sensitivity(degenerate, in.bom, in.rules, in.sphera, in.method);
        for (const auto& [cid, spread] : d.spreads) {
            if ((spread.first && *spread.first != 0.0) ||
                (spread.second && *spread.second != 0.0)) {
                ok = false;
                detail = "degenerate bounds give nonzero spread in " + cid;
            }
        }
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(10, "sensitivity results are ordered and degenerate bounds give zero spread", ok,
           detail);
}

// ---- criterion 11: CLI determinism ---------------------------------------

int run_cli(const std::string& args) {
    std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

void criterion_11() {
    bool ok = true;
    std::string detail;
    fs::path root = fs::temp_directory_path() / "lcakit_acceptance";
    fs::remove_all(root);

    std::string common = " --bom \"" + kData + "/antminer_s9_bom.json\"" +
                         " --method \"" + kData + "/method_recipe2016_demo.json\"" +
                         " --rules \"" + kData + "/rules_s9.json\"";
    std::string sphera = " --db \"" + kData + "/db_demo_sphera.json\"";
    std::string ecoinvent = " --db \"" + kData + "/db_demo_ecoinvent.json\"";

    std::vector<std::pair<std::string, std::string>> runs{
        {"assess_agg", "assess" + common + sphera},
        {"assess_linked", "assess" + common + ecoinvent + " --dump-solver"},
        {"compare", "compare" + common + sphera + ecoinvent + " --reference demo-sphera"},
        {"scenarios", "scenarios" + common + sphera + ecoinvent + " --scenarios \"" + kData +
                          "/scenarios_table2.json\""},
        {"sensitivity", "sensitivity" + common + sphera + " --bounds \"" + kData +
                            "/bounds_demo.json\""},
        {"extrapolate", "extrapolate" + common + sphera + " --spec \"" + kData +
                            "/extrapolation_s19pro.json\""},
    };

    for (const auto& [name, args] : runs) {
        fs::path dirA = root / (name + "_a");
        fs::path dirB = root / (name + "_b");
        int rcA = run_cli(args + " --out \"" + dirA.string() + "\"");
        int rcB = run_cli(args + " --out \"" + dirB.string() + "\"");
        if (rcA != 0 || rcB != 0) {
            ok = false;
            detail = name + " exited non-zero";
            continue;
        }
        size_t files = 0;
        for (const auto& entry : fs::directory_iterator(dirA)) {
            ++files;
            fs::path other = dirB / entry.path().filename();
            if (!fs::exists(other) || !same_bytes(entry.path(), other)) {
                ok = false;
                detail = name + "/" + entry.path().filename().string() + " differs";
            }
        }
        if (files == 0) {
            ok = false;
            detail = name + " produced no output";
        }
    }
    report(11, "every CLI command is byte-for-byte deterministic across runs", ok, detail);
}

}  // namespace

int main() {
    try {
        Inputs in;
        criterion_1();
        criterion_2(in);
        criterion_3(in);
        criterion_4(in);
        criterion_5(in);
        criterion_6(in);
        criterion_7(in);
        criterion_8();
        criterion_9();
        criterion_10(in);
        criterion_11();
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
