// lcakit — cradle-to-gate life-cycle assessment of electronic hardware from
// a declarative bill of materials. Emits deterministic CSV reports.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcakit/json_io.hpp"
#include "lcakit/pipeline.hpp"
#include "lcakit/reports.hpp"
#include "lcakit/scenario.hpp"

namespace fs = std::filesystem;
using namespace lcakit;

namespace {

struct RunConfig {
    std::string bomPath;
    std::vector<std::string> dbPaths;
    std::string methodPath;
    std::string rulesPath;
    std::string scenarioPath;
    std::string boundsPath;
    std::string specPath;
    std::string outDir = ".";
    std::string referenceId;
    double tol = kDefaultSolverTolerance;
    bool dumpSolver = false;
};

struct LoadedInputs {
    BillOfMaterials bom;
    std::map<std::string, BackgroundDatabase> dbs;
    std::vector<std::string> dbOrder;  // order given on the command line
    CharacterizationMethod method;
    RuleSet rules;
};

// All inputs are parsed and validated before any computation; no output
// file is written if anything is invalid.
LoadedInputs load_inputs(const RunConfig& cfg, bool needBom = true) {
    LoadedInputs in;
    if (needBom) {
        in.bom = load_bom(cfg.bomPath);
        require_valid(validate_bom(in.bom), "bill of materials '" + cfg.bomPath + "'");
    }
    for (const auto& path : cfg.dbPaths) {
        BackgroundDatabase db = load_database(path);
        require_valid(validate_database(db), "database '" + db.id + "'");
        if (in.dbs.count(db.id))
            throw UsageError("database id '" + db.id + "' given twice");
        in.dbOrder.push_back(db.id);
        in.dbs.emplace(db.id, std::move(db));
    }
    if (!cfg.methodPath.empty()) {
        in.method = load_method(cfg.methodPath);
        require_valid(validate_method(in.method), "method '" + in.method.id + "'");
    }
    if (!cfg.rulesPath.empty()) {
        in.rules = load_rules(cfg.rulesPath);
        for (const auto& [id, db] : in.dbs)
            require_valid(validate_rules(in.rules.mappingRules, db),
                          "mapping rules for '" + id + "'");
    }
    return in;
}

std::string joined_db_ids(const LoadedInputs& in) {
    std::string out;
    for (const auto& id : in.dbOrder) {
        if (!out.empty()) out += ",";
        out += id;
    }
    return out;
}

void write_report(const CsvWriter& csv, const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    csv.write((dir / name).string());
    std::cout << "wrote " << (dir / name).string() << "\n";
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
}

int cmd_validate(const RunConfig& cfg) {
    ValidationReport all;
    if (!cfg.bomPath.empty()) {
        auto r = validate_bom(load_bom(cfg.bomPath));
        all.insert(all.end(), r.begin(), r.end());
    }
    std::map<std::string, BackgroundDatabase> dbs;
    for (const auto& path : cfg.dbPaths) {
        BackgroundDatabase db = load_database(path);
        auto r = validate_database(db);
        all.insert(all.end(), r.begin(), r.end());
        dbs.emplace(db.id, std::move(db));
    }
    if (!cfg.methodPath.empty()) {
        auto r = validate_method(load_method(cfg.methodPath));
        all.insert(all.end(), r.begin(), r.end());
    }
    if (!cfg.rulesPath.empty()) {
        RuleSet rules = load_rules(cfg.rulesPath);
        for (const auto& [id, db] : dbs) {
            auto r = validate_rules(rules.mappingRules, db);
            all.insert(all.end(), r.begin(), r.end());
        }
    }
    for (const auto& v : all)
        std::cout << v.entityId << "," << v.ruleId << "," << v.message << "\n";
    if (!all.empty()) {
        std::cerr << all.size() << " violation(s)\n";
        return static_cast<int>(ErrorCode::Validation);
    }
    std::cout << "all inputs valid\n";
    return 0;
}

int cmd_assess(const RunConfig& cfg) {
    if (cfg.dbPaths.size() != 1)
        throw UsageError("assess needs exactly one --db");
    LoadedInputs in = load_inputs(cfg);
    const BackgroundDatabase& db = in.dbs.begin()->second;
    ReportMetadata meta{db.id, in.method.id, cfg.tol};

    SolverDump dump;
    AssessmentResult r = assess(in.bom, in.rules, db, in.method, cfg.tol,
                                cfg.dumpSolver ? &dump : nullptr);
    print_warnings(r.resolved.warnings);

    write_report(reports::contributions_csv(r.contributionTable, in.method, meta), cfg.outDir,
                 "contributions.csv");
    write_report(reports::totals_csv(r.characterized.impacts, in.method, meta), cfg.outDir,
                 "totals.csv");
    write_report(reports::uncharacterized_csv(r.characterized.uncharacterizedFlows, meta),
                 cfg.outDir, "uncharacterized_flows.csv");
    write_report(reports::cutoff_csv(r.resolved.cutoffReport, meta), cfg.outDir, "cutoff.csv");
    if (cfg.dumpSolver && db.mode == DatabaseMode::Linked)
        write_report(reports::solver_dump_csv(dump, meta), cfg.outDir, "solver_dump.csv");
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    if (cfg.dbPaths.size() < 2)
        throw UsageError("compare needs at least two --db");
    LoadedInputs in = load_inputs(cfg);
    std::string reference = cfg.referenceId.empty() ? in.dbOrder.front() : cfg.referenceId;
    ReportMetadata meta{joined_db_ids(in), in.method.id, cfg.tol};

    std::map<std::string, ImpactVector> results;
    for (const auto& [id, db] : in.dbs) {
        AssessmentResult r = assess(in.bom, in.rules, db, in.method, cfg.tol);
        print_warnings(r.resolved.warnings);
        for (const auto& f : r.characterized.uncharacterizedFlows)
            std::cerr << "warning: flow '" << f << "' of database '" << id
                      << "' has no characterization factor\n";
        results[id] = r.characterized.impacts;
    }
    ComparisonTable table = compare_databases(results, reference);
    print_warnings(table.warnings);
    write_report(reports::comparison_csv(table, in.method, meta), cfg.outDir, "comparison.csv");
    return 0;
}

int cmd_scenarios(const RunConfig& cfg) {
    if (cfg.scenarioPath.empty())
        throw UsageError("scenarios needs --scenarios <file>");
    LoadedInputs in = load_inputs(cfg);
    ScenarioFile file = load_scenarios(cfg.scenarioPath);
    ReportMetadata meta{joined_db_ids(in), in.method.id, cfg.tol};
    if (file.scenarios.empty())
        std::cerr << "warning: scenario file contains no scenarios\n";
    auto rows = run_scenarios(file, in.bom, in.rules, in.dbs, in.method, cfg.tol);
    write_report(reports::shares_csv(rows, in.method, meta), cfg.outDir, "shares.csv");
    return 0;
}

int cmd_sensitivity(const RunConfig& cfg) {
    if (cfg.dbPaths.size() != 1)
        throw UsageError("sensitivity needs exactly one --db");
    if (cfg.boundsPath.empty())
        throw UsageError("sensitivity needs --bounds <file>");
    LoadedInputs in = load_inputs(cfg);
    SensitivityBounds bounds = load_bounds(cfg.boundsPath);
    const BackgroundDatabase& db = in.dbs.begin()->second;
    ReportMetadata meta{db.id, in.method.id, cfg.tol};

    SensitivityResult result = run_sensitivity(bounds, in.bom, in.rules, db, in.method, cfg.tol);
    write_report(reports::totals_csv(result.low, in.method, meta), cfg.outDir, "totals_low.csv");
    write_report(reports::totals_csv(result.typical, in.method, meta), cfg.outDir,
                 "totals_typical.csv");
    write_report(reports::totals_csv(result.high, in.method, meta), cfg.outDir, "totals_high.csv");
    write_report(reports::spreads_csv(result, in.method, meta), cfg.outDir, "spreads.csv");
    return 0;
}

int cmd_extrapolate(const RunConfig& cfg) {
    if (cfg.dbPaths.size() != 1)
        throw UsageError("extrapolate needs exactly one --db");
    if (cfg.specPath.empty())
        throw UsageError("extrapolate needs --spec <file>");
    LoadedInputs in = load_inputs(cfg);
    ExtrapolationSpec spec = load_extrapolation(cfg.specPath);
    if (!spec.baseDeviceId.empty() && spec.baseDeviceId != in.bom.deviceId)
        throw ValidationError("extrapolation spec targets device '" + spec.baseDeviceId +
                              "', bill of materials is '" + in.bom.deviceId + "'");
    const BackgroundDatabase& db = in.dbs.begin()->second;
    ReportMetadata meta{db.id, in.method.id, cfg.tol};

    BillOfMaterials scaled = extrapolate(in.bom, spec);
    require_valid(validate_bom(scaled), "extrapolated bill of materials");
    ImpactVector base = assess(in.bom, in.rules, db, in.method, cfg.tol).characterized.impacts;
    ImpactVector target = assess(scaled, in.rules, db, in.method, cfg.tol).characterized.impacts;

    fs::create_directories(cfg.outDir);
    std::string bomOut = (fs::path(cfg.outDir) / "extrapolated_bom.json").string();
    save_json(bom_to_json(scaled), bomOut);
    std::cout << "wrote " << bomOut << "\n";
    write_report(reports::ratios_csv(base, target, in.method, meta), cfg.outDir, "ratios.csv");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cradle-to-gate LCA of electronic hardware from a bill of materials"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* cmd, bool needsMethod = true) {
        cmd->add_option("--bom", cfg.bomPath, "Bill-of-materials JSON file");
        cmd->add_option("--db", cfg.dbPaths, "Background database JSON file (repeatable)");
        if (needsMethod) {
            cmd->add_option("--method", cfg.methodPath, "Characterization method JSON file");
            cmd->add_option("--rules", cfg.rulesPath, "Mapping rules JSON file");
        }
        cmd->add_option("--out", cfg.outDir, "Output directory");
        cmd->add_option("--tol", cfg.tol, "Relative residual tolerance of the Leontief solver");
        cmd->add_flag("--dump-solver", cfg.dumpSolver, "Dump demand/scaling vectors as CSV");
    };

    auto* validate = app.add_subcommand("validate", "Validate input files");
    validate->add_option("--bom", cfg.bomPath, "Bill-of-materials JSON file");
    validate->add_option("--db", cfg.dbPaths, "Background database JSON file (repeatable)");
    validate->add_option("--method", cfg.methodPath, "Characterization method JSON file");
    validate->add_option("--rules", cfg.rulesPath, "Mapping rules JSON file");

    auto* assessCmd = app.add_subcommand("assess", "Cradle-to-gate assessment on one database");
    add_common(assessCmd);

    auto* compare = app.add_subcommand("compare", "Cross-database comparison (reference = 1)");
    add_common(compare);
    compare->add_option("--reference", cfg.referenceId, "Reference database id");

    auto* scenarios = app.add_subcommand("scenarios", "Production-vs-use share table");
    add_common(scenarios);
    scenarios->add_option("--scenarios", cfg.scenarioPath, "Use-phase scenario JSON file");

    auto* sensitivity = app.add_subcommand("sensitivity", "Low/typical/high sensitivity runs");
    add_common(sensitivity);
    sensitivity->add_option("--bounds", cfg.boundsPath, "Sensitivity bounds JSON file");

    auto* extrapolateCmd = app.add_subcommand("extrapolate", "Scale the model to another device");
    add_common(extrapolateCmd);
    extrapolateCmd->add_option("--spec", cfg.specPath, "Extrapolation spec JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorCode::Usage);
    }

    try {
        if (*validate) return cmd_validate(cfg);
        if (*assessCmd) return cmd_assess(cfg);
        if (*compare) return cmd_compare(cfg);
        if (*scenarios) return cmd_scenarios(cfg);
        if (*sensitivity) return cmd_sensitivity(cfg);
        if (*extrapolateCmd) return cmd_extrapolate(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
