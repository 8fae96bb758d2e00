#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcakit/csv.hpp"
#include "lcakit/impact.hpp"
#include "lcakit/model.hpp"
#include "lcakit/scaling.hpp"
#include "lcakit/scenario.hpp"

namespace lcakit {

inline constexpr const char* kToolVersion = "0.1.0";

struct ReportMetadata {
    std::string databaseIds;  // comma-joined when several
    std::string methodId;
    double solverTolerance = kDefaultSolverTolerance;
};

namespace reports {

inline void add_metadata(CsvWriter& csv, const ReportMetadata& meta) {
    csv.add_metadata("tool-version", kToolVersion);
    csv.add_metadata("schema-version", "1");
    csv.add_metadata("database", meta.databaseIds);
    csv.add_metadata("method", meta.methodId);
    csv.add_metadata("hours-per-year", format_number(kHoursPerYear));
    csv.add_metadata("solver-tolerance", format_number(meta.solverTolerance));
}

inline std::vector<std::string> category_columns(const CharacterizationMethod& method) {
    std::vector<std::string> cols;
    for (const auto& c : method.categories)
        cols.push_back(c.id);
    return cols;
}

// Group x category matrix plus a total row. Categories in method-file order.
inline CsvWriter contributions_csv(const ContributionTable& table,
                                   const CharacterizationMethod& method,
                                   const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    std::vector<std::string> header{"group"};
    for (const auto& c : category_columns(method))
        header.push_back(c);
    csv.set_header(header);
    for (const auto& [group, impacts] : table.rows) {
        std::vector<std::string> row{group};
        for (const auto& c : category_columns(method)) {
            auto it = impacts.values.find(c);
            row.push_back(format_number(it == impacts.values.end() ? 0.0 : it->second));
        }
        csv.add_row(row);
    }
    std::vector<std::string> totalRow{"total"};
    for (const auto& c : category_columns(method)) {
        auto it = table.total.values.find(c);
        totalRow.push_back(format_number(it == table.total.values.end() ? 0.0 : it->second));
    }
    csv.add_row(totalRow);
    return csv;
}

inline CsvWriter totals_csv(const ImpactVector& impacts,
                            const CharacterizationMethod& method,
                            const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.set_header({"category", "unit", "value"});
    for (const auto& c : method.categories) {
        auto it = impacts.values.find(c.id);
        csv.add_row({c.id, c.unit, format_number(it == impacts.values.end() ? 0.0 : it->second)});
    }
    return csv;
}

inline CsvWriter comparison_csv(const ComparisonTable& table,
                                const CharacterizationMethod& method,
                                const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.add_metadata("reference", table.referenceDatabaseId);
    std::vector<std::string> header{"database"};
    for (const auto& c : category_columns(method))
        header.push_back(c);
    csv.set_header(header);
    for (const auto& [dbId, row] : table.rows) {
        std::vector<std::string> cells{dbId};
        for (const auto& c : category_columns(method)) {
            auto it = row.find(c);
            if (it == row.end() || !it->second)
                cells.push_back("");  // undefined ratio
            else
                cells.push_back(format_number(*it->second));
        }
        csv.add_row(cells);
    }
    return csv;
}

inline CsvWriter cutoff_csv(const std::vector<CutoffEntry>& entries, const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.set_header({"componentId", "databaseId", "reason"});
    for (const auto& e : entries)
        csv.add_row({e.componentId, e.databaseId, e.reason});
    return csv;
}

inline CsvWriter uncharacterized_csv(const std::vector<std::string>& flows,
                                     const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.set_header({"flowId"});
    for (const auto& f : flows)
        csv.add_row({f});
    return csv;
}

inline CsvWriter shares_csv(const std::vector<ScenarioShareRow>& rows,
                            const CharacterizationMethod& method,
                            const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    std::vector<std::string> header{"scenario", "database", "mix", "powerKw", "lifespanYears"};
    for (const auto& c : category_columns(method))
        header.push_back(c);
    csv.set_header(header);
    for (const auto& r : rows) {
        std::vector<std::string> cells{std::to_string(r.scenarioId), r.databaseId, r.mixId,
                                       format_number(r.powerKw), format_number(r.lifespanYears)};
        for (const auto& c : category_columns(method)) {
            auto it = r.shares.find(c);
            if (it == r.shares.end() || !it->second)
                cells.push_back("");
            else
                cells.push_back(format_number(*it->second));
        }
        csv.add_row(cells);
    }
    return csv;
}

inline CsvWriter spreads_csv(const SensitivityResult& result,
                             const CharacterizationMethod& method,
                             const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.set_header({"category", "low", "typical", "high", "spreadHigh", "spreadLow"});
    for (const auto& c : method.categories) {
        const auto& [up, down] = result.spreads.at(c.id);
        csv.add_row({c.id,
                     format_number(result.low.values.at(c.id)),
                     format_number(result.typical.values.at(c.id)),
                     format_number(result.high.values.at(c.id)),
                     up ? format_number(*up) : "",
                     down ? format_number(*down) : ""});
    }
    return csv;
}

inline CsvWriter ratios_csv(const ImpactVector& base,
                            const ImpactVector& target,
                            const CharacterizationMethod& method,
                            const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.set_header({"category", "base", "target", "ratio"});
    for (const auto& c : method.categories) {
        double b = base.values.at(c.id);
        double t = target.values.at(c.id);
        csv.add_row({c.id, format_number(b), format_number(t),
                     b == 0.0 ? "" : format_number(t / b)});
    }
    return csv;
}

inline CsvWriter solver_dump_csv(const SolverDump& dump, const ReportMetadata& meta) {
    CsvWriter csv;
    add_metadata(csv, meta);
    csv.add_metadata("residual", format_number(dump.residual));
    csv.set_header({"processId", "demand", "scaling"});
    for (const auto& [pid, f] : dump.demand)
        csv.add_row({pid, format_number(f), format_number(dump.scaling.at(pid))});
    return csv;
}

}  // namespace reports
}  // namespace lcakit
