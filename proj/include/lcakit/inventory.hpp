#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "lcakit/csv.hpp"
#include "lcakit/errors.hpp"
#include "lcakit/model.hpp"
#include "lcakit/scaling.hpp"

namespace lcakit {

struct InventoryVector {
    SparseVector entries;  // flow-id -> amount
    std::map<std::string, SparseVector> attribution;  // source component -> sub-vector
};

struct SolverDump {
    std::map<std::string, double> demand;   // f
    std::map<std::string, double> scaling;  // s
    double residual = 0.0;
};

inline constexpr double kDefaultSolverTolerance = 1e-9;

namespace detail {

inline std::map<std::string, SparseVector> group_demands(const std::vector<ScaledDemand>& demands) {
    std::map<std::string, SparseVector> grouped;
    for (const auto& d : demands)
        grouped[d.sourceComponentId][d.processId] += d.amount;
    return grouped;
}

}  // namespace detail

// Aggregated (system-process) databases: the inventory is a weighted sum of
// per-process direct flows.
inline InventoryVector lci_aggregated(const std::vector<ScaledDemand>& demands,
                                      const BackgroundDatabase& db) {
    if (db.mode != DatabaseMode::Aggregated)
        throw ValidationError("lci_aggregated requires an aggregated database");
    InventoryVector inv;
    for (const auto& [source, f] : detail::group_demands(demands)) {
        SparseVector& sub = inv.attribution[source];
        for (const auto& [pid, amount] : f) {
            const UnitProcess* p = db.find_process(pid);
            if (!p)
                throw ResolutionError("demand references unknown process '" + pid + "'");
            for (const auto& [fid, perUnit] : p->directFlows)
                sub[fid] += amount * perUnit;
        }
        for (const auto& [fid, v] : sub)
            inv.entries[fid] += v;
    }
    return inv;
}

// Linked databases: solve (I - A) s = f with A the input-coefficient matrix
// (A[i][j] = input of process i per unit of process j), then push s through
// the direct flows. Direct dense factorization up to 2000 processes, sparse
// LU above that.
inline InventoryVector lci_linked(const std::vector<ScaledDemand>& demands,
                                  const BackgroundDatabase& db,
                                  double tol = kDefaultSolverTolerance,
                                  SolverDump* dump = nullptr) {
    if (db.mode != DatabaseMode::Linked)
        throw ValidationError("lci_linked requires a linked database");
    if (tol <= 0)
        throw ValidationError("solver tolerance must be > 0");

    const int n = static_cast<int>(db.processes.size());
    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i)
        index.emplace(db.processes[i].id, i);

    auto to_dense = [&](const SparseVector& f) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (const auto& [pid, amount] : f) {
            auto it = index.find(pid);
            if (it == index.end())
                throw ResolutionError("demand references unknown process '" + pid + "'");
            v[it->second] += amount;
        }
        return v;
    };

    constexpr int kDenseLimit = 2000;
    Eigen::PartialPivLU<Eigen::MatrixXd> denseLu;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> sparseLu;
    Eigen::SparseMatrix<double> sparseA(n, n);
    {
        std::vector<Eigen::Triplet<double>> triplets;
        for (int j = 0; j < n; ++j)
            for (const auto& [pid, amount] : db.processes[j].techInputs) {
                auto it = index.find(pid);
                if (it == index.end())
                    throw ValidationError("process '" + db.processes[j].id +
                                          "' references unknown input '" + pid + "'");
                triplets.emplace_back(it->second, j, amount);
            }
        sparseA.setFromTriplets(triplets.begin(), triplets.end());
    }
    if (n <= kDenseLimit) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(sparseA);
        denseLu.compute(m);
    } else {
        Eigen::SparseMatrix<double> m(n, n);
        m.setIdentity();
        m -= sparseA;
        sparseLu.compute(m);
        if (sparseLu.info() != Eigen::Success)
            throw SolverError("technosphere matrix factorization failed (singular system)");
    }

    auto solve = [&](const Eigen::VectorXd& f) -> Eigen::VectorXd {
        return n <= kDenseLimit ? denseLu.solve(f).eval() : sparseLu.solve(f).eval();
    };

    InventoryVector inv;
    Eigen::VectorXd fTotal = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sTotal = Eigen::VectorXd::Zero(n);
    for (const auto& [source, f] : detail::group_demands(demands)) {
        Eigen::VectorXd fv = to_dense(f);
        Eigen::VectorXd s = solve(fv);
        fTotal += fv;
        sTotal += s;
        SparseVector& sub = inv.attribution[source];
        for (int i = 0; i < n; ++i) {
            if (s[i] == 0.0) continue;
            for (const auto& [fid, perUnit] : db.processes[i].directFlows)
                sub[fid] += s[i] * perUnit;
        }
        for (const auto& [fid, v] : sub)
            inv.entries[fid] += v;
    }

    double fNorm = fTotal.norm();
    double residual = 0.0;
    if (fNorm > 0) {
        residual = (sTotal - fTotal - sparseA * sTotal).norm() / fNorm;
        if (!std::isfinite(residual) || residual > tol)
            throw SolverError("Leontief solve did not converge: relative residual " +
                              format_number(residual) + " exceeds tolerance");
    }
    for (int i = 0; i < n; ++i)
        if (sTotal[i] < -tol * std::max(1.0, fNorm))
            throw SolverError("negative scaling for process '" + db.processes[i].id +
                              "': model admits no physical solution");

    if (dump) {
        for (int i = 0; i < n; ++i) {
            dump->demand[db.processes[i].id] = fTotal[i];
            dump->scaling[db.processes[i].id] = sTotal[i];
        }
        dump->residual = residual;
    }
    return inv;
}

inline InventoryVector compute_lci(const std::vector<ScaledDemand>& demands,
                                   const BackgroundDatabase& db,
                                   double tol = kDefaultSolverTolerance,
                                   SolverDump* dump = nullptr) {
    return db.mode == DatabaseMode::Aggregated ? lci_aggregated(demands, db)
                                               : lci_linked(demands, db, tol, dump);
}

}  // namespace lcakit
