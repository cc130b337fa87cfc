#pragma once

#include <string>
#include <string_view>

#include "parsimony/energy_model.hpp"
#include "parsimony/rhst.hpp"
#include "parsimony/solver.hpp"

namespace parsimony {

/// Problem document:
///   {
///     "num_variables": N, "num_labels": H,
///     "unaries": [N*H numbers, row-major by variable],
///     "cliques": [{"members": [...], "weight": w}, ...],
///     "potential": {"kind": "pn_potts", "gamma": [H], "gamma_max": g}
///                | {"kind": "diversity_table", "values": [2^H numbers indexed by subset bitmask]}
///                | {"kind": "diameter_metric", "metric": METRIC}
///   }
///   METRIC = {"type": "matrix", "matrix": [[H x H]]}
///          | {"type": "truncated_linear", "lambda": l, "truncation": M}
///          | {"type": "uniform", "scale": s}
///          | {"type": "tree", "tree": TREE}
///
/// Errors are InvalidInput whose message starts with the offending field path.
EnergyModel parse_problem(std::string_view json_text);
EnergyModel load_problem(const std::string& path);
std::string problem_to_json(const EnergyModel& model, int indent = 2);

/// TREE = {"r": r, "nodes": [{"parent": p, "child_edge": e, "label": l}, ...]}
/// Node ids are array positions; "label" is -1 (or absent) for internal nodes.
RHst parse_tree(std::string_view json_text);
std::string tree_to_json(const RHst& tree, int indent = 2);

struct ReportOptions {
    bool include_timings = false;
};

/// Report document with schema_version, algorithm, energy terms, labeling,
/// component energies and seeds, and the bound values.
std::string report_to_json(const SolveReport& report, const ReportOptions& options = {}, int indent = 2);

}  // namespace parsimony
