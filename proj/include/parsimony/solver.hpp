#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parsimony/energy_model.hpp"
#include "parsimony/expansion.hpp"
#include "parsimony/frt.hpp"
#include "parsimony/rhst.hpp"

namespace parsimony {

struct ApproximationBounds {
    double r = 2.0;
    double bound1 = 0.0;  // hierarchical P^n Potts
    double bound2 = 0.0;  // general diversity (natural log)
    bool diameter_diversity = false;  // (H-1) factor dropped from bound2
    std::string log_base = "natural";
};

/// bound1 = r/(r-1) * min(M, H); bound2 = r/(r-1) * (H-1) * ln(H) * min(M, H),
/// without the (H-1) factor when the model's potential is a diameter
/// diversity. M is the largest clique size. Throws InvalidInput for r <= 1.
ApproximationBounds approximation_bounds(const EnergyModel& model, double r);

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct SolveReport {
    std::string algorithm;  // "alpha_expansion", "hierarchical", "parsimonious"
    Labeling labeling;
    double energy = 0.0;
    double unary_energy = 0.0;
    double clique_energy = 0.0;
    std::vector<double> component_energies;
    std::vector<std::uint64_t> component_seeds;
    std::size_t best_component = 0;
    std::uint64_t seed = 0;
    std::size_t mixture_size = 0;
    std::vector<StageTiming> timings;
    ApproximationBounds bounds;
    double pn_potts_bound = 0.0;  // only for alpha_expansion solves
};

/// Hierarchical move making over `tree`: leaves get constant labelings and
/// every internal node fuses its children's labelings with one P^n Potts
/// alpha-expansion over child indices, bottom-up. The surrogate potential
/// is the tree's hierarchical P^n Potts model; the reported energy is
/// evaluate_energy under the model's own potential.
SolveReport solve_hierarchical(const EnergyModel& model, const RHst& tree);

/// The fusion instance built at `node` from the children's labelings
/// (meta-labels are child positions in node.children). child_labelings is
/// indexed by node id. Exposed for tests.
PnPottsInstance build_fusion_instance(const EnergyModel& model, const RHst& tree, NodeId node,
                                      const std::vector<Labeling>& child_labelings);

struct ParsimoniousOptions {
    std::size_t mixture_size = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Induced metric -> FRT mixture -> solve_hierarchical per tree -> keep the
/// labeling with the least energy under the original potential (lowest
/// tree index on ties).
SolveReport solve_parsimonious(const EnergyModel& model, const ParsimoniousOptions& options);

/// Dispatch by potential kind: P^n Potts -> alpha_expansion, diameter over
/// a given tree -> solve_hierarchical, anything else -> solve_parsimonious.
SolveReport solve(const EnergyModel& model, const ParsimoniousOptions& options);

/// Diversity used to build trees: induced metric of the model's potential.
LabelMetric model_metric(const EnergyModel& model);

}  // namespace parsimony
