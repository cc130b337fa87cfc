#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "parsimony/diversity.hpp"
#include "parsimony/label_metric.hpp"
#include "parsimony/rhst.hpp"
#include "parsimony/types.hpp"

namespace parsimony {

using Labeling = std::vector<Label>;

struct Clique {
    std::vector<std::int32_t> members;
    double weight = 1.0;
};

/// theta_c = w_c * gamma[k] when every member takes label k, w_c * gamma_max otherwise.
struct PnPottsPotential {
    std::vector<double> gamma;
    double gamma_max = 0.0;
};

struct DiversityPotential {
    Diversity diversity;
};

/// Diameter diversity over a metric. When `tree` is set the metric is that
/// tree's metric and the potential is a hierarchical P^n Potts model.
struct DiameterPotential {
    LabelMetric metric;
    std::shared_ptr<const RHst> tree;
};

using CliquePotentialSpec = std::variant<PnPottsPotential, DiversityPotential, DiameterPotential>;

/// Unaries plus weighted cliques plus one potential shared by all cliques.
/// Immutable after construction; the constructor enforces every invariant.
class EnergyModel {
public:
    EnergyModel(std::size_t num_variables, std::size_t num_labels, std::vector<double> unaries,
                std::vector<Clique> cliques, CliquePotentialSpec potential);

    std::size_t num_variables() const noexcept { return num_variables_; }
    std::size_t num_labels() const noexcept { return num_labels_; }
    LabelSet label_set() const noexcept { return {static_cast<std::int32_t>(num_labels_)}; }

    double unary(std::size_t variable, Label label) const noexcept {
        return unaries_[variable * num_labels_ + static_cast<std::size_t>(label)];
    }
    std::span<const double> unaries() const noexcept { return unaries_; }
    const std::vector<Clique>& cliques() const noexcept { return cliques_; }
    const CliquePotentialSpec& potential() const noexcept { return potential_; }

    /// Largest clique size (0 without cliques).
    std::size_t max_clique_size() const noexcept;

    /// Potential (before the clique weight) of a sorted unique-label set.
    double clique_potential(std::span<const Label> unique) const;

    /// Same model with a different potential (unaries and cliques shared by copy).
    EnergyModel with_potential(CliquePotentialSpec potential) const;
    EnergyModel with_cliques(std::vector<Clique> cliques) const;

private:
    std::size_t num_variables_;
    std::size_t num_labels_;
    std::vector<double> unaries_;
    std::vector<Clique> cliques_;
    CliquePotentialSpec potential_;
};

/// Gamma(x_c): sorted unique labels taken by the clique members.
LabelSubset unique_labels(std::span<const Label> labeling, const Clique& clique);

struct EnergyTerms {
    double unary = 0.0;
    double clique = 0.0;
    double total() const noexcept { return unary + clique; }
};

/// sum_i theta_i(x_i) + sum_c w_c * potential(Gamma(x_c)).
/// Cliques with w_c == 0 contribute nothing. Throws InvalidInput on a
/// length mismatch or an out-of-range label.
double evaluate_energy(const EnergyModel& model, std::span<const Label> labeling);
EnergyTerms evaluate_energy_terms(const EnergyModel& model, std::span<const Label> labeling);

void check_labeling(std::size_t num_variables, std::size_t num_labels, std::span<const Label> labeling);

}  // namespace parsimony
