#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "parsimony/energy_model.hpp"

namespace parsimony {

/// P^n Potts clique with its own cost table: weight * gamma[k] when every
/// member takes label k, weight * gamma_max otherwise.
struct PnPottsClique {
    std::vector<std::int32_t> members;
    std::vector<double> gamma;
    double gamma_max = 0.0;
    double weight = 1.0;
};

/// Labeling problem whose every clique is a P^n Potts potential.
/// Per-clique gamma tables let fusion moves reuse this type.
class PnPottsInstance {
public:
    PnPottsInstance(std::size_t num_variables, std::size_t num_labels, std::vector<double> unaries,
                    std::vector<PnPottsClique> cliques);

    /// Requires a PnPotts potential spec.
    static PnPottsInstance from_model(const EnergyModel& model);

    std::size_t num_variables() const noexcept { return num_variables_; }
    std::size_t num_labels() const noexcept { return num_labels_; }
    double unary(std::size_t i, Label l) const noexcept { return unaries_[i * num_labels_ + static_cast<std::size_t>(l)]; }
    std::span<const double> unaries() const noexcept { return unaries_; }
    const std::vector<PnPottsClique>& cliques() const noexcept { return cliques_; }
    std::size_t max_clique_size() const noexcept;

    double energy(std::span<const Label> labeling) const;
    EnergyTerms energy_terms(std::span<const Label> labeling) const;

private:
    std::size_t num_variables_;
    std::size_t num_labels_;
    std::vector<double> unaries_;
    std::vector<PnPottsClique> cliques_;
};

struct MoveRecord {
    std::size_t sweep = 0;
    Label alpha = 0;
    double energy = 0.0;
};

struct MoveTrace {
    double initial_energy = 0.0;
    std::vector<MoveRecord> moves;  // accepted moves only
    std::size_t sweeps = 0;
    Labeling final_labeling;
};

/// Minimum of the instance's energy over labelings where every variable
/// keeps its current label or switches to alpha; one st-cut.
Labeling best_expansion_move(const PnPottsInstance& instance, std::span<const Label> current, Label alpha);

struct ExpansionResult {
    Labeling labeling;
    MoveTrace trace;
};

/// Sweeps alpha = 0..H-1, accepting a move when it lowers the energy by
/// more than 1e-9, until a full sweep accepts nothing. Starts from all
/// zeros unless init is given.
ExpansionResult alpha_expansion(const PnPottsInstance& instance, std::optional<Labeling> init = std::nullopt);

/// lambda * min(M, H) with lambda = gamma_max / gamma_min (or gamma_max when
/// gamma_min == 0), gamma_min the least per-clique gamma and gamma_max the
/// largest per-clique gamma_max over cliques with positive weight.
double pn_potts_bound(const PnPottsInstance& instance);

inline constexpr double kMoveAcceptTolerance = 1e-9;

}  // namespace parsimony
