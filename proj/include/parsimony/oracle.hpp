#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parsimony/energy_model.hpp"
#include "parsimony/expansion.hpp"

namespace parsimony::oracle {

inline constexpr std::uint64_t kMaxLabelings = 10'000'000;
inline constexpr std::uint64_t kMaxMoveSpace = 1'000'000;

struct ExhaustiveResult {
    Labeling labeling;       // lexicographically first optimum
    double energy = 0.0;
    double unary_term = 0.0;
    double clique_term = 0.0;
    std::uint64_t optima = 0;  // labelings attaining the optimum exactly
};

/// Direct per-term summation, independent of evaluate_energy: unique labels
/// collected with a bitset/ordered scan and the potential looked up
/// straight from the potential variant.
EnergyTerms reference_energy(const EnergyModel& model, std::span<const Label> labeling);
EnergyTerms reference_energy(const PnPottsInstance& instance, std::span<const Label> labeling);

/// Enumerates all H^N labelings in lexicographic order; throws
/// SizeLimitExceeded when H^N > kMaxLabelings.
ExhaustiveResult exhaustive_minimize(const EnergyModel& model);
ExhaustiveResult exhaustive_minimize(const PnPottsInstance& instance);

/// Enumerates the 2^F move labelings (F = variables not at alpha); throws
/// SizeLimitExceeded when 2^N > kMaxMoveSpace.
Labeling exhaustive_expansion_move(const PnPottsInstance& instance, std::span<const Label> current, Label alpha);

}  // namespace parsimony::oracle
