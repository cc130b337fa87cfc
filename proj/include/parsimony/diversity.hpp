#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "parsimony/label_metric.hpp"

namespace parsimony {

inline constexpr std::size_t kMaxTableLabels = 20;

/// Set function over non-empty label subsets. Either an explicit table of
/// all 2^H - 1 subset values (small H), or the diameter diversity of a
/// metric.
class Diversity {
public:
    struct Table {
        std::size_t num_labels = 0;
        std::vector<double> values;  // indexed by subset bitmask, values[0] unused
    };
    struct Diameter {
        LabelMetric metric;
    };

    /// values.size() must equal 2^num_labels; no axiom check happens here,
    /// see validate_diversity_axioms.
    static Diversity table(std::size_t num_labels, std::vector<double> values);
    static Diversity diameter(LabelMetric metric);

    std::size_t num_labels() const noexcept;
    bool is_table() const noexcept { return std::holds_alternative<Table>(repr_); }
    bool is_diameter() const noexcept { return std::holds_alternative<Diameter>(repr_); }
    const Table& as_table() const { return std::get<Table>(repr_); }
    const LabelMetric& as_metric() const { return std::get<Diameter>(repr_).metric; }

    /// subset must be non-empty with labels in range; throws InvalidInput otherwise.
    double operator()(std::span<const Label> subset) const;

    /// Table lookup by bitmask; only valid for table diversities.
    double by_mask(std::uint32_t mask) const { return std::get<Table>(repr_).values[mask]; }

private:
    explicit Diversity(std::variant<Table, Diameter> repr) : repr_(std::move(repr)) {}
    std::variant<Table, Diameter> repr_;
};

/// max_{a,b in subset} metric(a, b); 0 for singletons. Throws on empty.
double diameter_diversity(const LabelMetric& metric, std::span<const Label> subset);

/// d(a, b) = delta({a, b}). Throws AxiomViolation naming the failed
/// metric axiom.
LabelMetric induced_metric(const Diversity& diversity);

struct AxiomWitness {
    std::string axiom;  // "non_negativity", "monotonicity", "triangle", or a metric axiom
    std::vector<LabelSubset> subsets;
    std::string detail;
};

struct AxiomReport {
    std::vector<AxiomWitness> violations;
    bool exhaustive = true;
    std::uint64_t checks = 0;
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks non-negativity (delta = 0 iff |G| <= 1), monotonicity and the
/// set triangle inequality. Subsets are enumerated exhaustively for
/// H <= 12 (triangle for H <= 10); above that a seeded sample is used and
/// the report is marked non-exhaustive. Diameter diversities are checked
/// through their metric.
AxiomReport validate_diversity_axioms(const Diversity& diversity, std::size_t max_witnesses = 16);

LabelSubset mask_to_subset(std::uint32_t mask);
std::uint32_t subset_to_mask(std::span<const Label> subset);

}  // namespace parsimony
