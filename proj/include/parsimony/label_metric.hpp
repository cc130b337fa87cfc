#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parsimony/types.hpp"

namespace parsimony {

/// Dense symmetric distance matrix over labels 0..H-1.
class LabelMetric {
public:
    LabelMetric() = default;

    /// Validates symmetry, zero diagonal, identity of indiscernibles and
    /// the triangle inequality (tolerance kAxiomTolerance); throws
    /// AxiomViolation on failure.
    static LabelMetric from_matrix(std::size_t num_labels, std::vector<double> row_major);

    /// For matrices that are metrics by construction (tree metrics).
    static LabelMetric from_trusted_matrix(std::size_t num_labels, std::vector<double> row_major);

    /// lambda * min(|a - b|, truncation)
    static LabelMetric truncated_linear(std::size_t num_labels, double lambda, int truncation);

    /// scale for every pair of distinct labels.
    static LabelMetric uniform(std::size_t num_labels, double scale);

    std::size_t size() const noexcept { return size_; }
    double operator()(Label a, Label b) const noexcept {
        return values_[static_cast<std::size_t>(a) * size_ + static_cast<std::size_t>(b)];
    }
    std::span<const double> data() const noexcept { return values_; }

    double diameter() const noexcept;
    double min_positive_distance() const noexcept;

    bool operator==(const LabelMetric&) const = default;

private:
    LabelMetric(std::size_t n, std::vector<double> v) : size_(n), values_(std::move(v)) {}

    std::size_t size_ = 0;
    std::vector<double> values_;
};

struct MetricIssue {
    std::string axiom;  // "symmetry", "zero_diagonal", "identity", "non_negativity", "triangle"
    std::vector<Label> witness;
    std::string detail;
};

/// Exhaustive O(H^3) axiom check. Stops collecting after max_issues.
std::vector<MetricIssue> check_metric_axioms(std::size_t num_labels, std::span<const double> row_major,
                                             std::size_t max_issues = 16);

}  // namespace parsimony
