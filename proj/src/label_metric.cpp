#include "parsimony/label_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace parsimony {

namespace {

std::string pair_text(std::size_t a, std::size_t b) {
    std::ostringstream os;
    os << "(" << a << ", " << b << ")";
    return os.str();
}

}  // namespace

std::vector<MetricIssue> check_metric_axioms(std::size_t n, std::span<const double> m, std::size_t max_issues) {
    std::vector<MetricIssue> issues;
    auto add = [&](std::string axiom, std::vector<Label> witness, std::string detail) {
        if (issues.size() < max_issues) {
            issues.push_back({std::move(axiom), std::move(witness), std::move(detail)});
        }
    };
    if (m.size() != n * n) {
        add("shape", {}, "matrix has " + std::to_string(m.size()) + " entries, expected " + std::to_string(n * n));
        return issues;
    }
    auto at = [&](std::size_t a, std::size_t b) { return m[a * n + b]; };
    for (std::size_t a = 0; a < n; ++a) {
        if (std::abs(at(a, a)) > kAxiomTolerance) {
            add("zero_diagonal", {static_cast<Label>(a)}, "d(a, a) = " + std::to_string(at(a, a)));
        }
        for (std::size_t b = 0; b < n; ++b) {
            const double v = at(a, b);
            if (!std::isfinite(v)) {
                add("non_negativity", {static_cast<Label>(a), static_cast<Label>(b)}, "non-finite distance at " + pair_text(a, b));
                continue;
            }
            if (v < -kAxiomTolerance) {
                add("non_negativity", {static_cast<Label>(a), static_cast<Label>(b)}, "negative distance at " + pair_text(a, b));
            }
            if (b > a && std::abs(v - at(b, a)) > kAxiomTolerance) {
                add("symmetry", {static_cast<Label>(a), static_cast<Label>(b)}, "d" + pair_text(a, b) + " != d" + pair_text(b, a));
            }
            if (b != a && v <= kAxiomTolerance && v >= -kAxiomTolerance) {
                add("identity", {static_cast<Label>(a), static_cast<Label>(b)}, "distinct labels at zero distance " + pair_text(a, b));
            }
        }
    }
    for (std::size_t a = 0; a < n && issues.size() < max_issues; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double dab = at(a, b);
            for (std::size_t c = 0; c < n; ++c) {
                if (dab + at(b, c) < at(a, c) - kAxiomTolerance) {
                    std::ostringstream os;
                    os << "d(" << a << "," << b << ") + d(" << b << "," << c << ") < d(" << a << "," << c << ")";
                    add("triangle", {static_cast<Label>(a), static_cast<Label>(b), static_cast<Label>(c)}, os.str());
                }
            }
        }
    }
    return issues;
}

LabelMetric LabelMetric::from_matrix(std::size_t num_labels, std::vector<double> row_major) {
    if (num_labels == 0) {
        throw InvalidInput("metric needs at least one label");
    }
    auto issues = check_metric_axioms(num_labels, row_major, 1);
    if (!issues.empty()) {
        throw AxiomViolation(issues.front().axiom, "metric " + issues.front().axiom + " violated: " + issues.front().detail);
    }
    return LabelMetric(num_labels, std::move(row_major));
}

LabelMetric LabelMetric::from_trusted_matrix(std::size_t num_labels, std::vector<double> row_major) {
    if (row_major.size() != num_labels * num_labels) {
        throw InvalidInput("metric matrix shape mismatch");
    }
    return LabelMetric(num_labels, std::move(row_major));
}

LabelMetric LabelMetric::truncated_linear(std::size_t num_labels, double lambda, int truncation) {
    if (num_labels == 0) {
        throw InvalidInput("metric needs at least one label");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidInput("truncated linear metric needs lambda > 0");
    }
    if (truncation < 1) {
        throw InvalidInput("truncated linear metric needs truncation >= 1");
    }
    std::vector<double> v(num_labels * num_labels);
    for (std::size_t a = 0; a < num_labels; ++a) {
        for (std::size_t b = 0; b < num_labels; ++b) {
            const long diff = std::labs(static_cast<long>(a) - static_cast<long>(b));
            v[a * num_labels + b] = lambda * static_cast<double>(std::min<long>(diff, truncation));
        }
    }
    return LabelMetric(num_labels, std::move(v));
}

LabelMetric LabelMetric::uniform(std::size_t num_labels, double scale) {
    if (num_labels == 0) {
        throw InvalidInput("metric needs at least one label");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidInput("uniform metric needs scale > 0");
    }
    std::vector<double> v(num_labels * num_labels, scale);
    for (std::size_t a = 0; a < num_labels; ++a) {
        v[a * num_labels + a] = 0.0;
    }
    return LabelMetric(num_labels, std::move(v));
}

double LabelMetric::diameter() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double LabelMetric::min_positive_distance() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (double v : values_) {
        if (v > 0.0) {
            best = std::min(best, v);
        }
    }
    return best;
}

}  // namespace parsimony
