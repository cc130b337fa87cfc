#include "parsimony/diversity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

namespace parsimony {

LabelSubset mask_to_subset(std::uint32_t mask) {
    LabelSubset out;
    for (Label l = 0; mask != 0; ++l, mask >>= 1) {
        if (mask & 1U) {
            out.push_back(l);
        }
    }
    return out;
}

std::uint32_t subset_to_mask(std::span<const Label> subset) {
    std::uint32_t mask = 0;
    for (Label l : subset) {
        mask |= 1U << static_cast<unsigned>(l);
    }
    return mask;
}

Diversity Diversity::table(std::size_t num_labels, std::vector<double> values) {
    if (num_labels == 0 || num_labels > kMaxTableLabels) {
        throw InvalidInput("explicit diversity tables support 1.." + std::to_string(kMaxTableLabels) + " labels, got " +
                           std::to_string(num_labels));
    }
    if (values.size() != (std::size_t{1} << num_labels)) {
        throw InvalidInput("diversity table for " + std::to_string(num_labels) + " labels needs " +
                           std::to_string(std::size_t{1} << num_labels) + " entries, got " + std::to_string(values.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInput("diversity table contains a non-finite value");
        }
    }
    values[0] = 0.0;
    return Diversity(Table{num_labels, std::move(values)});
}

Diversity Diversity::diameter(LabelMetric metric) {
    return Diversity(Diameter{std::move(metric)});
}

std::size_t Diversity::num_labels() const noexcept {
    if (const auto* t = std::get_if<Table>(&repr_)) {
        return t->num_labels;
    }
    return std::get<Diameter>(repr_).metric.size();
}

double Diversity::operator()(std::span<const Label> subset) const {
    if (subset.empty()) {
        throw InvalidInput("diversity of the empty set is undefined");
    }
    const auto n = static_cast<Label>(num_labels());
    for (Label l : subset) {
        if (l < 0 || l >= n) {
            throw InvalidInput("label " + std::to_string(l) + " out of range");
        }
    }
    if (const auto* t = std::get_if<Table>(&repr_)) {
        return t->values[subset_to_mask(subset)];
    }
    return diameter_diversity(std::get<Diameter>(repr_).metric, subset);
}

double diameter_diversity(const LabelMetric& metric, std::span<const Label> subset) {
    if (subset.empty()) {
        throw InvalidInput("diameter diversity of the empty set is undefined");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            best = std::max(best, metric(subset[i], subset[j]));
        }
    }
    return best;
}

LabelMetric induced_metric(const Diversity& diversity) {
    if (diversity.is_diameter()) {
        return diversity.as_metric();
    }
    const std::size_t n = diversity.num_labels();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        m[a * n + a] = diversity.by_mask(1U << a);
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b) {
                m[a * n + b] = diversity.by_mask((1U << a) | (1U << b));
            }
        }
    }
    return LabelMetric::from_matrix(n, std::move(m));
}

namespace {

std::string fmt_subset(const LabelSubset& s) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << (i ? "," : "") << s[i];
    }
    os << "}";
    return os.str();
}

class TableChecker {
public:
    TableChecker(const Diversity& d, std::size_t max_witnesses, AxiomReport& report)
        : d_(d), n_(d.num_labels()), full_((1U << n_) - 1U), max_(max_witnesses), report_(report) {}

    void non_negativity() {
        for (std::uint32_t mask = 1; mask <= full_; ++mask) {
            ++report_.checks;
            const double v = d_.by_mask(mask);
            const bool small = std::popcount(mask) <= 1;
            if (v < -kAxiomTolerance) {
                add("non_negativity", {mask}, "negative value " + std::to_string(v));
            } else if (small && v > kAxiomTolerance) {
                add("non_negativity", {mask}, "singleton with non-zero value " + std::to_string(v));
            } else if (!small && v <= kAxiomTolerance) {
                add("non_negativity", {mask}, "subset of size >= 2 with zero value");
            }
        }
    }

    // Single-element extensions suffice: any chain G1 <= G2 decomposes into them.
    void monotonicity() {
        for (std::uint32_t mask = 1; mask <= full_; ++mask) {
            for (std::size_t x = 0; x < n_; ++x) {
                const std::uint32_t bigger = mask | (1U << x);
                if (bigger == mask) {
                    continue;
                }
                ++report_.checks;
                if (d_.by_mask(mask) > d_.by_mask(bigger) + kAxiomTolerance) {
                    add("monotonicity", {mask, bigger}, "delta decreases when adding label " + std::to_string(x));
                }
            }
        }
    }

    // With monotonicity, a violation with any non-empty G2 implies one with
    // a singleton G2 = {x} contained in it, so singletons suffice.
    void triangle_exhaustive() {
        for (std::uint32_t a = 0; a <= full_; ++a) {
            for (std::uint32_t c = a; c <= full_; ++c) {
                if ((a | c) == 0) {
                    continue;
                }
                for (std::size_t x = 0; x < n_; ++x) {
                    triangle(a, 1U << x, c);
                }
            }
        }
    }

    void triangle_sampled(std::uint64_t samples) {
        std::mt19937_64 rng(0x5eed);
        for (std::uint64_t s = 0; s < samples; ++s) {
            const auto a = static_cast<std::uint32_t>(rng() & full_);
            const auto c = static_cast<std::uint32_t>(rng() & full_);
            auto b = static_cast<std::uint32_t>(rng() & full_);
            if (b == 0) {
                b = 1U << (rng() % n_);
            }
            if ((a | c) != 0) {
                triangle(a, b, c);
            }
        }
    }

    void monotonicity_sampled(std::uint64_t samples) {
        std::mt19937_64 rng(0x5eee);
        for (std::uint64_t s = 0; s < samples; ++s) {
            auto mask = static_cast<std::uint32_t>(rng() & full_);
            if (mask == 0) {
                continue;
            }
            const std::size_t x = rng() % n_;
            const std::uint32_t bigger = mask | (1U << x);
            ++report_.checks;
            if (d_.by_mask(mask) > d_.by_mask(bigger) + kAxiomTolerance) {
                add("monotonicity", {mask, bigger}, "delta decreases when adding label " + std::to_string(x));
            }
        }
    }

    void non_negativity_sampled(std::uint64_t samples) {
        for (std::size_t x = 0; x < n_; ++x) {
            ++report_.checks;
            if (std::abs(d_.by_mask(1U << x)) > kAxiomTolerance) {
                add("non_negativity", {1U << x}, "singleton with non-zero value");
            }
        }
        std::mt19937_64 rng(0x5eef);
        for (std::uint64_t s = 0; s < samples; ++s) {
            auto mask = static_cast<std::uint32_t>(rng() & full_);
            if (std::popcount(mask) < 2) {
                continue;
            }
            ++report_.checks;
            if (d_.by_mask(mask) <= kAxiomTolerance) {
                add("non_negativity", {mask}, "subset of size >= 2 with non-positive value");
            }
        }
    }

private:
    void triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        ++report_.checks;
        const double lhs = d_.by_mask(a | b) + d_.by_mask(b | c);
        const double rhs = d_.by_mask(a | c);
        if (lhs < rhs - kAxiomTolerance) {
            add("triangle", {a, b, c}, "delta(G1+G2) + delta(G2+G3) < delta(G1+G3)");
        }
    }

    void add(const char* axiom, std::initializer_list<std::uint32_t> masks, std::string detail) {
        if (report_.violations.size() >= max_) {
            return;
        }
        AxiomWitness w{axiom, {}, std::move(detail)};
        for (auto m : masks) {
            w.subsets.push_back(mask_to_subset(m));
        }
        std::string text;
        for (const auto& s : w.subsets) {
            text += (text.empty() ? "" : " ") + fmt_subset(s);
        }
        w.detail += " at " + text;
        report_.violations.push_back(std::move(w));
    }

    const Diversity& d_;
    std::size_t n_;
    std::uint32_t full_;
    std::size_t max_;
    AxiomReport& report_;
};

}  // namespace

AxiomReport validate_diversity_axioms(const Diversity& diversity, std::size_t max_witnesses) {
    AxiomReport report;
    if (diversity.is_diameter()) {
        const LabelMetric& m = diversity.as_metric();
        for (auto& issue : check_metric_axioms(m.size(), m.data(), max_witnesses)) {
            LabelSubset w(issue.witness.begin(), issue.witness.end());
            report.violations.push_back({issue.axiom, {w}, issue.detail});
        }
        report.checks = m.size() * m.size() * m.size();
        return report;
    }
    TableChecker checker(diversity, max_witnesses, report);
    const std::size_t n = diversity.num_labels();
    if (n <= 12) {
        checker.non_negativity();
        checker.monotonicity();
    } else {
        report.exhaustive = false;
        checker.non_negativity_sampled(1U << 18);
        checker.monotonicity_sampled(1U << 18);
    }
    if (n <= 10) {
        checker.triangle_exhaustive();
    } else {
        report.exhaustive = false;
        checker.triangle_sampled(1U << 20);
    }
    return report;
}

}  // namespace parsimony
