#include "parsimony/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace parsimony::oracle {

namespace {

double potential_of(const CliquePotentialSpec& spec, const std::vector<Label>& unique) {
    if (const auto* pn = std::get_if<PnPottsPotential>(&spec)) {
        return unique.size() == 1 ? pn->gamma[static_cast<std::size_t>(unique.front())] : pn->gamma_max;
    }
    if (const auto* dv = std::get_if<DiversityPotential>(&spec)) {
        if (dv->diversity.is_table()) {
            std::uint32_t mask = 0;
            for (Label l : unique) {
                mask |= 1U << static_cast<unsigned>(l);
            }
            return dv->diversity.as_table().values[mask];
        }
        const auto& m = dv->diversity.as_metric();
        double best = 0.0;
        for (Label a : unique) {
            for (Label b : unique) {
                best = std::max(best, m(a, b));
            }
        }
        return best;
    }
    const auto& m = std::get<DiameterPotential>(spec).metric;
    double best = 0.0;
    for (Label a : unique) {
        for (Label b : unique) {
            best = std::max(best, m(a, b));
        }
    }
    return best;
}

template <typename Energy>
ExhaustiveResult enumerate(std::size_t n, std::size_t h, Energy&& energy) {
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<double>(h);
        if (total > static_cast<double>(kMaxLabelings)) {
            throw SizeLimitExceeded("exhaustive search over " + std::to_string(h) + "^" + std::to_string(n) +
                                    " labelings exceeds the limit of " + std::to_string(kMaxLabelings));
        }
    }
    ExhaustiveResult best;
    best.energy = INFINITY;
    Labeling x(n, 0);
    for (;;) {
        const EnergyTerms t = energy(x);
        const double e = t.total();
        if (e < best.energy) {
            best.energy = e;
            best.labeling = x;
            best.unary_term = t.unary;
            best.clique_term = t.clique;
            best.optima = 1;
        } else if (e == best.energy) {
            ++best.optima;
        }
        // odometer increment; last variable varies fastest
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (static_cast<std::size_t>(++x[pos]) < h) {
                break;
            }
            x[pos] = 0;
            if (pos == 0) {
                return best;
            }
        }
        if (n == 0) {
            return best;
        }
    }
}

}  // namespace

EnergyTerms reference_energy(const EnergyModel& model, std::span<const Label> labeling) {
    EnergyTerms t;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        t.unary += model.unaries()[i * model.num_labels() + static_cast<std::size_t>(labeling[i])];
    }
    std::vector<bool> seen(model.num_labels());
    std::vector<Label> unique;
    for (const auto& c : model.cliques()) {
        if (c.weight == 0.0) {
            continue;
        }
        std::fill(seen.begin(), seen.end(), false);
        for (auto m : c.members) {
            seen[static_cast<std::size_t>(labeling[static_cast<std::size_t>(m)])] = true;
        }
        unique.clear();
        for (std::size_t l = 0; l < seen.size(); ++l) {
            if (seen[l]) {
                unique.push_back(static_cast<Label>(l));
            }
        }
        t.clique += c.weight * potential_of(model.potential(), unique);
    }
    return t;
}

EnergyTerms reference_energy(const PnPottsInstance& instance, std::span<const Label> labeling) {
    EnergyTerms t;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        t.unary += instance.unaries()[i * instance.num_labels() + static_cast<std::size_t>(labeling[i])];
    }
    for (const auto& c : instance.cliques()) {
        if (c.weight == 0.0) {
            continue;
        }
        Label common = labeling[static_cast<std::size_t>(c.members[0])];
        for (auto m : c.members) {
            if (labeling[static_cast<std::size_t>(m)] != common) {
                common = -1;
                break;
            }
        }
        t.clique += c.weight * (common >= 0 ? c.gamma[static_cast<std::size_t>(common)] : c.gamma_max);
    }
    return t;
}

ExhaustiveResult exhaustive_minimize(const EnergyModel& model) {
    return enumerate(model.num_variables(), model.num_labels(),
                     [&](const Labeling& x) { return reference_energy(model, x); });
}

ExhaustiveResult exhaustive_minimize(const PnPottsInstance& instance) {
    return enumerate(instance.num_variables(), instance.num_labels(),
                     [&](const Labeling& x) { return reference_energy(instance, x); });
}

Labeling exhaustive_expansion_move(const PnPottsInstance& instance, std::span<const Label> current, Label alpha) {
    const std::size_t n = instance.num_variables();
    if (n >= 63 || (std::uint64_t{1} << n) > kMaxMoveSpace) {
        throw SizeLimitExceeded("move space 2^" + std::to_string(n) + " exceeds the oracle limit");
    }
    Labeling best(current.begin(), current.end());
    double best_energy = reference_energy(instance, best).total();
    Labeling x(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = (mask >> i) & 1U ? alpha : current[i];
        }
        const double e = reference_energy(instance, x).total();
        if (e < best_energy) {
            best_energy = e;
            best = x;
        }
    }
    return best;
}

}  // namespace parsimony::oracle
