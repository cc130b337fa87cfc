#include "parsimony/energy_model.hpp"

#include <algorithm>
#include <cmath>

namespace parsimony {

namespace {

void check_potential(const CliquePotentialSpec& spec, std::size_t num_labels) {
    if (const auto* pn = std::get_if<PnPottsPotential>(&spec)) {
        if (pn->gamma.size() != num_labels) {
            throw InvalidInput("potential.gamma must have one entry per label");
        }
        for (double g : pn->gamma) {
            if (!std::isfinite(g) || g < 0.0) {
                throw InvalidInput("potential.gamma entries must be finite and non-negative");
            }
            if (!(pn->gamma_max > g)) {
                throw InvalidInput("potential.gamma_max must exceed every gamma entry");
            }
        }
    } else if (const auto* dv = std::get_if<DiversityPotential>(&spec)) {
        if (dv->diversity.num_labels() != num_labels) {
            throw InvalidInput("diversity label count does not match num_labels");
        }
    } else {
        const auto& dm = std::get<DiameterPotential>(spec);
        if (dm.metric.size() != num_labels) {
            throw InvalidInput("metric label count does not match num_labels");
        }
        if (dm.tree && dm.tree->num_labels() != num_labels) {
            throw InvalidInput("tree leaf count does not match num_labels");
        }
    }
}

}  // namespace

EnergyModel::EnergyModel(std::size_t num_variables, std::size_t num_labels, std::vector<double> unaries,
                         std::vector<Clique> cliques, CliquePotentialSpec potential)
    : num_variables_(num_variables),
      num_labels_(num_labels),
      unaries_(std::move(unaries)),
      cliques_(std::move(cliques)),
      potential_(std::move(potential)) {
    if (num_labels_ == 0) {
        throw InvalidInput("num_labels must be at least 1");
    }
    if (unaries_.size() != num_variables_ * num_labels_) {
        throw InvalidInput("unaries must have num_variables * num_labels = " + std::to_string(num_variables_ * num_labels_) +
                           " entries, got " + std::to_string(unaries_.size()));
    }
    for (double u : unaries_) {
        if (!std::isfinite(u)) {
            throw InvalidInput("unaries must be finite");
        }
    }
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
        const auto& clique = cliques_[c];
        const std::string where = "cliques[" + std::to_string(c) + "]";
        if (clique.members.empty()) {
            throw InvalidInput(where + ".members must be non-empty");
        }
        if (!std::isfinite(clique.weight) || clique.weight < 0.0) {
            throw InvalidInput(where + ".weight must be finite and non-negative");
        }
        std::vector<std::int32_t> sorted = clique.members;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidInput(where + ".members must be distinct");
        }
        if (sorted.front() < 0 || static_cast<std::size_t>(sorted.back()) >= num_variables_) {
            throw InvalidInput(where + ".members must lie in [0, num_variables)");
        }
    }
    check_potential(potential_, num_labels_);
}

std::size_t EnergyModel::max_clique_size() const noexcept {
    std::size_t m = 0;
    for (const auto& c : cliques_) {
        m = std::max(m, c.members.size());
    }
    return m;
}

double EnergyModel::clique_potential(std::span<const Label> unique) const {
    if (const auto* pn = std::get_if<PnPottsPotential>(&potential_)) {
        return unique.size() == 1 ? pn->gamma[static_cast<std::size_t>(unique[0])] : pn->gamma_max;
    }
    if (const auto* dv = std::get_if<DiversityPotential>(&potential_)) {
        return dv->diversity(unique);
    }
    return diameter_diversity(std::get<DiameterPotential>(potential_).metric, unique);
}

EnergyModel EnergyModel::with_potential(CliquePotentialSpec potential) const {
    return EnergyModel(num_variables_, num_labels_, unaries_, cliques_, std::move(potential));
}

EnergyModel EnergyModel::with_cliques(std::vector<Clique> cliques) const {
    return EnergyModel(num_variables_, num_labels_, unaries_, std::move(cliques), potential_);
}

LabelSubset unique_labels(std::span<const Label> labeling, const Clique& clique) {
    LabelSubset out;
    out.reserve(clique.members.size());
    for (auto m : clique.members) {
        out.push_back(labeling[static_cast<std::size_t>(m)]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_labeling(std::size_t num_variables, std::size_t num_labels, std::span<const Label> labeling) {
    if (labeling.size() != num_variables) {
        throw InvalidInput("labeling has " + std::to_string(labeling.size()) + " entries, model has " +
                           std::to_string(num_variables) + " variables");
    }
    for (Label l : labeling) {
        if (l < 0 || static_cast<std::size_t>(l) >= num_labels) {
            throw InvalidInput("labeling contains out-of-range label " + std::to_string(l));
        }
    }
}

EnergyTerms evaluate_energy_terms(const EnergyModel& model, std::span<const Label> labeling) {
    check_labeling(model.num_variables(), model.num_labels(), labeling);
    EnergyTerms terms;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        terms.unary += model.unary(i, labeling[i]);
    }
    for (const auto& clique : model.cliques()) {
        if (clique.weight == 0.0) {
            continue;
        }
        const auto gamma = unique_labels(labeling, clique);
        terms.clique += clique.weight * model.clique_potential(gamma);
    }
    return terms;
}

double evaluate_energy(const EnergyModel& model, std::span<const Label> labeling) {
    return evaluate_energy_terms(model, labeling).total();
}

}  // namespace parsimony
