#include "parsimony/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parsimony/flow_network.hpp"

namespace parsimony {

PnPottsInstance::PnPottsInstance(std::size_t num_variables, std::size_t num_labels, std::vector<double> unaries,
                                 std::vector<PnPottsClique> cliques)
    : num_variables_(num_variables), num_labels_(num_labels), unaries_(std::move(unaries)), cliques_(std::move(cliques)) {
    if (num_labels_ == 0) {
        throw InvalidInput("P^n Potts instance needs at least one label");
    }
    if (unaries_.size() != num_variables_ * num_labels_) {
        throw InvalidInput("P^n Potts unaries have the wrong shape");
    }
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
        const auto& q = cliques_[c];
        const std::string where = "clique " + std::to_string(c);
        if (q.members.empty()) {
            throw InvalidInput(where + " has no members");
        }
        for (auto m : q.members) {
            if (m < 0 || static_cast<std::size_t>(m) >= num_variables_) {
                throw InvalidInput(where + " has an out-of-range member");
            }
        }
        if (q.gamma.size() != num_labels_) {
            throw InvalidInput(where + " needs one gamma per label");
        }
        if (!(q.weight >= 0.0) || !std::isfinite(q.weight)) {
            throw InvalidInput(where + " has a negative weight");
        }
        for (double g : q.gamma) {
            if (!(g >= 0.0) || !(g <= q.gamma_max)) {
                throw InvalidInput(where + " violates 0 <= gamma_k <= gamma_max");
            }
            if (q.weight > 0.0 && !(g < q.gamma_max)) {
                throw InvalidInput(where + " needs gamma_max > gamma_k when its weight is positive");
            }
        }
    }
}

PnPottsInstance PnPottsInstance::from_model(const EnergyModel& model) {
    const auto* pn = std::get_if<PnPottsPotential>(&model.potential());
    if (pn == nullptr) {
        throw InvalidInput("model does not use a P^n Potts potential");
    }
    std::vector<PnPottsClique> cliques;
    cliques.reserve(model.cliques().size());
    for (const auto& c : model.cliques()) {
        cliques.push_back({c.members, pn->gamma, pn->gamma_max, c.weight});
    }
    return PnPottsInstance(model.num_variables(), model.num_labels(),
                           std::vector<double>(model.unaries().begin(), model.unaries().end()), std::move(cliques));
}

std::size_t PnPottsInstance::max_clique_size() const noexcept {
    std::size_t m = 0;
    for (const auto& c : cliques_) {
        m = std::max(m, c.members.size());
    }
    return m;
}

EnergyTerms PnPottsInstance::energy_terms(std::span<const Label> labeling) const {
    check_labeling(num_variables_, num_labels_, labeling);
    EnergyTerms t;
    for (std::size_t i = 0; i < num_variables_; ++i) {
        t.unary += unary(i, labeling[i]);
    }
    for (const auto& c : cliques_) {
        if (c.weight == 0.0) {
            continue;
        }
        const Label first = labeling[static_cast<std::size_t>(c.members.front())];
        const bool uniform = std::all_of(c.members.begin(), c.members.end(),
                                         [&](auto m) { return labeling[static_cast<std::size_t>(m)] == first; });
        t.clique += c.weight * (uniform ? c.gamma[static_cast<std::size_t>(first)] : c.gamma_max);
    }
    return t;
}

double PnPottsInstance::energy(std::span<const Label> labeling) const { return energy_terms(labeling).total(); }

// Move variable t_i = 1 means "switch to alpha" and maps to the sink side.
// A clique's move cost with S = members not yet at alpha is
//   w*gmax - r1*[all of S switch] - r0*[none switch],
// r1 = w*(gmax - g_alpha), and r0 = w*(gmax - g_k) when the whole clique
// currently sits on one label k != alpha (else 0). Each indicator term is
// one auxiliary node, so the cut reproduces the cost exactly.
Labeling best_expansion_move(const PnPottsInstance& instance, std::span<const Label> current, Label alpha) {
    check_labeling(instance.num_variables(), instance.num_labels(), current);
    if (alpha < 0 || static_cast<std::size_t>(alpha) >= instance.num_labels()) {
        throw InvalidInput("alpha label out of range");
    }
    const std::size_t n = instance.num_variables();
    FlowNetwork net;
    std::vector<FlowNetwork::NodeIndex> node_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (current[i] == alpha) {
            continue;
        }
        node_of[i] = net.add_node();
        const double keep = instance.unary(i, current[i]);
        const double move = instance.unary(i, alpha);
        const double base = std::min(keep, move);
        net.add_terminal_arc(node_of[i], move - base, keep - base);
    }

    std::vector<FlowNetwork::NodeIndex> free_members;
    for (const auto& c : instance.cliques()) {
        if (c.weight == 0.0) {
            continue;
        }
        free_members.clear();
        for (auto m : c.members) {
            if (node_of[static_cast<std::size_t>(m)] >= 0) {
                free_members.push_back(node_of[static_cast<std::size_t>(m)]);
            }
        }
        if (free_members.empty()) {
            continue;
        }
        const Label first = current[static_cast<std::size_t>(c.members.front())];
        const bool uniform = free_members.size() == c.members.size() &&
                             std::all_of(c.members.begin(), c.members.end(),
                                         [&](auto m) { return current[static_cast<std::size_t>(m)] == first; });
        const double r1 = c.weight * (c.gamma_max - c.gamma[static_cast<std::size_t>(alpha)]);
        const double r0 = uniform ? c.weight * (c.gamma_max - c.gamma[static_cast<std::size_t>(first)]) : 0.0;
        if (r1 > 0.0) {
            const auto z = net.add_node();
            net.add_terminal_arc(z, 0.0, r1);
            for (auto v : free_members) {
                net.add_arc(v, z, r1, 0.0);
            }
        }
        if (r0 > 0.0) {
            const auto z = net.add_node();
            net.add_terminal_arc(z, r0, 0.0);
            for (auto v : free_members) {
                net.add_arc(z, v, r0, 0.0);
            }
        }
    }
    net.compute_max_flow();

    Labeling result(current.begin(), current.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (node_of[i] >= 0 && net.min_cut_side(node_of[i]) == CutSide::kSink) {
            result[i] = alpha;
        }
    }
    // Rounding in the cut can only matter at ties; never return a worse labeling.
    if (instance.energy(result) > instance.energy(current)) {
        return Labeling(current.begin(), current.end());
    }
    return result;
}

ExpansionResult alpha_expansion(const PnPottsInstance& instance, std::optional<Labeling> init) {
    ExpansionResult out;
    Labeling x = init ? std::move(*init) : Labeling(instance.num_variables(), 0);
    check_labeling(instance.num_variables(), instance.num_labels(), x);
    double energy = instance.energy(x);
    out.trace.initial_energy = energy;
    const auto h = static_cast<Label>(instance.num_labels());
    for (std::size_t sweep = 0;; ++sweep) {
        bool improved = false;
        for (Label alpha = 0; alpha < h; ++alpha) {
            Labeling candidate = best_expansion_move(instance, x, alpha);
            const double e = instance.energy(candidate);
            if (e < energy - kMoveAcceptTolerance) {
                x = std::move(candidate);
                energy = e;
                improved = true;
                out.trace.moves.push_back({sweep, alpha, e});
            }
        }
        out.trace.sweeps = sweep + 1;
        if (!improved) {
            break;
        }
    }
    out.trace.final_labeling = x;
    out.labeling = std::move(x);
    return out;
}

double pn_potts_bound(const PnPottsInstance& instance) {
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = 0.0;
    bool any = false;
    for (const auto& c : instance.cliques()) {
        if (c.weight == 0.0) {
            continue;
        }
        any = true;
        gmin = std::min(gmin, *std::min_element(c.gamma.begin(), c.gamma.end()));
        gmax = std::max(gmax, c.gamma_max);
    }
    if (!any) {
        return 0.0;
    }
    const double lambda = gmin != 0.0 ? gmax / gmin : gmax;
    const double m = static_cast<double>(std::min(instance.max_clique_size(), instance.num_labels()));
    return lambda * m;
}

}  // namespace parsimony
