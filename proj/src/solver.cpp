#include "parsimony/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace parsimony {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void fill_energy(const EnergyModel& model, SolveReport& report) {
    const auto terms = evaluate_energy_terms(model, report.labeling);
    report.energy = terms.total();
    report.unary_energy = terms.unary;
    report.clique_energy = terms.clique;
}

bool is_diameter(const EnergyModel& model) { return std::holds_alternative<DiameterPotential>(model.potential()); }

}  // namespace

ApproximationBounds approximation_bounds(const EnergyModel& model, double r) {
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw InvalidInput("r must be a finite value greater than 1");
    }
    ApproximationBounds b;
    b.r = r;
    const double h = static_cast<double>(model.num_labels());
    const double m = static_cast<double>(std::min(model.max_clique_size(), model.num_labels()));
    const double factor = r / (r - 1.0);
    b.bound1 = factor * m;
    b.diameter_diversity = is_diameter(model);
    b.bound2 = factor * std::log(h) * m * (b.diameter_diversity ? 1.0 : (h - 1.0));
    return b;
}

LabelMetric model_metric(const EnergyModel& model) {
    if (const auto* dm = std::get_if<DiameterPotential>(&model.potential())) {
        return dm->metric;
    }
    if (const auto* dv = std::get_if<DiversityPotential>(&model.potential())) {
        return induced_metric(dv->diversity);
    }
    const auto& pn = std::get<PnPottsPotential>(model.potential());
    // P^n Potts is a diversity only when every gamma is zero: then it is
    // the diameter diversity of the uniform metric.
    for (double g : pn.gamma) {
        if (g != 0.0) {
            throw InvalidInput("P^n Potts potentials with non-zero gamma are not diversities");
        }
    }
    return LabelMetric::uniform(model.num_labels(), pn.gamma_max);
}

PnPottsInstance build_fusion_instance(const EnergyModel& model, const RHst& tree, NodeId node,
                                      const std::vector<Labeling>& child_labelings) {
    const auto& p = tree.node(node);
    const std::size_t k = p.children.size();
    const std::size_t n = model.num_variables();
    std::vector<double> unaries(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            const Label l = child_labelings[static_cast<std::size_t>(p.children[c])][i];
            unaries[i * k + c] = model.unary(i, l);
        }
    }
    const double gamma_max = tree.hierarchical_pn_potts(tree.cluster_labels(node));
    std::vector<PnPottsClique> cliques;
    cliques.reserve(model.cliques().size());
    for (const auto& clique : model.cliques()) {
        if (clique.weight == 0.0) {
            continue;
        }
        PnPottsClique q{clique.members, std::vector<double>(k), gamma_max, clique.weight};
        for (std::size_t c = 0; c < k; ++c) {
            const auto gamma = unique_labels(child_labelings[static_cast<std::size_t>(p.children[c])], clique);
            q.gamma[c] = tree.hierarchical_pn_potts(gamma);
            if (!(clique.weight * q.gamma[c] < clique.weight * gamma_max)) {
                throw InvalidInput("tree does not separate node " + std::to_string(node) +
                                   " from its children strictly (gamma_max <= gamma_k)");
            }
        }
        cliques.push_back(std::move(q));
    }
    return PnPottsInstance(n, k, std::move(unaries), std::move(cliques));
}

SolveReport solve_hierarchical(const EnergyModel& model, const RHst& tree) {
    if (tree.num_labels() != model.num_labels()) {
        throw InvalidInput("tree has " + std::to_string(tree.num_labels()) + " leaves but the model has " +
                           std::to_string(model.num_labels()) + " labels");
    }
    const auto start = Clock::now();
    const std::size_t n = model.num_variables();
    std::vector<Labeling> labelings(tree.num_nodes());
    for (NodeId v : tree.bottom_up_order()) {
        const auto& node = tree.node(v);
        auto& x = labelings[static_cast<std::size_t>(v)];
        if (node.children.empty()) {
            x.assign(n, node.label);
        } else if (node.children.size() == 1) {
            x = labelings[static_cast<std::size_t>(node.children.front())];
        } else {
            const PnPottsInstance fusion = build_fusion_instance(model, tree, v, labelings);
            const auto result = alpha_expansion(fusion);
            x.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const NodeId child = node.children[static_cast<std::size_t>(result.labeling[i])];
                x[i] = labelings[static_cast<std::size_t>(child)][i];
            }
        }
        for (NodeId c : node.children) {
            Labeling().swap(labelings[static_cast<std::size_t>(c)]);
        }
    }
    SolveReport report;
    report.algorithm = "hierarchical";
    report.labeling = std::move(labelings[static_cast<std::size_t>(tree.root())]);
    fill_energy(model, report);
    report.component_energies = {report.energy};
    report.mixture_size = 1;
    report.bounds = approximation_bounds(model, tree.r());
    report.timings.push_back({"hierarchical", elapsed_ms(start)});
    return report;
}

SolveReport solve_parsimonious(const EnergyModel& model, const ParsimoniousOptions& options) {
    const auto t0 = Clock::now();
    const LabelMetric metric = model_metric(model);
    const double induce_ms = elapsed_ms(t0);

    const auto t1 = Clock::now();
    const HstMixture mixture = frt_embed(metric, options.mixture_size, options.seed, options.threads);
    const double embed_ms = elapsed_ms(t1);

    const auto t2 = Clock::now();
    const std::size_t k = mixture.trees.size();
    std::vector<Labeling> candidates(k);
    std::vector<double> energies(k);
    auto run = [&](std::size_t i) {
        auto part = solve_hierarchical(model, mixture.trees[i]);
        candidates[i] = std::move(part.labeling);
        energies[i] = evaluate_energy(model, candidates[i]);
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, k));
    if (threads == 1) {
        for (std::size_t i = 0; i < k; ++i) {
            run(i);
        }
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < k; i += threads) {
                        run(i);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    const double solve_ms = elapsed_ms(t2);

    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (energies[i] < energies[best]) {
            best = i;
        }
    }
    SolveReport report;
    report.algorithm = "parsimonious";
    report.labeling = std::move(candidates[best]);
    fill_energy(model, report);
    report.component_energies = std::move(energies);
    report.component_seeds = mixture.seeds;
    report.best_component = best;
    report.seed = options.seed;
    report.mixture_size = k;
    report.bounds = approximation_bounds(model, 2.0);
    report.timings = {{"induced_metric", induce_ms}, {"frt_embed", embed_ms}, {"hierarchical_solves", solve_ms}};
    return report;
}

SolveReport solve(const EnergyModel& model, const ParsimoniousOptions& options) {
    if (std::holds_alternative<PnPottsPotential>(model.potential())) {
        const auto start = Clock::now();
        const auto instance = PnPottsInstance::from_model(model);
        auto result = alpha_expansion(instance);
        SolveReport report;
        report.algorithm = "alpha_expansion";
        report.labeling = std::move(result.labeling);
        fill_energy(model, report);
        report.component_energies = {report.energy};
        report.mixture_size = 1;
        report.seed = options.seed;
        report.pn_potts_bound = pn_potts_bound(instance);
        report.bounds = approximation_bounds(model, 2.0);
        report.timings.push_back({"alpha_expansion", elapsed_ms(start)});
        return report;
    }
    if (const auto* dm = std::get_if<DiameterPotential>(&model.potential()); dm != nullptr && dm->tree) {
        auto report = solve_hierarchical(model, *dm->tree);
        report.seed = options.seed;
        return report;
    }
    return solve_parsimonious(model, options);
}

}  // namespace parsimony
