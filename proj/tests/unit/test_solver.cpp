#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "parsimony/oracle.hpp"
#include "parsimony/problem_io.hpp"
#include "parsimony/solver.hpp"

using namespace parsimony;

namespace {

std::shared_ptr<const RHst> two_level_tree() {
    const std::vector<NodeId> parents{-1, 0, 0, 1, 1, 2, 2};
    const std::vector<double> edges{6, 3, 3, 0, 0, 0, 0};
    const std::vector<Label> labels{-1, -1, -1, 0, 1, 2, 3};
    return std::make_shared<const RHst>(RHst::from_parents(parents, edges, labels, 2.0));
}

Labeling unary_argmin(const EnergyModel& m) {
    Labeling x(m.num_variables());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Label best = 0;
        for (Label l = 1; l < static_cast<Label>(m.num_labels()); ++l) {
            if (m.unary(i, l) < m.unary(i, best)) {
                best = l;
            }
        }
        x[i] = best;
    }
    return x;
}

}  // namespace

TEST(ApproximationBounds, Values) {
    const auto tl = LabelMetric::truncated_linear(20, 1.0, 5);
    EnergyModel m4(4, 20, std::vector<double>(80, 0.0), {{{0, 1, 2, 3}, 1.0}}, DiameterPotential{tl, nullptr});
    EXPECT_DOUBLE_EQ(approximation_bounds(m4, 2.0).bound1, 8.0);

    std::vector<std::int32_t> members(100);
    std::iota(members.begin(), members.end(), 0);
    EnergyModel m100(100, 20, std::vector<double>(2000, 0.0), {{members, 1.0}}, DiameterPotential{tl, nullptr});
    EXPECT_DOUBLE_EQ(approximation_bounds(m100, 2.0).bound1, 40.0);

    SplitMix64 rng(1);
    EnergyModel table(3, 4, std::vector<double>(12, 0.0), {{{0, 1, 2}, 1.0}},
                      DiversityPotential{Diversity::table(4, testgen::diversity_values(rng, 4, testgen::DiversityFamily::kSplit))});
    const auto b = approximation_bounds(table, 2.0);
    EXPECT_NEAR(b.bound2, 2.0 * 3.0 * std::log(4.0) * 3.0, 1e-12);
    EXPECT_FALSE(b.diameter_diversity);
    EXPECT_EQ(b.log_base, "natural");
    EXPECT_THROW(approximation_bounds(table, 1.0), InvalidInput);
}

TEST(Hierarchical, RootFusionTable) {
    auto tree = two_level_tree();
    EnergyModel m(4, 4, std::vector<double>(16, 0.0), {{{0, 1, 2, 3}, 1.0}}, DiameterPotential{tree->metric(), tree});
    // children of the root: p1 labels everything l1, p2 mixes l3 and l4
    std::vector<Labeling> children(tree->num_nodes());
    children[1] = {0, 0, 0, 0};
    children[2] = {2, 3, 2, 3};
    const auto inst = build_fusion_instance(m, *tree, tree->root(), children);
    ASSERT_EQ(inst.cliques().size(), 1u);
    const auto& c = inst.cliques().front();
    EXPECT_DOUBLE_EQ(c.gamma[0], 0.0);
    EXPECT_DOUBLE_EQ(c.gamma[1], 6.0);
    EXPECT_DOUBLE_EQ(c.gamma_max, 18.0);
}

TEST(Hierarchical, StarTreeIsOneExpansion) {
    SplitMix64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + rng.below(8), h = 2 + rng.below(3);
        std::vector<NodeId> parents{-1};
        std::vector<double> edges{2.5};
        std::vector<Label> labels{-1};
        for (std::size_t l = 0; l < h; ++l) {
            parents.push_back(0);
            edges.push_back(0.0);
            labels.push_back(static_cast<Label>(l));
        }
        auto tree = std::make_shared<const RHst>(RHst::from_parents(parents, edges, labels, 2.0));
        const auto unaries = testgen::random_unaries(rng, n, h);
        const auto cliques = testgen::random_cliques(rng, n, 4, 4);
        EnergyModel m(n, h, unaries, cliques, DiameterPotential{tree->metric(), tree});
        std::vector<PnPottsClique> pc;
        for (const auto& c : cliques) {
            pc.push_back({c.members, std::vector<double>(h, 0.0), 5.0, c.weight});
        }
        const auto expansion = alpha_expansion(PnPottsInstance(n, h, unaries, pc));
        const auto report = solve_hierarchical(m, *tree);
        EXPECT_NEAR(report.energy, evaluate_energy(m, expansion.labeling), 1e-9);
    }
}

TEST(Hierarchical, BoundOnRandomTrees) {
    SplitMix64 rng(77);
    for (int t = 0; t < 100; ++t) {
        const auto m = testgen::random_tree_model(rng);
        const auto& tree = *std::get<DiameterPotential>(m.potential()).tree;
        const auto report = solve_hierarchical(m, tree);
        const auto opt = oracle::exhaustive_minimize(m);
        EXPECT_LE(report.energy, opt.unary_term + report.bounds.bound1 * opt.clique_term + 1e-9);
        EXPECT_NEAR(report.energy, oracle::reference_energy(m, report.labeling).total(), 1e-9);
    }
}

TEST(Parsimonious, ZeroWeightsGiveUnaryArgmin) {
    SplitMix64 rng(3);
    for (std::size_t k : {1u, 3u, 10u}) {
        auto m = testgen::random_table_model(rng, 8, 3, 4);
        std::vector<Clique> cliques = m.cliques();
        for (auto& c : cliques) {
            c.weight = 0.0;
        }
        m = m.with_cliques(cliques);
        const auto report = solve_parsimonious(m, {k, 5, 1});
        EXPECT_NEAR(report.energy, evaluate_energy(m, unary_argmin(m)), 1e-12);
    }
}

TEST(Parsimonious, SingleTreeMatchesHierarchical) {
    SplitMix64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto tm = testgen::random_tree_model(rng);
        const auto& metric = std::get<DiameterPotential>(tm.potential()).metric;
        if (tm.num_labels() < 2) {
            continue;
        }
        const EnergyModel m = tm.with_potential(DiameterPotential{metric, nullptr});
        const std::uint64_t seed = rng();
        const auto mixed = solve_parsimonious(m, {1, seed, 1});
        const auto direct = solve_hierarchical(m, frt_tree(metric, frt_component_seed(seed, 0)));
        EXPECT_EQ(mixed.labeling, direct.labeling);
        EXPECT_DOUBLE_EQ(mixed.energy, direct.energy);
    }
}

TEST(Parsimonious, BoundOnDiversityTables) {
    SplitMix64 rng(5);
    for (int t = 0; t < 60; ++t) {
        const auto m = testgen::random_table_model(rng);
        const auto report = solve_parsimonious(m, {10, rng(), 1});
        const auto opt = oracle::exhaustive_minimize(m);
        EXPECT_LE(report.energy, opt.unary_term + report.bounds.bound2 * opt.clique_term + 1e-9);
        EXPECT_EQ(report.component_energies.size(), 10u);
        EXPECT_DOUBLE_EQ(report.energy, report.component_energies[report.best_component]);
    }
}

TEST(Parsimonious, ThreadCountDoesNotChangeReport) {
    const auto m = generate_synthetic(GridSpec{});
    const auto a = solve(m, {6, 9, 1});
    const auto b = solve(m, {6, 9, 4});
    EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Solve, Dispatch) {
    EnergyModel pn(2, 2, {0, 1, 1, 0}, {{{0, 1}, 1.0}}, PnPottsPotential{{0, 0}, 1});
    EXPECT_EQ(solve(pn, {}).algorithm, "alpha_expansion");
    auto tree = two_level_tree();
    EnergyModel h(2, 4, std::vector<double>(8, 1.0), {{{0, 1}, 1.0}}, DiameterPotential{tree->metric(), tree});
    EXPECT_EQ(solve(h, {}).algorithm, "hierarchical");
    EnergyModel d = h.with_potential(DiameterPotential{tree->metric(), nullptr});
    EXPECT_EQ(solve(d, {}).algorithm, "parsimonious");
}
