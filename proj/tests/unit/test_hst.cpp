#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "generators.hpp"
#include "parsimony/frt.hpp"
#include "parsimony/problem_io.hpp"
#include "parsimony/rhst.hpp"
#include "parsimony/tasks.hpp"

using namespace parsimony;

namespace {

RHst two_level_tree() {
    const std::vector<NodeId> parents{-1, 0, 0, 1, 1, 2, 2};
    const std::vector<double> edges{6, 3, 3, 0, 0, 0, 0};
    const std::vector<Label> labels{-1, -1, -1, 0, 1, 2, 3};
    return RHst::from_parents(parents, edges, labels, 2.0);
}

void expect_valid(const RHst& t) {
    std::vector<NodeId> parents;
    std::vector<double> edges;
    std::vector<Label> labels;
    for (const auto& n : t.nodes()) {
        parents.push_back(n.parent);
        edges.push_back(n.child_edge);
        labels.push_back(n.label);
    }
    const auto issues = check_rhst_invariants(parents, edges, labels, t.r());
    EXPECT_TRUE(issues.empty()) << issues.front().invariant << ": " << issues.front().detail;
}

}  // namespace

TEST(RHst, TwoLevelDistances) {
    const RHst t = two_level_tree();
    EXPECT_DOUBLE_EQ(t.tree_metric(0, 1), 6.0);
    EXPECT_DOUBLE_EQ(t.tree_metric(0, 2), 18.0);
    EXPECT_DOUBLE_EQ(t.tree_metric(2, 3), 6.0);
    EXPECT_DOUBLE_EQ(t.tree_metric(1, 1), 0.0);
    EXPECT_DOUBLE_EQ(t.metric()(3, 0), 18.0);
}

TEST(RHst, TwoLevelClusters) {
    const RHst t = two_level_tree();
    EXPECT_EQ(t.cluster_labels(t.root()), (LabelSubset{0, 1, 2, 3}));
    EXPECT_EQ(t.cluster_labels(t.leaf_of(1)), (LabelSubset{1}));
    EXPECT_EQ(t.cluster_labels(2), (LabelSubset{2, 3}));
}

TEST(RHst, TwoLevelHierarchicalPotential) {
    const RHst t = two_level_tree();
    const LabelSubset all{0, 1, 2, 3}, p2{2, 3}, single{1};
    EXPECT_DOUBLE_EQ(t.hierarchical_pn_potts(all), 18.0);
    EXPECT_DOUBLE_EQ(t.hierarchical_pn_potts(p2), 6.0);
    EXPECT_DOUBLE_EQ(t.hierarchical_pn_potts(single), 0.0);
}

TEST(RHst, RejectsBrokenTrees) {
    const std::vector<Label> labels{-1, -1, -1, 0, 1, 2, 3};
    // separation: lower edge 4 > 6 / 2
    EXPECT_THROW(RHst::from_parents(std::vector<NodeId>{-1, 0, 0, 1, 1, 2, 2}, std::vector<double>{6, 4, 3, 0, 0, 0, 0},
                                    labels, 2.0),
                 InvalidInput);
    // two roots
    EXPECT_THROW(RHst::from_parents(std::vector<NodeId>{-1, -1, 0, 1, 1, 2, 2}, std::vector<double>{6, 3, 3, 0, 0, 0, 0},
                                    labels, 2.0),
                 InvalidInput);
    // cycle
    EXPECT_THROW(RHst::from_parents(std::vector<NodeId>{-1, 2, 1, 1, 1, 2, 2}, std::vector<double>{6, 3, 3, 0, 0, 0, 0},
                                    labels, 2.0),
                 InvalidInput);
    // duplicated label
    EXPECT_THROW(RHst::from_parents(std::vector<NodeId>{-1, 0, 0, 1, 1, 2, 2}, std::vector<double>{6, 3, 3, 0, 0, 0, 0},
                                    std::vector<Label>{-1, -1, -1, 0, 1, 1, 3}, 2.0),
                 InvalidInput);
    // non-positive edge
    EXPECT_THROW(RHst::from_parents(std::vector<NodeId>{-1, 0, 0, 1, 1, 2, 2}, std::vector<double>{6, 0, 3, 0, 0, 0, 0},
                                    labels, 2.0),
                 InvalidInput);
}

TEST(RHst, JsonRoundTrip) {
    const RHst t = two_level_tree();
    EXPECT_EQ(parse_tree(tree_to_json(t)), t);
    SplitMix64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const RHst r = random_rhst(2 + static_cast<int>(rng.below(8)), 2.0 + rng.uniform(), 3, rng());
        EXPECT_EQ(parse_tree(tree_to_json(r)), r);
    }
}

TEST(RandomRHst, Shapes) {
    const RHst single = random_rhst(1, 2.0, 1, 0);
    EXPECT_EQ(single.num_nodes(), 1u);
    EXPECT_EQ(single.num_labels(), 1u);

    const RHst t = random_rhst(4, 2.0, 3, 17);
    expect_valid(t);
    EXPECT_EQ(t.num_labels(), 4u);
    EXPECT_EQ(t.depth(), 3);
    for (Label l = 0; l < 4; ++l) {
        EXPECT_EQ(t.node(t.leaf_of(l)).depth, 3);
    }
    for (const auto& n : t.nodes()) {
        if (n.parent >= 0 && !n.children.empty()) {
            EXPECT_LE(n.child_edge, t.node(n.parent).child_edge / 2.0 * (1 + 1e-12));
        }
    }
    EXPECT_EQ(random_rhst(4, 2.0, 3, 17), t);
    EXPECT_THROW(random_rhst(4, 2.0, 1, 0), InvalidInput);
    EXPECT_THROW(random_rhst(4, 1.0, 3, 0), InvalidInput);
}

TEST(RandomRHst, ManySeedsValid) {
    SplitMix64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const int h = 1 + static_cast<int>(rng.below(12));
        const int depth = h == 1 ? 1 : 2 + static_cast<int>(rng.below(4));
        expect_valid(random_rhst(h, 2.0 + 3 * rng.uniform(), depth, rng()));
    }
}

TEST(Frt, SingleLabel) {
    const RHst t = frt_tree(LabelMetric::uniform(1, 1.0), 3);
    EXPECT_EQ(t.num_labels(), 1u);
    EXPECT_EQ(t.num_nodes(), 1u);
}

TEST(Frt, TwoPoints) {
    const auto m = LabelMetric::from_matrix(2, {0, 5, 5, 0});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const RHst t = frt_tree(m, seed);
        EXPECT_GE(t.tree_metric(0, 1), 5.0);
        EXPECT_LT(t.tree_metric(0, 1), 4 * 5.0);
    }
}

TEST(Frt, DominanceAndValidity) {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t h = 2 + rng.below(15);
        const auto m = testgen::random_metric(rng, h, 0.5, 50.0);
        const auto mix = frt_embed(m, 8, rng());
        ASSERT_EQ(mix.trees.size(), 8u);
        for (const auto& t : mix.trees) {
            expect_valid(t);
            EXPECT_DOUBLE_EQ(t.r(), 2.0);
            for (Label a = 0; a < static_cast<Label>(h); ++a) {
                for (Label b = 0; b < static_cast<Label>(h); ++b) {
                    EXPECT_GE(t.tree_metric(a, b), m(a, b) * (1 - 1e-12));
                }
            }
        }
    }
}

TEST(Frt, Deterministic) {
    const auto m = LabelMetric::truncated_linear(12, 1.0, 6);
    const auto a = frt_embed(m, 6, 42, 1);
    const auto b = frt_embed(m, 6, 42, 3);
    ASSERT_EQ(a.trees.size(), b.trees.size());
    for (std::size_t i = 0; i < a.trees.size(); ++i) {
        EXPECT_EQ(a.trees[i], b.trees[i]);
        EXPECT_EQ(a.seeds[i], frt_component_seed(42, i));
        EXPECT_EQ(a.trees[i], frt_tree(m, a.seeds[i]));
    }
}

TEST(Frt, Errors) {
    EXPECT_THROW(frt_embed(LabelMetric::truncated_linear(4, 1.0, 2), 0, 1), InvalidInput);
    EXPECT_THROW(frt_tree(LabelMetric::from_trusted_matrix(2, {0, 0, 0, 0}), 1), InvalidInput);
}

// Settings and the measured mean come from the frozen pilot fixture.
TEST(Frt, TruncatedLinearDistortion) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/frt_pilot.json");
    const auto pilot = nlohmann::json::parse(in);
    const auto h = pilot["num_labels"].get<std::size_t>();
    const auto m = LabelMetric::truncated_linear(h, pilot["metric"]["lambda"].get<double>(),
                                                 pilot["metric"]["truncation"].get<int>());
    const auto mix = frt_embed(m, pilot["trees"].get<std::size_t>(), pilot["seed"].get<std::uint64_t>());
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& t : mix.trees) {
        for (Label a = 0; a < static_cast<Label>(h); ++a) {
            for (Label b = a + 1; b < static_cast<Label>(h); ++b) {
                sum += t.tree_metric(a, b) / m(a, b);
                ++count;
            }
        }
    }
    const double mean = sum / static_cast<double>(count);
    EXPECT_LE(mean, 8 * std::log(static_cast<double>(h)));
    EXPECT_NEAR(mean, pilot["mean_distortion"].get<double>(), 1e-9);
    RecordProperty("mean_distortion", std::to_string(mean));
}
