#pragma once

#include <cstdint>
#include <vector>

#include "parsimony/label_metric.hpp"
#include "parsimony/rhst.hpp"

namespace parsimony {

struct HstMixture {
    std::vector<RHst> trees;
    std::vector<std::uint64_t> seeds;  // seeds[i] generated trees[i]
};

/// One randomized 2-HST dominating `metric`: the metric is scaled so its
/// smallest positive distance is 1, a random label permutation and
/// beta in [1, 2) are drawn, and clusters are refined level by level with
/// radii beta * 2^(i-1) down to level 0 (singletons). Edges from a level-i
/// cluster to its children have length equal to the level radius (scaled
/// back). Levels above the first split are dropped.
RHst frt_tree(const LabelMetric& metric, std::uint64_t seed);

/// k independent trees; tree i uses seed derived from (seed, i).
/// Throws InvalidInput when k == 0 or the metric is degenerate.
HstMixture frt_embed(const LabelMetric& metric, std::size_t k, std::uint64_t seed, std::size_t threads = 1);

/// Seed used for the i-th tree of frt_embed(metric, k, seed).
std::uint64_t frt_component_seed(std::uint64_t seed, std::size_t i) noexcept;

}  // namespace parsimony
