#include "parsimony/frt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "parsimony/rng.hpp"

namespace parsimony {

std::uint64_t frt_component_seed(std::uint64_t seed, std::size_t i) noexcept {
    SplitMix64 base(seed);
    auto child = base.split(i);
    return child();
}

RHst frt_tree(const LabelMetric& metric, std::uint64_t seed) {
    const std::size_t h = metric.size();
    if (h == 0) {
        throw InvalidInput("cannot embed an empty metric");
    }
    if (h == 1) {
        const NodeId parent = -1;
        const double edge = 0.0;
        const Label label = 0;
        return RHst::from_parents({&parent, 1}, {&edge, 1}, {&label, 1}, 2.0);
    }
    for (std::size_t a = 0; a < h; ++a) {
        for (std::size_t b = 0; b < h; ++b) {
            if (a != b && !(metric(static_cast<Label>(a), static_cast<Label>(b)) > 0.0)) {
                throw InvalidInput("metric has distinct labels at zero distance; merge them before embedding");
            }
        }
    }
    const double unit = metric.min_positive_distance();
    const double diameter = metric.diameter() / unit;

    SplitMix64 rng(seed);
    std::vector<Label> order(h);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const double beta = 1.0 + rng.uniform();

    // top level T: radius beta * 2^(T-1) >= diameter for any beta >= 1
    int top = 1;
    while (std::ldexp(1.0, top - 1) < diameter) {
        ++top;
    }

    std::vector<NodeId> parents;
    std::vector<double> edges;
    std::vector<Label> labels;
    auto new_node = [&](NodeId parent) {
        parents.push_back(parent);
        edges.push_back(0.0);
        labels.push_back(-1);
        return static_cast<NodeId>(parents.size() - 1);
    };

    // cluster_of[v] = tree node holding label v at the current level
    const NodeId root = new_node(-1);
    std::vector<NodeId> cluster_of(h, root);
    std::vector<NodeId> level_nodes{root};
    for (int level = top; level >= 1; --level) {
        const double radius = beta * std::ldexp(1.0, level - 1);       // radius of level `level`
        const double child_radius = beta * std::ldexp(1.0, level - 2);  // radius used to split into level-1
        for (NodeId p : level_nodes) {
            edges[static_cast<std::size_t>(p)] = radius * unit;
        }
        // first center (in permutation order) within child_radius of each label
        std::vector<std::size_t> rank_of(h);
        for (std::size_t v = 0; v < h; ++v) {
            std::size_t rank = 0;
            while (metric(static_cast<Label>(v), order[rank]) / unit > child_radius) {
                ++rank;
            }
            rank_of[v] = rank;
        }
        // children keyed by (parent node, center rank), created in key order
        std::map<std::pair<NodeId, std::size_t>, NodeId> child_of;
        for (std::size_t v = 0; v < h; ++v) {
            child_of.emplace(std::make_pair(cluster_of[v], rank_of[v]), -1);
        }
        std::vector<NodeId> next_nodes;
        for (auto& [key, node] : child_of) {
            node = new_node(key.first);
            next_nodes.push_back(node);
        }
        std::vector<NodeId> next_cluster(h);
        for (std::size_t v = 0; v < h; ++v) {
            next_cluster[v] = child_of.at({cluster_of[v], rank_of[v]});
        }
        cluster_of = std::move(next_cluster);
        level_nodes = std::move(next_nodes);
    }
    // level-0 radius beta/2 < 1 separates every pair, so each bottom node is one label
    for (std::size_t v = 0; v < h; ++v) {
        labels[static_cast<std::size_t>(cluster_of[v])] = static_cast<Label>(v);
    }

    // Drop single-child levels above the first split. Distances only use
    // edges below the LCA, so the metric is unchanged.
    NodeId new_root = root;
    for (;;) {
        NodeId only_child = -1;
        int count = 0;
        for (std::size_t v = 0; v < parents.size(); ++v) {
            if (parents[v] == new_root) {
                only_child = static_cast<NodeId>(v);
                ++count;
            }
        }
        if (count != 1 || labels[static_cast<std::size_t>(only_child)] != -1) {
            break;
        }
        new_root = only_child;
    }
    if (new_root != root) {
        std::vector<NodeId> keep;
        std::vector<NodeId> remap(parents.size(), -1);
        // nodes strictly above new_root form a chain; keep everything in its subtree
        std::vector<bool> in_subtree(parents.size(), false);
        in_subtree[static_cast<std::size_t>(new_root)] = true;
        for (std::size_t v = 0; v < parents.size(); ++v) {  // parents precede children
            if (parents[v] >= 0 && in_subtree[static_cast<std::size_t>(parents[v])]) {
                in_subtree[v] = true;
            }
        }
        std::vector<NodeId> p2;
        std::vector<double> e2;
        std::vector<Label> l2;
        for (std::size_t v = 0; v < parents.size(); ++v) {
            if (in_subtree[v]) {
                remap[v] = static_cast<NodeId>(p2.size());
                p2.push_back(static_cast<NodeId>(v) == new_root ? -1 : remap[static_cast<std::size_t>(parents[v])]);
                e2.push_back(edges[v]);
                l2.push_back(labels[v]);
            }
        }
        parents = std::move(p2);
        edges = std::move(e2);
        labels = std::move(l2);
    }
    return RHst::from_parents(parents, edges, labels, 2.0);
}

HstMixture frt_embed(const LabelMetric& metric, std::size_t k, std::uint64_t seed, std::size_t threads) {
    if (k == 0) {
        throw InvalidInput("mixture size k must be at least 1");
    }
    if (metric.size() >= 2 && !(metric.diameter() > 0.0)) {
        throw InvalidInput("cannot embed a metric whose distances are all zero");
    }
    HstMixture mix;
    mix.trees.resize(k);
    mix.seeds.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        mix.seeds[i] = frt_component_seed(seed, i);
    }
    threads = std::max<std::size_t>(1, std::min(threads, k));
    if (threads == 1) {
        for (std::size_t i = 0; i < k; ++i) {
            mix.trees[i] = frt_tree(metric, mix.seeds[i]);
        }
        return mix;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < k; i += threads) {
                    mix.trees[i] = frt_tree(metric, mix.seeds[i]);
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
    return mix;
}

}  // namespace parsimony
