#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parsimony/flow_network.hpp"
#include "parsimony/rng.hpp"

using namespace parsimony;

namespace {

struct Edge {
    int u, v;
    double cap;
};

struct RandomNet {
    int n = 0;
    std::vector<double> src, snk;
    std::vector<Edge> edges;
};

RandomNet random_net(SplitMix64& rng, int max_nodes, bool integral) {
    RandomNet net;
    net.n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
    auto cap = [&] { return integral ? static_cast<double>(rng.below(10)) : rng.uniform(0.0, 10.0); };
    for (int v = 0; v < net.n; ++v) {
        net.src.push_back(rng.below(2) ? cap() : 0.0);
        net.snk.push_back(rng.below(2) ? cap() : 0.0);
    }
    const std::uint64_t m = rng.below(static_cast<std::uint64_t>(3 * net.n + 1));
    for (std::uint64_t e = 0; e < m && net.n > 1; ++e) {
        const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(net.n)));
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(net.n - 1)));
        v += v >= u;
        net.edges.push_back({u, v, cap()});
    }
    return net;
}

// Exhaustive minimum over all 2^n source/sink assignments.
double brute_force_min_cut(const RandomNet& net) {
    double best = INFINITY;
    for (std::uint32_t mask = 0; mask < (1U << net.n); ++mask) {
        auto sink_side = [&](int v) { return ((mask >> v) & 1U) != 0; };
        double c = 0.0;
        for (int v = 0; v < net.n; ++v) {
            c += sink_side(v) ? net.src[static_cast<std::size_t>(v)] : net.snk[static_cast<std::size_t>(v)];
        }
        for (const auto& e : net.edges) {
            if (!sink_side(e.u) && sink_side(e.v)) {
                c += e.cap;
            }
        }
        best = std::min(best, c);
    }
    return best;
}

FlowNetwork build(const RandomNet& net) {
    FlowNetwork g;
    g.add_nodes(static_cast<std::size_t>(net.n));
    for (int v = 0; v < net.n; ++v) {
        g.add_terminal_arc(v, net.src[static_cast<std::size_t>(v)], net.snk[static_cast<std::size_t>(v)]);
    }
    for (const auto& e : net.edges) {
        g.add_arc(e.u, e.v, e.cap, 0.0);
    }
    return g;
}

}  // namespace

TEST(MaxFlow, SingleNode) {
    FlowNetwork g;
    const auto v = g.add_node();
    g.add_terminal_arc(v, 5, 3);
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 3.0);
    EXPECT_EQ(g.min_cut_side(v), CutSide::kSource);
}

TEST(MaxFlow, InfiniteLink) {
    FlowNetwork g;
    const auto a = g.add_node();
    const auto b = g.add_node();
    g.add_terminal_arc(a, 10, 0);
    g.add_terminal_arc(b, 0, 4);
    g.add_arc(a, b, FlowNetwork::kInfinite, 0);
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 4.0);
}

TEST(MaxFlow, EmptyNetwork) {
    FlowNetwork g;
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 0.0);
}

TEST(MaxFlow, Diamond) {
    // s -> a (3), s -> b (2), a -> b (1), a -> t (2), b -> t (3)
    FlowNetwork g;
    const auto a = g.add_node();
    const auto b = g.add_node();
    g.add_terminal_arc(a, 3, 2);
    g.add_terminal_arc(b, 2, 3);
    g.add_arc(a, b, 1, 0);
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 5.0);
    RandomNet net{2, {3, 2}, {2, 3}, {{0, 1, 1}}};
    EXPECT_DOUBLE_EQ(brute_force_min_cut(net), 5.0);
}

TEST(MaxFlow, MatchesExhaustiveCuts) {
    SplitMix64 rng(1234);
    for (int t = 0; t < 400; ++t) {
        const auto net = random_net(rng, 12, t % 2 == 0);
        auto g = build(net);
        const double flow = g.compute_max_flow();
        EXPECT_NEAR(flow, brute_force_min_cut(net), 1e-9) << "trial " << t;
        EXPECT_NEAR(g.cut_capacity(), flow, 1e-9);
        for (int v = 0; v < net.n; ++v) {
            EXPECT_NEAR(g.conservation_residual(v), 0.0, 1e-9);
        }
    }
}

TEST(MaxFlow, BipartiteMatching) {
    SplitMix64 rng(77);
    for (int t = 0; t < 50; ++t) {
        const int left = 1 + static_cast<int>(rng.below(5));
        const int right = 1 + static_cast<int>(rng.below(5));
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(left), std::vector<bool>(static_cast<std::size_t>(right)));
        FlowNetwork g;
        g.add_nodes(static_cast<std::size_t>(left + right));
        for (int i = 0; i < left; ++i) {
            g.add_terminal_arc(i, 1, 0);
        }
        for (int j = 0; j < right; ++j) {
            g.add_terminal_arc(left + j, 0, 1);
        }
        for (int i = 0; i < left; ++i) {
            for (int j = 0; j < right; ++j) {
                if (rng.below(3) == 0) {
                    adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                    g.add_arc(i, left + j, 1, 0);
                }
            }
        }
        // brute-force matching: try every injective assignment of left vertices
        int best = 0;
        std::vector<int> choice(static_cast<std::size_t>(left), -1);
        auto search = [&](auto&& self, int i, int used, int size) -> void {
            if (i == left) {
                best = std::max(best, size);
                return;
            }
            self(self, i + 1, used, size);
            for (int j = 0; j < right; ++j) {
                if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] && !((used >> j) & 1)) {
                    self(self, i + 1, used | (1 << j), size + 1);
                }
            }
        };
        search(search, 0, 0, 0);
        EXPECT_DOUBLE_EQ(g.compute_max_flow(), best);
    }
}

TEST(MaxFlow, FreeNodesGoToSource) {
    FlowNetwork g;
    const auto v = g.add_node();
    g.add_terminal_arc(v, 2, 2);
    g.compute_max_flow();
    EXPECT_EQ(g.min_cut_side(v), CutSide::kSource);
}

TEST(MaxFlow, StateErrors) {
    FlowNetwork g;
    const auto a = g.add_node();
    const auto b = g.add_node();
    EXPECT_THROW(g.add_arc(a, a, 1, 0), InvalidInput);
    EXPECT_THROW(g.add_arc(a, b, -1, 0), InvalidInput);
    EXPECT_THROW(g.flow_value(), StateError);
    g.compute_max_flow();
    EXPECT_THROW(g.add_node(), StateError);
}

TEST(MaxFlow, Dimacs) {
    std::istringstream in(
        "c tiny\n"
        "p max 4 5\n"
        "n 1 s\n"
        "n 4 t\n"
        "a 1 2 3\n"
        "a 1 3 2\n"
        "a 2 3 1\n"
        "a 2 4 2\n"
        "a 3 4 3\n");
    auto g = FlowNetwork::from_dimacs(in);
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 5.0);
}

TEST(MaxFlow, QuantizedCapacities) {
    FlowNetwork g(0.5);
    const auto v = g.add_node();
    g.add_terminal_arc(v, 1.26, 3.0);
    EXPECT_DOUBLE_EQ(g.compute_max_flow(), 1.5);
}
