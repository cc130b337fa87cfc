#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <vector>

#include "parsimony/types.hpp"

namespace parsimony {

enum class CutSide { kSource, kSink };

/// Directed capacitated graph with implicit source and sink terminals,
/// solved by augmenting paths over two search trees that are reused
/// between augmentations. Arcs are stored with their reverse twins.
///
/// Single-threaded; build, call compute_max_flow() once, then query.
class FlowNetwork {
public:
    using NodeIndex = std::int32_t;

    /// Capacity placeholder; replaced at solve time by (sum of finite capacities + 1).
    static constexpr double kInfinite = std::numeric_limits<double>::infinity();

    /// quantum > 0 rounds every capacity to a multiple of quantum (e.g.
    /// 2^-20) so that flow sums are exact.
    explicit FlowNetwork(double quantum = 0.0) : quantum_(quantum) {}

    NodeIndex add_node();
    NodeIndex add_nodes(std::size_t count);
    std::size_t num_nodes() const noexcept { return nodes_.size(); }

    /// Adds u->v with cap_forward and v->u with cap_backward.
    void add_arc(NodeIndex u, NodeIndex v, double cap_forward, double cap_backward);

    /// Repeated calls accumulate.
    void add_terminal_arc(NodeIndex v, double cap_from_source, double cap_to_sink);

    double compute_max_flow();
    bool solved() const noexcept { return solved_; }
    double flow_value() const;

    /// Free nodes (reachable from neither terminal in the residual graph) go to the source side.
    CutSide min_cut_side(NodeIndex v) const;

    /// Capacity of the cut induced by min_cut_side.
    double cut_capacity() const;

    /// (terminal net inflow) - (net outflow over arcs); zero when flow is conserved.
    double conservation_residual(NodeIndex v) const;

    /// Parses DIMACS max-flow text ("p max", "n <id> s|t", "a <u> <v> <cap>").
    /// Node ids are 1-based in the file; the returned network omits the
    /// terminal nodes and maps their arcs to terminal arcs.
    static FlowNetwork from_dimacs(std::istream& in);

private:
    static constexpr std::int32_t kNone = -1;
    static constexpr std::int32_t kTerminal = -2;
    static constexpr std::int32_t kOrphan = -3;
    static constexpr std::int32_t kInfDist = std::numeric_limits<std::int32_t>::max();

    struct Arc {
        NodeIndex head;
        std::int32_t next;  // next arc out of the same tail
        double residual;
        double capacity;
    };
    struct Node {
        std::int32_t first = kNone;
        std::int32_t parent = kNone;  // arc toward the tree root, or kTerminal/kOrphan/kNone
        bool in_sink_tree = false;
        bool active = false;
        double terminal_residual = 0.0;  // > 0: residual from source, < 0: residual to sink
        double terminal_initial = 0.0;
        double source_cap = 0.0;
        double sink_cap = 0.0;
        std::int64_t stamp = 0;
        std::int32_t dist = 0;
    };

    double quantize(double c) const;
    void require_mutable() const;
    void require_node(NodeIndex v) const;
    static std::int32_t sister(std::int32_t a) noexcept { return a ^ 1; }

    void resolve_infinite();
    void init_trees();
    void set_active(NodeIndex v);
    NodeIndex next_active();
    std::int32_t grow(NodeIndex v);
    void augment(std::int32_t middle);
    void adopt();
    void process_orphan(NodeIndex v, bool sink_tree);

    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<NodeIndex> active_queue_;
    std::size_t active_head_ = 0;
    std::vector<NodeIndex> orphans_;
    std::int64_t time_ = 0;
    double flow_ = 0.0;
    double quantum_;
    bool solved_ = false;
};

}  // namespace parsimony
