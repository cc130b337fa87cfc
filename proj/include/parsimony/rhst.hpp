#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parsimony/label_metric.hpp"
#include "parsimony/types.hpp"

namespace parsimony {

using NodeId = std::int32_t;

struct RHstNode {
    NodeId parent = -1;
    std::vector<NodeId> children;
    double child_edge = 0.0;  // length of every edge from this node to a child
    Label label = -1;         // leaf tag; -1 for internal nodes
    std::int32_t depth = 1;   // root is at depth 1
};

/// Rooted r-hierarchically well-separated tree whose leaves are exactly the
/// labels 0..H-1. Immutable once built; the leaf-to-leaf distance matrix is
/// cached at construction.
class RHst {
public:
    RHst() = default;

    /// Builds from parent links. parents[v] == -1 marks the root (exactly one).
    /// child_edges[v] is the edge length from v to each of its children and
    /// is ignored for leaves. labels[v] tags leaves (-1 for internal).
    /// Throws InvalidInput when any r-HST invariant fails.
    static RHst from_parents(std::span<const NodeId> parents, std::span<const double> child_edges,
                             std::span<const Label> labels, double r);

    std::size_t num_labels() const noexcept { return leaf_of_label_.size(); }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    NodeId root() const noexcept { return root_; }
    double r() const noexcept { return r_; }
    /// Number of levels; the root is level 1.
    std::int32_t depth() const noexcept { return depth_; }
    const RHstNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<RHstNode>& nodes() const noexcept { return nodes_; }
    NodeId leaf_of(Label label) const;

    /// Sum of edge lengths on the leaf-to-leaf path through the LCA.
    double tree_metric(Label a, Label b) const;
    const LabelMetric& metric() const noexcept { return metric_; }

    /// Leaf labels of the subtree rooted at node, ascending.
    LabelSubset cluster_labels(NodeId node) const;

    /// Diameter diversity of subset under the tree metric.
    double hierarchical_pn_potts(std::span<const Label> subset) const;

    /// Node ids ordered so every child precedes its parent, deepest level
    /// first, ascending id within a level.
    std::vector<NodeId> bottom_up_order() const;

    bool operator==(const RHst& other) const;

private:
    void finalize();

    std::vector<RHstNode> nodes_;
    std::vector<NodeId> leaf_of_label_;
    NodeId root_ = -1;
    double r_ = 2.0;
    std::int32_t depth_ = 0;
    LabelMetric metric_;
};

struct RHstIssue {
    std::string invariant;
    NodeId node = -1;
    std::string detail;
};

/// Invariant checker usable on raw parent-link data: single root, acyclic,
/// leaves tagged with distinct labels 0..H-1, positive child edges, and
/// child_edge(child) <= child_edge(parent) / r for every internal child.
std::vector<RHstIssue> check_rhst_invariants(std::span<const NodeId> parents, std::span<const double> child_edges,
                                             std::span<const Label> labels, double r);

}  // namespace parsimony
