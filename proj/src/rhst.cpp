#include "parsimony/rhst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parsimony/diversity.hpp"

namespace parsimony {

std::vector<RHstIssue> check_rhst_invariants(std::span<const NodeId> parents, std::span<const double> child_edges,
                                             std::span<const Label> labels, double r) {
    std::vector<RHstIssue> issues;
    const auto n = static_cast<NodeId>(parents.size());
    if (n == 0) {
        issues.push_back({"non_empty", -1, "tree has no nodes"});
        return issues;
    }
    if (child_edges.size() != parents.size() || labels.size() != parents.size()) {
        issues.push_back({"shape", -1, "parents, child_edges and labels must have equal length"});
        return issues;
    }
    if (!(r > 1.0)) {
        issues.push_back({"separation", -1, "r must exceed 1"});
    }
    NodeId root = -1;
    std::vector<std::int32_t> child_count(static_cast<std::size_t>(n), 0);
    for (NodeId v = 0; v < n; ++v) {
        const NodeId p = parents[static_cast<std::size_t>(v)];
        if (p == -1) {
            if (root != -1) {
                issues.push_back({"single_root", v, "more than one root"});
            }
            root = v;
        } else if (p < 0 || p >= n || p == v) {
            issues.push_back({"parent_link", v, "parent id out of range"});
            return issues;
        } else {
            ++child_count[static_cast<std::size_t>(p)];
        }
    }
    if (root == -1) {
        issues.push_back({"single_root", -1, "no root"});
        return issues;
    }
    // Every node must reach the root without revisiting a node.
    for (NodeId v = 0; v < n; ++v) {
        NodeId cur = v;
        for (NodeId steps = 0; cur != -1; ++steps) {
            if (steps > n) {
                issues.push_back({"acyclic", v, "parent links form a cycle"});
                return issues;
            }
            cur = parents[static_cast<std::size_t>(cur)];
        }
    }
    std::vector<NodeId> seen_label;
    NodeId leaves = 0;
    for (NodeId v = 0; v < n; ++v) {
        const auto sv = static_cast<std::size_t>(v);
        const bool leaf = child_count[sv] == 0;
        if (leaf) {
            ++leaves;
            if (labels[sv] < 0) {
                issues.push_back({"leaf_labels", v, "leaf without a label"});
            } else {
                seen_label.push_back(labels[sv]);
            }
        } else {
            if (labels[sv] != -1) {
                issues.push_back({"leaf_labels", v, "internal node carries a label"});
            }
            if (!(child_edges[sv] > 0.0) || !std::isfinite(child_edges[sv])) {
                issues.push_back({"positive_edges", v, "edge length to children must be positive"});
            }
            const NodeId p = parents[sv];
            if (p != -1) {
                const double limit = child_edges[static_cast<std::size_t>(p)] / r;
                if (child_edges[sv] > limit * (1.0 + 1e-12) + 1e-12) {
                    issues.push_back({"separation", v, "edge length does not shrink by factor r below its parent"});
                }
            }
        }
    }
    std::sort(seen_label.begin(), seen_label.end());
    for (std::size_t i = 0; i < seen_label.size(); ++i) {
        if (seen_label[i] != static_cast<Label>(i)) {
            issues.push_back({"leaf_labels", -1, "leaf labels must be exactly 0..H-1 without repeats"});
            break;
        }
    }
    (void)leaves;
    return issues;
}

RHst RHst::from_parents(std::span<const NodeId> parents, std::span<const double> child_edges,
                        std::span<const Label> labels, double r) {
    auto issues = check_rhst_invariants(parents, child_edges, labels, r);
    if (!issues.empty()) {
        throw InvalidInput("invalid r-HST (" + issues.front().invariant + "): " + issues.front().detail +
                           (issues.front().node >= 0 ? " at node " + std::to_string(issues.front().node) : ""));
    }
    RHst t;
    t.r_ = r;
    t.nodes_.resize(parents.size());
    for (std::size_t v = 0; v < parents.size(); ++v) {
        t.nodes_[v].parent = parents[v];
        t.nodes_[v].label = labels[v];
        t.nodes_[v].child_edge = child_edges[v];
        if (parents[v] == -1) {
            t.root_ = static_cast<NodeId>(v);
        } else {
            t.nodes_[static_cast<std::size_t>(parents[v])].children.push_back(static_cast<NodeId>(v));
        }
    }
    t.finalize();
    return t;
}

void RHst::finalize() {
    // depths via parent chains; children lists are already ascending by id
    std::vector<NodeId> stack{root_};
    nodes_[static_cast<std::size_t>(root_)].depth = 1;
    depth_ = 1;
    std::size_t num_leaves = 0;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        auto& node = nodes_[static_cast<std::size_t>(v)];
        depth_ = std::max(depth_, node.depth);
        if (node.children.empty()) {
            ++num_leaves;
            node.child_edge = 0.0;
        }
        for (NodeId c : node.children) {
            nodes_[static_cast<std::size_t>(c)].depth = node.depth + 1;
            stack.push_back(c);
        }
    }
    leaf_of_label_.assign(num_leaves, -1);
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (nodes_[v].children.empty()) {
            leaf_of_label_[static_cast<std::size_t>(nodes_[v].label)] = static_cast<NodeId>(v);
        }
    }
    const std::size_t h = num_leaves;
    std::vector<double> dist(h * h, 0.0);
    for (std::size_t a = 0; a < h; ++a) {
        for (std::size_t b = a + 1; b < h; ++b) {
            NodeId u = leaf_of_label_[a];
            NodeId v = leaf_of_label_[b];
            double d = 0.0;
            while (u != v) {
                const auto& nu = nodes_[static_cast<std::size_t>(u)];
                const auto& nv = nodes_[static_cast<std::size_t>(v)];
                if (nu.depth >= nv.depth) {
                    d += nodes_[static_cast<std::size_t>(nu.parent)].child_edge;
                    u = nu.parent;
                } else {
                    d += nodes_[static_cast<std::size_t>(nv.parent)].child_edge;
                    v = nv.parent;
                }
            }
            dist[a * h + b] = d;
            dist[b * h + a] = d;
        }
    }
    metric_ = LabelMetric::from_trusted_matrix(h, std::move(dist));
}

NodeId RHst::leaf_of(Label label) const {
    if (label < 0 || static_cast<std::size_t>(label) >= leaf_of_label_.size()) {
        throw InvalidInput("label " + std::to_string(label) + " is not a leaf of the tree");
    }
    return leaf_of_label_[static_cast<std::size_t>(label)];
}

double RHst::tree_metric(Label a, Label b) const {
    leaf_of(a);
    leaf_of(b);
    return metric_(a, b);
}

LabelSubset RHst::cluster_labels(NodeId node) const {
    if (node < 0 || static_cast<std::size_t>(node) >= nodes_.size()) {
        throw InvalidInput("node " + std::to_string(node) + " out of range");
    }
    LabelSubset out;
    std::vector<NodeId> stack{node};
    while (!stack.empty()) {
        const auto& n = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (n.children.empty()) {
            out.push_back(n.label);
        }
        stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

double RHst::hierarchical_pn_potts(std::span<const Label> subset) const {
    for (Label l : subset) {
        leaf_of(l);
    }
    return diameter_diversity(metric_, subset);
}

std::vector<NodeId> RHst::bottom_up_order() const {
    std::vector<NodeId> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return nodes_[static_cast<std::size_t>(a)].depth > nodes_[static_cast<std::size_t>(b)].depth;
    });
    return order;
}

bool RHst::operator==(const RHst& other) const {
    if (root_ != other.root_ || r_ != other.r_ || nodes_.size() != other.nodes_.size()) {
        return false;
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const auto& a = nodes_[v];
        const auto& b = other.nodes_[v];
        if (a.parent != b.parent || a.label != b.label || a.child_edge != b.child_edge || a.children != b.children) {
            return false;
        }
    }
    return true;
}

}  // namespace parsimony
