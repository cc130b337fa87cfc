#include "parsimony/flow_network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <string>

namespace parsimony {

double FlowNetwork::quantize(double c) const {
    if (quantum_ > 0.0 && std::isfinite(c)) {
        return std::round(c / quantum_) * quantum_;
    }
    return c;
}

void FlowNetwork::require_mutable() const {
    if (solved_) {
        throw StateError("flow network is already solved; build a new network per move");
    }
}

void FlowNetwork::require_node(NodeIndex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= nodes_.size()) {
        throw InvalidInput("node id " + std::to_string(v) + " out of range");
    }
}

FlowNetwork::NodeIndex FlowNetwork::add_node() {
    require_mutable();
    nodes_.emplace_back();
    return static_cast<NodeIndex>(nodes_.size() - 1);
}

FlowNetwork::NodeIndex FlowNetwork::add_nodes(std::size_t count) {
    require_mutable();
    const auto first = static_cast<NodeIndex>(nodes_.size());
    nodes_.resize(nodes_.size() + count);
    return first;
}

void FlowNetwork::add_arc(NodeIndex u, NodeIndex v, double cap_forward, double cap_backward) {
    require_mutable();
    require_node(u);
    require_node(v);
    if (u == v) {
        throw InvalidInput("self-loop arcs are not allowed");
    }
    if (!(cap_forward >= 0.0) || !(cap_backward >= 0.0)) {
        throw InvalidInput("arc capacities must be non-negative");
    }
    cap_forward = quantize(cap_forward);
    cap_backward = quantize(cap_backward);
    const auto a = static_cast<std::int32_t>(arcs_.size());
    arcs_.push_back({v, nodes_[static_cast<std::size_t>(u)].first, cap_forward, cap_forward});
    arcs_.push_back({u, nodes_[static_cast<std::size_t>(v)].first, cap_backward, cap_backward});
    nodes_[static_cast<std::size_t>(u)].first = a;
    nodes_[static_cast<std::size_t>(v)].first = a + 1;
}

void FlowNetwork::add_terminal_arc(NodeIndex v, double cap_from_source, double cap_to_sink) {
    require_mutable();
    require_node(v);
    if (!(cap_from_source >= 0.0) || !(cap_to_sink >= 0.0)) {
        throw InvalidInput("terminal capacities must be non-negative");
    }
    auto& n = nodes_[static_cast<std::size_t>(v)];
    n.source_cap += quantize(cap_from_source);
    n.sink_cap += quantize(cap_to_sink);
}

void FlowNetwork::resolve_infinite() {
    double finite_sum = 0.0;
    bool any_infinite = false;
    for (const auto& a : arcs_) {
        if (std::isinf(a.capacity)) {
            any_infinite = true;
        } else {
            finite_sum += a.capacity;
        }
    }
    for (const auto& n : nodes_) {
        for (double c : {n.source_cap, n.sink_cap}) {
            if (std::isinf(c)) {
                any_infinite = true;
            } else {
                finite_sum += c;
            }
        }
    }
    if (!any_infinite) {
        return;
    }
    const double big = finite_sum + 1.0;
    for (auto& a : arcs_) {
        if (std::isinf(a.capacity)) {
            a.capacity = a.residual = big;
        }
    }
    for (auto& n : nodes_) {
        if (std::isinf(n.source_cap)) {
            n.source_cap = big;
        }
        if (std::isinf(n.sink_cap)) {
            n.sink_cap = big;
        }
    }
}

void FlowNetwork::init_trees() {
    flow_ = 0.0;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        auto& n = nodes_[v];
        // flow through s->v->t directly is pushed up front
        flow_ += std::min(n.source_cap, n.sink_cap);
        n.terminal_residual = n.source_cap - n.sink_cap;
        n.terminal_initial = n.terminal_residual;
        n.stamp = 0;
        n.dist = 0;
        n.active = false;
        if (n.terminal_residual > 0.0) {
            n.in_sink_tree = false;
            n.parent = kTerminal;
            n.dist = 1;
            set_active(static_cast<NodeIndex>(v));
        } else if (n.terminal_residual < 0.0) {
            n.in_sink_tree = true;
            n.parent = kTerminal;
            n.dist = 1;
            set_active(static_cast<NodeIndex>(v));
        } else {
            n.parent = kNone;
        }
    }
}

void FlowNetwork::set_active(NodeIndex v) {
    auto& n = nodes_[static_cast<std::size_t>(v)];
    if (!n.active) {
        n.active = true;
        active_queue_.push_back(v);
    }
}

FlowNetwork::NodeIndex FlowNetwork::next_active() {
    while (active_head_ < active_queue_.size()) {
        const NodeIndex v = active_queue_[active_head_++];
        auto& n = nodes_[static_cast<std::size_t>(v)];
        n.active = false;
        if (n.parent != kNone) {
            return v;
        }
    }
    active_queue_.clear();
    active_head_ = 0;
    return kNone;
}

// Returns an arc from the source tree to the sink tree, or kNone.
std::int32_t FlowNetwork::grow(NodeIndex v) {
    const auto& nv = nodes_[static_cast<std::size_t>(v)];
    for (std::int32_t a = nv.first; a != kNone; a = arcs_[static_cast<std::size_t>(a)].next) {
        const bool usable = nv.in_sink_tree ? arcs_[static_cast<std::size_t>(sister(a))].residual > 0.0
                                            : arcs_[static_cast<std::size_t>(a)].residual > 0.0;
        if (!usable) {
            continue;
        }
        const NodeIndex w = arcs_[static_cast<std::size_t>(a)].head;
        auto& nw = nodes_[static_cast<std::size_t>(w)];
        if (nw.parent == kNone) {
            nw.in_sink_tree = nv.in_sink_tree;
            nw.parent = sister(a);
            nw.stamp = nv.stamp;
            nw.dist = nv.dist + 1;
            set_active(w);
        } else if (nw.in_sink_tree != nv.in_sink_tree) {
            return nv.in_sink_tree ? sister(a) : a;
        } else if (nw.stamp <= nv.stamp && nw.dist > nv.dist) {
            // shorten the path to the root
            nw.parent = sister(a);
            nw.stamp = nv.stamp;
            nw.dist = nv.dist + 1;
        }
    }
    return kNone;
}

void FlowNetwork::augment(std::int32_t middle) {
    auto& mid = arcs_[static_cast<std::size_t>(middle)];
    double bottleneck = mid.residual;
    const NodeIndex source_end = arcs_[static_cast<std::size_t>(sister(middle))].head;
    const NodeIndex sink_end = mid.head;

    NodeIndex v = source_end;
    for (;;) {
        const std::int32_t a = nodes_[static_cast<std::size_t>(v)].parent;
        if (a == kTerminal) {
            break;
        }
        bottleneck = std::min(bottleneck, arcs_[static_cast<std::size_t>(sister(a))].residual);
        v = arcs_[static_cast<std::size_t>(a)].head;
    }
    bottleneck = std::min(bottleneck, nodes_[static_cast<std::size_t>(v)].terminal_residual);

    v = sink_end;
    for (;;) {
        const std::int32_t a = nodes_[static_cast<std::size_t>(v)].parent;
        if (a == kTerminal) {
            break;
        }
        bottleneck = std::min(bottleneck, arcs_[static_cast<std::size_t>(a)].residual);
        v = arcs_[static_cast<std::size_t>(a)].head;
    }
    bottleneck = std::min(bottleneck, -nodes_[static_cast<std::size_t>(v)].terminal_residual);

    arcs_[static_cast<std::size_t>(sister(middle))].residual += bottleneck;
    mid.residual -= bottleneck;

    v = source_end;
    for (;;) {
        auto& n = nodes_[static_cast<std::size_t>(v)];
        const std::int32_t a = n.parent;
        if (a == kTerminal) {
            n.terminal_residual -= bottleneck;
            if (n.terminal_residual <= 0.0) {
                n.terminal_residual = 0.0;
                n.parent = kOrphan;
                orphans_.push_back(v);
            }
            break;
        }
        arcs_[static_cast<std::size_t>(a)].residual += bottleneck;
        auto& back = arcs_[static_cast<std::size_t>(sister(a))];
        back.residual -= bottleneck;
        const NodeIndex next = arcs_[static_cast<std::size_t>(a)].head;
        if (back.residual <= 0.0) {
            back.residual = 0.0;
            n.parent = kOrphan;
            orphans_.push_back(v);
        }
        v = next;
    }

    v = sink_end;
    for (;;) {
        auto& n = nodes_[static_cast<std::size_t>(v)];
        const std::int32_t a = n.parent;
        if (a == kTerminal) {
            n.terminal_residual += bottleneck;
            if (n.terminal_residual >= 0.0) {
                n.terminal_residual = 0.0;
                n.parent = kOrphan;
                orphans_.push_back(v);
            }
            break;
        }
        arcs_[static_cast<std::size_t>(sister(a))].residual += bottleneck;
        auto& fwd = arcs_[static_cast<std::size_t>(a)];
        fwd.residual -= bottleneck;
        const NodeIndex next = fwd.head;
        if (fwd.residual <= 0.0) {
            fwd.residual = 0.0;
            n.parent = kOrphan;
            orphans_.push_back(v);
        }
        v = next;
    }
    flow_ += bottleneck;
}

void FlowNetwork::process_orphan(NodeIndex v, bool sink_tree) {
    std::int32_t best_arc = kNone;
    std::int32_t best_dist = kInfDist;
    auto& nv = nodes_[static_cast<std::size_t>(v)];

    for (std::int32_t a0 = nv.first; a0 != kNone; a0 = arcs_[static_cast<std::size_t>(a0)].next) {
        const double cap = sink_tree ? arcs_[static_cast<std::size_t>(a0)].residual
                                     : arcs_[static_cast<std::size_t>(sister(a0))].residual;
        if (!(cap > 0.0)) {
            continue;
        }
        NodeIndex w = arcs_[static_cast<std::size_t>(a0)].head;
        const auto& nw0 = nodes_[static_cast<std::size_t>(w)];
        if (nw0.in_sink_tree != sink_tree || nw0.parent == kNone) {
            continue;
        }
        // walk to the root to make sure w is not itself cut off
        std::int32_t d = 0;
        for (;;) {
            auto& nw = nodes_[static_cast<std::size_t>(w)];
            if (nw.stamp == time_) {
                d += nw.dist;
                break;
            }
            const std::int32_t a = nw.parent;
            ++d;
            if (a == kTerminal) {
                nw.stamp = time_;
                nw.dist = 1;
                break;
            }
            if (a == kOrphan) {
                d = kInfDist;
                break;
            }
            w = arcs_[static_cast<std::size_t>(a)].head;
        }
        if (d == kInfDist) {
            continue;
        }
        if (d < best_dist) {
            best_arc = a0;
            best_dist = d;
        }
        // stamp the path so later walks stop early
        for (w = arcs_[static_cast<std::size_t>(a0)].head; nodes_[static_cast<std::size_t>(w)].stamp != time_;) {
            auto& nw = nodes_[static_cast<std::size_t>(w)];
            nw.stamp = time_;
            nw.dist = d--;
            w = arcs_[static_cast<std::size_t>(nw.parent)].head;
        }
    }

    if (best_arc != kNone) {
        nv.parent = best_arc;
        nv.stamp = time_;
        nv.dist = best_dist + 1;
        return;
    }

    nv.parent = kNone;
    for (std::int32_t a0 = nv.first; a0 != kNone; a0 = arcs_[static_cast<std::size_t>(a0)].next) {
        const NodeIndex w = arcs_[static_cast<std::size_t>(a0)].head;
        auto& nw = nodes_[static_cast<std::size_t>(w)];
        if (nw.in_sink_tree != sink_tree || nw.parent == kNone) {
            continue;
        }
        const double cap = sink_tree ? arcs_[static_cast<std::size_t>(a0)].residual
                                     : arcs_[static_cast<std::size_t>(sister(a0))].residual;
        if (cap > 0.0) {
            set_active(w);
        }
        const std::int32_t a = nw.parent;
        if (a != kTerminal && a != kOrphan && arcs_[static_cast<std::size_t>(a)].head == v) {
            nw.parent = kOrphan;
            orphans_.push_back(w);
        }
    }
}

void FlowNetwork::adopt() {
    // FIFO processing of orphans
    std::size_t head = 0;
    while (head < orphans_.size()) {
        const NodeIndex v = orphans_[head++];
        process_orphan(v, nodes_[static_cast<std::size_t>(v)].in_sink_tree);
    }
    orphans_.clear();
}

double FlowNetwork::compute_max_flow() {
    if (solved_) {
        return flow_;
    }
    resolve_infinite();
    active_queue_.clear();
    active_head_ = 0;
    init_trees();
    time_ = 0;

    NodeIndex current = kNone;
    for (;;) {
        NodeIndex v = current;
        if (v != kNone) {
            auto& n = nodes_[static_cast<std::size_t>(v)];
            if (n.parent == kNone) {
                v = kNone;
            }
        }
        if (v == kNone) {
            v = next_active();
            if (v == kNone) {
                break;
            }
        }
        const std::int32_t middle = grow(v);
        ++time_;
        if (middle != kNone) {
            current = v;
            augment(middle);
            adopt();
        } else {
            current = kNone;
        }
    }
    solved_ = true;

    // strong duality: the reported flow must equal the induced cut
    const double cut = cut_capacity();
    if (std::abs(cut - flow_) > 1e-9 * std::max(1.0, std::abs(flow_))) {
        std::ostringstream os;
        os << "max-flow/min-cut mismatch: flow " << flow_ << " vs cut " << cut;
        throw std::logic_error(os.str());
    }
    return flow_;
}

double FlowNetwork::flow_value() const {
    if (!solved_) {
        throw StateError("flow value queried before compute_max_flow()");
    }
    return flow_;
}

CutSide FlowNetwork::min_cut_side(NodeIndex v) const {
    if (!solved_) {
        throw StateError("cut side queried before compute_max_flow()");
    }
    require_node(v);
    const auto& n = nodes_[static_cast<std::size_t>(v)];
    if (n.parent != kNone && n.in_sink_tree) {
        return CutSide::kSink;
    }
    return CutSide::kSource;
}

double FlowNetwork::cut_capacity() const {
    if (!solved_) {
        throw StateError("cut queried before compute_max_flow()");
    }
    double total = 0.0;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const bool src = min_cut_side(static_cast<NodeIndex>(v)) == CutSide::kSource;
        total += src ? nodes_[v].sink_cap : nodes_[v].source_cap;
        if (!src) {
            continue;
        }
        for (std::int32_t a = nodes_[v].first; a != kNone; a = arcs_[static_cast<std::size_t>(a)].next) {
            const auto& arc = arcs_[static_cast<std::size_t>(a)];
            if (min_cut_side(arc.head) == CutSide::kSink) {
                total += arc.capacity;
            }
        }
    }
    return total;
}

double FlowNetwork::conservation_residual(NodeIndex v) const {
    if (!solved_) {
        throw StateError("flow queried before compute_max_flow()");
    }
    require_node(v);
    const auto& n = nodes_[static_cast<std::size_t>(v)];
    double out = 0.0;
    for (std::int32_t a = n.first; a != kNone; a = arcs_[static_cast<std::size_t>(a)].next) {
        const auto& arc = arcs_[static_cast<std::size_t>(a)];
        out += arc.capacity - arc.residual;
    }
    return (n.terminal_initial - n.terminal_residual) - out;
}

FlowNetwork FlowNetwork::from_dimacs(std::istream& in) {
    FlowNetwork net;
    std::string line;
    std::int64_t n = -1;
    std::int64_t source = -1;
    std::int64_t sink = -1;
    struct RawArc {
        std::int64_t u, v;
        double cap;
    };
    std::vector<RawArc> raw;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') {
            continue;
        }
        std::istringstream ls(line);
        char kind = 0;
        ls >> kind;
        if (kind == 'p') {
            std::string fmt;
            std::int64_t m = 0;
            ls >> fmt >> n >> m;
            if (fmt != "max" || n < 2) {
                throw InvalidInput("DIMACS line " + std::to_string(lineno) + ": expected 'p max <nodes> <arcs>'");
            }
        } else if (kind == 'n') {
            std::int64_t id = 0;
            char which = 0;
            ls >> id >> which;
            (which == 's' ? source : sink) = id;
        } else if (kind == 'a') {
            RawArc r{};
            ls >> r.u >> r.v >> r.cap;
            if (!ls) {
                throw InvalidInput("DIMACS line " + std::to_string(lineno) + ": malformed arc");
            }
            raw.push_back(r);
        } else {
            throw InvalidInput("DIMACS line " + std::to_string(lineno) + ": unknown record");
        }
    }
    if (n < 2 || source < 1 || sink < 1 || source == sink || source > n || sink > n) {
        throw InvalidInput("DIMACS input needs a problem line and distinct source/sink");
    }
    std::vector<NodeIndex> map(static_cast<std::size_t>(n + 1), kNone);
    for (std::int64_t id = 1; id <= n; ++id) {
        if (id != source && id != sink) {
            map[static_cast<std::size_t>(id)] = net.add_node();
        }
    }
    for (const auto& r : raw) {
        if (r.u < 1 || r.u > n || r.v < 1 || r.v > n) {
            throw InvalidInput("DIMACS arc endpoint out of range");
        }
        if (r.u == source && r.v != sink) {
            net.add_terminal_arc(map[static_cast<std::size_t>(r.v)], r.cap, 0.0);
        } else if (r.v == sink && r.u != source) {
            net.add_terminal_arc(map[static_cast<std::size_t>(r.u)], 0.0, r.cap);
        } else if (r.u == source && r.v == sink) {
            const NodeIndex t = net.add_node();
            net.add_terminal_arc(t, r.cap, r.cap);
        } else if (r.u != sink && r.v != source && r.u != r.v) {
            net.add_arc(map[static_cast<std::size_t>(r.u)], map[static_cast<std::size_t>(r.v)], r.cap, 0.0);
        }
    }
    return net;
}

}  // namespace parsimony
