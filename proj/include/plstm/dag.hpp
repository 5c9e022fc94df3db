#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plstm/common.hpp"

namespace plstm {

inline constexpr std::uint64_t kDefaultPathCap = 1000000;

// ---------------------------------------------------------------------------
// Dag
//
// Nodes are 0..node_count-1; an edge's id is its position in the edge list.
// For an edge e = (u, v): u is the node the edge leaves (tail), v the node it
// enters (head). in_edges(n) are the edges entering n, out_edges(n) the edges
// leaving n, both sorted by edge id. Immutable after construction.
// ---------------------------------------------------------------------------
class Dag {
  public:
    Dag(int node_count, std::vector<std::pair<int, int>> edges)
        : node_count_(node_count), edges_(std::move(edges)) {
        if (node_count_ < 0) throw ShapeError("Dag: negative node count");
        in_edges_.resize(static_cast<std::size_t>(node_count_));
        out_edges_.resize(static_cast<std::size_t>(node_count_));
        std::set<std::pair<int, int>> seen;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto [u, v] = edges_[e];
            if (u < 0 || u >= node_count_ || v < 0 || v >= node_count_)
                throw ShapeError("Dag: edge endpoint out of range");
            if (!seen.insert({u, v}).second) throw ShapeError("Dag: duplicate edge");
            out_edges_[static_cast<std::size_t>(u)].push_back(static_cast<int>(e));
            in_edges_[static_cast<std::size_t>(v)].push_back(static_cast<int>(e));
        }
    }

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int tail(int e) const { return edges_[static_cast<std::size_t>(e)].first; }
    int head(int e) const { return edges_[static_cast<std::size_t>(e)].second; }
    const std::vector<int>& in_edges(int n) const { return in_edges_[static_cast<std::size_t>(n)]; }
    const std::vector<int>& out_edges(int n) const { return out_edges_[static_cast<std::size_t>(n)]; }
    int in_degree(int n) const { return static_cast<int>(in_edges(n).size()); }
    int out_degree(int n) const { return static_cast<int>(out_edges(n).size()); }

    // Position of edge e within in_edges(head(e)) / out_edges(tail(e)).
    int in_slot(int e) const {
        const auto& v = in_edges(head(e));
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), e) - v.begin());
    }
    int out_slot(int e) const {
        const auto& v = out_edges(tail(e));
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), e) - v.begin());
    }

    // Dag with every edge reversed (same ids).
    Dag reversed() const {
        std::vector<std::pair<int, int>> rev(edges_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e)
            rev[e] = {edges_[e].second, edges_[e].first};
        return Dag(node_count_, std::move(rev));
    }

  private:
    int node_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> in_edges_;
    std::vector<std::vector<int>> out_edges_;
};

// Kahn's algorithm with lowest-id tie breaking. Throws CycleError if the graph
// has a directed cycle (i.e. is not a DAG).
inline std::vector<int> topological_order(const Dag& dag) {
    const int n = dag.node_count();
    std::vector<int> indeg(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) indeg[static_cast<std::size_t>(v)] = dag.in_degree(v);
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int e : dag.out_edges(v)) {
            int w = dag.head(e);
            if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push(w);
        }
    }
    if (static_cast<int>(order.size()) != n) throw CycleError("topological_order: graph has a cycle");
    return order;
}

// ---------------------------------------------------------------------------
// LineGraph: nodes are the base DAG's edges; a line edge (e1, e2) exists iff
// e1 enters the node that e2 leaves.
// ---------------------------------------------------------------------------
struct LineGraph {
    int base_edge_count = 0;
    std::vector<std::pair<int, int>> line_edges;

    // View as a Dag over edge ids (for topological order, path search, ...).
    Dag as_dag() const { return Dag(base_edge_count, line_edges); }
};

inline LineGraph build_line_graph(const Dag& dag) {
    LineGraph lg;
    lg.base_edge_count = dag.edge_count();
    for (int n = 0; n < dag.node_count(); ++n)
        for (int e_in : dag.in_edges(n))
            for (int e_out : dag.out_edges(n)) lg.line_edges.emplace_back(e_in, e_out);
    return lg;
}

// Line graph restricted to transitions judged "active" by the predicate
// pred(node, in_edge, out_edge); used for D-mode multitree checks, where
// masked (zero) transitions drop out of the effective line graph.
template <typename Pred>
LineGraph build_line_graph_if(const Dag& dag, Pred&& pred) {
    LineGraph lg;
    lg.base_edge_count = dag.edge_count();
    for (int n = 0; n < dag.node_count(); ++n)
        for (int e_in : dag.in_edges(n))
            for (int e_out : dag.out_edges(n))
                if (pred(n, e_in, e_out)) lg.line_edges.emplace_back(e_in, e_out);
    return lg;
}

// ---------------------------------------------------------------------------
// Path enumeration (oracle-grade, exhaustive)
// ---------------------------------------------------------------------------

// Each path is the ordered list of base-edge ids from first_edge to last_edge,
// consecutive edges meeting at a shared node.
struct PathSet {
    std::vector<std::vector<int>> paths;
};

namespace detail {

struct LineAdjacency {
    std::vector<std::vector<int>> succ;  // per base edge: successor edges, sorted
    explicit LineAdjacency(const Dag& dag) : succ(static_cast<std::size_t>(dag.edge_count())) {
        for (int e = 0; e < dag.edge_count(); ++e) {
            for (int f : dag.out_edges(dag.head(e))) succ[static_cast<std::size_t>(e)].push_back(f);
        }
    }
};

inline void enumerate_paths_dfs(const LineAdjacency& adj, const std::vector<std::uint8_t>& reaches,
                                int cur, int last, std::vector<int>& stack, PathSet& out,
                                std::uint64_t cap) {
    if (cur == last) {
        // In an acyclic line graph a path cannot revisit `last`, so it ends here.
        if (out.paths.size() >= cap)
            throw PathExplosionError("enumerate_paths: path count exceeds cap");
        out.paths.push_back(stack);
        return;
    }
    for (int nxt : adj.succ[static_cast<std::size_t>(cur)]) {
        if (!reaches[static_cast<std::size_t>(nxt)]) continue;
        stack.push_back(nxt);
        enumerate_paths_dfs(adj, reaches, nxt, last, stack, out, cap);
        stack.pop_back();
    }
}

}  // namespace detail

// Exhaustive, duplicate-free DFS enumeration of all edge paths from first_edge
// to last_edge. Deterministic: paths come out in lexicographic successor order.
// Branches that cannot reach last_edge are pruned, so total work is bounded by
// the cap.
inline PathSet enumerate_paths(const Dag& dag, int first_edge, int last_edge,
                               std::uint64_t cap = kDefaultPathCap) {
    if (first_edge < 0 || first_edge >= dag.edge_count() || last_edge < 0 ||
        last_edge >= dag.edge_count())
        throw ShapeError("enumerate_paths: edge id out of range");
    detail::LineAdjacency adj(dag);
    // reaches[e]: e has a line-graph path to last_edge.
    std::vector<std::uint8_t> reaches(static_cast<std::size_t>(dag.edge_count()), 0);
    reaches[static_cast<std::size_t>(last_edge)] = 1;
    std::vector<std::vector<int>> pred(static_cast<std::size_t>(dag.edge_count()));
    for (int e = 0; e < dag.edge_count(); ++e)
        for (int f : adj.succ[static_cast<std::size_t>(e)]) pred[static_cast<std::size_t>(f)].push_back(e);
    std::vector<int> frontier{last_edge};
    while (!frontier.empty()) {
        int e = frontier.back();
        frontier.pop_back();
        for (int p : pred[static_cast<std::size_t>(e)])
            if (!reaches[static_cast<std::size_t>(p)]) {
                reaches[static_cast<std::size_t>(p)] = 1;
                frontier.push_back(p);
            }
    }
    PathSet out;
    if (!reaches[static_cast<std::size_t>(first_edge)]) return out;
    std::vector<int> stack{first_edge};
    detail::enumerate_paths_dfs(adj, reaches, first_edge, last_edge, stack, out, cap);
    return out;
}

// Smallest P such that T^(P+1) = 0 for the line graph's adjacency matrix;
// equals the edge-length of the longest path in the line graph.
inline int nilpotency_index(const LineGraph& lg) {
    Dag d = lg.as_dag();
    std::vector<int> order = topological_order(d);
    std::vector<int> longest(static_cast<std::size_t>(d.node_count()), 0);
    int best = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        for (int e : d.out_edges(v)) {
            int w = d.head(e);
            longest[static_cast<std::size_t>(v)] =
                std::max(longest[static_cast<std::size_t>(v)], longest[static_cast<std::size_t>(w)] + 1);
        }
        best = std::max(best, longest[static_cast<std::size_t>(v)]);
    }
    return best;
}

// True iff every ordered pair of line-graph nodes is connected by at most one
// path. Exact path counting over the topological order (counts clamp at 2;
// only the 0/1/2+ distinction matters).
inline bool is_multitree(const LineGraph& lg, std::uint64_t cap = kDefaultPathCap) {
    Dag d = lg.as_dag();
    std::vector<int> order = topological_order(d);
    const std::size_t n = static_cast<std::size_t>(d.node_count());
    std::uint64_t work = 0;
    for (int src = 0; src < d.node_count(); ++src) {
        std::vector<std::uint8_t> count(n, 0);
        count[static_cast<std::size_t>(src)] = 1;
        for (int v : order) {
            if (count[static_cast<std::size_t>(v)] == 0) continue;
            for (int e : d.out_edges(v)) {
                int w = d.head(e);
                if (++work > cap) throw PathExplosionError("is_multitree: path work exceeds cap");
                std::uint8_t sum = static_cast<std::uint8_t>(
                    count[static_cast<std::size_t>(w)] + count[static_cast<std::size_t>(v)]);
                count[static_cast<std::size_t>(w)] = sum > 2 ? 2 : sum;
                if (count[static_cast<std::size_t>(w)] >= 2) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Hierarchical decomposition
//
// levels(): L+1 assignments; level 0 is singletons (block id == node id) and
// level L is the whole graph in one block. block_of(l)[n] gives the block of
// node n at level l; block ids are dense per level and ordered so that the
// quotient graph at every level is acyclic in increasing block id.
// ---------------------------------------------------------------------------
class Decomposition {
  public:
    Decomposition(const Dag* dag, std::vector<std::vector<int>> block_of)
        : dag_(dag), block_of_(std::move(block_of)) {}

    int levels() const { return static_cast<int>(block_of_.size()) - 1; }
    const std::vector<int>& block_of(int level) const {
        return block_of_[static_cast<std::size_t>(level)];
    }
    int block_count(int level) const {
        int m = 0;
        for (int b : block_of(level)) m = std::max(m, b + 1);
        return m;
    }
    const Dag& dag() const { return *dag_; }

    // Edges internal to some block at `level`.
    std::vector<int> internal_edges(int level) const {
        std::vector<int> out;
        const auto& blk = block_of(level);
        for (int e = 0; e < dag_->edge_count(); ++e)
            if (blk[static_cast<std::size_t>(dag_->tail(e))] ==
                blk[static_cast<std::size_t>(dag_->head(e))])
                out.push_back(e);
        return out;
    }

    // Edges crossing between two distinct blocks at `level`, grouped by
    // (tail block, head block).
    std::vector<std::tuple<int, int, int>> boundary_edges(int level) const {
        std::vector<std::tuple<int, int, int>> out;  // (block_a, block_b, edge)
        const auto& blk = block_of(level);
        for (int e = 0; e < dag_->edge_count(); ++e) {
            int a = blk[static_cast<std::size_t>(dag_->tail(e))];
            int b = blk[static_cast<std::size_t>(dag_->head(e))];
            if (a != b) out.emplace_back(a, b, e);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    const Dag* dag_;
    std::vector<std::vector<int>> block_of_;  // [level][node] -> block id
};

enum class DecomposeStrategy { kTopologicalBisection, kGridQuadrant };

namespace detail {

// Recursive balanced bisection of a contiguous topological range.
inline void bisect_assign(const std::vector<int>& order, int lo, int hi, int depth,
                          std::vector<std::vector<int>>& level_sets) {
    // level_sets[depth] collects, in left-to-right order, the ranges' nodes.
    if (static_cast<int>(level_sets.size()) <= depth) level_sets.resize(depth + 1);
    (void)order;
    (void)lo;
    (void)hi;
}

}  // namespace detail

// Balanced decomposition by contiguous blocks of the canonical topological
// order. Block sizes at each level differ by at most one.
inline Decomposition decompose_bisection(const Dag& dag) {
    const int n = dag.node_count();
    if (n == 0) return Decomposition(&dag, {std::vector<int>{}});
    std::vector<int> order = topological_order(dag);
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    int levels = 0;
    while ((1 << levels) < n) ++levels;

    // At level l, positions are split into ceil(n / 2^l) ranges; contiguous
    // halving keeps every range's size within one of its siblings.
    std::vector<std::vector<int>> block_of(static_cast<std::size_t>(levels) + 1,
                                           std::vector<int>(static_cast<std::size_t>(n)));
    for (int l = 0; l <= levels; ++l) {
        // Range boundaries at this level come from recursive balanced halving.
        std::vector<int> cuts{0, n};
        for (int d = 0; d < levels - l; ++d) {
            std::vector<int> next{0};
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                int lo = cuts[i], hi = cuts[i + 1];
                if (hi - lo > 1) next.push_back(lo + (hi - lo + 1) / 2);
                next.push_back(hi);
            }
            cuts = std::move(next);
        }
        // Assign block ids by range.
        int block = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i, ++block)
            for (int p = cuts[i]; p < cuts[i + 1]; ++p)
                block_of[static_cast<std::size_t>(l)][static_cast<std::size_t>(
                    order[static_cast<std::size_t>(p)])] = block;
    }
    return Decomposition(&dag, std::move(block_of));
}

// The canonical W x H down-right grid DAG: node (x, y) has id y*W + x, with
// edges (x,y)->(x+1,y) and (x,y)->(x,y+1), emitted in node-id order,
// horizontal before vertical.
inline Dag make_grid_dag(int width, int height) {
    if (width < 1 || height < 1) throw ShapeError("make_grid_dag: extents must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            int id = y * width + x;
            if (x + 1 < width) edges.emplace_back(id, id + 1);
            if (y + 1 < height) edges.emplace_back(id, id + width);
        }
    return Dag(width * height, std::move(edges));
}

// Quadrant decomposition of a W x H grid DAG. Throws StrategyMismatchError if
// the dag is not the canonical grid of the given extents.
inline Decomposition decompose_grid(const Dag& dag, int width, int height) {
    Dag canon = make_grid_dag(width, height);
    if (dag.node_count() != canon.node_count() || dag.edges() != canon.edges())
        throw StrategyMismatchError("decompose_grid: dag is not the canonical grid");
    int levels = 0;
    while ((1 << levels) < std::max(width, height)) ++levels;

    auto half_index = [](int coord, int extent, int pieces) {
        // Balanced split of [0, extent) into `pieces` contiguous ranges, sizes
        // within one; ranges from recursive ceil-first halving.
        std::vector<int> cuts{0, extent};
        for (int p = 1; p < pieces; p *= 2) {
            std::vector<int> next{0};
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                int lo = cuts[i], hi = cuts[i + 1];
                if (hi - lo > 1) next.push_back(lo + (hi - lo + 1) / 2);
                next.push_back(hi);
            }
            cuts = std::move(next);
        }
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (coord >= cuts[i] && coord < cuts[i + 1]) return static_cast<int>(i);
        return static_cast<int>(cuts.size()) - 2;
    };

    std::vector<std::vector<int>> block_of(static_cast<std::size_t>(levels) + 1,
                                           std::vector<int>(static_cast<std::size_t>(dag.node_count())));
    for (int l = 0; l <= levels; ++l) {
        int pieces = 1 << (levels - l);
        int px = std::min(pieces, width), py = std::min(pieces, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                int bx = half_index(x, width, px);
                int by = half_index(y, height, py);
                block_of[static_cast<std::size_t>(l)][static_cast<std::size_t>(y * width + x)] =
                    by * px + bx;
            }
    }
    return Decomposition(&dag, std::move(block_of));
}

inline Decomposition decompose(const Dag& dag, DecomposeStrategy strategy, int grid_width = 0,
                               int grid_height = 0) {
    switch (strategy) {
        case DecomposeStrategy::kTopologicalBisection:
            return decompose_bisection(dag);
        case DecomposeStrategy::kGridQuadrant:
            return decompose_grid(dag, grid_width, grid_height);
    }
    throw StrategyMismatchError("decompose: unknown strategy");
}

// ---------------------------------------------------------------------------
// Text fixture format: "nodes <N>" then "edge <u> <v>" lines; '#' comments.
// Edges are numbered in file order.
// ---------------------------------------------------------------------------

inline Dag read_dag_text(std::istream& in) {
    std::string line;
    int nodes = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "nodes") {
            if (!(ls >> nodes)) throw IoError("dag text: bad nodes line");
        } else if (tag == "edge") {
            int u = 0, v = 0;
            if (!(ls >> u >> v)) throw IoError("dag text: bad edge line");
            edges.emplace_back(u, v);
        } else {
            throw IoError("dag text: unknown directive '" + tag + "'");
        }
    }
    if (nodes < 0) throw IoError("dag text: missing nodes line");
    return Dag(nodes, std::move(edges));
}

inline void write_dag_text(std::ostream& out, const Dag& dag) {
    out << "nodes " << dag.node_count() << "\n";
    for (const auto& [u, v] : dag.edges()) out << "edge " << u << " " << v << "\n";
}

}  // namespace plstm
