#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rigidnet/errors.hpp"

namespace rigidnet {

using VertexId = int;
using EdgePair = std::pair<VertexId, VertexId>; // stored with first < second

/// Encode the undirected edge (i, j) of an n-vertex graph as
/// (min-1)*n + max. Injective over unordered pairs for fixed n.
inline std::int64_t hash_edge(VertexId i, VertexId j, int n) {
    if (i < 1 || i > n || j < 1 || j > n || i == j) {
        throw Error(Errc::invalid_vertex, "hash_edge: vertex ids must be distinct and in [1, n]");
    }
    const std::int64_t lo = std::min(i, j);
    const std::int64_t hi = std::max(i, j);
    return (lo - 1) * static_cast<std::int64_t>(n) + hi;
}

/// Undirected simple graph on vertices 1..n. Edges are kept sorted by
/// (min, max), which coincides with ascending edge-hash order.
class Graph {
  public:
    Graph() = default;

    Graph(int n, std::vector<EdgePair> edges) : n_(n) {
        if (n < 1) throw Error(Errc::invalid_input, "Graph: vertex count must be positive");
        for (auto& [u, v] : edges) {
            if (u < 1 || u > n || v < 1 || v > n) {
                throw Error(Errc::invalid_vertex, "Graph: edge endpoint out of range");
            }
            if (u == v) throw Error(Errc::invalid_input, "Graph: self-loops are not allowed");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            throw Error(Errc::invalid_input, "Graph: duplicate edge");
        }
        edges_ = std::move(edges);
        adj_.assign(static_cast<std::size_t>(n) + 1, {});
        for (auto [u, v] : edges_) {
            adj_[static_cast<std::size_t>(u)].push_back(v);
            adj_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<EdgePair>& edges() const { return edges_; }
    const std::vector<VertexId>& neighbors(VertexId v) const {
        check_vertex(v);
        return adj_[static_cast<std::size_t>(v)];
    }
    int degree(VertexId v) const { return static_cast<int>(neighbors(v).size()); }

    bool has_edge(VertexId u, VertexId v) const {
        if (u > v) std::swap(u, v);
        return std::binary_search(edges_.begin(), edges_.end(), EdgePair{u, v});
    }

    /// Index of edge {u, v} in the sorted edge list (ascending hash order).
    int edge_index(VertexId u, VertexId v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), EdgePair{u, v});
        if (it == edges_.end() || *it != EdgePair{u, v}) {
            throw Error(Errc::invalid_vertex, "edge_index: no such edge");
        }
        return static_cast<int>(it - edges_.begin());
    }

    std::int64_t edge_hash(VertexId u, VertexId v) const { return hash_edge(u, v, n_); }

    void check_vertex(VertexId v) const {
        if (v < 1 || v > n_) throw Error(Errc::invalid_vertex, "vertex id out of range");
    }

    bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

  private:
    int n_{0};
    std::vector<EdgePair> edges_;
    std::vector<std::vector<VertexId>> adj_;
};

/// Ordered triple (i, j, k) indexing the signed angle at center j from the
/// bearing toward i to the bearing toward k. Canonical form has i < k.
struct AngleTriple {
    VertexId i{0}, j{0}, k{0};

    AngleTriple() = default;
    AngleTriple(VertexId i_, VertexId j_, VertexId k_) : i(i_), j(j_), k(k_) {}

    AngleTriple canonical() const { return i <= k ? *this : AngleTriple{k, j, i}; }

    /// Sort key is (center, i, k) so stacked angle functions follow a
    /// deterministic lexicographic order on (j, i, k).
    friend bool operator<(const AngleTriple& a, const AngleTriple& b) {
        if (a.j != b.j) return a.j < b.j;
        if (a.i != b.i) return a.i < b.i;
        return a.k < b.k;
    }
    friend bool operator==(const AngleTriple& a, const AngleTriple& b) {
        return a.i == b.i && a.j == b.j && a.k == b.k;
    }
};

/// A set of canonical angle triples over a host graph.
class AngleIndexSet {
  public:
    AngleIndexSet() = default;

    AngleIndexSet(Graph host, std::vector<AngleTriple> triples) : host_(std::move(host)) {
        for (auto& t : triples) {
            t = t.canonical();
            if (t.i == t.k) throw Error(Errc::invalid_input, "AngleIndexSet: triple with i == k");
            if (!host_.has_edge(t.j, t.i) || !host_.has_edge(t.j, t.k)) {
                throw Error(Errc::invalid_input, "AngleIndexSet: triple references a missing edge");
            }
        }
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
        triples_ = std::move(triples);
    }

    const Graph& host() const { return host_; }
    const std::vector<AngleTriple>& triples() const { return triples_; }
    int size() const { return static_cast<int>(triples_.size()); }
    bool contains(const AngleTriple& t) const {
        const AngleTriple c = t.canonical();
        return std::binary_search(triples_.begin(), triples_.end(), c);
    }

  private:
    Graph host_;
    std::vector<AngleTriple> triples_;
};

/// All canonical triples of a graph; one per unordered neighbor pair at
/// every vertex, so |T| = sum_j C(deg(j), 2).
inline AngleIndexSet all_angle_triples(const Graph& g) {
    std::vector<AngleTriple> triples;
    for (VertexId j = 1; j <= g.n(); ++j) {
        const auto& nb = g.neighbors(j);
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                triples.emplace_back(nb[a], j, nb[b]);
            }
        }
    }
    return AngleIndexSet(g, std::move(triples));
}

/// Graph whose vertices are host-edge hashes and whose edges are the
/// triples of the generating AIS (Definition 8). Each edge remembers its
/// generating triple so the inverse map back to an AIS is explicit.
struct AngleIndexGraph {
    struct Edge {
        std::int64_t a{0}, b{0}; // endpoint hashes, a < b
        AngleTriple triple;
    };

    std::vector<std::int64_t> vertices; // ascending hashes, one per host edge
    std::vector<Edge> edges;

    bool connected() const {
        if (vertices.empty()) return true;
        std::map<std::int64_t, std::vector<std::size_t>> adj;
        for (auto v : vertices) adj[v];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            adj[edges[e].a].push_back(e);
            adj[edges[e].b].push_back(e);
        }
        std::set<std::int64_t> seen{vertices.front()};
        std::queue<std::int64_t> q;
        q.push(vertices.front());
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (auto e : adj[v]) {
                const auto w = edges[e].a == v ? edges[e].b : edges[e].a;
                if (seen.insert(w).second) q.push(w);
            }
        }
        return seen.size() == vertices.size();
    }
};

inline AngleIndexGraph build_angle_index_graph(const AngleIndexSet& ais) {
    AngleIndexGraph aig;
    const Graph& g = ais.host();
    aig.vertices.reserve(static_cast<std::size_t>(g.m()));
    for (auto [u, v] : g.edges()) aig.vertices.push_back(g.edge_hash(u, v));
    for (const auto& t : ais.triples()) {
        const auto a = g.edge_hash(t.j, t.i);
        const auto b = g.edge_hash(t.j, t.k);
        aig.edges.push_back({std::min(a, b), std::max(a, b), t});
    }
    return aig;
}

/// True iff the angle index graph is connected over all host-edge vertices
/// (Definition 9).
inline bool is_angle_connected(const AngleIndexSet& ais) {
    return build_angle_index_graph(ais).connected();
}

namespace detail {

/// BFS with FIFO queue and ascending-id neighbor order. Returns parent map
/// (parent[root] = root, 0 for unreached).
inline std::vector<VertexId> bfs_parents(const Graph& g, VertexId root) {
    g.check_vertex(root);
    std::vector<VertexId> parent(static_cast<std::size_t>(g.n()) + 1, 0);
    std::queue<VertexId> q;
    parent[static_cast<std::size_t>(root)] = root;
    q.push(root);
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop();
        for (VertexId w : g.neighbors(u)) {
            if (parent[static_cast<std::size_t>(w)] == 0) {
                parent[static_cast<std::size_t>(w)] = u;
                q.push(w);
            }
        }
    }
    return parent;
}

} // namespace detail

inline bool is_connected(const Graph& g) {
    if (g.n() == 0) return true;
    const auto parent = detail::bfs_parents(g, 1);
    for (VertexId v = 1; v <= g.n(); ++v) {
        if (parent[static_cast<std::size_t>(v)] == 0) return false;
    }
    return true;
}

/// BFS spanning tree rooted at `root`; deterministic via ascending-id
/// neighbor visits. Edges are returned in discovery order.
inline std::vector<EdgePair> bfs_spanning_tree(const Graph& g, VertexId root) {
    g.check_vertex(root);
    std::vector<EdgePair> tree;
    std::vector<char> seen(static_cast<std::size_t>(g.n()) + 1, 0);
    std::queue<VertexId> q;
    seen[static_cast<std::size_t>(root)] = 1;
    q.push(root);
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop();
        for (VertexId w : g.neighbors(u)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                tree.push_back({std::min(u, w), std::max(u, w)});
                q.push(w);
            }
        }
    }
    if (static_cast<int>(tree.size()) != g.n() - 1) {
        throw Error(Errc::disconnected, "bfs_spanning_tree: graph is not connected");
    }
    return tree;
}

/// Shortest path by BFS (ascending-id tie-break), inclusive of endpoints.
inline std::vector<VertexId> undirected_path(const Graph& g, VertexId u, VertexId v) {
    g.check_vertex(u);
    g.check_vertex(v);
    const auto parent = detail::bfs_parents(g, u);
    if (parent[static_cast<std::size_t>(v)] == 0) {
        throw Error(Errc::no_path, "undirected_path: no path between vertices");
    }
    std::vector<VertexId> path{v};
    while (path.back() != u) path.push_back(parent[static_cast<std::size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace rigidnet
