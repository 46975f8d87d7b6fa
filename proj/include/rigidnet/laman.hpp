#pragma once

#include <vector>

#include "rigidnet/graph.hpp"

namespace rigidnet {

/// (2,3)-pebble game over vertices 1..n. Accepted edges form a maximal
/// independent set of the (2,3)-sparsity matroid, so a graph is Laman iff
/// it has 2n-3 edges and every one of them is accepted.
class PebbleGame23 {
  public:
    explicit PebbleGame23(int n)
        : n_(n), pebbles_(static_cast<std::size_t>(n) + 1, 2),
          out_(static_cast<std::size_t>(n) + 1) {}

    /// Attempt to add edge {u, v}; false means the edge is dependent.
    bool try_insert(VertexId u, VertexId v) {
        while (pebbles_[idx(u)] + pebbles_[idx(v)] < 4) {
            if (!collect_pebble(u, v) && !collect_pebble(v, u)) return false;
        }
        out_[idx(u)].push_back(v);
        --pebbles_[idx(u)];
        return true;
    }

  private:
    std::size_t idx(VertexId v) const { return static_cast<std::size_t>(v); }

    /// DFS from `from` along directed edges for a pebble to move home via
    /// path reversal. Pebbles sitting on the edge endpoints are protected,
    /// but the search may pass through them.
    bool collect_pebble(VertexId from, VertexId other) {
        if (pebbles_[idx(from)] >= 2) return false;
        std::vector<char> visited(static_cast<std::size_t>(n_) + 1, 0);
        std::vector<VertexId> parent(static_cast<std::size_t>(n_) + 1, 0);
        std::vector<VertexId> stack{from};
        visited[idx(from)] = 1;
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            for (VertexId w : out_[idx(u)]) {
                if (visited[idx(w)]) continue;
                visited[idx(w)] = 1;
                parent[idx(w)] = u;
                if (w != other && pebbles_[idx(w)] > 0) {
                    reverse_path(from, w, parent);
                    --pebbles_[idx(w)];
                    ++pebbles_[idx(from)];
                    return true;
                }
                stack.push_back(w);
            }
        }
        return false;
    }

    void reverse_path(VertexId from, VertexId w, const std::vector<VertexId>& parent) {
        VertexId cur = w;
        while (cur != from) {
            const VertexId prev = parent[idx(cur)];
            auto& edges = out_[idx(prev)];
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (edges[i] == cur) {
                    edges[i] = edges.back();
                    edges.pop_back();
                    break;
                }
            }
            out_[idx(cur)].push_back(prev);
            cur = prev;
        }
    }

    int n_;
    std::vector<int> pebbles_;
    std::vector<std::vector<VertexId>> out_;
};

/// Rank of the edge set in the (2,3)-sparsity matroid: edges are offered in
/// ascending hash order and accepted greedily.
inline int pebble_rank(const Graph& g) {
    PebbleGame23 game(g.n());
    int rank = 0;
    for (auto [u, v] : g.edges()) {
        if (game.try_insert(u, v)) ++rank;
    }
    return rank;
}

/// Laman certification via the pebble game: 2n-3 edges, all independent.
inline bool is_laman(const Graph& g) {
    if (g.n() < 3) throw Error(Errc::invalid_input, "is_laman: need at least 3 vertices");
    if (g.m() != 2 * g.n() - 3) return false;
    return pebble_rank(g) == g.m();
}

/// Theorem 5's combinatorial test: a graph is generically rigid iff the
/// sparsity-matroid rank of its edges reaches 2n-3.
inline bool has_laman_spanning_subgraph(const Graph& g) {
    if (g.n() < 3) throw Error(Errc::invalid_input, "has_laman_spanning_subgraph: need at least 3 vertices");
    return pebble_rank(g) == 2 * g.n() - 3;
}

} // namespace rigidnet
