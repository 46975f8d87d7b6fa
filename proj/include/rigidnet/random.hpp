#pragma once

#include <utility>
#include <vector>

#include "rigidnet/rigidity.hpp"

namespace rigidnet {

/// Uniform configuration in box^2 with a minimum pairwise separation.
inline std::vector<Vec2> random_configuration(int n, Rng& rng, double lo = 0.0, double hi = 1.0,
                                              double min_sep = 1e-3) {
    for (int attempt = 0; attempt < 1024; ++attempt) {
        std::vector<Vec2> pts;
        pts.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
        bool ok = true;
        for (std::size_t a = 0; a < pts.size() && ok; ++a) {
            for (std::size_t b = a + 1; b < pts.size() && ok; ++b) {
                if ((pts[a] - pts[b]).norm() < min_sep) ok = false;
            }
        }
        if (ok) return pts;
    }
    throw Error(Errc::non_finite, "random_configuration: could not separate points");
}

/// Random Laman graph grown by Henneberg moves from K3: type I attaches a
/// new degree-2 vertex, type II splits an existing edge onto the new vertex.
inline Graph henneberg_laman_graph(int n, Rng& rng, double type2_prob = 0.3) {
    if (n < 3) throw Error(Errc::invalid_input, "henneberg_laman_graph: need n >= 3");
    std::vector<EdgePair> edges{{1, 2}, {1, 3}, {2, 3}};
    for (VertexId v = 4; v <= n; ++v) {
        const bool type2 = rng.uniform(0.0, 1.0) < type2_prob && v >= 4;
        if (type2) {
            // pick an edge (a, b) and a third vertex c; replace (a, b) by
            // the star v-a, v-b, v-c
            const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(edges.size()) - 1));
            const auto [a, b] = edges[pick];
            VertexId c = a;
            while (c == a || c == b) c = static_cast<VertexId>(rng.uniform_int(1, v - 1));
            edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(pick));
            edges.push_back({std::min(v, a), std::max(v, a)});
            edges.push_back({std::min(v, b), std::max(v, b)});
            edges.push_back({std::min(v, c), std::max(v, c)});
        } else {
            const VertexId a = static_cast<VertexId>(rng.uniform_int(1, v - 1));
            VertexId b = a;
            while (b == a) b = static_cast<VertexId>(rng.uniform_int(1, v - 1));
            edges.push_back({std::min(v, a), std::max(v, a)});
            edges.push_back({std::min(v, b), std::max(v, b)});
        }
    }
    return Graph(n, std::move(edges));
}

/// Random connected graph: a random spanning tree plus independent extras.
inline Graph random_connected_graph(int n, Rng& rng, double extra_edge_prob = 0.3) {
    if (n < 1) throw Error(Errc::invalid_input, "random_connected_graph: need n >= 1");
    std::vector<EdgePair> edges;
    for (VertexId v = 2; v <= n; ++v) {
        const VertexId parent = static_cast<VertexId>(rng.uniform_int(1, v - 1));
        edges.push_back({parent, v});
    }
    Graph tree(n, edges);
    for (VertexId u = 1; u <= n; ++u) {
        for (VertexId v = u + 1; v <= n; ++v) {
            if (!tree.has_edge(u, v) && rng.uniform(0.0, 1.0) < extra_edge_prob) {
                edges.push_back({u, v});
            }
        }
    }
    return Graph(n, std::move(edges));
}

/// Seeded ISAR framework: a Henneberg Laman graph (optionally with extra
/// edges) at a random configuration, regenerated until the rank test holds.
inline Framework random_isar_framework(int n, Rng& rng, double extra_edge_prob = 0.0,
                                       double tau_rel = kDefaultRankTol) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Graph g = henneberg_laman_graph(n, rng);
        if (extra_edge_prob > 0.0) {
            auto edges = g.edges();
            for (VertexId u = 1; u <= n; ++u) {
                for (VertexId v = u + 1; v <= n; ++v) {
                    if (!g.has_edge(u, v) && rng.uniform(0.0, 1.0) < extra_edge_prob) {
                        edges.push_back({u, v});
                    }
                }
            }
            g = Graph(n, std::move(edges));
        }
        Framework fw(g, random_configuration(n, rng));
        if (analyze(fw, tau_rel).is_isar) return fw;
    }
    throw Error(Errc::non_finite, "random_isar_framework: failed to produce an ISAR sample");
}

} // namespace rigidnet
