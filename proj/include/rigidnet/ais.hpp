#pragma once

#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "rigidnet/rigidity.hpp"

namespace rigidnet {

using AngleMap = std::map<AngleTriple, Angle>;

/// Evaluate every AIS triple on a framework (the measurement map fed to the
/// reference table and the estimators).
inline AngleMap angles_from_framework(const Framework& fw, const AngleIndexSet& ais) {
    AngleMap angles;
    for (const auto& t : ais.triples()) angles[t] = fw.angle(t);
    return angles;
}

struct GaisResult {
    AngleIndexSet ais;    // host graph is the Laman spanning subgraph
    Graph laman_subgraph;
    int size{0};
    bool angle_connected{false};
    int restricted_rank{0};
};

namespace detail {

struct AigAdjacency {
    // per edge-hash: (neighbor hash, generating triple), sorted by neighbor
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, AngleTriple>>> adj;

    explicit AigAdjacency(const AngleIndexGraph& aig) {
        for (auto v : aig.vertices) adj[v];
        for (const auto& e : aig.edges) {
            adj[e.a].push_back({e.b, e.triple});
            adj[e.b].push_back({e.a, e.triple});
        }
        for (auto& [v, list] : adj) {
            std::sort(list.begin(), list.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
        }
    }
};

} // namespace detail

/// Algorithm 1: extract an ISAR Laman spanning subframework, take a BFS
/// spanning tree of its full angle index graph (rooted at the smallest edge
/// hash), and map the tree edges back to canonical triples. The result is a
/// minimal GAIS and minimal RAIS with exactly 2n-4 triples.
inline GaisResult algorithm1_minimal_gais(const Framework& fw, double tau_rel = kDefaultRankTol) {
    GaisResult result;
    result.laman_subgraph = extract_laman_spanning_subgraph(fw, tau_rel);
    const AngleIndexSet full = all_angle_triples(result.laman_subgraph);
    const AngleIndexGraph aig = build_angle_index_graph(full);
    if (aig.vertices.empty()) {
        throw Error(Errc::not_angle_connected, "algorithm1_minimal_gais: empty angle index graph");
    }
    const detail::AigAdjacency adjacency(aig);

    std::vector<AngleTriple> tree_triples;
    std::map<std::int64_t, char> seen{{aig.vertices.front(), 1}};
    std::queue<std::int64_t> queue;
    queue.push(aig.vertices.front());
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop();
        for (const auto& [w, triple] : adjacency.adj.at(v)) {
            if (seen.emplace(w, 1).second) {
                tree_triples.push_back(triple);
                queue.push(w);
            }
        }
    }
    if (seen.size() != aig.vertices.size()) {
        throw Error(Errc::not_angle_connected,
                    "algorithm1_minimal_gais: angle index graph of the Laman subframework is disconnected");
    }

    result.ais = AngleIndexSet(result.laman_subgraph, std::move(tree_triples));
    result.size = result.ais.size();
    result.angle_connected = is_angle_connected(result.ais);
    const Framework laman_fw(result.laman_subgraph, fw.config());
    result.restricted_rank =
        numerical_rank(signed_angle_rigidity_matrix(laman_fw, result.ais), tau_rel).first;
    return result;
}

/// Corollary 3 check for ISAR Laman frameworks: an AIS is a minimal GAIS
/// (equivalently a minimal RAIS) iff it has 2n-4 triples and is angle
/// connected.
inline bool verify_minimal_gais(const Framework& fw, const AngleIndexSet& ais) {
    if (!is_laman(fw.graph())) {
        throw Error(Errc::not_laman, "verify_minimal_gais: host graph is not Laman");
    }
    return ais.size() == 2 * fw.n() - 4 && is_angle_connected(ais);
}

/// Remark 2: each vertex contributes the |N_i|-1 consecutive triples over
/// its ascending-sorted neighbors, giving an angle connected AIS of size
/// 2|E|-n on connected hosts.
inline AngleIndexSet decentralized_local_ais(const Framework& fw) {
    const Graph& g = fw.graph();
    std::vector<AngleTriple> triples;
    for (VertexId i = 1; i <= g.n(); ++i) {
        const auto& nb = g.neighbors(i);
        if (nb.size() < 2) {
            throw Error(Errc::degree_too_low, "decentralized_local_ais: vertex with degree < 2");
        }
        for (std::size_t t = 0; t + 1 < nb.size(); ++t) {
            triples.emplace_back(nb[t], i, nb[t + 1]);
        }
    }
    return AngleIndexSet(g, std::move(triples));
}

/// Directed-bearing rotation table: angles[(i, j)] is the rotation taking
/// the reference bearing onto b_ij, accumulated along signed-angle paths.
struct ReferenceAngleTable {
    std::pair<VertexId, VertexId> reference{0, 0};
    std::map<std::pair<VertexId, VertexId>, Angle> angles;

    bool contains(VertexId i, VertexId j) const { return angles.count({i, j}) > 0; }

    Angle at(VertexId i, VertexId j) const {
        const auto it = angles.find({i, j});
        if (it == angles.end()) {
            throw Error(Errc::missing_angle, "ReferenceAngleTable: no entry for directed edge");
        }
        return it->second;
    }
};

/// BFS over the angle index graph from the reference edge, propagating
/// directed-bearing rotations: crossing triple (i, j, k) from b_ji adds
/// a_ijk to reach b_jk (subtracts on the way back); flipping a bearing's
/// direction adds pi. Covers every host edge in both directions.
inline ReferenceAngleTable reference_angle_table(const AngleIndexSet& ais, const AngleMap& angles,
                                                 std::pair<VertexId, VertexId> reference) {
    const Graph& g = ais.host();
    if (!g.has_edge(reference.first, reference.second)) {
        throw Error(Errc::invalid_vertex, "reference_angle_table: reference is not a host edge");
    }
    for (const auto& t : ais.triples()) {
        if (angles.find(t) == angles.end()) {
            throw Error(Errc::missing_angle, "reference_angle_table: angle map misses an AIS triple");
        }
    }

    ReferenceAngleTable table;
    table.reference = reference;
    const auto set_pair = [&table](VertexId from, VertexId to, double value) {
        table.angles[{from, to}] = normalize_angle(value);
        table.angles[{to, from}] = normalize_angle(value + std::numbers::pi);
    };
    set_pair(reference.first, reference.second, 0.0);

    const AngleIndexGraph aig = build_angle_index_graph(ais);
    const detail::AigAdjacency adjacency(aig);
    std::map<std::int64_t, char> seen{{g.edge_hash(reference.first, reference.second), 1}};
    std::queue<std::int64_t> queue;
    queue.push(g.edge_hash(reference.first, reference.second));
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop();
        for (const auto& [w, t] : adjacency.adj.at(v)) {
            if (!seen.emplace(w, 1).second) continue;
            const double alpha = angles.at(t);
            const auto hash_ji = g.edge_hash(t.j, t.i);
            if (v == hash_ji) {
                // forward: held b_ji, reach b_jk
                set_pair(t.j, t.k, table.angles.at({t.j, t.i}) + alpha);
            } else {
                // backward: held b_jk, reach b_ji
                set_pair(t.j, t.i, table.angles.at({t.j, t.k}) - alpha);
            }
            queue.push(w);
        }
    }
    if (seen.size() != aig.vertices.size()) {
        throw Error(Errc::not_angle_connected, "reference_angle_table: AIS is not angle connected");
    }
    return table;
}

} // namespace rigidnet
