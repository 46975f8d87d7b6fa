#pragma once

#include <cmath>
#include <vector>

#include "rigidnet/geometry.hpp"
#include "rigidnet/graph.hpp"

namespace rigidnet {

/// A graph embedded in the plane. Points must be pairwise distinct; the
/// analysis modules assume p_i != p_j for every pair, not just edges.
class Framework {
  public:
    Framework() = default;

    Framework(Graph graph, std::vector<Vec2> config)
        : graph_(std::move(graph)), config_(std::move(config)) {
        if (static_cast<int>(config_.size()) != graph_.n()) {
            throw Error(Errc::invalid_input, "Framework: configuration size does not match vertex count");
        }
        for (const auto& p : config_) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw Error(Errc::invalid_input, "Framework: non-finite coordinate");
            }
        }
        for (std::size_t a = 0; a < config_.size(); ++a) {
            for (std::size_t b = a + 1; b < config_.size(); ++b) {
                if ((config_[a] - config_[b]).norm() < kCoincidenceTol) {
                    throw Error(Errc::coincident_points, "Framework: coincident points in configuration");
                }
            }
        }
    }

    const Graph& graph() const { return graph_; }
    const std::vector<Vec2>& config() const { return config_; }
    int n() const { return graph_.n(); }

    Vec2 point(VertexId v) const {
        graph_.check_vertex(v);
        return config_[static_cast<std::size_t>(v - 1)];
    }

    Vec2 edge_vector(VertexId from, VertexId to) const { return point(to) - point(from); }

    Vec2 bearing(VertexId from, VertexId to) const {
        return rigidnet::bearing(point(from), point(to));
    }

    Angle angle(const AngleTriple& t) const {
        return signed_angle(point(t.i), point(t.j), point(t.k));
    }

  private:
    Graph graph_;
    std::vector<Vec2> config_;
};

/// Apply q_m = c * R_o(theta) * p_m + xi to every point.
inline std::vector<Vec2> similarity_transform(const std::vector<Vec2>& config, double scale,
                                              Angle theta, Vec2 translation) {
    const Mat2 rot = rotation_matrix(theta);
    std::vector<Vec2> out;
    out.reserve(config.size());
    for (const auto& p : config) out.push_back(rot * p * scale + translation);
    return out;
}

/// Mirror across the x-axis; flips the orientation of every signed angle.
inline std::vector<Vec2> reflect_configuration(const std::vector<Vec2>& config) {
    std::vector<Vec2> out;
    out.reserve(config.size());
    for (const auto& p : config) out.push_back({p.x, -p.y});
    return out;
}

} // namespace rigidnet
