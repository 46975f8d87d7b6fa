#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rigidnet/framework.hpp"
#include "rigidnet/laman.hpp"
#include "rigidnet/numerics.hpp"

namespace rigidnet {

// Edge orientation convention: every edge {u, v} is oriented min -> max,
// matching the sorted edge list, so H*p stacks p_max - p_min per edge.

/// Signed incidence matrix H (|E| x n): -1 at the edge's start, +1 at its end.
inline Eigen::MatrixXd incidence_matrix(const Graph& g) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g.m(), g.n());
    for (int e = 0; e < g.m(); ++e) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
        h(e, u - 1) = -1.0;
        h(e, v - 1) = 1.0;
    }
    return h;
}

/// H (x) I2, the per-coordinate expansion of the incidence matrix.
inline Eigen::MatrixXd expanded_incidence_matrix(const Graph& g) {
    Eigen::MatrixXd hbar = Eigen::MatrixXd::Zero(2 * g.m(), 2 * g.n());
    for (int e = 0; e < g.m(); ++e) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
        hbar(2 * e, 2 * (u - 1)) = -1.0;
        hbar(2 * e + 1, 2 * (u - 1) + 1) = -1.0;
        hbar(2 * e, 2 * (v - 1)) = 1.0;
        hbar(2 * e + 1, 2 * (v - 1) + 1) = 1.0;
    }
    return hbar;
}

/// Stacked unit bearings over edges in ascending hash order.
inline Eigen::VectorXd bearing_function(const Framework& fw) {
    const Graph& g = fw.graph();
    Eigen::VectorXd out(2 * g.m());
    for (int e = 0; e < g.m(); ++e) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
        const Vec2 b = fw.bearing(u, v);
        out(2 * e) = b.x;
        out(2 * e + 1) = b.y;
    }
    return out;
}

/// R_B(p) = diag(P_uv / ||e_uv||) * (H (x) I2), the Jacobian of the bearing
/// function. 2|E| x 2n.
inline Eigen::MatrixXd bearing_rigidity_matrix(const Framework& fw) {
    const Graph& g = fw.graph();
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * g.m(), 2 * g.m());
    for (int e = 0; e < g.m(); ++e) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
        const double len = fw.edge_vector(u, v).norm();
        if (len < kCoincidenceTol) {
            throw Error(Errc::coincident_points, "bearing_rigidity_matrix: coincident endpoints");
        }
        const Mat2 proj = projection_matrix(fw.bearing(u, v));
        block(2 * e, 2 * e) = proj.a / len;
        block(2 * e, 2 * e + 1) = proj.b / len;
        block(2 * e + 1, 2 * e) = proj.c / len;
        block(2 * e + 1, 2 * e + 1) = proj.d / len;
    }
    return block * expanded_incidence_matrix(g);
}

/// Stacked signed angles over the AIS triples in (j, i, k) lexicographic order.
inline Eigen::VectorXd signed_angle_function(const Framework& fw, const AngleIndexSet& ais) {
    Eigen::VectorXd out(ais.size());
    for (int t = 0; t < ais.size(); ++t) {
        out(t) = fw.angle(ais.triples()[static_cast<std::size_t>(t)]);
    }
    return out;
}

/// Singularity-free signed angle rigidity matrix (|AIS| x 2n): the row for
/// (i, j, k) places b_ji^T R_o(pi/2)/||e_ji|| on edge {j,i} and the negated
/// analogue on edge {j,k}, composed with H (x) I2. The per-edge entry is
/// invariant under flipping the edge's orientation (bearing and edge vector
/// change sign together), so canonical column order needs no sign fix-ups.
inline Eigen::MatrixXd signed_angle_rigidity_matrix(const Framework& fw, const AngleIndexSet& ais) {
    const Graph& g = fw.graph();
    Eigen::MatrixXd rbar = Eigen::MatrixXd::Zero(ais.size(), 2 * g.m());
    for (int t = 0; t < ais.size(); ++t) {
        const auto& tr = ais.triples()[static_cast<std::size_t>(t)];
        const auto put = [&](VertexId from, VertexId to, double sign) {
            const double len = fw.edge_vector(from, to).norm();
            if (len < kCoincidenceTol) {
                throw Error(Errc::coincident_points, "signed_angle_rigidity_matrix: coincident endpoints");
            }
            const Vec2 b = fw.bearing(from, to);
            const int e = g.edge_index(from, to);
            // b^T R_o(pi/2) = (b_y, -b_x)
            rbar(t, 2 * e) += sign * b.y / len;
            rbar(t, 2 * e + 1) += sign * -b.x / len;
        };
        put(tr.j, tr.i, 1.0);
        put(tr.j, tr.k, -1.0);
    }
    return rbar * expanded_incidence_matrix(g);
}

/// The sine form diag(-1/sin a) * R_b * R_B. Singular when some
/// sin(a_ijk) = 0; callers are expected to guard the angles.
inline Eigen::MatrixXd signed_angle_rigidity_matrix_sine_form(const Framework& fw,
                                                              const AngleIndexSet& ais) {
    const Graph& g = fw.graph();
    Eigen::MatrixXd rb = Eigen::MatrixXd::Zero(ais.size(), 2 * g.m());
    Eigen::VectorXd scale(ais.size());
    for (int t = 0; t < ais.size(); ++t) {
        const auto& tr = ais.triples()[static_cast<std::size_t>(t)];
        const Vec2 b_ji = fw.bearing(tr.j, tr.i);
        const Vec2 b_jk = fw.bearing(tr.j, tr.k);
        // Entries live on directed edges (j,i) and (j,k); flipping to the
        // stored min->max orientation flips the matching R_B row, so the
        // entry carries the orientation sign.
        const auto put = [&](VertexId from, VertexId to, Vec2 value) {
            const double sign = from < to ? 1.0 : -1.0;
            const int e = g.edge_index(from, to);
            rb(t, 2 * e) += sign * value.x;
            rb(t, 2 * e + 1) += sign * value.y;
        };
        put(tr.j, tr.i, b_jk);
        put(tr.j, tr.k, b_ji);
        scale(t) = -1.0 / std::sin(fw.angle(tr));
    }
    return scale.asDiagonal() * rb * bearing_rigidity_matrix(fw);
}

/// Standard distance rigidity matrix (|E| x 2n): the row for edge (u, v)
/// has (p_u - p_v)^T at u and (p_v - p_u)^T at v.
inline Eigen::MatrixXd distance_rigidity_matrix(const Framework& fw) {
    const Graph& g = fw.graph();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(g.m(), 2 * g.n());
    for (int e = 0; e < g.m(); ++e) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
        const Vec2 d = fw.edge_vector(v, u); // p_u - p_v
        if (d.norm() < kCoincidenceTol) {
            throw Error(Errc::coincident_points, "distance_rigidity_matrix: coincident endpoints");
        }
        r(e, 2 * (u - 1)) = d.x;
        r(e, 2 * (u - 1) + 1) = d.y;
        r(e, 2 * (v - 1)) = -d.x;
        r(e, 2 * (v - 1) + 1) = -d.y;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Trivial motions and rigidity verdicts

struct TrivialMotionBasis {
    Eigen::VectorXd scaling;       // p itself
    Eigen::VectorXd rotation;      // stacked perp(p_i)
    Eigen::VectorXd translation_x; // 1_n (x) e1
    Eigen::VectorXd translation_y; // 1_n (x) e2

    Eigen::MatrixXd as_matrix() const {
        Eigen::MatrixXd m(scaling.size(), 4);
        m.col(0) = scaling;
        m.col(1) = rotation;
        m.col(2) = translation_x;
        m.col(3) = translation_y;
        return m;
    }
};

/// Max perpendicular distance of the points from their best-fit line.
inline double collinearity_residual(const std::vector<Vec2>& config) {
    const auto n = static_cast<double>(config.size());
    Vec2 mean{0.0, 0.0};
    for (const auto& p : config) mean += p;
    mean = mean / n;
    Eigen::MatrixXd centered(config.size(), 2);
    for (std::size_t i = 0; i < config.size(); ++i) {
        centered(static_cast<Eigen::Index>(i), 0) = config[i].x - mean.x;
        centered(static_cast<Eigen::Index>(i), 1) = config[i].y - mean.y;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(centered, Eigen::ComputeFullV);
    const Eigen::Vector2d minor = dec.matrixV().col(1);
    double worst = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        const double d = std::abs(centered(static_cast<Eigen::Index>(i), 0) * minor(0) +
                                  centered(static_cast<Eigen::Index>(i), 1) * minor(1));
        worst = std::max(worst, d);
    }
    return worst;
}

inline bool is_degenerate(const std::vector<Vec2>& config) {
    if (config.size() < 3) return true;
    return collinearity_residual(config) < kCoincidenceTol;
}

/// The four trivial infinitesimal signed-angle motions: uniform scaling,
/// uniform rotation, and the two translations.
inline TrivialMotionBasis trivial_motion_basis(const Framework& fw) {
    if (is_degenerate(fw.config())) {
        throw Error(Errc::degenerate_configuration, "trivial_motion_basis: configuration is collinear");
    }
    const int n = fw.n();
    TrivialMotionBasis basis;
    basis.scaling.resize(2 * n);
    basis.rotation.resize(2 * n);
    basis.translation_x.resize(2 * n);
    basis.translation_y.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        const Vec2 p = fw.config()[static_cast<std::size_t>(i)];
        const Vec2 r = perp(p);
        basis.scaling(2 * i) = p.x;
        basis.scaling(2 * i + 1) = p.y;
        basis.rotation(2 * i) = r.x;
        basis.rotation(2 * i + 1) = r.y;
        basis.translation_x(2 * i) = 1.0;
        basis.translation_x(2 * i + 1) = 0.0;
        basis.translation_y(2 * i) = 0.0;
        basis.translation_y(2 * i + 1) = 1.0;
    }
    return basis;
}

struct RigidityReport {
    int rank_bearing{0};
    int rank_signed_angle{0};
    int null_dim_signed_angle{0};
    bool is_ibr{false};
    bool is_isar{false};
    double tolerance_used{kDefaultRankTol};
    std::vector<double> singular_values; // of the full signed angle rigidity matrix
    std::optional<std::uint64_t> seed;   // set when produced by a generic sweep
};

/// Rank both rigidity matrices over the full edge/triple sets and apply the
/// 2n-3 / 2n-4 verdicts.
inline RigidityReport analyze(const Framework& fw, double tau_rel = kDefaultRankTol) {
    if (fw.n() < 3) throw Error(Errc::invalid_input, "analyze: need at least 3 vertices");
    RigidityReport report;
    report.tolerance_used = tau_rel;
    const auto [rank_b, sv_b] = numerical_rank(bearing_rigidity_matrix(fw), tau_rel);
    (void)sv_b;
    report.rank_bearing = rank_b;
    const AngleIndexSet full = all_angle_triples(fw.graph());
    const Eigen::MatrixXd rs = signed_angle_rigidity_matrix(fw, full);
    const auto [rank_s, sv_s] = numerical_rank(rs, tau_rel);
    report.rank_signed_angle = rank_s;
    report.null_dim_signed_angle = 2 * fw.n() - rank_s;
    report.singular_values.assign(sv_s.data(), sv_s.data() + sv_s.size());
    report.is_ibr = rank_b == 2 * fw.n() - 3;
    report.is_isar = rank_s == 2 * fw.n() - 4;
    return report;
}

/// Remark-4 extraction: greedily keep edges whose distance-rigidity rows are
/// linearly independent (Gaussian elimination with partial pivoting, edges
/// scanned in ascending hash order) until 2n-3 are found.
inline Graph extract_laman_spanning_subgraph(const Framework& fw, double tau_rel = kDefaultRankTol) {
    if (!analyze(fw, tau_rel).is_isar) {
        throw Error(Errc::not_isar, "extract_laman_spanning_subgraph: framework is not ISAR");
    }
    const Graph& g = fw.graph();
    const Eigen::MatrixXd r = distance_rigidity_matrix(fw);
    const int target = 2 * g.n() - 3;
    std::vector<EdgePair> kept;
    std::vector<Eigen::VectorXd> pivot_rows; // unit pivot entry at pivot_cols[i]
    std::vector<int> pivot_cols;
    for (int e = 0; e < g.m() && static_cast<int>(kept.size()) < target; ++e) {
        Eigen::VectorXd row = r.row(e);
        row /= row.norm();
        for (std::size_t i = 0; i < pivot_rows.size(); ++i) {
            row -= row(pivot_cols[i]) * pivot_rows[i];
        }
        int pivot = 0;
        const double mag = row.cwiseAbs().maxCoeff(&pivot);
        if (mag > tau_rel) {
            pivot_rows.push_back(row / row(pivot));
            pivot_cols.push_back(pivot);
            kept.push_back(g.edges()[static_cast<std::size_t>(e)]);
        }
    }
    if (static_cast<int>(kept.size()) != target) {
        throw Error(Errc::not_isar, "extract_laman_spanning_subgraph: rank deficiency during extraction");
    }
    return Graph(g.n(), std::move(kept));
}

// ---------------------------------------------------------------------------
// Generic (almost-all-configurations) verdicts

struct GenericVerdict {
    int trials{0};
    std::uint64_t seed{0};
    std::vector<char> per_sample_isar;
    bool majority_isar{false};
    bool has_laman_spanning_subgraph{false}; // combinatorial, Theorem 5
};

namespace detail {

/// Uniform configuration in [0,1]^2, resampled until pairwise separation
/// clears the coincidence tolerance comfortably.
inline std::vector<Vec2> sample_configuration(int n, Rng& rng, double min_sep = 1e-6) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<Vec2> pts;
        pts.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
        double closest = std::numeric_limits<double>::max();
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
                closest = std::min(closest, (pts[a] - pts[b]).norm());
            }
        }
        if (closest >= min_sep) return pts;
    }
    throw Error(Errc::non_finite, "sample_configuration: could not separate points");
}

} // namespace detail

/// Sample `trials` seeded configurations and report the per-sample and
/// majority ISAR verdicts plus the combinatorial Laman-subgraph test.
/// Sample s uses its own derived seed, so results do not depend on
/// evaluation order.
inline GenericVerdict generic_verdict(const Graph& g, int trials, std::uint64_t seed,
                                      double tau_rel = kDefaultRankTol) {
    if (g.n() < 3) throw Error(Errc::invalid_input, "generic_verdict: need at least 3 vertices");
    if (trials < 1) throw Error(Errc::invalid_input, "generic_verdict: need at least one trial");
    GenericVerdict verdict;
    verdict.trials = trials;
    verdict.seed = seed;
    verdict.has_laman_spanning_subgraph = has_laman_spanning_subgraph(g);
    int positives = 0;
    for (int s = 0; s < trials; ++s) {
        Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1));
        const Framework fw(g, detail::sample_configuration(g.n(), rng));
        const bool isar = analyze(fw, tau_rel).is_isar;
        verdict.per_sample_isar.push_back(isar ? 1 : 0);
        if (isar) ++positives;
    }
    verdict.majority_isar = 2 * positives > trials;
    return verdict;
}

} // namespace rigidnet
