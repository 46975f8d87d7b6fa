#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rigidnet/ais.hpp"

namespace rigidnet {

/// Signed angle from the agent's body x-axis to the bearing toward p_j.
inline Angle measured_body_angle(Vec2 p_i, Angle beta_i, Vec2 p_j) {
    return normalize_angle(polar_angle(bearing(p_i, p_j)) - beta_i);
}

/// The controller's gain matrix: symmetric PSD with eigenvalues {0, 2} and
/// null vector (cos a, sin a); equals 2 P((cos a, sin a)).
inline Mat2 control_gain_matrix(Angle alpha) {
    const double c2 = std::cos(2.0 * alpha);
    const double s2 = std::sin(2.0 * alpha);
    return {1.0 - c2, -s2, -s2, 1.0 + c2};
}

/// eta(beta_ij, a*_ij) = R_o((2 a* - beta)/2) (0, cos(beta/2))^T.
inline Vec2 control_eta(double beta_ij, Angle alpha_star) {
    return rotation_matrix((2.0 * alpha_star - beta_ij) / 2.0) *
           Vec2{0.0, std::cos(beta_ij / 2.0)};
}

/// Desired target formation: framework, its minimal GAIS, and the reference
/// rotation table covering every directed edge of the sensing graph.
struct TargetFormation {
    Framework framework;
    AngleIndexSet gais;
    ReferenceAngleTable reference_table;
};

/// Build a target formation from an ISAR framework. The alpha* table is
/// propagated from edge (1,2) when the Laman host contains it (falling back
/// to the smallest-hash host edge) and extended to any non-host edges using
/// one extra measured angle per edge.
inline TargetFormation make_target_formation(const Framework& fw, double tau_rel = kDefaultRankTol) {
    if (!analyze(fw, tau_rel).is_isar) {
        throw Error(Errc::assumption_violated, "make_target_formation: target is not ISAR (Assumption 2)");
    }
    TargetFormation target;
    target.framework = fw;
    GaisResult gais = algorithm1_minimal_gais(fw, tau_rel);
    const Graph& host = gais.ais.host();
    std::pair<VertexId, VertexId> reference{1, 2};
    if (!host.has_edge(1, 2)) reference = host.edges().front();
    target.reference_table =
        reference_angle_table(gais.ais, angles_from_framework(fw, gais.ais), reference);
    target.gais = std::move(gais.ais);

    // extend to sensing-graph edges outside the Laman host
    for (auto [u, v] : fw.graph().edges()) {
        if (target.reference_table.contains(u, v)) continue;
        VertexId w = 0;
        for (VertexId cand : host.neighbors(u)) {
            if (cand != v) { w = cand; break; }
        }
        if (w == 0) {
            throw Error(Errc::not_angle_connected, "make_target_formation: cannot anchor edge to host");
        }
        const double alpha = signed_angle(fw.point(w), fw.point(u), fw.point(v));
        const double base = target.reference_table.at(u, w);
        target.reference_table.angles[{u, v}] = normalize_angle(base + alpha);
        target.reference_table.angles[{v, u}] = normalize_angle(base + alpha + std::numbers::pi);
    }
    return target;
}

/// Position control input u^p_i (Eq. 25), expressed in agent i's body frame.
inline Vec2 control_position(const TargetFormation& target, const std::vector<Vec2>& positions,
                             const std::vector<double>& betas, VertexId i) {
    const Graph& g = target.framework.graph();
    const Vec2 p_i = positions[static_cast<std::size_t>(i - 1)];
    const double beta_i = betas[static_cast<std::size_t>(i - 1)];
    Vec2 u{0.0, 0.0};
    for (VertexId j : g.neighbors(i)) {
        const Vec2 p_j = positions[static_cast<std::size_t>(j - 1)];
        const double beta_ij = wrap_pi(beta_i - betas[static_cast<std::size_t>(j - 1)]);
        const Angle alpha_body = measured_body_angle(p_i, beta_i, p_j);
        u -= control_gain_matrix(alpha_body) *
             control_eta(beta_ij, target.reference_table.at(i, j));
    }
    return u;
}

/// Attitude control input u^a_i (Eq. 26) with circle-aware differences.
inline double control_attitude(const Graph& g, const std::vector<double>& betas, VertexId i) {
    double u = 0.0;
    for (VertexId j : g.neighbors(i)) {
        u -= wrap_pi(betas[static_cast<std::size_t>(i - 1)] - betas[static_cast<std::size_t>(j - 1)]);
    }
    return u;
}

/// Closed-loop position field dp_i = R_o(beta_i) u^p_i for all agents.
inline std::vector<Vec2> formation_position_field(const TargetFormation& target,
                                                  const std::vector<Vec2>& positions,
                                                  const std::vector<double>& betas) {
    std::vector<Vec2> field;
    field.reserve(positions.size());
    for (VertexId i = 1; i <= target.framework.n(); ++i) {
        field.push_back(rotation_matrix(betas[static_cast<std::size_t>(i - 1)]) *
                        control_position(target, positions, betas, i));
    }
    return field;
}

/// Max wrapped angular mismatch over all signed angles of the graph; zero
/// exactly on the similarity class of the target when the target is ISAR.
inline double shape_error(const std::vector<Vec2>& config, const TargetFormation& target) {
    const AngleIndexSet full = all_angle_triples(target.framework.graph());
    double worst = 0.0;
    for (const auto& t : full.triples()) {
        const double a = signed_angle(config[static_cast<std::size_t>(t.i - 1)],
                                      config[static_cast<std::size_t>(t.j - 1)],
                                      config[static_cast<std::size_t>(t.k - 1)]);
        worst = std::max(worst, angular_distance(a, target.framework.angle(t)));
    }
    return worst;
}

inline double max_attitude_disagreement(const Graph& g, const std::vector<double>& betas) {
    double worst = 0.0;
    for (auto [u, v] : g.edges()) {
        worst = std::max(worst, std::abs(wrap_pi(betas[static_cast<std::size_t>(u - 1)] -
                                                 betas[static_cast<std::size_t>(v - 1)])));
    }
    return worst;
}

struct FormationOptions {
    std::uint64_t seed{1};
    double step{0.001};
    double horizon{100.0};
    double init_box_lo{0.0};
    double init_box_hi{5.0};
    double init_attitude_lo{-std::numbers::pi / 2.0};
    double init_attitude_hi{std::numbers::pi / 2.0};
    int stride{0}; // 0: pick automatically for ~2000 samples
    std::optional<std::vector<Vec2>> initial_positions;
    std::optional<std::vector<double>> initial_attitudes;
};

struct FormationTrajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec2>> positions;
    std::vector<std::vector<double>> attitudes;
    std::vector<double> angle_error;
    std::vector<double> attitude_error;
    bool reflected_equilibrium{false};
    bool attitude_range_warning{false};
};

/// Integrate Eqs. (15)-(16) under the controller (25)-(26). Attitudes are
/// normalized into [0, 2pi) after every step; a run whose attitudes agree
/// but whose shape error plateaus away from zero is flagged as a reflected
/// equilibrium rather than treated as a failure.
inline FormationTrajectory simulate_formation(const TargetFormation& target,
                                              const FormationOptions& opts) {
    const int n = target.framework.n();
    const Graph& g = target.framework.graph();

    std::vector<Vec2> p0;
    std::vector<double> beta0;
    Rng rng(opts.seed);
    if (opts.initial_positions) {
        p0 = *opts.initial_positions;
    } else {
        for (int i = 0; i < n; ++i) {
            p0.push_back({rng.uniform(opts.init_box_lo, opts.init_box_hi),
                          rng.uniform(opts.init_box_lo, opts.init_box_hi)});
        }
    }
    if (opts.initial_attitudes) {
        beta0 = *opts.initial_attitudes;
    } else {
        for (int i = 0; i < n; ++i) {
            beta0.push_back(rng.uniform(opts.init_attitude_lo, opts.init_attitude_hi));
        }
    }
    if (static_cast<int>(p0.size()) != n || static_cast<int>(beta0.size()) != n) {
        throw Error(Errc::invalid_input, "simulate_formation: initial state has wrong size");
    }

    OdeSystem sys;
    sys.dim = 3 * n;
    sys.rhs = [&target, &g, n](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        std::vector<Vec2> positions(static_cast<std::size_t>(n));
        std::vector<double> betas(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            positions[static_cast<std::size_t>(i)] = {x(2 * i), x(2 * i + 1)};
            betas[static_cast<std::size_t>(i)] = x(2 * n + i);
        }
        const auto field = formation_position_field(target, positions, betas);
        for (int i = 0; i < n; ++i) {
            dx(2 * i) = field[static_cast<std::size_t>(i)].x;
            dx(2 * i + 1) = field[static_cast<std::size_t>(i)].y;
            dx(2 * n + i) = control_attitude(g, betas, static_cast<VertexId>(i + 1));
        }
    };
    sys.post_step = [n](Eigen::VectorXd& x) {
        for (int i = 0; i < n; ++i) x(2 * n + i) = normalize_angle(x(2 * n + i));
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const Vec2 d{x(2 * a) - x(2 * b), x(2 * a + 1) - x(2 * b + 1)};
                if (d.norm() < kCoincidenceTol) {
                    throw Error(Errc::coincident_points,
                                "simulate_formation: agents collided mid-trajectory",
                                ErrorKind::numerical);
                }
            }
        }
    };

    Eigen::VectorXd x0(3 * n);
    for (int i = 0; i < n; ++i) {
        x0(2 * i) = p0[static_cast<std::size_t>(i)].x;
        x0(2 * i + 1) = p0[static_cast<std::size_t>(i)].y;
        x0(2 * n + i) = normalize_angle(beta0[static_cast<std::size_t>(i)]);
    }

    const auto steps = static_cast<long>(std::llround(opts.horizon / opts.step));
    const int stride = opts.stride > 0 ? opts.stride : std::max(1L, steps / 2000);
    const OdeTrajectory raw = integrate(sys, x0, 0.0, opts.horizon, opts.step, stride);

    FormationTrajectory traj;
    traj.attitude_range_warning =
        !opts.initial_attitudes && (opts.init_attitude_hi - opts.init_attitude_lo) >= std::numbers::pi;
    traj.times = raw.times;
    for (const auto& x : raw.states) {
        std::vector<Vec2> positions(static_cast<std::size_t>(n));
        std::vector<double> betas(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            positions[static_cast<std::size_t>(i)] = {x(2 * i), x(2 * i + 1)};
            betas[static_cast<std::size_t>(i)] = x(2 * n + i);
        }
        traj.angle_error.push_back(shape_error(positions, target));
        traj.attitude_error.push_back(max_attitude_disagreement(g, betas));
        traj.positions.push_back(std::move(positions));
        traj.attitudes.push_back(std::move(betas));
    }

    // reflected / spurious equilibrium: attitudes agreed, shape error stuck
    if (traj.angle_error.size() >= 10) {
        const std::size_t tail = traj.angle_error.size() / 10;
        double lo = traj.angle_error.back(), hi = lo;
        for (std::size_t s = traj.angle_error.size() - tail; s < traj.angle_error.size(); ++s) {
            lo = std::min(lo, traj.angle_error[s]);
            hi = std::max(hi, traj.angle_error[s]);
        }
        traj.reflected_equilibrium =
            traj.attitude_error.back() < 1e-9 && lo > 1e-2 && (hi - lo) < 1e-3 * hi;
    }
    return traj;
}

} // namespace rigidnet
