#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rigidnet/ais.hpp"

namespace rigidnet {

/// Sensor network: true framework, anchors with known locations, followers
/// estimating theirs.
class SensorNetwork {
  public:
    SensorNetwork() = default;

    SensorNetwork(Framework framework, std::vector<VertexId> anchors)
        : framework_(std::move(framework)), anchors_(std::move(anchors)) {
        std::sort(anchors_.begin(), anchors_.end());
        anchors_.erase(std::unique(anchors_.begin(), anchors_.end()), anchors_.end());
        for (VertexId a : anchors_) framework_.graph().check_vertex(a);
        for (VertexId v = 1; v <= framework_.n(); ++v) {
            if (!is_anchor(v)) followers_.push_back(v);
        }
    }

    const Framework& framework() const { return framework_; }
    const std::vector<VertexId>& anchors() const { return anchors_; }
    const std::vector<VertexId>& followers() const { return followers_; }
    bool is_anchor(VertexId v) const {
        return std::binary_search(anchors_.begin(), anchors_.end(), v);
    }

    /// Smallest-hash anchor pair joined by an edge, if any.
    std::optional<EdgePair> adjacent_anchor_pair() const {
        for (auto [u, v] : framework_.graph().edges()) {
            if (is_anchor(u) && is_anchor(v)) return EdgePair{u, v};
        }
        return std::nullopt;
    }

  private:
    Framework framework_;
    std::vector<VertexId> anchors_;
    std::vector<VertexId> followers_;
};

/// Theorem 9: an ISAR network is signed angle localizable iff it has at
/// least two anchors.
inline bool check_localizable(const SensorNetwork& net, double tau_rel = kDefaultRankTol) {
    return net.anchors().size() >= 2 && analyze(net.framework(), tau_rel).is_isar;
}

/// The alternative configuration from Theorem 9's necessity proof for a
/// single anchor a: rotate everything a quarter turn about the origin, then
/// translate so the anchor stays put. Satisfies every signed angle
/// constraint while differing from the truth.
inline std::vector<Vec2> rotated_impostor(const Framework& fw, VertexId anchor) {
    const Mat2 rot = rotation_matrix(std::numbers::pi / 2.0);
    const Vec2 pa = fw.point(anchor);
    const Vec2 eta = pa - rot * pa;
    std::vector<Vec2> q;
    q.reserve(fw.config().size());
    for (const auto& p : fw.config()) q.push_back(rot * p + eta);
    return q;
}

/// Triples of the AIS centered at sensor i: the angles that sensor measures
/// (Eq. 19's per-sensor measurement set).
inline AngleIndexSet local_measurement_ais(const AngleIndexSet& gais, VertexId i) {
    std::vector<AngleTriple> mine;
    for (const auto& t : gais.triples()) {
        if (t.j == i) mine.push_back(t);
    }
    return AngleIndexSet(gais.host(), std::move(mine));
}

namespace detail {

inline bool triple_touches_edge(const AngleTriple& t, VertexId a, VertexId b) {
    return (t.j == a && (t.i == b || t.k == b)) || (t.j == b && (t.i == a || t.k == a));
}

} // namespace detail

/// Remark 3: make sure the AIS contains a triple over the anchor edge so the
/// pinned bearing couples into the estimator. Adds at most one triple (and
/// the anchor edge itself when the host lacks it).
inline AngleIndexSet augment_gais_for_anchors(const AngleIndexSet& gais, const SensorNetwork& net) {
    const auto pair = net.adjacent_anchor_pair();
    if (!pair) {
        throw Error(Errc::no_adjacent_anchors, "augment_gais_for_anchors: no adjacent anchor pair");
    }
    const auto [a, b] = *pair;
    for (const auto& t : gais.triples()) {
        if (detail::triple_touches_edge(t, a, b)) return gais;
    }
    Graph host = gais.host();
    if (!host.has_edge(a, b)) {
        auto edges = host.edges();
        edges.push_back({a, b});
        host = Graph(host.n(), std::move(edges));
    }
    // center on whichever anchor has another host neighbor to close the triple
    for (VertexId center : {b, a}) {
        const VertexId other = center == b ? a : b;
        for (VertexId k : host.neighbors(center)) {
            if (k == other) continue;
            auto triples = gais.triples();
            triples.push_back(AngleTriple{other, center, k}.canonical());
            return AngleIndexSet(host, std::move(triples));
        }
    }
    throw Error(Errc::degree_too_low, "augment_gais_for_anchors: anchors have no third neighbor");
}

// ---------------------------------------------------------------------------
// Distributed estimator (Eqs. 20-21)

/// Precomputed simulation context. State layout: [p_hat (2n) | b_hat, one
/// 2-block per directed pair, edge-major with (min,max) before (max,min)].
class LocalizationSystem {
  public:
    LocalizationSystem(const SensorNetwork& net, const AngleIndexSet& gais)
        : net_(net), host_(gais.host()) {
        const int m = host_.m();
        terms_.resize(static_cast<std::size_t>(2 * m));
        pinned_.assign(static_cast<std::size_t>(2 * m), false);
        pinned_value_.assign(static_cast<std::size_t>(2 * m), Vec2{});

        const Framework& fw = net.framework();
        for (const auto& t : gais.triples()) {
            const double alpha = fw.angle(t); // measured on the true configuration
            const Mat2 rot = rotation_matrix(alpha);
            const Mat2 rot_t = rot.transpose();
            // Eq. 21's four groups, scattered triple-by-triple.
            add_term(t.j, t.i, rot_t * -1.0, t.j, t.k); // (j,i,k1): -R^T(a) b_ik1
            add_term(t.j, t.k, rot * -1.0, t.j, t.i);   // (k2,i,j): -R(a) b_ik2
            add_term(t.i, t.j, rot_t, t.j, t.k);        // (i,j,k3): +R^T(a) b_jk3
            add_term(t.k, t.j, rot, t.j, t.i);          // (k4,j,i): +R(a) b_jk4
        }

        for (auto [u, v] : host_.edges()) {
            if (net.is_anchor(u) && net.is_anchor(v)) {
                pin(u, v, fw.bearing(u, v));
                pin(v, u, fw.bearing(v, u));
            }
        }
    }

    const Graph& host() const { return host_; }
    int dim() const { return 2 * net_.framework().n() + 4 * host_.m(); }
    int position_offset(VertexId v) const { return 2 * (v - 1); }

    int pair_index(VertexId i, VertexId j) const {
        const int e = host_.edge_index(i, j);
        return 2 * e + (i < j ? 0 : 1);
    }
    int pair_offset(VertexId i, VertexId j) const {
        return 2 * net_.framework().n() + 2 * pair_index(i, j);
    }

    bool is_pinned(VertexId i, VertexId j) const {
        return pinned_[static_cast<std::size_t>(pair_index(i, j))];
    }

    /// Bearing estimator (Eq. 21). Reads and writes only the b_hat block.
    void bearing_rhs(const Eigen::VectorXd& x, Eigen::VectorXd& dx) const {
        const int base = 2 * net_.framework().n();
        for (std::size_t pi = 0; pi < terms_.size(); ++pi) {
            const int off = base + 2 * static_cast<int>(pi);
            if (pinned_[pi]) {
                dx(off) = 0.0;
                dx(off + 1) = 0.0;
                continue;
            }
            const Vec2 self{x(off), x(off + 1)};
            Vec2 sum = self * static_cast<double>(terms_[pi].size());
            for (const auto& [m, other] : terms_[pi]) {
                const int ooff = base + 2 * other;
                sum += m * Vec2{x(ooff), x(ooff + 1)};
            }
            dx(off) = -sum.x;
            dx(off + 1) = -sum.y;
        }
    }

    /// Location estimator (Eq. 20): followers descend the projection
    /// residuals of their current bearing estimates; anchors hold.
    void position_rhs(const Eigen::VectorXd& x, Eigen::VectorXd& dx) const {
        for (VertexId i = 1; i <= net_.framework().n(); ++i) {
            const int off = position_offset(i);
            if (net_.is_anchor(i)) {
                dx(off) = 0.0;
                dx(off + 1) = 0.0;
                continue;
            }
            const Vec2 pi_hat{x(off), x(off + 1)};
            Vec2 sum{0.0, 0.0};
            for (VertexId j : host_.neighbors(i)) {
                const int boff = pair_offset(i, j);
                const Vec2 b_hat{x(boff), x(boff + 1)};
                const int joff = position_offset(j);
                const Vec2 pj_hat{x(joff), x(joff + 1)};
                sum += projection_matrix(b_hat) * (pi_hat - pj_hat);
            }
            dx(off) = -sum.x;
            dx(off + 1) = -sum.y;
        }
    }

    OdeSystem joint_system() const {
        OdeSystem sys;
        sys.dim = dim();
        sys.rhs = [this](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
            bearing_rhs(x, dx);
            position_rhs(x, dx);
        };
        sys.post_step = [this](Eigen::VectorXd& x) { pin_state(x); };
        return sys;
    }

    /// Same state layout, but only the bearing block evolves; used to check
    /// the cascade is genuinely one-directional.
    OdeSystem bearing_only_system() const {
        OdeSystem sys;
        sys.dim = dim();
        sys.rhs = [this](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
            dx.head(2 * net_.framework().n()).setZero();
            bearing_rhs(x, dx);
        };
        sys.post_step = [this](Eigen::VectorXd& x) { pin_state(x); };
        return sys;
    }

    /// Reset anchor positions and pinned bearings to their exact values.
    void pin_state(Eigen::VectorXd& x) const {
        const Framework& fw = net_.framework();
        for (VertexId a : net_.anchors()) {
            const int off = position_offset(a);
            x(off) = fw.point(a).x;
            x(off + 1) = fw.point(a).y;
        }
        const int base = 2 * fw.n();
        for (std::size_t pi = 0; pi < pinned_.size(); ++pi) {
            if (!pinned_[pi]) continue;
            const int off = base + 2 * static_cast<int>(pi);
            x(off) = pinned_value_[pi].x;
            x(off + 1) = pinned_value_[pi].y;
        }
    }

    /// State whose positions and bearings all equal the truth.
    Eigen::VectorXd exact_state() const {
        const Framework& fw = net_.framework();
        Eigen::VectorXd x(dim());
        for (VertexId v = 1; v <= fw.n(); ++v) {
            x(position_offset(v)) = fw.point(v).x;
            x(position_offset(v) + 1) = fw.point(v).y;
        }
        for (auto [u, v] : host_.edges()) {
            for (auto [i, j] : {std::pair{u, v}, std::pair{v, u}}) {
                const Vec2 b = fw.bearing(i, j);
                x(pair_offset(i, j)) = b.x;
                x(pair_offset(i, j) + 1) = b.y;
            }
        }
        return x;
    }

    double location_error(const Eigen::VectorXd& x) const {
        const Framework& fw = net_.framework();
        double err = 0.0;
        for (VertexId v = 1; v <= fw.n(); ++v) {
            const Vec2 d = Vec2{x(position_offset(v)), x(position_offset(v) + 1)} - fw.point(v);
            err += d.norm();
        }
        return err;
    }

    double bearing_error(const Eigen::VectorXd& x) const {
        const Framework& fw = net_.framework();
        double err = 0.0;
        for (auto [u, v] : host_.edges()) {
            for (auto [i, j] : {std::pair{u, v}, std::pair{v, u}}) {
                const Vec2 d =
                    Vec2{x(pair_offset(i, j)), x(pair_offset(i, j) + 1)} - fw.bearing(i, j);
                err += d.norm();
            }
        }
        return err;
    }

    const SensorNetwork& net() const { return net_; }

  private:
    void add_term(VertexId i, VertexId j, Mat2 m, VertexId oi, VertexId oj) {
        terms_[static_cast<std::size_t>(pair_index(i, j))].push_back({m, pair_index(oi, oj)});
    }

    void pin(VertexId i, VertexId j, Vec2 value) {
        const auto pi = static_cast<std::size_t>(pair_index(i, j));
        pinned_[pi] = true;
        pinned_value_[pi] = value;
    }

    SensorNetwork net_;
    Graph host_;
    std::vector<std::vector<std::pair<Mat2, int>>> terms_; // per directed pair
    std::vector<bool> pinned_;
    std::vector<Vec2> pinned_value_;
};

struct LocalizationOptions {
    std::uint64_t seed{1};
    double step{0.001};
    double horizon{50.0};
    int stride{0}; // 0: pick automatically for ~2000 samples
    bool diagnostic_bypass{false};
    std::optional<Eigen::VectorXd> initial_state;
};

struct LocalizationTrajectory {
    std::vector<double> times;
    std::vector<double> location_error;
    std::vector<double> bearing_error;
    std::vector<Vec2> final_p_hat;
    std::map<std::pair<VertexId, VertexId>, Vec2> final_b_hat;
};

/// Integrate the joint estimator from seeded random initial estimates and
/// record the error curves.
inline LocalizationTrajectory simulate_localization(const SensorNetwork& net,
                                                    const AngleIndexSet& gais,
                                                    const LocalizationOptions& opts,
                                                    double tau_rel = kDefaultRankTol) {
    if (!opts.diagnostic_bypass) {
        if (!check_localizable(net, tau_rel)) {
            throw Error(Errc::not_localizable,
                        "simulate_localization: network is not signed angle localizable (Theorem 9 "
                        "needs an ISAR framework and at least 2 anchors)");
        }
        const auto pair = net.adjacent_anchor_pair();
        if (!pair) {
            throw Error(Errc::assumption_violated,
                        "simulate_localization: no adjacent anchor pair (Assumption 1)");
        }
        bool touched = false;
        for (const auto& t : gais.triples()) {
            if (detail::triple_touches_edge(t, pair->first, pair->second)) {
                touched = true;
                break;
            }
        }
        if (!touched) {
            throw Error(Errc::assumption_violated,
                        "simulate_localization: AIS has no triple over the anchor edge; apply the "
                        "Remark-3 augmentation");
        }
    }

    LocalizationSystem system(net, gais);
    Eigen::VectorXd x0;
    if (opts.initial_state) {
        x0 = *opts.initial_state;
        if (x0.size() != system.dim()) {
            throw Error(Errc::invalid_input, "simulate_localization: initial state has wrong size");
        }
    } else {
        Rng rng(opts.seed);
        x0.resize(system.dim());
        const Framework& fw = net.framework();
        for (VertexId v = 1; v <= fw.n(); ++v) {
            const int off = system.position_offset(v);
            if (net.is_anchor(v)) {
                x0(off) = fw.point(v).x;
                x0(off + 1) = fw.point(v).y;
            } else {
                x0(off) = rng.uniform(-1.0, 1.0);
                x0(off + 1) = rng.uniform(-1.0, 1.0);
            }
        }
        for (auto [u, v] : system.host().edges()) {
            for (auto [i, j] : {std::pair{u, v}, std::pair{v, u}}) {
                const int off = system.pair_offset(i, j);
                if (system.is_pinned(i, j)) {
                    const Vec2 b = fw.bearing(i, j);
                    x0(off) = b.x;
                    x0(off + 1) = b.y;
                } else {
                    x0(off) = rng.uniform(-1.0, 1.0);
                    x0(off + 1) = rng.uniform(-1.0, 1.0);
                }
            }
        }
    }

    const auto steps = static_cast<long>(std::llround(opts.horizon / opts.step));
    const int stride = opts.stride > 0 ? opts.stride : std::max(1L, steps / 2000);
    const OdeTrajectory raw = integrate(system.joint_system(), x0, 0.0, opts.horizon, opts.step, stride);

    LocalizationTrajectory traj;
    traj.times = raw.times;
    traj.location_error.reserve(raw.states.size());
    traj.bearing_error.reserve(raw.states.size());
    for (const auto& x : raw.states) {
        traj.location_error.push_back(system.location_error(x));
        traj.bearing_error.push_back(system.bearing_error(x));
    }
    const Eigen::VectorXd& last = raw.states.back();
    for (VertexId v = 1; v <= net.framework().n(); ++v) {
        const int off = system.position_offset(v);
        traj.final_p_hat.push_back({last(off), last(off + 1)});
    }
    for (auto [u, v] : system.host().edges()) {
        for (auto [i, j] : {std::pair{u, v}, std::pair{v, u}}) {
            const int off = system.pair_offset(i, j);
            traj.final_b_hat[{i, j}] = {last(off), last(off + 1)};
        }
    }
    return traj;
}

} // namespace rigidnet
