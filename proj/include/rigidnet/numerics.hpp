#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidnet/errors.hpp"

namespace rigidnet {

/// Relative singular-value threshold used by every rank decision.
inline constexpr double kDefaultRankTol = 1e-8;

struct SvdResult {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd v; // columns are right singular vectors
};

inline void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw Error(Errc::non_finite, std::string(what) + ": non-finite entries");
}

inline SvdResult svd(const Eigen::MatrixXd& m) {
    check_finite(m, "svd");
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Count of singular values above tau_rel * sigma_max; falls back to an
/// absolute 1e-12 cut when the matrix is (numerically) zero.
inline int rank_from_svd(const Eigen::VectorXd& singular_values, double tau_rel) {
    if (singular_values.size() == 0) return 0;
    const double smax = singular_values(0);
    const double tau = smax > 0.0 ? tau_rel * smax : 1e-12;
    int r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values(i) > tau) ++r;
    }
    return r;
}

inline std::pair<int, Eigen::VectorXd> numerical_rank(const Eigen::MatrixXd& m,
                                                      double tau_rel = kDefaultRankTol) {
    if (m.size() == 0) return {0, Eigen::VectorXd()};
    const auto dec = svd(m);
    return {rank_from_svd(dec.singular_values, tau_rel), dec.singular_values};
}

/// Orthonormal basis of the null space (right singular vectors past the rank).
inline Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& m, double tau_rel = kDefaultRankTol) {
    const auto dec = svd(m);
    const int r = rank_from_svd(dec.singular_values, tau_rel);
    return dec.v.rightCols(dec.v.cols() - r);
}

/// Largest principal angle (radians) between the column spans of a and b.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(a), qb(b);
    const Eigen::MatrixXd qa_thin =
        qa.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd qb_thin =
        qb.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(qa_thin.transpose() * qb_thin);
    const double smin = dec.singularValues().minCoeff();
    return std::acos(std::clamp(smin, -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Fixed-step RK4 integration

struct OdeSystem {
    int dim{0};
    /// rhs(t, x, dx): writes the derivative into dx (already sized to dim).
    std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)> rhs;
    /// Optional projection applied after every accepted step (anchor
    /// pinning, angle wrapping).
    std::function<void(Eigen::VectorXd&)> post_step;
};

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

inline constexpr double kDivergenceGuard = 1e9;

inline Eigen::VectorXd rk4_step(const OdeSystem& sys, const Eigen::VectorXd& x, double t, double h) {
    if (!(h > 0.0)) throw Error(Errc::invalid_input, "rk4_step: step must be positive");
    Eigen::VectorXd k1(sys.dim), k2(sys.dim), k3(sys.dim), k4(sys.dim);
    sys.rhs(t, x, k1);
    sys.rhs(t + 0.5 * h, x + 0.5 * h * k1, k2);
    sys.rhs(t + 0.5 * h, x + 0.5 * h * k2, k3);
    sys.rhs(t + h, x + h * k3, k4);
    Eigen::VectorXd next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (sys.post_step) sys.post_step(next);
    return next;
}

/// Integrate over [t0, t1] with fixed step h, sampling every `stride` steps
/// (start and final states always recorded). Aborts when any component
/// exceeds the divergence guard.
inline OdeTrajectory integrate(const OdeSystem& sys, Eigen::VectorXd state, double t0, double t1,
                               double h, int stride = 1) {
    if (!(h > 0.0) || t1 < t0) throw Error(Errc::invalid_input, "integrate: bad time range or step");
    if (stride < 1) stride = 1;
    const auto steps = static_cast<long>(std::llround((t1 - t0) / h));
    OdeTrajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(state);
    double t = t0;
    for (long s = 1; s <= steps; ++s) {
        state = rk4_step(sys, state, t, h);
        t = t0 + static_cast<double>(s) * h;
        if (!state.allFinite() || state.cwiseAbs().maxCoeff() > kDivergenceGuard) {
            throw Error(Errc::non_finite, "integrate: state diverged", ErrorKind::numerical);
        }
        if (s % stride == 0 || s == steps) {
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Least-squares line fit on the trajectory tail

struct FitResult {
    double slope{0.0};
    double intercept{0.0};
    double r_squared{0.0};
};

inline FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 3 || ys.size() != n) {
        throw Error(Errc::too_few_points, "linear_fit: need at least 3 points");
    }
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw Error(Errc::too_few_points, "linear_fit: degenerate abscissae");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {
        fit.r_squared = 1.0; // constant data: the flat line is exact
    } else {
        const double ss_res = syy - fit.slope * sxy;
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

/// Fit a line to the last `tail_fraction` of the samples.
inline FitResult linear_tail_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                                 double tail_fraction) {
    if (xs.size() != ys.size()) throw Error(Errc::invalid_input, "linear_tail_fit: size mismatch");
    tail_fraction = std::clamp(tail_fraction, 0.0, 1.0);
    const auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(xs.size())));
    if (count < 3) throw Error(Errc::too_few_points, "linear_tail_fit: tail has fewer than 3 points");
    const std::size_t start = xs.size() - count;
    return linear_fit({xs.begin() + static_cast<std::ptrdiff_t>(start), xs.end()},
                      {ys.begin() + static_cast<std::ptrdiff_t>(start), ys.end()});
}

// ---------------------------------------------------------------------------
// Seeded PRNG

/// Deterministic 64-bit generator. The algorithm identifier is recorded in
/// serialized reports so outputs can name their randomness source.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr const char* algorithm() { return "mt19937_64"; }

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(engine_);
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uniform_int_distribution<std::int64_t> dist(lo, hi);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace rigidnet
