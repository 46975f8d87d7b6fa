#pragma once

#include <cmath>
#include <numbers>

#include "rigidnet/errors.hpp"

namespace rigidnet {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Points closer than this are treated as coincident and rejected.
inline constexpr double kCoincidenceTol = 1e-9;

/// Angles are plain radians; values produced by this module lie in [0, 2*pi).
using Angle = double;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a{1.0}, b{0.0};
    double c{0.0}, d{1.0};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    constexpr Mat2 operator*(Mat2 o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Mat2 operator+(Mat2 o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    constexpr Mat2 operator-(Mat2 o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }
    constexpr double det() const { return a * d - b * c; }
};

/// Reduce an angle into [0, 2*pi) by floored modulo.
inline Angle normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0; // fmod can land exactly on 2*pi after the add
    return r;
}

/// Reduce an angle difference into (-pi, pi].
inline double wrap_pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r > std::numbers::pi) r -= kTwoPi;
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

/// Absolute angular distance in [0, pi].
inline double angular_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }

/// Counter-clockwise rotation matrix [[cos,-sin],[sin,cos]].
inline Mat2 rotation_matrix(Angle theta) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    return {ct, -st, st, ct};
}

/// Quarter-turn: (x, y) -> (-y, x).
inline constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Unit vector from p_j toward p_i.
inline Vec2 bearing(Vec2 p_j, Vec2 p_i) {
    const Vec2 e = p_i - p_j;
    const double len = e.norm();
    if (len < kCoincidenceTol) {
        throw Error(Errc::coincident_points, "bearing: points coincide within tolerance");
    }
    return e / len;
}

inline double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

/// Signed angle at vertex p_j, measured counter-clockwise from the bearing
/// toward p_i to the bearing toward p_k. Result in [0, 2*pi).
inline Angle signed_angle(Vec2 p_i, Vec2 p_j, Vec2 p_k) {
    const Vec2 b_ji = bearing(p_j, p_i);
    const Vec2 b_jk = bearing(p_j, p_k);
    const double cosine = clamp_unit(b_jk.dot(b_ji));
    const double cross = b_jk.dot(perp(b_ji));
    const double a = std::acos(cosine);
    return normalize_angle(cross >= 0.0 ? a : kTwoPi - a);
}

/// I2 - b b^T. Orthogonal projector when ||b|| = 1; callers may pass
/// non-unit estimates on purpose.
inline Mat2 projection_matrix(Vec2 b) {
    return {1.0 - b.x * b.x, -b.x * b.y,
            -b.x * b.y, 1.0 - b.y * b.y};
}

/// Polar angle of v in [0, 2*pi).
inline Angle polar_angle(Vec2 v) { return normalize_angle(std::atan2(v.y, v.x)); }

} // namespace rigidnet
