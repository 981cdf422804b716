#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "domain.hpp"
#include "error.hpp"

// Closed-form profiles of the rectangle R_L = [0, L] x [0, 2] and of the cross
// X_L (two copies of R_L crossing at their centres), plus shape generators.
// The oracles share no code with the raster engine.
namespace isoprofile::reference {

namespace detail {

inline constexpr double pi = std::numbers::pi;

inline void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidInput, what);
}

}  // namespace detail

inline double rectangle_profile(double L, double v) {
    using detail::pi;
    detail::require(L >= 2.0, "rectangle needs L >= 2");
    detail::require(v >= 0.0 && v <= 2.0 * L, "volume outside [0, 2L]");
    if (v <= pi) return 2.0 * std::sqrt(pi * v);
    if (v <= pi + 2.0 * (L - 2.0)) return pi + v;
    return -2.0 * std::sqrt(4.0 - pi) * std::sqrt(2.0 * L - v) + 2.0 * (2.0 + L);
}

/// dJ/dV of the rectangle profile (the curvature of the minimizers).
inline double rectangle_kappa(double L, double v) {
    using detail::pi;
    detail::require(L >= 2.0, "rectangle needs L >= 2");
    detail::require(v > 0.0 && v <= 2.0 * L, "volume outside (0, 2L]");
    if (v <= pi) return std::sqrt(pi / v);
    if (v <= pi + 2.0 * (L - 2.0)) return 1.0;
    return std::sqrt(4.0 - pi) / std::sqrt(2.0 * L - v);
}

inline double rectangle_cheeger(double L) {
    using detail::pi;
    detail::require(L >= 2.0, "rectangle needs L >= 2");
    const double half = 0.5 * L;
    return 0.5 * (4.0 - pi) / (half + 1.0 - std::sqrt((half - 1.0) * (half - 1.0) + pi * half));
}

/// Volume of the cross minimizer made of four balls of radius r in [1, sqrt 2].
inline double cross_volume_of_r(double r) {
    return 4.0 * (1.0 + r * r * std::asin(1.0 / r) - std::sqrt(r * r - 1.0));
}

/// Radius r in [1, sqrt 2] with cross_volume_of_r(r) = V, by bisection to 1e-12.
inline double cross_r_of_V(double L, double v) {
    using detail::pi;
    detail::require(L >= 4.0, "cross needs L >= 4");
    detail::require(v >= 2.0 * pi - 1e-12 && v <= 2.0 * pi + 4.0 + 1e-12, "volume outside [2pi, 2pi + 4]");
    double lo = 1.0, hi = std::sqrt(2.0);  // volume decreases from 4 + 2pi to 2pi
    // Halve until the bracket stops shrinking, well past the 1e-12 target.
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (cross_volume_of_r(mid) > v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double cross_profile(double L, double v) {
    using detail::pi;
    detail::require(L >= 4.0, "cross needs L >= 4");
    detail::require(v >= 0.0 && v <= 4.0 * L - 4.0, "volume outside [0, 4L - 4]");
    if (v <= 2.0 * pi) return 2.0 * std::sqrt(pi * v);
    if (v <= 2.0 * pi + 4.0) {
        const double r = cross_r_of_V(L, v);
        return 8.0 * r * std::asin(1.0 / r);
    }
    if (v <= 4.0 * L + 2.0 * pi - 12.0) return 2.0 * pi + v - 4.0;
    return -2.0 * std::sqrt(2.0) * std::sqrt(4.0 - pi) * std::sqrt(4.0 * L - 4.0 - v) + 4.0 * L;
}

inline double cross_kappa(double L, double v) {
    using detail::pi;
    detail::require(L >= 4.0, "cross needs L >= 4");
    detail::require(v > 0.0 && v <= 4.0 * L - 4.0, "volume outside (0, 4L - 4]");
    if (v <= 2.0 * pi) return std::sqrt(pi / v);
    if (v <= 2.0 * pi + 4.0) return 1.0 / cross_r_of_V(L, v);
    if (v <= 4.0 * L + 2.0 * pi - 12.0) return 1.0;
    return std::sqrt(2.0) * std::sqrt(4.0 - pi) / std::sqrt(4.0 * L - 4.0 - v);
}

/// Kind of the oracle piece at V, named as in the profile CSV.
inline const char* rectangle_piece(double L, double v) {
    if (v < detail::pi) return "ball";
    return v <= detail::pi + 2.0 * (L - 2.0) ? "linear-gap" : "point";
}

inline const char* cross_piece(double L, double v) {
    using detail::pi;
    if (v < 2.0 * pi) return "ball";
    if (v > 2.0 * pi + 4.0 && v <= 4.0 * L + 2.0 * pi - 12.0) return "linear-gap";
    return "point";
}

// ---------------------------------------------------------------------------
// Shapes

inline JordanDomain make_rectangle(double L) {
    detail::require(L > 0.0 && std::isfinite(L), "rectangle length must be positive");
    return JordanDomain::from_vertices({{0, 0}, {L, 0}, {L, 2}, {0, 2}}, "rectangle");
}

inline JordanDomain make_cross(double L) {
    detail::require(L >= 4.0 && std::isfinite(L), "cross needs L >= 4");
    const double a = 0.5 * L - 1.0, b = 0.5 * L + 1.0;
    const double lo = 1.0 - 0.5 * L, hi = 1.0 + 0.5 * L;
    return JordanDomain::from_vertices(
        {{0, 0}, {a, 0}, {a, lo}, {b, lo}, {b, 0}, {L, 0}, {L, 2}, {b, 2}, {b, hi}, {a, hi}, {a, 2}, {0, 2}}, "cross");
}

/// Two squares of the given side joined at mid-height by a corridor of
/// width w and length len.
inline JordanDomain make_dumbbell(double side, double w, double len) {
    detail::require(side > 0.0 && w > 0.0 && len > 0.0, "dumbbell dimensions must be positive");
    detail::require(w < side, "corridor must be narrower than the squares");
    const double x1 = side, x2 = side + len, x3 = 2.0 * side + len;
    const double y0 = 0.5 * (side - w), y1 = 0.5 * (side + w);
    return JordanDomain::from_vertices({{0, 0},
                                        {x1, 0},
                                        {x1, y0},
                                        {x2, y0},
                                        {x2, 0},
                                        {x3, 0},
                                        {x3, side},
                                        {x2, side},
                                        {x2, y1},
                                        {x1, y1},
                                        {x1, side},
                                        {0, side}},
                                       "dumbbell");
}

/// 2 x 2 square with a corridor [2, 3] x [1 - w/2, 1 + w/2] on its right side.
inline JordanDomain make_keyhole(double w) {
    detail::require(w > 0.0 && w < 2.0, "keyhole corridor width must lie in (0, 2)");
    const double lo = 1.0 - 0.5 * w, hi = 1.0 + 0.5 * w;
    return JordanDomain::from_vertices({{0, 0}, {2, 0}, {2, lo}, {3, lo}, {3, hi}, {2, hi}, {2, 2}, {0, 2}}, "keyhole");
}

/// Regular n-gon of circumradius R centred at the origin.
inline JordanDomain make_regular_ngon(int n, double R) {
    detail::require(n >= 3, "polygon needs at least 3 sides");
    detail::require(R > 0.0, "radius must be positive");
    std::vector<Vec2> v;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * detail::pi * k / n;
        v.push_back({R * std::cos(t), R * std::sin(t)});
    }
    return JordanDomain::from_vertices(std::move(v), "ngon");
}

/// Segment [0, len] x {0} dilated by a disk of radius r, as an n-gon with
/// n/2 vertices on each cap.
inline JordanDomain make_stadium(int n, double len, double r) {
    detail::require(n >= 8 && n % 2 == 0, "stadium needs an even vertex count >= 8");
    detail::require(len > 0.0 && r > 0.0, "stadium dimensions must be positive");
    const int half = n / 2;
    std::vector<Vec2> v;
    for (int k = 0; k < half; ++k) {
        const double t = -0.5 * detail::pi + detail::pi * k / (half - 1);
        v.push_back({len + r * std::cos(t), r * std::sin(t)});
    }
    for (int k = 0; k < half; ++k) {
        const double t = 0.5 * detail::pi + detail::pi * k / (half - 1);
        v.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return JordanDomain::from_vertices(std::move(v), "stadium");
}

}  // namespace isoprofile::reference
