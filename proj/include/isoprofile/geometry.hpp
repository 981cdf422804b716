#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isoprofile {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Squared distance from p to the closed segment [a, b].
inline double segment_distance_sq(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(ap, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 d = ap - t * ab;
    return dot(d, d);
}

inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    return std::sqrt(segment_distance_sq(p, a, b));
}

// Distance between closed segments [a, b] and [c, d]; zero when they cross.
inline double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return 0.0;
    return std::sqrt(std::min({segment_distance_sq(a, c, d), segment_distance_sq(b, c, d),
                               segment_distance_sq(c, a, b), segment_distance_sq(d, a, b)}));
}

// Radius of the circle through three points; infinity for collinear input.
inline double circumradius(Vec2 a, Vec2 b, Vec2 c) {
    const double ab = distance(a, b);
    const double bc = distance(b, c);
    const double ca = distance(c, a);
    const double twice_area = std::abs(cross(b - a, c - a));
    if (twice_area <= 0.0) return INFINITY;
    return ab * bc * ca / (2.0 * twice_area);
}

}  // namespace isoprofile
