#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "geometry.hpp"

namespace isoprofile {

struct BoundingBox {
    Vec2 min;
    Vec2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const { return std::hypot(width(), height()); }
};

namespace detail {

inline double signed_area(std::span<const Vec2> pts) {
    double twice = 0.0;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) twice += cross(pts[i], pts[(i + 1) % n]);
    return 0.5 * twice;
}

inline BoundingBox bounds(std::span<const Vec2> pts) {
    BoundingBox box{pts.front(), pts.front()};
    for (const Vec2& p : pts) {
        box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y)};
        box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y)};
    }
    return box;
}

}  // namespace detail

/// A simple closed polygon bounding a Jordan domain.
///
/// Vertices are stored counterclockwise; construction rejects fewer than three
/// vertices, coincident consecutive vertices, zero area and self-intersection.
/// Instances are immutable.
class JordanDomain {
public:
    static JordanDomain from_vertices(std::vector<Vec2> vertices, std::string name = {}) {
        // A ring that repeats its first vertex at the end is accepted as closed.
        if (vertices.size() > 3 && vertices.front() == vertices.back()) vertices.pop_back();
        if (vertices.size() < 3)
            throw Error(ErrorKind::InvalidInput,
                        "polygon needs at least 3 vertices, got " + std::to_string(vertices.size()));
        for (const Vec2& p : vertices)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw Error(ErrorKind::InvalidInput, "non-finite vertex coordinate");

        const BoundingBox box = detail::bounds(vertices);
        const double eps = 1e-12 * box.diagonal();
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i)
            if (distance(vertices[i], vertices[(i + 1) % n]) <= eps)
                throw Error(ErrorKind::InvalidInput,
                            "consecutive vertices " + std::to_string(i) + " and " +
                                std::to_string((i + 1) % n) + " coincide");

        check_simple(vertices, eps);

        JordanDomain d;
        d.name_ = std::move(name);
        const double area = detail::signed_area(vertices);
        if (!(std::abs(area) > eps * eps)) throw Error(ErrorKind::InvalidInput, "polygon has zero area");
        d.input_ccw_ = area > 0.0;
        if (!d.input_ccw_) std::reverse(vertices.begin(), vertices.end());
        d.vertices_ = std::move(vertices);
        d.box_ = box;
        return d;
    }

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const std::string& name() const { return name_; }
    // True when the input listed the vertices counterclockwise already.
    bool input_was_ccw() const { return input_ccw_; }
    const BoundingBox& bbox() const { return box_; }

    double area() const { return detail::signed_area(vertices_); }

    double perimeter() const {
        double total = 0.0;
        for (std::size_t i = 0, n = size(); i < n; ++i) total += distance(vertices_[i], vertices_[(i + 1) % n]);
        return total;
    }

    // Crossing-number point-in-polygon test.
    bool contains(Vec2 p) const {
        bool inside = false;
        for (std::size_t i = 0, j = size() - 1; i < size(); j = i++) {
            const Vec2 a = vertices_[i];
            const Vec2 b = vertices_[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < x) inside = !inside;
            }
        }
        return inside;
    }

    double boundary_distance(Vec2 p) const {
        double best = INFINITY;
        for (std::size_t i = 0, n = size(); i < n; ++i)
            best = std::min(best, segment_distance_sq(p, vertices_[i], vertices_[(i + 1) % n]));
        return std::sqrt(best);
    }

    // Positive inside, negative outside.
    double signed_distance(Vec2 p) const {
        const double d = boundary_distance(p);
        return contains(p) ? d : -d;
    }

    JordanDomain transformed(double scale, Vec2 shift = {}) const {
        std::vector<Vec2> pts;
        pts.reserve(size());
        for (const Vec2& p : vertices_) pts.push_back(scale * p + shift);
        return from_vertices(std::move(pts), name_);
    }

private:
    JordanDomain() = default;

    static void check_simple(std::span<const Vec2> v, double eps) {
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = v[i];
            const Vec2 b = v[(i + 1) % n];
            // Adjacent edges may only share their common vertex.
            const Vec2 c = v[(i + 2) % n];
            if (std::abs(cross(b - a, c - b)) <= eps * distance(a, b) && dot(b - a, c - b) < 0.0)
                throw Error(ErrorKind::InvalidInput, "self-intersection: edges " + std::to_string(i) + " and " +
                                                         std::to_string((i + 1) % n) + " fold back");
            for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segment_segment_distance(a, b, v[j], v[(j + 1) % n]) <= eps)
                    throw Error(ErrorKind::InvalidInput, "self-intersection: edges " + std::to_string(i) +
                                                             " and " + std::to_string(j) + " intersect");
            }
        }
    }

    std::vector<Vec2> vertices_;
    std::string name_;
    BoundingBox box_{};
    bool input_ccw_ = true;
};

inline double polygon_area(const JordanDomain& d) { return d.area(); }
inline double polygon_perimeter(const JordanDomain& d) { return d.perimeter(); }

/// Parses {"name": "...", "vertices": [[x, y], ...]}.
inline JordanDomain parse_domain(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        throw Error(ErrorKind::InvalidInput, "document needs a \"vertices\" array");
    std::vector<Vec2> pts;
    for (const auto& item : doc["vertices"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw Error(ErrorKind::InvalidInput, "each vertex must be an [x, y] number pair");
        pts.push_back({item[0].get<double>(), item[1].get<double>()});
    }
    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw Error(ErrorKind::InvalidInput, "\"name\" must be a string");
        name = doc["name"].get<std::string>();
    }
    return JordanDomain::from_vertices(std::move(pts), std::move(name));
}

inline nlohmann::json to_json(const JordanDomain& d) {
    nlohmann::json verts = nlohmann::json::array();
    for (const Vec2& p : d.vertices()) verts.push_back({p.x, p.y});
    nlohmann::json doc;
    if (!d.name().empty()) doc["name"] = d.name();
    doc["vertices"] = std::move(verts);
    return doc;
}

}  // namespace isoprofile
