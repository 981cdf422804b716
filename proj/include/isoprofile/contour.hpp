#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "field.hpp"

namespace isoprofile {

using Polyline = std::vector<Vec2>;

inline double polyline_length(const Polyline& line, bool closed = true) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < line.size(); ++k) total += distance(line[k], line[k + 1]);
    if (closed && line.size() > 1) total += distance(line.back(), line.front());
    return total;
}

inline double polyline_signed_area(const Polyline& line) {
    double twice = 0.0;
    for (std::size_t k = 0, n = line.size(); k < n; ++k) twice += cross(line[k], line[(k + 1) % n]);
    return 0.5 * twice;
}

/// Marching-squares isolines of node values at `level`, linearly
/// interpolated along cell edges. Every returned polyline is closed (the last
/// point connects back to the first, not repeated) and keeps the region
/// {value >= level} on its left, so outer boundaries run counterclockwise and
/// hole boundaries clockwise. Values beyond the grid count as below the level.
/// Saddles are resolved by the average of the four corners.
inline std::vector<Polyline> extract_contours(const Grid& grid, const std::vector<double>& values, double level) {
    std::vector<Polyline> out;
    if (values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    if (level < *lo_it || level > *hi_it) return out;

    const auto nx = static_cast<std::int64_t>(grid.nx);
    const auto ny = static_cast<std::int64_t>(grid.ny);
    const double outside = std::min(*lo_it, level) - 1.0;
    auto value = [&](std::int64_t i, std::int64_t j) {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return outside;
        return values[static_cast<std::size_t>(j * nx + i)];
    };
    auto position = [&](std::int64_t i, std::int64_t j) {
        return Vec2{grid.origin.x + static_cast<double>(i) * grid.h, grid.origin.y + static_cast<double>(j) * grid.h};
    };

    // Edge keys: horizontal edge (i,j)-(i+1,j) -> 2*id, vertical (i,j)-(i,j+1) -> 2*id+1,
    // with id over the grid extended by one ring on each side.
    const std::int64_t ex = nx + 2;
    auto hkey = [&](std::int64_t i, std::int64_t j) { return 2 * ((j + 1) * ex + (i + 1)); };
    auto vkey = [&](std::int64_t i, std::int64_t j) { return 2 * ((j + 1) * ex + (i + 1)) + 1; };

    std::unordered_map<std::int64_t, Vec2> points;
    std::unordered_map<std::int64_t, std::int64_t> next;  // segment start key -> end key

    auto crossing = [&](std::int64_t key, Vec2 pa, double va, Vec2 pb, double vb) {
        if (points.find(key) == points.end()) {
            const double t = std::clamp((level - va) / (vb - va), 0.0, 1.0);
            points.emplace(key, pa + t * (pb - pa));
        }
        return key;
    };

    for (std::int64_t j = -1; j < ny; ++j) {
        for (std::int64_t i = -1; i < nx; ++i) {
            const double v0 = value(i, j), v1 = value(i + 1, j), v2 = value(i + 1, j + 1), v3 = value(i, j + 1);
            const int code = (v0 >= level ? 1 : 0) | (v1 >= level ? 2 : 0) | (v2 >= level ? 4 : 0) |
                             (v3 >= level ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const Vec2 p0 = position(i, j), p1 = position(i + 1, j), p2 = position(i + 1, j + 1),
                       p3 = position(i, j + 1);
            // Edge ids within the square: 0 bottom, 1 right, 2 top, 3 left.
            auto edge = [&](int e) {
                switch (e) {
                    case 0: return crossing(hkey(i, j), p0, v0, p1, v1);
                    case 1: return crossing(vkey(i + 1, j), p1, v1, p2, v2);
                    case 2: return crossing(hkey(i, j + 1), p3, v3, p2, v2);
                    default: return crossing(vkey(i, j), p0, v0, p3, v3);
                }
            };
            // The table lists pairs with the inside on the right; walk them backwards.
            auto link = [&](int a, int b) { next[edge(b)] = edge(a); };
            switch (code) {
                case 1: link(3, 0); break;
                case 2: link(0, 1); break;
                case 3: link(3, 1); break;
                case 4: link(1, 2); break;
                case 6: link(0, 2); break;
                case 7: link(3, 2); break;
                case 8: link(2, 3); break;
                case 9: link(2, 0); break;
                case 11: link(2, 1); break;
                case 12: link(1, 3); break;
                case 13: link(1, 0); break;
                case 14: link(0, 3); break;
                case 5:
                    if ((v0 + v1 + v2 + v3) / 4.0 >= level) {
                        link(3, 2);
                        link(1, 0);
                    } else {
                        link(3, 0);
                        link(1, 2);
                    }
                    break;
                case 10:
                    if ((v0 + v1 + v2 + v3) / 4.0 >= level) {
                        link(0, 3);
                        link(2, 1);
                    } else {
                        link(0, 1);
                        link(2, 3);
                    }
                    break;
                default: break;
            }
        }
    }

    // Walk the successor map; sort the starts so output order is deterministic.
    std::vector<std::int64_t> starts;
    starts.reserve(next.size());
    for (const auto& kv : next) starts.push_back(kv.first);
    std::sort(starts.begin(), starts.end());
    std::unordered_map<std::int64_t, bool> used;
    for (std::int64_t start : starts) {
        if (used[start]) continue;
        Polyline line;
        std::int64_t key = start;
        while (!used[key]) {
            used[key] = true;
            const Vec2 p = points.at(key);
            if (line.empty() || distance(line.back(), p) > 0.0) line.push_back(p);
            const auto it = next.find(key);
            if (it == next.end()) break;
            key = it->second;
        }
        if (line.size() > 1 && distance(line.front(), line.back()) == 0.0) line.pop_back();
        if (line.size() >= 3) out.push_back(std::move(line));
    }
    return out;
}

inline std::vector<Polyline> extract_contours(const ScalarField& f, double level) {
    return extract_contours(f.grid(), f.values(), level);
}

inline std::vector<Polyline> extract_contours(const RegionMask& m, double level = 0.5) {
    return extract_contours(m.grid, m.occupancy, level);
}

}  // namespace isoprofile
