#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "edt.hpp"
#include "field.hpp"

namespace isoprofile {

// Cells with occupancy >= threshold.
inline std::vector<char> threshold_cells(const RegionMask& m, double threshold = 0.5) {
    std::vector<char> in(m.occupancy.size());
    for (std::size_t k = 0; k < in.size(); ++k) in[k] = m.occupancy[k] >= threshold ? 1 : 0;
    return in;
}

// Cells standing for the set: occupancy >= 1/2, or, for sets thinner than
// half a cell (an inner parallel set at the inradius), every cell with
// positive occupancy. Empty only when the mask is.
inline std::vector<char> support_cells(const RegionMask& m) {
    std::vector<char> in = threshold_cells(m, 0.5);
    bool any = false;
    for (char c : in) any = any || c;
    if (!any)
        for (std::size_t k = 0; k < in.size(); ++k) in[k] = m.occupancy[k] > 0.0 ? 1 : 0;
    return in;
}

inline bool any_cell(const std::vector<char>& cells) {
    for (char c : cells)
        if (c) return true;
    return false;
}

struct Components {
    std::size_t count = 0;
    std::vector<int> label;  // -1 outside the set
};

// 8-connected labeling of the given cells.
inline Components label_components(const Grid& grid, const std::vector<char>& cells) {
    Components out{0, std::vector<int>(grid.size(), -1)};
    const auto nx = static_cast<std::int64_t>(grid.nx);
    const auto ny = static_cast<std::int64_t>(grid.ny);
    std::vector<std::int64_t> stack;
    for (std::int64_t start = 0; start < nx * ny; ++start) {
        if (!cells[start] || out.label[start] >= 0) continue;
        const int id = static_cast<int>(out.count++);
        out.label[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::int64_t k = stack.back();
            stack.pop_back();
            const std::int64_t i = k % nx;
            const std::int64_t j = k / nx;
            for (std::int64_t dj = -1; dj <= 1; ++dj)
                for (std::int64_t di = -1; di <= 1; ++di) {
                    const std::int64_t ii = i + di;
                    const std::int64_t jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    const std::int64_t n = jj * nx + ii;
                    if (cells[n] && out.label[n] < 0) {
                        out.label[n] = id;
                        stack.push_back(n);
                    }
                }
        }
    }
    return out;
}

/// Components of {occupancy >= threshold}. Omega^r with more than one
/// component means two radius-r balls in the domain cannot slide into each
/// other: a neck of radius r.
inline Components connected_components(const RegionMask& m, double threshold = 0.5) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorKind::InvalidInput, "component threshold must lie in (0, 1)");
    return label_components(m.grid, threshold_cells(m, threshold));
}

namespace detail {

// Occupancy of {x : dist(x, S) <= r} where S is given by site cells carrying
// a signed depth (distance from the cell centre to the edge of S, positive
// inside). A site s with depth t has B(s, t) inside S, so |x - s| - t bounds
// dist(x, S) from above; near the edge the bound is minimised over the sites
// around the nearest centre, which fixes the angle error of a single site.
inline std::vector<double> grow(const Grid& grid, const std::vector<char>& sites, const std::vector<double>& depth,
                                double r) {
    constexpr std::int64_t window = 2;
    const FeatureTransform ft = feature_transform(grid, sites);
    std::vector<double> occ(grid.size(), 0.0);
    const double h = grid.h;
    const auto nx = static_cast<std::int64_t>(grid.nx);
    const auto ny = static_cast<std::int64_t>(grid.ny);
    for (std::size_t k = 0; k < occ.size(); ++k) {
        if (ft.nearest[k] < 0) continue;
        const auto s = static_cast<std::size_t>(ft.nearest[k]);
        double d = std::sqrt(ft.dist_sq[k]) * h - depth[s];
        if (std::abs(d - r) < 2.0 * h) {
            const auto i = static_cast<std::int64_t>(k) % nx, j = static_cast<std::int64_t>(k) / nx;
            const auto si = static_cast<std::int64_t>(s) % nx, sj = static_cast<std::int64_t>(s) / nx;
            for (std::int64_t b = std::max<std::int64_t>(sj - window, 0); b <= std::min(sj + window, ny - 1); ++b)
                for (std::int64_t a = std::max<std::int64_t>(si - window, 0); a <= std::min(si + window, nx - 1); ++a) {
                    const auto n = static_cast<std::size_t>(b * nx + a);
                    if (!sites[n]) continue;
                    const double dx = static_cast<double>(a - i), dy = static_cast<double>(b - j);
                    d = std::min(d, std::sqrt(dx * dx + dy * dy) * h - depth[n]);
                }
        }
        occ[k] = occupancy_from_depth(r - d, h);
    }
    return occ;
}

inline std::vector<double> site_depths(const RegionMask& m, double sign) {
    std::vector<double> depth(m.occupancy.size());
    for (std::size_t k = 0; k < depth.size(); ++k) depth[k] = sign * (m.occupancy[k] - 0.5) * m.grid.h;
    return depth;
}

}  // namespace detail

/// Minkowski sum with the closed disk of radius r: exact feature transform
/// from every cell the mask touches, then the sub-cell estimator at level r.
inline RegionMask dilate_by_disk(const RegionMask& m, double r, MaskKind kind = MaskKind::Dilation) {
    if (!(r >= 0.0)) throw Error(ErrorKind::InvalidInput, "dilation radius must be non-negative");
    // Partial cells carry the sub-cell position of the edge, so all of them are sites.
    std::vector<char> sites(m.occupancy.size());
    for (std::size_t k = 0; k < sites.size(); ++k) sites[k] = m.occupancy[k] > 0.0 ? 1 : 0;
    if (!any_cell(sites)) throw Error(ErrorKind::Degenerate, "cannot dilate an empty mask");
    return RegionMask{m.grid, detail::grow(m.grid, sites, detail::site_depths(m, 1.0), r), kind, r, false};
}

/// Erosion by the closed disk of radius r (complement of the dilated complement).
inline RegionMask erode_by_disk(const RegionMask& m, double r) {
    if (!(r >= 0.0)) throw Error(ErrorKind::InvalidInput, "erosion radius must be non-negative");
    std::vector<char> outside(m.occupancy.size());
    for (std::size_t k = 0; k < outside.size(); ++k) outside[k] = m.occupancy[k] < 1.0 ? 1 : 0;
    RegionMask out{m.grid, std::vector<double>(m.occupancy.size(), 1.0), MaskKind::Erosion, r, false};
    if (!any_cell(outside)) return out;
    const std::vector<double> grown = detail::grow(m.grid, outside, detail::site_depths(m, -1.0), r);
    for (std::size_t k = 0; k < grown.size(); ++k) out.occupancy[k] = 1.0 - grown[k];
    return out;
}

/// Dijkstra distance (8-neighbour steps of h and h*sqrt 2) inside `cells`
/// from the seed cells; +inf where unreachable.
inline std::vector<double> geodesic_distance(const Grid& grid, const std::vector<char>& cells,
                                             const std::vector<char>& seeds) {
    const auto nx = static_cast<std::int64_t>(grid.nx);
    const auto ny = static_cast<std::int64_t>(grid.ny);
    std::vector<double> dist(grid.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::int64_t k = 0; k < nx * ny; ++k)
        if (seeds[k] && cells[k]) {
            dist[k] = 0.0;
            queue.push({0.0, k});
        }
    const double diag = grid.h * std::sqrt(2.0);
    while (!queue.empty()) {
        const auto [d, k] = queue.top();
        queue.pop();
        if (d > dist[k]) continue;
        const std::int64_t i = k % nx;
        const std::int64_t j = k / nx;
        for (std::int64_t dj = -1; dj <= 1; ++dj)
            for (std::int64_t di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                const std::int64_t ii = i + di;
                const std::int64_t jj = j + dj;
                if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                const std::int64_t n = jj * nx + ii;
                if (!cells[n]) continue;
                const double nd = d + ((di != 0 && dj != 0) ? diag : grid.h);
                if (nd < dist[n]) {
                    dist[n] = nd;
                    queue.push({nd, n});
                }
            }
    }
    return dist;
}

}  // namespace isoprofile
