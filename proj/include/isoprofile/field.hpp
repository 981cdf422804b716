#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "domain.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace isoprofile {

/// Uniform square lattice. Node (i, j) sits at origin + (i h, j h) and stands
/// for the h-by-h cell centred on it, so field samples and mask cells coincide.
struct Grid {
    Vec2 origin;
    double h = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    Vec2 node(std::size_t i, std::size_t j) const {
        return {origin.x + static_cast<double>(i) * h, origin.y + static_cast<double>(j) * h};
    }
    Vec2 node(std::size_t idx) const { return node(idx % nx, idx / nx); }
    double cell_area() const { return h * h; }
    double area() const { return static_cast<double>(size()) * cell_area(); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

inline constexpr std::size_t kDefaultCellBudget = 50'000'000;

// Grid covering the bounding box plus a margin of at least the inradius (+2h).
// Nodes are snapped to the lattice hZ^2 so that the result does not depend on
// where the box happens to start.
inline Grid make_padded_grid(const BoundingBox& box, double h, std::size_t cell_budget = kDefaultCellBudget) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidInput, "grid spacing must be positive");
    const double pad = 0.5 * std::min(box.width(), box.height()) + 2.0 * h;
    const double x0 = std::floor((box.min.x - pad) / h) * h;
    const double y0 = std::floor((box.min.y - pad) / h) * h;
    const double fx = std::ceil((box.max.x + pad - x0) / h) + 1.0;
    const double fy = std::ceil((box.max.y + pad - y0) / h) + 1.0;
    if (fx * fy > static_cast<double>(cell_budget))
        throw Error(ErrorKind::BudgetExceeded, "grid of " + std::to_string(static_cast<long long>(fx)) + "x" +
                                                   std::to_string(static_cast<long long>(fy)) +
                                                   " cells exceeds budget " + std::to_string(cell_budget));
    return Grid{{x0, y0}, h, static_cast<std::size_t>(fx), static_cast<std::size_t>(fy)};
}

/// Signed distance to the domain boundary sampled at every grid node
/// (positive inside). Carries the source domain and its inradius estimate.
class ScalarField {
public:
    ScalarField(Grid grid, std::vector<double> values, JordanDomain domain)
        : grid_(grid), values_(std::move(values)), domain_(std::move(domain)) {
        refine_inradius();
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t idx) const { return values_[idx]; }
    double at(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    const JordanDomain& domain() const { return domain_; }
    double h() const { return grid_.h; }

    double inradius() const { return inradius_; }
    std::size_t argmax() const { return argmax_; }
    double max_value() const { return values_[argmax_]; }

    // Bilinear interpolation; points outside the grid clamp to the border.
    double sample(Vec2 p) const {
        const double gx = std::clamp((p.x - grid_.origin.x) / grid_.h, 0.0, static_cast<double>(grid_.nx - 1));
        const double gy = std::clamp((p.y - grid_.origin.y) / grid_.h, 0.0, static_cast<double>(grid_.ny - 1));
        const std::size_t i = std::min(static_cast<std::size_t>(gx), grid_.nx - 2);
        const std::size_t j = std::min(static_cast<std::size_t>(gy), grid_.ny - 2);
        const double tx = gx - static_cast<double>(i);
        const double ty = gy - static_cast<double>(j);
        return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
               tx * ty * at(i + 1, j + 1);
    }

private:
    // Max node value plus one quadratic step per axis around the argmax. The
    // increment is capped below h/2 so the argmax cell keeps positive
    // occupancy in the inner parallel set at the estimated inradius.
    void refine_inradius() {
        argmax_ = static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) - values_.begin());
        const double peak = values_[argmax_];
        const std::size_t i = argmax_ % grid_.nx;
        const std::size_t j = argmax_ / grid_.nx;
        auto step = [peak](double lo, double hi) {
            if (!(lo < peak && hi < peak)) return 0.0;  // flat ridge: the peak is already on it
            const double curv = lo - 2.0 * peak + hi;
            if (!(curv < 0.0)) return 0.0;
            return std::max(0.0, -(lo - hi) * (lo - hi) / (8.0 * curv));
        };
        double gain = 0.0;
        if (i > 0 && i + 1 < grid_.nx) gain += step(at(i - 1, j), at(i + 1, j));
        if (j > 0 && j + 1 < grid_.ny) gain += step(at(i, j - 1), at(i, j + 1));
        inradius_ = peak + std::min(gain, 0.45 * grid_.h);
    }

    Grid grid_;
    std::vector<double> values_;
    JordanDomain domain_;
    double inradius_ = 0.0;
    std::size_t argmax_ = 0;
};

/// Exact signed distance from every node to the polygon boundary: brute force
/// over all edges, sign from the crossing-number parity of the node's row.
inline ScalarField build_distance_field(const JordanDomain& d, double h,
                                        std::size_t cell_budget = kDefaultCellBudget) {
    const Grid grid = make_padded_grid(d.bbox(), h, cell_budget);
    std::vector<double> values(grid.size());
    const auto verts = d.vertices();
    const std::size_t n = verts.size();
    parallel_for(grid.ny, [&](std::size_t j) {
        const double y = grid.node(0, j).y;
        std::vector<double> crossings;
        for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
            const Vec2 p = verts[a];
            const Vec2 q = verts[b];
            if ((p.y > y) != (q.y > y)) crossings.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
        }
        std::sort(crossings.begin(), crossings.end());
        std::size_t passed = 0;  // crossings with x <= node x
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const Vec2 node = grid.node(i, j);
            while (passed < crossings.size() && crossings[passed] <= node.x) ++passed;
            const bool inside = ((crossings.size() - passed) % 2) == 1;
            double best = INFINITY;
            for (std::size_t e = 0; e < n; ++e)
                best = std::min(best, segment_distance_sq(node, verts[e], verts[(e + 1) % n]));
            const double dist = std::sqrt(best);
            values[grid.index(i, j)] = inside ? dist : -dist;
        }
    });
    return ScalarField(grid, std::move(values), d);
}

inline double inradius(const ScalarField& f) { return f.inradius(); }

/// Spacing used when the caller asks for "auto": shorter bounding-box side / 400.
inline double auto_spacing(const JordanDomain& d) { return std::min(d.bbox().width(), d.bbox().height()) / 400.0; }

enum class MaskKind { InnerParallel, MaximalMinimizer, MinimalMinimizer, Dilation, Erosion, Custom };

inline const char* to_string(MaskKind k) {
    switch (k) {
        case MaskKind::InnerParallel: return "inner_parallel";
        case MaskKind::MaximalMinimizer: return "maximal_minimizer";
        case MaskKind::MinimalMinimizer: return "minimal_minimizer";
        case MaskKind::Dilation: return "dilation";
        case MaskKind::Erosion: return "erosion";
        case MaskKind::Custom: return "custom";
    }
    return "unknown";
}

/// Per-cell occupancy fraction in [0, 1] for a planar set.
struct RegionMask {
    Grid grid;
    std::vector<double> occupancy;
    MaskKind kind = MaskKind::Custom;
    double radius = 0.0;
    bool degenerate = false;  // requested set is empty (radius beyond the inradius)
};

// Linear sub-cell estimate of the covered fraction for a node whose signed
// distance into the set is `depth`.
inline double occupancy_from_depth(double depth, double h) { return std::clamp(depth / h + 0.5, 0.0, 1.0); }

/// Cells of Omega^r = {dist(x, boundary) >= r}.
inline RegionMask inner_parallel_mask(const ScalarField& f, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "inner parallel radius must be positive");
    RegionMask m{f.grid(), std::vector<double>(f.grid().size(), 0.0), MaskKind::InnerParallel, r, false};
    if (r > f.inradius() * (1.0 + 1e-12)) {
        m.degenerate = true;
        return m;
    }
    const auto& v = f.values();
    const double h = f.h();
    for (std::size_t k = 0; k < v.size(); ++k) m.occupancy[k] = occupancy_from_depth(v[k] - r, h);
    return m;
}

inline double mask_measure(const RegionMask& m) {
    double total = 0.0;
    for (double o : m.occupancy) total += o;
    return total * m.grid.cell_area();
}

// Area of {f >= r} without materialising a mask.
inline double inner_area(const ScalarField& f, double r) {
    double total = 0.0;
    const double h = f.h();
    for (double v : f.values()) total += occupancy_from_depth(v - r, h);
    return total * f.grid().cell_area();
}

// ---------------------------------------------------------------------------
// Binary grid dump: "ISOF1", nx, ny (int64), origin x, origin y, h (float64),
// then nx*ny float64 values in row-major order, all little-endian.

namespace detail {

template <typename T>
void put_le(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw Error(ErrorKind::InvalidInput, "truncated grid dump");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace detail

inline void write_grid_dump(std::ostream& out, const Grid& grid, const std::vector<double>& values) {
    out.write("ISOF1", 5);
    detail::put_le<std::int64_t>(out, static_cast<std::int64_t>(grid.nx));
    detail::put_le<std::int64_t>(out, static_cast<std::int64_t>(grid.ny));
    detail::put_le<double>(out, grid.origin.x);
    detail::put_le<double>(out, grid.origin.y);
    detail::put_le<double>(out, grid.h);
    for (double v : values) detail::put_le<double>(out, v);
}

struct GridDump {
    Grid grid;
    std::vector<double> values;
};

inline GridDump read_grid_dump(std::istream& in) {
    char magic[5];
    if (!in.read(magic, 5) || std::string(magic, 5) != "ISOF1")
        throw Error(ErrorKind::InvalidInput, "not an ISOF1 grid dump");
    GridDump dump;
    const auto nx = detail::get_le<std::int64_t>(in);
    const auto ny = detail::get_le<std::int64_t>(in);
    if (nx <= 0 || ny <= 0) throw Error(ErrorKind::InvalidInput, "grid dump has empty extent");
    dump.grid.nx = static_cast<std::size_t>(nx);
    dump.grid.ny = static_cast<std::size_t>(ny);
    dump.grid.origin.x = detail::get_le<double>(in);
    dump.grid.origin.y = detail::get_le<double>(in);
    dump.grid.h = detail::get_le<double>(in);
    dump.values.resize(dump.grid.size());
    for (double& v : dump.values) v = detail::get_le<double>(in);
    return dump;
}

}  // namespace isoprofile
