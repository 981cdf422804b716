#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "contour.hpp"
#include "error.hpp"
#include "field.hpp"
#include "morphology.hpp"

namespace isoprofile {

/// One point of the curvature sweep: the maximal minimizer of
/// F_kappa = P - kappa |E| at kappa = 1/r and its Steiner quantities.
///
/// volume = area_inner + r * mink_content + pi r^2 defines mink_content
/// (the outer Minkowski content of Omega^r), and
/// perimeter = mink_content + 2 pi r, g_value = kappa * volume - perimeter.
struct SweepSample {
    double r = 0.0;
    double kappa = 0.0;
    double area_inner = 0.0;
    double volume = 0.0;
    double mink_content = 0.0;
    double perimeter = 0.0;
    double g_value = 0.0;
    std::size_t components = 0;
};

inline SweepSample make_sample(double r, double area_inner, double volume, std::size_t components) {
    SweepSample s;
    s.r = r;
    s.kappa = 1.0 / r;
    s.area_inner = area_inner;
    s.volume = volume;
    s.mink_content = (volume - area_inner - kPi * r * r) / r;
    s.perimeter = s.mink_content + 2.0 * kPi * r;
    s.g_value = s.kappa * volume - s.perimeter;
    s.components = components;
    return s;
}

/// F_kappa evaluated on the sample's set.
inline double evaluate_F(const SweepSample& s, double kappa) { return s.perimeter - kappa * s.volume; }

struct FreeArc {
    Polyline points;
    double length = 0.0;
    double fitted_radius = std::numeric_limits<double>::quiet_NaN();  // NaN: too short to fit
};

struct MinimizerReport {
    SweepSample sample;
    RegionMask mask;
    std::vector<Polyline> contours;
    std::vector<FreeArc> arcs;
    double pass_rate = 1.0;
    bool family = false;  // a one-parameter family of minimizers shares this curvature
};

struct ArcCheck {
    std::size_t free_points = 0;
    std::size_t passing_points = 0;
    double pass_rate = 1.0;
    std::size_t fitted_arcs = 0;
    std::size_t radius_failures = 0;
    std::size_t length_failures = 0;
    double max_arc_length = 0.0;
    double max_radius_error = 0.0;  // relative to r, over fitted arcs
};

namespace detail {

struct InnerSet {
    RegionMask mask;
    std::vector<char> support;
    std::size_t components = 0;
    double area = 0.0;
};

// Inner parallel set at r with its support and component count. At the
// inradius the set has empty interior, so its area is taken as zero.
inline InnerSet inner_set(const ScalarField& f, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
    InnerSet s{inner_parallel_mask(f, r), {}, 0, 0.0};
    if (s.mask.degenerate)
        throw Error(ErrorKind::Degenerate, "inner parallel set is empty at r=" + std::to_string(r) +
                                               " (inradius " + std::to_string(f.inradius()) + ")");
    s.support = support_cells(s.mask);
    if (!any_cell(s.support)) throw Error(ErrorKind::Degenerate, "inner parallel set is empty at r=" + std::to_string(r));
    s.components = label_components(s.mask.grid, s.support).count;
    s.area = r >= f.inradius() * (1.0 - 1e-12) ? 0.0 : mask_measure(s.mask);
    return s;
}

inline void require_connected(const InnerSet& s, double r) {
    if (s.components > 1)
        throw Error(ErrorKind::HypothesisFailure, "inner parallel set at r=" + std::to_string(r) + " has " +
                                                      std::to_string(s.components) + " components (neck)");
}

// Maximal runs of consecutive contour points strictly inside the domain.
inline std::vector<FreeArc> free_arcs(const ScalarField& f, const std::vector<Polyline>& contours) {
    std::vector<FreeArc> arcs;
    const double h = f.h();
    for (const Polyline& line : contours) {
        const std::size_t n = line.size();
        std::vector<char> free(n);
        std::size_t free_count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            free[k] = f.sample(line[k]) > h ? 1 : 0;
            free_count += free[k];
        }
        if (free_count == 0) continue;
        if (free_count == n) {
            FreeArc arc;
            arc.points = line;
            arc.length = polyline_length(line, true);
            arcs.push_back(std::move(arc));
            continue;
        }
        // Start just after a bound point so no run wraps around.
        std::size_t start = 0;
        while (free[start]) ++start;
        FreeArc current;
        for (std::size_t step = 1; step <= n; ++step) {
            const std::size_t k = (start + step) % n;
            if (free[k]) {
                current.points.push_back(line[k]);
            } else if (!current.points.empty()) {
                current.length = polyline_length(current.points, false);
                arcs.push_back(std::move(current));
                current = FreeArc{};
            }
        }
    }
    // Three-point circumradius on triples at least 5 samples apart; median over the arc.
    for (FreeArc& arc : arcs) {
        const std::size_t n = arc.points.size();
        const std::size_t spacing = std::max<std::size_t>(5, (n - 1) / 4);
        if (n < 2 * spacing + 1) continue;
        std::vector<double> radii;
        for (std::size_t k = 0; k + 2 * spacing < n; ++k)
            radii.push_back(circumradius(arc.points[k], arc.points[k + spacing], arc.points[k + 2 * spacing]));
        std::nth_element(radii.begin(), radii.begin() + static_cast<std::ptrdiff_t>(radii.size() / 2), radii.end());
        arc.fitted_radius = radii[radii.size() / 2];
    }
    return arcs;
}

}  // namespace detail

/// Checks that the free boundary of a minimizer consists of arcs of radius
/// r: each free contour point lies at distance r (within tol) from Omega^r,
/// each fitted arc radius is within 5% of r, and no arc is longer than
/// pi r + tol.
inline ArcCheck verify_arc_property(const MinimizerReport& rep, const ScalarField& f, double tol) {
    ArcCheck check;
    const double r = rep.sample.r;
    const RegionMask inner = inner_parallel_mask(f, r);
    const std::vector<char> sites = support_cells(inner);
    if (!any_cell(sites)) return check;
    const FeatureTransform ft = feature_transform(inner.grid, sites);
    const Grid& g = inner.grid;
    const double h = g.h;

    auto distance_to_inner = [&](Vec2 p) {
        const auto ci = static_cast<std::int64_t>(std::llround((p.x - g.origin.x) / h));
        const auto cj = static_cast<std::int64_t>(std::llround((p.y - g.origin.y) / h));
        double best = INFINITY;
        for (std::int64_t dj = -1; dj <= 1; ++dj)
            for (std::int64_t di = -1; di <= 1; ++di) {
                const std::int64_t i = ci + di;
                const std::int64_t j = cj + dj;
                if (i < 0 || j < 0 || i >= static_cast<std::int64_t>(g.nx) || j >= static_cast<std::int64_t>(g.ny))
                    continue;
                const std::int64_t site = ft.nearest[static_cast<std::size_t>(j) * g.nx + static_cast<std::size_t>(i)];
                if (site < 0) continue;
                const auto s = static_cast<std::size_t>(site);
                const double depth = (inner.occupancy[s] - 0.5) * h;
                best = std::min(best, distance(p, g.node(s)) - depth);
            }
        return best;
    };

    for (const FreeArc& arc : rep.arcs) {
        for (const Vec2& p : arc.points) {
            ++check.free_points;
            if (std::abs(distance_to_inner(p) - r) <= tol) ++check.passing_points;
        }
        check.max_arc_length = std::max(check.max_arc_length, arc.length);
        if (arc.length > kPi * r + tol) ++check.length_failures;
        if (std::isfinite(arc.fitted_radius)) {
            ++check.fitted_arcs;
            const double err = std::abs(arc.fitted_radius - r) / r;
            check.max_radius_error = std::max(check.max_radius_error, err);
            if (err > 0.05) ++check.radius_failures;
        }
    }
    check.pass_rate = check.free_points == 0 ? 1.0
                                             : static_cast<double>(check.passing_points) /
                                                   static_cast<double>(check.free_points);
    return check;
}

namespace detail {

inline MinimizerReport finish_report(const ScalarField& f, SweepSample sample, RegionMask mask, bool family) {
    MinimizerReport rep;
    rep.sample = sample;
    rep.contours = extract_contours(mask, 0.5);
    std::sort(rep.contours.begin(), rep.contours.end(),
              [](const Polyline& a, const Polyline& b) { return polyline_length(a) > polyline_length(b); });
    rep.arcs = free_arcs(f, rep.contours);
    rep.mask = std::move(mask);
    rep.family = family;
    rep.pass_rate = verify_arc_property(rep, f, 2.0 * f.h()).pass_rate;
    return rep;
}

}  // namespace detail

/// Samples the maximal minimizer Omega^r + B_r. Refuses disconnected Omega^r.
inline SweepSample sweep_sample(const ScalarField& f, double r) {
    const detail::InnerSet inner = detail::inner_set(f, r);
    detail::require_connected(inner, r);
    const RegionMask grown = dilate_by_disk(inner.mask, r, MaskKind::MaximalMinimizer);
    return make_sample(r, inner.area, mask_measure(grown), inner.components);
}

/// Omega^r + B_r with its contour and free-boundary arcs.
inline MinimizerReport maximal_minimizer(const ScalarField& f, double r) {
    const detail::InnerSet inner = detail::inner_set(f, r);
    detail::require_connected(inner, r);
    RegionMask grown = dilate_by_disk(inner.mask, r, MaskKind::MaximalMinimizer);
    const SweepSample s = make_sample(r, inner.area, mask_measure(grown), inner.components);
    return detail::finish_report(f, s, std::move(grown), false);
}

/// C_0 + B_r, with C_0 approximated by the opening of Omega^r by a disk of
/// radius 2h (zero-width tendrils vanish). Computed as
/// (Omega^r eroded by 2h) + B_{r+2h}. When nothing survives the erosion
/// (Omega^r is a curve or a point) the minimal minimizer is a ball of
/// radius r centred on Omega^r.
inline MinimizerReport minimal_minimizer(const ScalarField& f, double r) {
    const detail::InnerSet inner = detail::inner_set(f, r);
    detail::require_connected(inner, r);
    const double delta = 2.0 * f.h();
    const RegionMask core = erode_by_disk(inner.mask, delta);
    RegionMask grown;
    double core_area = 0.0;
    if (any_cell(threshold_cells(core, 0.5))) {
        grown = dilate_by_disk(core, r + delta, MaskKind::MinimalMinimizer);
        core_area = mask_measure(dilate_by_disk(core, delta));
    } else {
        RegionMask seed{f.grid(), std::vector<double>(f.grid().size(), 0.0), MaskKind::Custom, 0.0, false};
        seed.occupancy[f.argmax()] = 0.5;
        grown = dilate_by_disk(seed, r, MaskKind::MinimalMinimizer);
    }
    grown.radius = r;
    const SweepSample s = make_sample(r, core_area, mask_measure(grown), inner.components);
    return detail::finish_report(f, s, std::move(grown), false);
}

/// A member of the family K + B_r (K a connected part of Omega^r containing
/// C_0) whose volume matches `target`. K grows from C_0 (or from the
/// inball centre when C_0 is empty) along Omega^r by geodesic distance,
/// bisected on that distance. The volume is clamped to what the family spans.
inline MinimizerReport family_member(const ScalarField& f, double r, double target) {
    const detail::InnerSet inner = detail::inner_set(f, r);
    detail::require_connected(inner, r);
    const Grid& g = f.grid();
    std::vector<char> seeds = threshold_cells(erode_by_disk(inner.mask, 2.0 * f.h()), 0.5);
    for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = seeds[k] && inner.support[k];
    if (!any_cell(seeds)) seeds[f.argmax()] = 1;
    const std::vector<double> geo = geodesic_distance(g, inner.support, seeds);
    double reach = 0.0;
    for (double d : geo)
        if (std::isfinite(d)) reach = std::max(reach, d);

    auto truncated = [&](double t) {
        RegionMask k{g, std::vector<double>(g.size(), 0.0), MaskKind::Custom, r, false};
        for (std::size_t idx = 0; idx < g.size(); ++idx)
            if (geo[idx] <= t) k.occupancy[idx] = std::max(inner.mask.occupancy[idx], 0.5 * (seeds[idx] != 0));
        return k;
    };
    auto volume_at = [&](double t) { return mask_measure(dilate_by_disk(truncated(t), r)); };

    double lo = 0.0, hi = reach;
    if (volume_at(hi) <= target) {
        lo = hi;
    } else if (volume_at(lo) < target) {
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            (volume_at(mid) < target ? lo : hi) = mid;
        }
    }
    const RegionMask k = truncated(lo);
    RegionMask grown = dilate_by_disk(k, r, MaskKind::MaximalMinimizer);
    const double k_area = r >= f.inradius() * (1.0 - 1e-12) ? 0.0 : mask_measure(k);
    const SweepSample s = make_sample(r, k_area, mask_measure(grown), inner.components);
    return detail::finish_report(f, s, std::move(grown), true);
}

/// Counts cells inside E^M_{1/r1} but outside E^M_{1/r2} (r2 <= r1), ignoring
/// cells adjacent to E^M_{1/r2}. Nested minimizers give zero.
inline std::size_t check_nestedness(const ScalarField& f, double r1, double r2) {
    if (!(r2 <= r1)) throw Error(ErrorKind::InvalidInput, "nestedness needs r2 <= r1");
    const detail::InnerSet in1 = detail::inner_set(f, r1);
    const detail::InnerSet in2 = detail::inner_set(f, r2);
    const RegionMask e1 = dilate_by_disk(in1.mask, r1);
    const RegionMask e2 = dilate_by_disk(in2.mask, r2);
    const Grid& g = f.grid();
    const auto nx = static_cast<std::int64_t>(g.nx);
    const auto ny = static_cast<std::int64_t>(g.ny);
    std::size_t violations = 0;
    for (std::int64_t j = 0; j < ny; ++j)
        for (std::int64_t i = 0; i < nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j * nx + i);
            if (!(e1.occupancy[k] > 0.5) || !(e2.occupancy[k] < 0.5)) continue;
            bool near = false;
            for (std::int64_t dj = -1; dj <= 1 && !near; ++dj)
                for (std::int64_t di = -1; di <= 1 && !near; ++di) {
                    const std::int64_t ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    near = e2.occupancy[static_cast<std::size_t>(jj * nx + ii)] >= 0.5;
                }
            if (!near) ++violations;
        }
    return violations;
}

}  // namespace isoprofile
