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
#include "minimizer.hpp"
#include "morphology.hpp"
#include "parallel.hpp"

namespace isoprofile {

struct RadiusComponents {
    double r = 0.0;
    std::size_t components = 0;
};

struct Sweep {
    std::vector<SweepSample> samples;      // connected samples, r decreasing
    std::vector<RadiusComponents> scan;    // every sampled radius, r decreasing
    std::vector<double> excluded;          // radii refused for a disconnected Omega^r
    std::vector<std::string> warnings;
    double inradius = 0.0;
    double h = 0.0;
    double total_volume = 0.0;
    double boundary_length = 0.0;
};

/// r = R_Omega followed by n radii on a geometric grid from R(1 - 1/n) down
/// to max(4h, R/64).
inline std::vector<double> sweep_radii(const ScalarField& f, std::size_t n) {
    const double big = f.inradius();
    const double hi = big * (1.0 - 1.0 / static_cast<double>(n));
    const double lo = std::min(std::max(4.0 * f.h(), big / 64.0), hi);
    std::vector<double> radii{big};
    for (std::size_t k = 0; k < n; ++k) {
        const double t = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
        radii.push_back(hi * std::pow(lo / hi, t));
    }
    return radii;
}

/// Component counts of Omega^r over the sweep radii (the no-neck diagnostic).
inline std::vector<RadiusComponents> component_scan(const ScalarField& f, std::size_t n) {
    const std::vector<double> radii = sweep_radii(f, n);
    std::vector<RadiusComponents> out(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) {
        const RegionMask m = inner_parallel_mask(f, radii[k]);
        out[k] = {radii[k], label_components(m.grid, support_cells(m)).count};
    });
    return out;
}

inline Sweep compute_sweep(const ScalarField& f, std::size_t n_samples) {
    if (n_samples < 16) throw Error(ErrorKind::InvalidInput, "the sweep needs at least 16 samples");
    const std::vector<double> radii = sweep_radii(f, n_samples);
    std::vector<std::optional<SweepSample>> results(radii.size());
    std::vector<std::size_t> counts(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) {
        const detail::InnerSet inner = detail::inner_set(f, radii[k]);
        counts[k] = inner.components;
        if (inner.components != 1) return;
        const RegionMask grown = dilate_by_disk(inner.mask, radii[k], MaskKind::MaximalMinimizer);
        results[k] = make_sample(radii[k], inner.area, mask_measure(grown), inner.components);
    });

    Sweep sweep;
    sweep.inradius = f.inradius();
    sweep.h = f.h();
    sweep.total_volume = f.domain().area();
    sweep.boundary_length = f.domain().perimeter();
    for (std::size_t k = 0; k < radii.size(); ++k) {
        sweep.scan.push_back({radii[k], counts[k]});
        if (results[k]) {
            sweep.samples.push_back(*results[k]);
        } else {
            sweep.excluded.push_back(radii[k]);
        }
    }
    if (!sweep.excluded.empty())
        sweep.warnings.push_back(std::to_string(sweep.excluded.size()) +
                                 " radii excluded: inner parallel set disconnected (neck) for r in [" +
                                 std::to_string(sweep.excluded.back()) + ", " +
                                 std::to_string(sweep.excluded.front()) + "]");
    if (sweep.samples.empty())
        throw Error(ErrorKind::HypothesisFailure, "inner parallel set disconnected at every sampled radius");
    return sweep;
}

enum class SegmentKind { Ball, Point, LinearGap, Extrapolated };

inline const char* to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Ball: return "ball";
        case SegmentKind::Point: return "point";
        case SegmentKind::LinearGap: return "linear-gap";
        case SegmentKind::Extrapolated: return "extrapolated";
    }
    return "unknown";
}

struct ProfileSegment {
    double kappa = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    SegmentKind kind = SegmentKind::Point;
};

// Supporting line V -> kappa V - g of the profile; sample = -1 for the ball line.
struct SupportLine {
    double kappa = 0.0;
    double g = 0.0;
    int sample = -1;
};

struct Profile {
    std::vector<double> volumes;
    std::vector<double> j_values;
    std::vector<double> kappa_of_v;
    std::vector<SegmentKind> kinds;
    std::vector<int> line_of_v;  // argmax line per row, -1 in the ball regime
    std::vector<ProfileSegment> segments;
    std::vector<SupportLine> lines;  // kappa increasing
    std::vector<SweepSample> samples;
    double ball_threshold = 0.0;
    double total_volume = 0.0;
    double covered_max = 0.0;
    double inradius = 0.0;
    double h = 0.0;
    double boundary_length = 0.0;

    bool covered(std::size_t i) const { return kinds[i] != SegmentKind::Extrapolated; }
};

namespace detail {

// Index of the maximizing line at V; ties keep the smaller kappa.
inline std::size_t argmax_line(const std::vector<SupportLine>& lines, double v) {
    std::size_t best = 0;
    double best_value = lines[0].kappa * v - lines[0].g;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const double value = lines[k].kappa * v - lines[k].g;
        if (value > best_value) {
            best_value = value;
            best = k;
        }
    }
    return best;
}

}  // namespace detail

/// J(V) = 2 sqrt(pi V) below pi R^2 and the Legendre transform
/// sup_kappa (kappa V - G(kappa)) above, on nV uniform volumes in [0, |Omega|].
/// The ball line (kappa = 1/R, G = -pi R) is always part of the supremum.
/// Rows beyond the largest swept volume are kept and marked extrapolated.
inline Profile profile_from_legendre(const Sweep& sweep, std::size_t n_v = 512) {
    if (sweep.samples.empty()) throw Error(ErrorKind::InvalidInput, "empty sweep");
    if (n_v < 8) throw Error(ErrorKind::InvalidInput, "the profile needs at least 8 volume samples");
    Profile p;
    p.inradius = sweep.inradius;
    p.h = sweep.h;
    p.total_volume = sweep.total_volume;
    p.boundary_length = sweep.boundary_length;
    p.ball_threshold = kPi * p.inradius * p.inradius;
    p.samples = sweep.samples;

    const double ball_kappa = 1.0 / p.inradius;
    p.lines.push_back({ball_kappa, -kPi * p.inradius, -1});
    p.covered_max = p.ball_threshold;
    for (std::size_t k = 0; k < sweep.samples.size(); ++k) {
        const SweepSample& s = sweep.samples[k];
        p.covered_max = std::max(p.covered_max, s.volume);
        if (s.kappa > ball_kappa) p.lines.push_back({s.kappa, s.g_value, static_cast<int>(k)});
        else if (s.kappa == ball_kappa) p.lines[0].sample = static_cast<int>(k);
    }
    std::stable_sort(p.lines.begin(), p.lines.end(),
                     [](const SupportLine& a, const SupportLine& b) { return a.kappa < b.kappa; });
    p.covered_max = std::min(p.covered_max, p.total_volume);

    const std::size_t n = n_v;
    p.volumes.resize(n);
    p.j_values.resize(n);
    p.kappa_of_v.resize(n);
    p.kinds.resize(n);
    p.line_of_v.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = i + 1 == n ? p.total_volume
                                    : p.total_volume * static_cast<double>(i) / static_cast<double>(n - 1);
        p.volumes[i] = v;
        if (v < p.ball_threshold) {
            p.j_values[i] = 2.0 * std::sqrt(kPi * v);
            p.kappa_of_v[i] = v > 0.0 ? std::sqrt(kPi / v) : std::numeric_limits<double>::infinity();
            p.kinds[i] = SegmentKind::Ball;
            continue;
        }
        const std::size_t best = detail::argmax_line(p.lines, v);
        p.line_of_v[i] = static_cast<int>(best);
        p.j_values[i] = p.lines[best].kappa * v - p.lines[best].g;
        p.kappa_of_v[i] = p.lines[best].kappa;
        p.kinds[i] = v > p.covered_max ? SegmentKind::Extrapolated : SegmentKind::Point;
    }

    // Group rows into runs sharing kind and supporting line. A run reaching
    // well below the volume of its own maximal minimizer is a straight piece
    // produced by zero-width parts of Omega^r; a run merely straddling that
    // volume only reflects the spacing of the sampled curvatures.
    const double gap_extent = 10.0 * p.h * (1.0 + p.boundary_length);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && p.kinds[j + 1] == p.kinds[i] && p.line_of_v[j + 1] == p.line_of_v[i]) ++j;
        ProfileSegment seg{p.kappa_of_v[i], p.volumes[i], p.volumes[j], p.kinds[i]};
        if (seg.kind == SegmentKind::Ball) seg.kappa = std::sqrt(kPi / std::max(p.volumes[j], 1e-300));
        const int sample = p.line_of_v[i] >= 0 ? p.lines[static_cast<std::size_t>(p.line_of_v[i])].sample : -1;
        const double top = sample >= 0 ? p.samples[static_cast<std::size_t>(sample)].volume : seg.v_max;
        if (seg.kind == SegmentKind::Point && top - seg.v_min >= gap_extent) {
            seg.kind = SegmentKind::LinearGap;
            for (std::size_t k = i; k <= j; ++k) p.kinds[k] = SegmentKind::LinearGap;
        }
        p.segments.push_back(seg);
        i = j + 1;
    }
    return p;
}

/// J at an arbitrary volume in [0, |Omega|] from the profile's lines.
inline double profile_value(const Profile& p, double v) {
    if (!(v >= 0.0) || v > p.total_volume * (1.0 + 1e-12))
        throw Error(ErrorKind::InvalidInput, "volume outside [0, |Omega|]");
    if (v < p.ball_threshold) return 2.0 * std::sqrt(kPi * v);
    const SupportLine& l = p.lines[detail::argmax_line(p.lines, v)];
    return l.kappa * v - l.g;
}

struct KappaOfVolume {
    double kappa = 0.0;
    bool ball_regime = false;
};

/// Curvature of the minimizers of volume V: the maximizing kappa of the
/// Legendre supremum, or sqrt(pi/V) flagged as the ball regime below pi R^2.
inline KappaOfVolume kappa_of_volume(const Profile& p, double v) {
    if (!(v > 0.0) || v > p.total_volume * (1.0 + 1e-12))
        throw Error(ErrorKind::InvalidInput, "volume outside (0, |Omega|]");
    if (v < p.ball_threshold) return {std::sqrt(kPi / v), true};
    return {p.lines[detail::argmax_line(p.lines, v)].kappa, false};
}

/// min J(V)/V over covered rows, refined by a parabola through the
/// discrete minimum and its neighbours.
inline double cheeger_via_profile(const Profile& p) {
    std::size_t best = 0;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.volumes.size(); ++i) {
        if (!(p.volumes[i] > 0.0) || !p.covered(i)) continue;
        const double ratio = p.j_values[i] / p.volumes[i];
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = i;
        }
    }
    if (best == 0 || best + 1 >= p.volumes.size() || !p.covered(best + 1)) return best_ratio;
    const double y0 = p.j_values[best - 1] / p.volumes[best - 1];
    const double y1 = best_ratio;
    const double y2 = p.j_values[best + 1] / p.volumes[best + 1];
    const double curv = y0 - 2.0 * y1 + y2;
    if (!(curv > 0.0) || !std::isfinite(y0)) return best_ratio;
    return std::min(best_ratio, y1 - (y2 - y0) * (y2 - y0) / (8.0 * curv));
}

struct CheegerReport {
    double h_by_profile = std::numeric_limits<double>::quiet_NaN();
    double h_by_inner_formula = std::numeric_limits<double>::quiet_NaN();
    double root_radius = std::numeric_limits<double>::quiet_NaN();
    bool inner_formula_converged = false;
    std::vector<Polyline> cheeger_set_contour;
};

/// Root of |Omega^r| = pi r^2 on (0, R) by 60 bisection steps; the Cheeger
/// set is Omega^r + B_r at the root. Without a sign change the profile value
/// (when given) stands in.
inline CheegerReport cheeger_via_inner_formula(const ScalarField& f, const Profile* profile = nullptr) {
    CheegerReport rep;
    if (profile) rep.h_by_profile = cheeger_via_profile(*profile);
    auto g = [&](double r) { return inner_area(f, r) - kPi * r * r; };
    double lo = 0.0, hi = f.inradius();
    if (!(g(hi) < 0.0)) {
        if (profile) {
            rep.h_by_inner_formula = rep.h_by_profile;
            rep.root_radius = 1.0 / rep.h_by_profile;
        }
        return rep;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    rep.root_radius = 0.5 * (lo + hi);
    rep.h_by_inner_formula = 1.0 / rep.root_radius;
    rep.inner_formula_converged = true;
    const RegionMask inner = inner_parallel_mask(f, rep.root_radius);
    if (any_cell(support_cells(inner)))
        rep.cheeger_set_contour = extract_contours(dilate_by_disk(inner, rep.root_radius), 0.5);
    return rep;
}

struct ConvexityReport {
    double tolerance = 0.0;
    double min_second_diff_j = 0.0;   // on [pi R^2, covered max]
    std::size_t violations_j = 0;
    double min_second_diff_j2 = 0.0;  // on every covered row
    std::size_t violations_j2 = 0;
    double max_second_diff_ball = 0.0;  // J on the ball rows (concave there)
    std::size_t ball_convex_count = 0;
};

/// Discrete second differences of J above the ball threshold and of J^2
/// everywhere covered, against tol = 1e-3 max|J^2| / nV^2.
inline ConvexityReport check_convexity(const Profile& p) {
    const std::size_t n = p.volumes.size();
    if (n < 8) throw Error(ErrorKind::InvalidInput, "convexity check needs at least 8 samples");
    ConvexityReport rep;
    double max_j2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (p.covered(i)) max_j2 = std::max(max_j2, p.j_values[i] * p.j_values[i]);
    rep.tolerance = 1e-3 * max_j2 / (static_cast<double>(n) * static_cast<double>(n));
    rep.min_second_diff_j = std::numeric_limits<double>::infinity();
    rep.min_second_diff_j2 = std::numeric_limits<double>::infinity();
    rep.max_second_diff_ball = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!p.covered(i + 1)) break;
        const double a = p.j_values[i - 1], b = p.j_values[i], c = p.j_values[i + 1];
        const double d2 = a * a - 2.0 * b * b + c * c;
        rep.min_second_diff_j2 = std::min(rep.min_second_diff_j2, d2);
        if (d2 < -rep.tolerance) ++rep.violations_j2;
        const double d1 = a - 2.0 * b + c;
        if (p.volumes[i - 1] >= p.ball_threshold) {
            rep.min_second_diff_j = std::min(rep.min_second_diff_j, d1);
            if (d1 < -rep.tolerance) ++rep.violations_j;
        } else if (p.kinds[i + 1] == SegmentKind::Ball) {
            rep.max_second_diff_ball = std::max(rep.max_second_diff_ball, d1);
            if (d1 > rep.tolerance) ++rep.ball_convex_count;
        }
    }
    return rep;
}

struct DualityEntry {
    double kappa = 0.0;
    double g = 0.0;
    double g_recovered = 0.0;
    double interpolation_error = 0.0;
};

struct DualityReport {
    std::vector<DualityEntry> entries;
    std::size_t violations = 0;
    double max_gap = 0.0;
};

/// Re-conjugates the tabulated J: G_rec(kappa) = max over covered rows
/// V >= pi R^2 of (kappa V - J(V)). Each sampled G must satisfy
/// 0 <= G - G_rec <= 2 eps, eps being the error of the V grid at that kappa:
/// dV times the jump in argmax curvature across the grid points bracketing it.
inline DualityReport legendre_duality_check(const Profile& p) {
    DualityReport rep;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < p.volumes.size(); ++i)
        if (p.covered(i) && p.line_of_v[i] >= 0) rows.push_back(i);
    if (rows.empty()) return rep;
    const double dv = p.volumes.size() > 1 ? p.volumes[1] - p.volumes[0] : 0.0;
    for (std::size_t k = 0; k < p.lines.size(); ++k) {
        if (p.lines[k].sample < 0) continue;
        DualityEntry e;
        e.kappa = p.lines[k].kappa;
        e.g = p.lines[k].g;
        e.g_recovered = -std::numeric_limits<double>::infinity();
        for (std::size_t i : rows) e.g_recovered = std::max(e.g_recovered, e.kappa * p.volumes[i] - p.j_values[i]);
        double below = e.kappa, above = e.kappa;
        for (std::size_t i : rows)
            if (static_cast<std::size_t>(p.line_of_v[i]) <= k) below = p.kappa_of_v[i];
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            if (static_cast<std::size_t>(p.line_of_v[*it]) >= k) above = p.kappa_of_v[*it];
        e.interpolation_error = dv * (above - below);
        const double gap = e.g - e.g_recovered;
        rep.max_gap = std::max(rep.max_gap, gap);
        if (gap < -1e-12 * (1.0 + std::abs(e.g)) || gap > 2.0 * e.interpolation_error + 1e-12 * (1.0 + std::abs(e.g)))
            ++rep.violations;
        rep.entries.push_back(e);
    }
    return rep;
}

/// Smallest sampled kappa-bar such that every sampled minimizer with r <= 1/kappa-bar
/// fills Omega up to 5 h P(Omega). Domains whose inner areas bend away from the
/// Steiner polynomial |Omega| - rP + pi r^2 (corners) have no interior ball
/// condition and get none.
inline std::optional<double> interior_ball_report(const ScalarField& f, const Sweep& sweep) {
    const double area = f.domain().area();
    const double perim = f.domain().perimeter();
    double num = 0.0, den = 0.0;
    for (const SweepSample& s : sweep.samples) {
        if (s.r > 0.5 * sweep.inradius) continue;
        const double defect = s.area_inner - (area - s.r * perim + kPi * s.r * s.r);
        num += defect * s.r * s.r;
        den += s.r * s.r * s.r * s.r;
    }
    if (den > 0.0 && num / den > 1e-3) return std::nullopt;
    const double floor_volume = area - 5.0 * f.h() * perim;
    std::optional<double> best;
    // Samples run from large r to small r; keep the largest r whose tail all passes.
    for (auto it = sweep.samples.rbegin(); it != sweep.samples.rend(); ++it) {
        if (it->volume < floor_volume) break;
        best = it->kappa;
    }
    return best;
}

/// Minimizer with prescribed volume V: a ball below pi R^2; on a straight
/// piece of the profile a member K + B_r of the family sharing that
/// curvature; otherwise the maximal minimizer whose volume is V, with r
/// bisected between the two samples that bracket V.
inline MinimizerReport minimizer_for_volume(const ScalarField& f, const Profile& p, double v) {
    const KappaOfVolume kv = kappa_of_volume(p, v);
    if (kv.ball_regime) {
        const double rho = std::sqrt(v / kPi);
        RegionMask seed{f.grid(), std::vector<double>(f.grid().size(), 0.0), MaskKind::Custom, 0.0, false};
        seed.occupancy[f.argmax()] = 0.5;
        RegionMask ball = dilate_by_disk(seed, rho, MaskKind::MinimalMinimizer);
        const SweepSample s = make_sample(rho, 0.0, mask_measure(ball), 1);
        return detail::finish_report(f, s, std::move(ball), false);
    }
    const std::size_t line = detail::argmax_line(p.lines, v);
    bool straight = false;
    for (const ProfileSegment& seg : p.segments)
        if (seg.kind == SegmentKind::LinearGap && seg.kappa == p.lines[line].kappa) straight = true;
    if (straight) return family_member(f, 1.0 / kv.kappa, v);
    // Samples run in decreasing r with increasing volume.
    double r_small = 1.0 / kv.kappa, r_large = 1.0 / kv.kappa;
    bool below = false, above = false;
    for (const SweepSample& s : p.samples) {
        if (s.volume <= v && (!below || s.r < r_large)) r_large = s.r, below = true;
        if (s.volume >= v && (!above || s.r > r_small)) r_small = s.r, above = true;
    }
    double r = below ? r_large : r_small;
    if (below && above && r_small < r_large) {
        for (int it = 0; it < 40 && r_large - r_small > 1e-3 * f.h(); ++it) {
            const double mid = 0.5 * (r_small + r_large);
            double vol = 0.0;
            try {
                vol = sweep_sample(f, mid).volume;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::HypothesisFailure) throw;
                break;
            }
            (vol < v ? r_large : r_small) = mid;
        }
        r = 0.5 * (r_small + r_large);
    }
    return maximal_minimizer(f, r);
}

/// Minimizer at a prescribed curvature kappa >= 1/R.
inline MinimizerReport minimizer_for_kappa(const ScalarField& f, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorKind::InvalidInput, "kappa must be positive");
    if (kappa < (1.0 / f.inradius()) * (1.0 - 1e-12))
        throw Error(ErrorKind::InvalidInput, "kappa below 1/R (" + std::to_string(1.0 / f.inradius()) + ")");
    return maximal_minimizer(f, std::min(1.0 / kappa, f.inradius()));
}

}  // namespace isoprofile
