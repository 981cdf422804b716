#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include <isoprofile/profile.hpp>
#include <isoprofile/reference.hpp>

using namespace isoprofile;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kH = 1.0 / 100;

struct Fixture {
    ScalarField field;
    Sweep sweep;
    Profile profile;
};

Fixture make_fixture(const JordanDomain& d, std::size_t n = 64, double h = kH) {
    ScalarField f = build_distance_field(d, h);
    Sweep s = compute_sweep(f, n);
    Profile p = profile_from_legendre(s, 512);
    return {std::move(f), std::move(s), std::move(p)};
}

const Fixture& rect4() {
    static const Fixture fx = make_fixture(reference::make_rectangle(4));
    return fx;
}

const Fixture& cross4() {
    static const Fixture fx = make_fixture(reference::make_cross(4));
    return fx;
}

const Fixture& ngon(std::size_t n) {
    static std::map<std::size_t, Fixture> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_fixture(reference::make_regular_ngon(n, 1.0))).first;
    return it->second;
}

ErrorKind failure(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST(SweepRun, RectangleSamples) {
    const Sweep& s = rect4().sweep;
    ASSERT_EQ(s.samples.size(), 65u);
    EXPECT_DOUBLE_EQ(s.samples.front().r, s.inradius);
    EXPECT_NEAR(s.inradius, 1.0, 1e-9);
    EXPECT_NEAR(s.samples.back().r, std::max(4 * kH, 1.0 / 64), 1e-12);
    EXPECT_TRUE(s.excluded.empty());
    EXPECT_TRUE(s.warnings.empty());
    EXPECT_DOUBLE_EQ(s.total_volume, 8.0);
    for (std::size_t k = 1; k < s.samples.size(); ++k) EXPECT_LT(s.samples[k].r, s.samples[k - 1].r);
}

TEST(SweepRun, DumbbellNeckIsExcluded) {
    const ScalarField f = build_distance_field(reference::make_dumbbell(2, 0.2, 0.5), kH);
    const Sweep s = compute_sweep(f, 64);
    EXPECT_FALSE(s.excluded.empty());
    EXPECT_FALSE(s.warnings.empty());
    for (double r : s.excluded) EXPECT_GT(r, 0.1 - kH);
    for (const SweepSample& x : s.samples) EXPECT_LE(x.r, 0.1 + kH);
    EXPECT_EQ(s.samples.size() + s.excluded.size(), 65u);
}

TEST(SweepRun, AllDisconnectedFails) {
    const ScalarField f = build_distance_field(reference::make_dumbbell(2, 0.04, 0.5), kH);
    EXPECT_EQ(failure([&] { compute_sweep(f, 16); }), ErrorKind::HypothesisFailure);
}

TEST(SweepRun, TooFewSamples) {
    EXPECT_EQ(failure([] { compute_sweep(rect4().field, 15); }), ErrorKind::InvalidInput);
}

TEST(SweepRun, PolygonMatchesExactParallelSets) {
    // Inner parallel sets of a regular polygon are scaled copies of it.
    const Fixture& fx = ngon(64);
    const double apothem = std::cos(pi / 64);
    const double area = fx.field.domain().area(), perim = fx.field.domain().perimeter();
    const Sweep& s = fx.sweep;
    for (std::size_t k = 0; k < s.samples.size(); ++k) {
        const SweepSample& x = s.samples[k];
        const double t = std::max(0.0, (apothem - x.r) / apothem);
        const double exact = area * t * t + x.r * perim * t + pi * x.r * x.r;
        EXPECT_NEAR(x.volume, exact, 0.05 * kH * perim) << x.r;
        EXPECT_NEAR(x.area_inner, area * t * t, 0.05 * kH * perim * t) << x.r;
        if (k > 0) {
            EXPECT_GE(x.area_inner, s.samples[k - 1].area_inner);
        }
    }
}

TEST(Profile, RectangleValues) {
    const Profile& p = rect4().profile;
    EXPECT_NEAR(profile_value(p, pi), 2 * pi, 0.01 * 2 * pi);
    EXPECT_NEAR(profile_value(p, 5), pi + 5, 0.01 * (pi + 5));
    EXPECT_NEAR(profile_value(p, 7 + pi / 4), 8 + pi, 0.01 * (8 + pi));
    EXPECT_NEAR(profile_value(p, 8), 12, 0.01 * 12);
    for (std::size_t i = 0; i < p.volumes.size(); ++i) {
        const double v = p.volumes[i];
        if (v <= 0 || !p.covered(i)) continue;
        const double ref = reference::rectangle_profile(4, v);
        EXPECT_NEAR(p.j_values[i], ref, 0.01 * ref) << v;
    }
}

TEST(Profile, CrossValues) {
    const Profile& p = cross4().profile;
    EXPECT_NEAR(profile_value(p, 12), 16, 0.01 * 16);
    EXPECT_NEAR(profile_value(p, 9), reference::cross_profile(4, 9), 0.01 * 11.29);
    EXPECT_NEAR(p.ball_threshold, 2 * pi, 0.01 * 2 * pi);
}

TEST(Profile, BallRegime) {
    const Profile& p = rect4().profile;
    for (std::size_t i = 0; i < p.volumes.size() && p.volumes[i] < p.ball_threshold; ++i) {
        EXPECT_EQ(p.kinds[i], SegmentKind::Ball);
        EXPECT_DOUBLE_EQ(p.j_values[i], 2 * std::sqrt(pi * p.volumes[i]));
        EXPECT_EQ(p.line_of_v[i], -1);
    }
    EXPECT_DOUBLE_EQ(profile_value(p, 0.0), 0.0);
}

TEST(Profile, Invariants) {
    for (const Fixture* fx : {&rect4(), &cross4(), &ngon(7)}) {
        const Profile& p = fx->profile;
        ASSERT_EQ(p.volumes.size(), 512u);
        EXPECT_DOUBLE_EQ(p.volumes.front(), 0.0);
        EXPECT_DOUBLE_EQ(p.volumes.back(), p.total_volume);
        for (std::size_t i = 1; i < p.volumes.size(); ++i) {
            EXPECT_GT(p.volumes[i], p.volumes[i - 1]);
            EXPECT_GE(p.j_values[i], p.j_values[i - 1] - 1e-12);
            EXPECT_GE(p.j_values[i], 2 * std::sqrt(pi * p.volumes[i]) * (1 - 1e-3));
            EXPECT_GE(p.kappa_of_v[i], 0.0);
        }
        for (std::size_t k = 1; k < p.lines.size(); ++k) EXPECT_GT(p.lines[k].kappa, p.lines[k - 1].kappa);
        EXPECT_NEAR(p.lines.front().kappa, 1 / p.inradius, 1e-12);
        EXPECT_NEAR(p.lines.front().g, -pi * p.inradius, 1e-12);
        EXPECT_LE(p.covered_max, p.total_volume);
    }
}

TEST(Profile, SegmentsCoverTheRows) {
    const Profile& p = rect4().profile;
    ASSERT_FALSE(p.segments.empty());
    EXPECT_EQ(p.segments.front().kind, SegmentKind::Ball);
    for (std::size_t k = 1; k < p.segments.size(); ++k)
        EXPECT_LE(p.segments[k - 1].v_max, p.segments[k].v_min);
    EXPECT_EQ(p.segments.back().kind, SegmentKind::Extrapolated);
    EXPECT_NEAR(p.covered_max, 8.0, 2 * kH * 12);
}

TEST(Profile, RectangleLinearGap) {
    const Profile& p = rect4().profile;
    const ProfileSegment* gap = nullptr;
    for (const ProfileSegment& s : p.segments)
        if (s.kind == SegmentKind::LinearGap) gap = &s;
    ASSERT_NE(gap, nullptr);
    EXPECT_NEAR(gap->kappa, 1.0, 1e-9);
    EXPECT_NEAR(gap->v_min, pi, 0.02 * pi);
    EXPECT_NEAR(gap->v_max, pi + 4, 0.02 * (pi + 4));
    // J is affine with slope kappa on the gap.
    for (std::size_t i = 0; i < p.volumes.size(); ++i) {
        if (p.volumes[i] < gap->v_min || p.volumes[i] > gap->v_max) continue;
        EXPECT_NEAR(p.j_values[i] - gap->kappa * p.volumes[i], p.j_values[i] - p.volumes[i], 1e-12);
        EXPECT_NEAR(p.j_values[i], pi + p.volumes[i], 0.01 * (pi + p.volumes[i]));
        EXPECT_EQ(p.kinds[i], SegmentKind::LinearGap);
    }
}

TEST(Profile, CrossHasNoLinearGap) {
    for (const ProfileSegment& s : cross4().profile.segments) EXPECT_NE(s.kind, SegmentKind::LinearGap);
}

TEST(Kappa, Rectangle) {
    const Profile& p = rect4().profile;
    EXPECT_NEAR(kappa_of_volume(p, pi + 2).kappa, 1.0, 1e-9);
    EXPECT_FALSE(kappa_of_volume(p, pi + 2).ball_regime);
    EXPECT_NEAR(kappa_of_volume(p, 7 + pi / 4).kappa, 2.0, 0.03 * 2);
    const KappaOfVolume small = kappa_of_volume(p, 1.0);
    EXPECT_TRUE(small.ball_regime);
    EXPECT_DOUBLE_EQ(small.kappa, std::sqrt(pi));
}

TEST(Kappa, IsTheSlope) {
    const Profile& p = cross4().profile;
    for (double v : {7.0, 9.0, 10.5, 11.5}) {
        const double d = 0.05;
        const double slope = (profile_value(p, v + d) - profile_value(p, v - d)) / (2 * d);
        EXPECT_NEAR(kappa_of_volume(p, v).kappa, slope, 0.05 * slope) << v;
        // kappa is read off the sampled radii, which step by about 7% at 64 samples.
        EXPECT_NEAR(kappa_of_volume(p, v).kappa, reference::cross_kappa(4, v), 0.05 * slope) << v;
    }
}

TEST(Cheeger, Rectangle) {
    const Fixture& fx = rect4();
    const double expected = reference::rectangle_cheeger(4);
    EXPECT_NEAR(cheeger_via_profile(fx.profile), expected, 0.005 * expected);
    const CheegerReport rep = cheeger_via_inner_formula(fx.field, &fx.profile);
    EXPECT_TRUE(rep.inner_formula_converged);
    EXPECT_NEAR(rep.h_by_inner_formula, expected, 0.005 * expected);
    EXPECT_NEAR(rep.root_radius, 1 / expected, 0.005);
    ASSERT_FALSE(rep.cheeger_set_contour.empty());
    const double len = polyline_length(rep.cheeger_set_contour.front());
    const double area = std::abs(polyline_signed_area(rep.cheeger_set_contour.front()));
    EXPECT_NEAR(len / area, expected, 0.01 * expected);
}

TEST(Cheeger, ProfileBoundsEveryRatio) {
    const Profile& p = cross4().profile;
    const double hc = cheeger_via_profile(p);
    for (std::size_t i = 1; i < p.volumes.size(); ++i) {
        if (p.covered(i)) {
            EXPECT_LE(hc, p.j_values[i] / p.volumes[i] * (1 + 1e-12));
        }
    }
    const double inner = cheeger_via_inner_formula(cross4().field).h_by_inner_formula;
    EXPECT_NEAR(hc, inner, 0.005 * inner);
}

TEST(Cheeger, NearlyDiskAndScaling) {
    const Fixture& fx = ngon(256);
    const double h1 = cheeger_via_inner_formula(fx.field).h_by_inner_formula;
    EXPECT_NEAR(h1, 2 / fx.field.inradius(), 0.01 * h1);
    EXPECT_NEAR(cheeger_via_profile(fx.profile), h1, 0.01 * h1);

    const ScalarField big = build_distance_field(reference::make_regular_ngon(7, 2.0), 2 * kH);
    const ScalarField small = build_distance_field(reference::make_regular_ngon(7, 1.0), kH);
    const double hb = cheeger_via_inner_formula(big).h_by_inner_formula;
    const double hs = cheeger_via_inner_formula(small).h_by_inner_formula;
    EXPECT_NEAR(hs, 2 * hb, 1e-3 * hs);
}

TEST(Convexity, References) {
    for (const Fixture* fx : {&rect4(), &cross4(), &ngon(7)}) {
        const ConvexityReport c = check_convexity(fx->profile);
        EXPECT_EQ(c.violations_j, 0u);
        EXPECT_EQ(c.violations_j2, 0u);
        EXPECT_GT(c.tolerance, 0.0);
        EXPECT_LE(c.max_second_diff_ball, 0.0);
    }
}

TEST(Duality, References) {
    for (const Fixture* fx : {&rect4(), &cross4(), &ngon(7)}) {
        const DualityReport d = legendre_duality_check(fx->profile);
        EXPECT_EQ(d.violations, 0u);
        EXPECT_FALSE(d.entries.empty());
        for (const DualityEntry& e : d.entries) EXPECT_GE(e.g - e.g_recovered, -1e-12 * (1 + std::abs(e.g)));
    }
}

TEST(InteriorBall, CornersHaveNone) {
    EXPECT_FALSE(interior_ball_report(rect4().field, rect4().sweep).has_value());
    EXPECT_FALSE(interior_ball_report(cross4().field, cross4().sweep).has_value());
}

TEST(InteriorBall, Stadium) {
    const Fixture fx = make_fixture(reference::make_stadium(512, 2, 1));
    const auto kb = interior_ball_report(fx.field, fx.sweep);
    ASSERT_TRUE(kb.has_value());
    EXPECT_NEAR(*kb, 1.0, 0.1);
}

TEST(InteriorBall, NearlyDisk) {
    const Fixture& fx = ngon(256);
    const auto kb = interior_ball_report(fx.field, fx.sweep);
    ASSERT_TRUE(kb.has_value());
    EXPECT_NEAR(*kb, 1 / fx.field.inradius(), 0.05);
}

TEST(VolumeMinimizer, ReadsBackItsVolume) {
    const Fixture& fx = rect4();
    for (double v : {2.0, 4.0, 6.0, 7.5}) {
        const MinimizerReport rep = minimizer_for_volume(fx.field, fx.profile, v);
        EXPECT_NEAR(rep.sample.volume, v, 0.01 * v) << v;
        ASSERT_FALSE(rep.contours.empty());
        EXPECT_NEAR(polyline_length(rep.contours.front()), profile_value(fx.profile, v), 0.015 * profile_value(fx.profile, v));
    }
    EXPECT_TRUE(minimizer_for_volume(fx.field, fx.profile, 5.0).family);
    EXPECT_FALSE(minimizer_for_volume(fx.field, fx.profile, 7.5).family);
}

TEST(VolumeMinimizer, Cross) {
    const Fixture& fx = cross4();
    for (double v : {7.0, 9.0, 11.0}) {
        const MinimizerReport rep = minimizer_for_volume(fx.field, fx.profile, v);
        EXPECT_NEAR(rep.sample.volume, v, 0.01 * v) << v;
    }
}

TEST(KappaMinimizer, Errors) {
    EXPECT_EQ(failure([] { minimizer_for_kappa(rect4().field, 0.5); }), ErrorKind::InvalidInput);
    EXPECT_EQ(failure([] { minimizer_for_kappa(rect4().field, -1); }), ErrorKind::InvalidInput);
    EXPECT_NEAR(minimizer_for_kappa(rect4().field, 2).sample.volume, 7 + pi / 4, 0.01 * 7.8);
}
