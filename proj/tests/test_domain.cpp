#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include <isoprofile/domain.hpp>
#include <isoprofile/reference.hpp>

using namespace isoprofile;

namespace {

ErrorKind kind_of(const std::string& text) {
    try {
        parse_domain(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error for " << text;
    return ErrorKind::Degenerate;
}

double edge_sum(const JordanDomain& d) {
    double total = 0.0;
    const auto v = d.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % v.size()];
        total += std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    }
    return total;
}

}  // namespace

TEST(Domain, UnitSquare) {
    const JordanDomain d = parse_domain(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]]})");
    EXPECT_EQ(d.size(), 4u);
    EXPECT_DOUBLE_EQ(polygon_area(d), 1.0);
    EXPECT_DOUBLE_EQ(polygon_perimeter(d), 4.0);
    EXPECT_TRUE(d.input_was_ccw());
}

TEST(Domain, Rectangle) {
    const JordanDomain d = parse_domain(R"({"name":"rect","vertices":[[0,0],[4,0],[4,2],[0,2]]})");
    EXPECT_EQ(d.name(), "rect");
    EXPECT_DOUBLE_EQ(polygon_area(d), 8.0);
    EXPECT_DOUBLE_EQ(polygon_perimeter(d), 12.0);
    EXPECT_DOUBLE_EQ(d.bbox().width(), 4.0);
    EXPECT_DOUBLE_EQ(d.bbox().height(), 2.0);
}

TEST(Domain, CrossAreaAndPerimeter) {
    const JordanDomain d = reference::make_cross(4);
    EXPECT_DOUBLE_EQ(polygon_area(d), 12.0);
    EXPECT_NEAR(polygon_perimeter(d), edge_sum(d), 1e-12);
    EXPECT_NEAR(polygon_perimeter(d), 16.0, 1e-12);
}

TEST(Domain, BowTieIsRejected) {
    try {
        parse_domain(R"({"vertices":[[0,0],[1,1],[1,0],[0,1]]})");
        FAIL() << "bow-tie accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
        EXPECT_NE(std::string(e.what()).find("edges"), std::string::npos) << e.what();
    }
}

TEST(Domain, MalformedInput) {
    EXPECT_EQ(kind_of("{not json"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"points":[]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"vertices":[[0,0],[1,0]]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"vertices":[[0,0],[1,0],[1]]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"vertices":[[0,0],[1,0],[1,0],[0,1]]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"vertices":[[0,0],[1,0],[2,0]]})"), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of(R"({"name":3,"vertices":[[0,0],[1,0],[0,1]]})"), ErrorKind::InvalidInput);
}

TEST(Domain, ClosingVertexIsDropped) {
    const JordanDomain d = parse_domain(R"({"vertices":[[0,0],[1,0],[1,1],[0,1],[0,0]]})");
    EXPECT_EQ(d.size(), 4u);
    EXPECT_DOUBLE_EQ(d.area(), 1.0);
}

TEST(Domain, ClockwiseInputIsNormalized) {
    const JordanDomain ccw = parse_domain(R"({"vertices":[[0,0],[4,0],[4,2],[0,2]]})");
    const JordanDomain cw = parse_domain(R"({"vertices":[[0,2],[4,2],[4,0],[0,0]]})");
    EXPECT_FALSE(cw.input_was_ccw());
    EXPECT_GT(detail::signed_area(cw.vertices()), 0.0);
    EXPECT_DOUBLE_EQ(cw.area(), ccw.area());
    EXPECT_DOUBLE_EQ(cw.perimeter(), ccw.perimeter());
}

TEST(Domain, AreaInvariantUnderRotationAndRigidMotion) {
    const JordanDomain d = reference::make_cross(5);
    std::vector<Vec2> v(d.vertices().begin(), d.vertices().end());
    std::rotate(v.begin(), v.begin() + 5, v.end());
    const JordanDomain rotated = JordanDomain::from_vertices(v);
    EXPECT_NEAR(rotated.area(), d.area(), 1e-12 * d.area());

    const double c = std::cos(0.7), s = std::sin(0.7);
    for (Vec2& p : v) p = {c * p.x - s * p.y + 3.5, s * p.x + c * p.y - 1.25};
    const JordanDomain moved = JordanDomain::from_vertices(v);
    EXPECT_NEAR(moved.area(), d.area(), 1e-12 * d.area());
    EXPECT_NEAR(moved.perimeter(), d.perimeter(), 1e-12 * d.perimeter());
}

TEST(Domain, FanDecompositionMatchesShoelace) {
    const JordanDomain d = reference::make_regular_ngon(17, 2.3);
    const auto v = d.vertices();
    double fan = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) fan += 0.5 * std::abs(cross(v[i] - v[0], v[i + 1] - v[0]));
    EXPECT_NEAR(fan, d.area(), 1e-12 * d.area());
}

TEST(Domain, ContainsAndDistance) {
    const JordanDomain d = reference::make_rectangle(4);
    EXPECT_TRUE(d.contains({2, 1}));
    EXPECT_FALSE(d.contains({5, 1}));
    EXPECT_DOUBLE_EQ(d.boundary_distance({2, 1}), 1.0);
    EXPECT_DOUBLE_EQ(d.signed_distance({2, 1}), 1.0);
    EXPECT_DOUBLE_EQ(d.signed_distance({6, 1}), -2.0);
}

TEST(Domain, JsonRoundTrip) {
    const JordanDomain d = reference::make_keyhole(0.2);
    const JordanDomain back = parse_domain(to_json(d).dump());
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(back.vertices()[i], d.vertices()[i]);
    EXPECT_EQ(back.name(), d.name());
}
