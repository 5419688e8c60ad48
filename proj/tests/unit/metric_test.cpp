#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "jumpgauge/metric.hpp"
#include "jumpgauge/sampling.hpp"

namespace jg = jumpgauge;
using jg::MetricSpace;
using jg::Point;

namespace {

std::vector<MetricSpace> all_spaces() {
    return {MetricSpace::circle(2.0),
            MetricSpace::circle(3.0),
            MetricSpace::interval(),
            MetricSpace::triode(),
            MetricSpace::window(-4.0, 4.0),
            MetricSpace::power(MetricSpace::circle(2.0), 2, jg::ProductMode::Sum),
            MetricSpace::power(MetricSpace::triode(), 3, jg::ProductMode::Averaged)};
}

// Midpoint by dense scan: the circle point minimizing max distance to both ends.
double scan_midpoint(double p, double q, double L) {
    double best = 0.0, best_cost = 1e300;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = L * k / n;
        const double cost = std::max(jg::distance(MetricSpace::circle(L), Point::circle(x, L), Point::circle(p, L)),
                                     jg::distance(MetricSpace::circle(L), Point::circle(x, L), Point::circle(q, L)));
        if (cost < best_cost) {
            best_cost = cost;
            best = x;
        }
    }
    return best;
}

}  // namespace

TEST(CircleDistance, AntipodalIsHalfCircumference) {
    EXPECT_DOUBLE_EQ(jg::distance(MetricSpace::circle(2.0), Point::circle(0.0), Point::circle(1.0)), 1.0);
}

TEST(CircleDistance, WrapsAroundZero) {
    EXPECT_NEAR(jg::distance(MetricSpace::circle(2.0), Point::circle(0.2), Point::circle(1.9)), 0.3, 1e-15);
}

TEST(TriodeDistance, CenterToTip) {
    EXPECT_DOUBLE_EQ(jg::distance(MetricSpace::triode(), Point::triode(jg::Leg::B, 1.0), Point::triode(jg::Leg::B, 0.0)), 1.0);
}

TEST(TriodeDistance, TipToTipIsPlanarChord) {
    // Unit vectors 120 degrees apart: chord 2 sin(60 deg).
    const double chord = 2.0 * std::sin(M_PI / 3.0);
    EXPECT_NEAR(jg::distance(MetricSpace::triode(), Point::triode(jg::Leg::A, 1.0), Point::triode(jg::Leg::B, 1.0)), chord, 1e-12);
    EXPECT_NEAR(chord, 1.7320508, 1e-7);
}

TEST(TriodeDistance, CenterEqualAcrossLegs) {
    EXPECT_EQ(jg::distance(MetricSpace::triode(), Point::triode(jg::Leg::A, 0.0), Point::triode(jg::Leg::C, 0.0)), 0.0);
    EXPECT_TRUE(Point::triode(jg::Leg::C, 0.0).is_center());
}

TEST(Distance, MismatchedVariantsThrow) {
    EXPECT_THROW(jg::distance(MetricSpace::circle(), Point::interval(0.5), Point::circle(0.5)), jg::SpaceMismatch);
}

TEST(Diameter, EquilateralTriple) {
    const std::vector<Point> pts{Point::circle(0.0), Point::circle(2.0 / 3.0), Point::circle(4.0 / 3.0)};
    EXPECT_NEAR(jg::diameter(MetricSpace::circle(), pts), 2.0 / 3.0, 1e-15);
}

TEST(Diameter, SingletonAndPairAndEmpty) {
    const std::vector<Point> one{Point::circle(1.3)};
    EXPECT_EQ(jg::diameter(MetricSpace::circle(), one), 0.0);
    const std::vector<Point> two{Point::interval(0.1), Point::interval(0.4)};
    EXPECT_NEAR(jg::diameter(MetricSpace::interval(), two), 0.3, 1e-15);
    EXPECT_THROW(jg::diameter(MetricSpace::interval(), std::vector<Point>{}), jg::DomainError);
}

TEST(Grid, CircleFourPoints) {
    const auto g = jg::grid(MetricSpace::circle(), 4);
    ASSERT_EQ(g.points.size(), 4u);
    const double want[] = {0.0, 0.5, 1.0, 1.5};
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g.points[i].x, want[i]);
    EXPECT_DOUBLE_EQ(g.mesh, 0.25);
}

TEST(Grid, IntervalThreePoints) {
    const auto g = jg::grid(MetricSpace::interval(), 3);
    ASSERT_EQ(g.points.size(), 3u);
    EXPECT_EQ(g.points[0].x, 0.0);
    EXPECT_EQ(g.points[1].x, 0.5);
    EXPECT_EQ(g.points[2].x, 1.0);
}

TEST(Grid, TriodeSharesCenter) {
    EXPECT_EQ(jg::grid(MetricSpace::triode(), 4).points.size(), 10u);
    EXPECT_EQ(jg::grid(MetricSpace::triode(), 200).points.size(), 598u);
}

TEST(Grid, DiameterApproachesSpaceDiameter) {
    for (const auto& space : {MetricSpace::circle(2.0), MetricSpace::interval(), MetricSpace::triode()}) {
        for (std::size_t n : {7u, 40u, 101u}) {
            const auto g = jg::grid(space, n);
            const double d = jg::diameter(space, g.points);
            EXPECT_LE(d, jg::space_diameter(space) + 1e-12);
            EXPECT_GE(d, jg::space_diameter(space) - g.mesh - 1e-12) << jg::space_name(space) << " n=" << n;
        }
    }
    EXPECT_DOUBLE_EQ(jg::space_diameter(MetricSpace::circle(2.0)), 1.0);
}

TEST(Geodesic, CircleExamples) {
    const auto space = MetricSpace::circle();
    EXPECT_DOUBLE_EQ(jg::geodesic_point(space, Point::circle(0.0), Point::circle(0.5), 0.5).x, 0.25);
    const auto p = Point::circle(1.8), q = Point::circle(0.2);
    EXPECT_EQ(jg::geodesic_point(space, p, q, 0.0).x, p.x);
    EXPECT_EQ(jg::geodesic_point(space, p, q, 1.0).x, q.x);
    const double mid = jg::geodesic_point(space, p, q, 0.5).x;
    EXPECT_LE(jg::distance(MetricSpace::circle(2.0), Point::circle(mid), Point::circle(scan_midpoint(1.8, 0.2, 2.0))), 2e-5);
    EXPECT_NEAR(jg::distance(MetricSpace::circle(2.0), Point::circle(mid), Point::circle(0.0)), 0.0, 1e-12);
}

TEST(Geodesic, AntipodalCircleThrows) {
    EXPECT_THROW(jg::geodesic_point(MetricSpace::circle(), Point::circle(0.0), Point::circle(1.0), 0.5),
                 jg::DomainError);
}

TEST(Geodesic, FractionOfDistance) {
    jg::Rng rng(11);
    for (const auto& space : {MetricSpace::circle(2.0), MetricSpace::interval(), MetricSpace::window(-3.0, 5.0)}) {
        for (int i = 0; i < 2000; ++i) {
            const auto p = jg::random_point(space, rng), q = jg::random_point(space, rng);
            if (space.is_circle() && std::fabs(jg::distance(space, p, q) - 1.0) < 1e-9) continue;
            const double t = jg::uniform01(rng);
            const auto m = jg::geodesic_point(space, p, q, t);
            EXPECT_NEAR(jg::distance(space, p, m), t * jg::distance(space, p, q), 1e-12);
        }
    }
}

TEST(Geodesic, TriodeRejected) {
    EXPECT_THROW(jg::geodesic_point(MetricSpace::triode(), Point::triode(jg::Leg::A, 1.0),
                                    Point::triode(jg::Leg::B, 1.0), 0.5),
                 jg::DomainError);
}

TEST(MetricAxioms, RandomTriples) {
    for (const auto& space : all_spaces()) {
        jg::Rng rng(jg::hash_text(jg::space_name(space)));
        for (int i = 0; i < 10000; ++i) {
            const auto p = jg::random_point(space, rng);
            const auto q = jg::random_point(space, rng);
            const auto r = jg::random_point(space, rng);
            ASSERT_EQ(jg::distance(space, p, p), 0.0);
            ASSERT_EQ(jg::distance(space, p, q), jg::distance(space, q, p));
            ASSERT_LE(jg::distance(space, p, r), jg::distance(space, p, q) + jg::distance(space, q, r) + 1e-12)
                << jg::space_name(space);
        }
    }
}

TEST(Json, PointsAndSpacesRoundTrip) {
    jg::Rng rng(5);
    for (const auto& space : all_spaces()) {
        nlohmann::json js = space;
        EXPECT_EQ(js.get<MetricSpace>(), space);
        for (int i = 0; i < 50; ++i) {
            const auto p = jg::random_point(space, rng);
            nlohmann::json jp = p;
            EXPECT_EQ(jg::distance(space, jp.get<Point>(), p), 0.0);
        }
    }
}
