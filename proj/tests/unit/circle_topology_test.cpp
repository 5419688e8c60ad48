#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "jumpgauge/circle_topology.hpp"
#include "jumpgauge/constructions.hpp"
#include "jumpgauge/sampling.hpp"

namespace jg = jumpgauge;
using jg::Arc;
using jg::Point;

namespace {

double ccw(double from, double to, double L) {
    double o = std::fmod(to - from, L);
    if (o < 0) o += L;
    return o;
}

// Shortest counterclockwise arc starting at an input point that holds every input point.
double scan_cover_length(const std::vector<Point>& pts, double L) {
    double best = L;
    for (const auto& s : pts) {
        double reach = 0.0;
        for (const auto& p : pts) reach = std::max(reach, ccw(s.x, p.x, L));
        best = std::min(best, reach);
    }
    return best;
}

std::vector<double> loop_params(std::size_t n, double turns, double L = 2.0, double offset = 0.0) {
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(offset + turns * L * static_cast<double>(k) / static_cast<double>(n));
    return out;
}

}  // namespace

TEST(ArcCover, SmallSetStartsAtZero) {
    const std::vector<Point> pts{Point::circle(0.0), Point::circle(0.3), Point::circle(0.5)};
    const auto arc = jg::arc_cover(pts);
    ASSERT_TRUE(arc.has_value());
    EXPECT_EQ(arc->start.x, 0.0);
    EXPECT_DOUBLE_EQ(arc->length, 0.5);
    EXPECT_DOUBLE_EQ(arc->length, scan_cover_length(pts, 2.0));
    for (const auto& p : pts) EXPECT_TRUE(arc->contains(p));
}

TEST(ArcCover, EquilateralHasNone) {
    const std::vector<Point> pts{Point::circle(0.0), Point::circle(2.0 / 3.0), Point::circle(4.0 / 3.0)};
    EXPECT_FALSE(jg::arc_cover(pts).has_value());
}

TEST(ArcCover, SingletonIsDegenerate) {
    const std::vector<Point> pts{Point::circle(1.25)};
    const auto arc = jg::arc_cover(pts);
    ASSERT_TRUE(arc.has_value());
    EXPECT_EQ(arc->length, 0.0);
    EXPECT_EQ(arc->start.x, 1.25);
}

TEST(ArcCover, RandomSetsAgreeWithScan) {
    jg::Rng rng(23);
    int covered = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t k = 1 + rng() % 8;
        const double c = 2.0 * jg::uniform01(rng);
        const double spread = 0.66 * jg::uniform01(rng);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < k; ++i) pts.push_back(Point::circle(c + spread * jg::uniform01(rng)));
        const double diam = jg::diameter(jg::MetricSpace::circle(), pts);
        ASSERT_LT(diam, 2.0 / 3.0);
        const auto arc = jg::arc_cover(pts);
        ASSERT_TRUE(arc.has_value());
        EXPECT_NEAR(arc->length, diam, 1e-12);
        EXPECT_NEAR(arc->length, scan_cover_length(pts, 2.0), 1e-12);
        for (const auto& p : pts) EXPECT_TRUE(arc->contains(p));
        ++covered;
    }
    EXPECT_EQ(covered, 10000);
}

TEST(ArcCover, OtherCircumference) {
    const std::vector<Point> pts{Point::circle(2.9, 3.0), Point::circle(0.4, 3.0)};
    const auto arc = jg::arc_cover(pts, 3.0);
    ASSERT_TRUE(arc.has_value());
    EXPECT_DOUBLE_EQ(arc->start.x, 2.9);
    EXPECT_NEAR(arc->length, 0.5, 1e-15);
}

TEST(Winding, BasicLoops) {
    EXPECT_EQ(jg::winding_number(jg::make_loop(loop_params(200, 1.0))), 1);
    EXPECT_EQ(jg::winding_number(jg::make_loop(std::vector<double>(50, 0.7))), 0);
    EXPECT_EQ(jg::winding_number(jg::make_loop(loop_params(200, -1.0))), -1);
    EXPECT_EQ(jg::winding_number(jg::make_loop(loop_params(300, 3.0))), 3);
    EXPECT_EQ(jg::winding_number(jg::make_loop(loop_params(90, 2.0, 3.0), 3.0)), 2);
}

TEST(Winding, HalfTurnStepIsAmbiguous) {
    const std::vector<double> params{0.0, 1.0};
    EXPECT_THROW(jg::winding_number(jg::make_loop(params)), jg::DomainError);
}

TEST(Winding, StableUnderSmallPerturbation) {
    jg::Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const int turns = static_cast<int>(rng() % 5) - 2;
        const std::size_t n = 64;
        auto params = loop_params(n, turns, 2.0, jg::uniform01(rng));
        const auto loop = jg::make_loop(params);
        ASSERT_LT(loop.max_step, 0.5);
        for (auto& p : params) p += (jg::uniform01(rng) * 2.0 - 1.0) * 0.2499;
        EXPECT_EQ(jg::winding_number(jg::make_loop(params)), jg::winding_number(loop));
    }
}

TEST(Interpolate, IdentityAndConstant) {
    const std::size_t n = 20;
    std::vector<std::pair<double, Point>> ident, flat;
    std::vector<Arc> ident_arcs, flat_arcs;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = 2.0 * static_cast<double>(i) / n;
        ident.emplace_back(s, Point::circle(s));
        flat.emplace_back(s, Point::circle(0.4));
        flat_arcs.push_back({Point::circle(0.4), 0.0, 2.0});
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<Point> ends{ident[i].second, ident[(i + 1) % n].second};
        ident_arcs.push_back(*jg::arc_cover(ends));
    }
    const auto f = jg::interpolate_unary(ident, ident_arcs);
    const auto g = jg::interpolate_unary(flat, flat_arcs);
    std::vector<double> fs, gs;
    for (int k = 0; k < 400; ++k) {
        const Point s = Point::circle(2.0 * k / 400.0);
        EXPECT_NEAR(jg::distance(jg::MetricSpace::circle(), f(s), s), 0.0, 1e-12);
        fs.push_back(f(s).x);
        gs.push_back(g(s).x);
    }
    EXPECT_EQ(jg::winding_number(jg::make_loop(fs)), 1);
    EXPECT_EQ(jg::winding_number(jg::make_loop(gs)), 0);
    for (const auto& [s, v] : ident) EXPECT_EQ(f(Point::circle(s)).x, v.x);
}

TEST(Interpolate, TracksContinuousOperation) {
    auto op = [](double s) { return 0.3 * std::sin(M_PI * s) + 2.0 * s; };
    std::vector<std::pair<double, Point>> vals;
    std::vector<Arc> arcs;
    const std::size_t n = 200;
    for (std::size_t i = 0; i < n; ++i) vals.emplace_back(0.01 * i, Point::circle(op(0.01 * i)));
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<Point> ends{vals[i].second, vals[(i + 1) % n].second};
        arcs.push_back(*jg::arc_cover(ends));
    }
    const auto f = jg::interpolate_unary(vals, arcs);
    double worst = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double s = 2.0 * k / 20000.0;
        worst = std::max(worst, jg::distance(jg::MetricSpace::circle(), f(Point::circle(s)), Point::circle(op(s))));
    }
    EXPECT_LE(worst, 0.02);
    for (const auto& [s, v] : vals) EXPECT_EQ(f(Point::circle(s)).x, v.x);
}

TEST(Interpolate, MisfitCellNamed) {
    const std::vector<std::pair<double, Point>> vals{{0.0, Point::circle(0.0)}, {1.0, Point::circle(0.5)}};
    const std::vector<Arc> arcs{{Point::circle(0.0), 0.5, 2.0}, {Point::circle(0.0), 0.1, 2.0}};
    try {
        jg::interpolate_unary(vals, arcs);
        FAIL();
    } catch (const jg::DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("cell 1"), std::string::npos);
    }
}

TEST(FamilyCheck, RotatedIdentitiesAndConstants) {
    std::vector<jg::Loop> rotated, flat;
    for (int i = 0; i < 30; ++i) {
        rotated.push_back(jg::make_loop(loop_params(60, 1.0, 2.0, 0.01 * i)));
        flat.push_back(jg::make_loop(std::vector<double>(60, 0.02 * i)));
    }
    const auto a = jg::winding_family_check(rotated, 0.05);
    EXPECT_TRUE(a.consistent);
    for (int w : a.windings) EXPECT_EQ(w, 1);
    const auto b = jg::winding_family_check(flat, 0.05);
    EXPECT_TRUE(b.consistent);
    for (int w : b.windings) EXPECT_EQ(w, 0);
}

TEST(FamilyCheck, PreconditionWitness) {
    std::vector<jg::Loop> fam{jg::make_loop(loop_params(60, 1.0)), jg::make_loop(loop_params(60, 1.0, 2.0, 0.3))};
    try {
        jg::winding_family_check(fam, 0.1);
        FAIL();
    } catch (const jg::FamilyPreconditionError& e) {
        EXPECT_EQ(e.kind(), "closeness");
        EXPECT_EQ(e.loop_index(), 1u);
        EXPECT_NEAR(e.value(), 0.3, 1e-12);
    }
    EXPECT_THROW(jg::winding_family_check(fam, 0.7), jg::DomainError);
}

TEST(FamilyCheck, DisagreementReported) {
    // Loops drift from winding 0 to winding 1 while staying pointwise close: the step precondition breaks.
    std::vector<jg::Loop> fam{jg::make_loop(std::vector<double>(6, 0.0)), jg::make_loop(loop_params(3, 1.0))};
    EXPECT_THROW(jg::winding_family_check(fam, 0.6), jg::FamilyPreconditionError);
}

TEST(Obstruction, ZeroOneFamily) {
    const auto rep = jg::zero_one_obstruction(jg::s1_zero_one(), 200);
    EXPECT_EQ(rep.start_winding, 0);
    EXPECT_EQ(rep.end_winding, 1);
    EXPECT_TRUE(rep.obstruction_visible());
    EXPECT_FALSE(rep.witness.empty());
}
