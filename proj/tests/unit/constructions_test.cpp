#include <array>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "jumpgauge/constructions.hpp"
#include "jumpgauge/jumps.hpp"
#include "jumpgauge/sampling.hpp"

namespace jg = jumpgauge;
using jg::MetricSpace;
using jg::Point;

namespace {

double arc_dist(double a, double b, double L) {
    const double d = std::fmod(std::fabs(a - b), L);
    return std::min(d, L - d);
}

Point apply2(const jg::Algebra& alg, const std::string& op, Point a, Point b) {
    const std::array<Point, 2> args{a, b};
    return alg.op(op).fn(args);
}

}  // namespace

TEST(Constructions, ResidualsVanishOnSeededSamples) {
    for (const auto& name : jg::construction_names()) {
        const auto c = jg::construction_by_name(name);
        const auto envs = jg::construction_samples(c, 10000, 42);
        EXPECT_LE(jg::residual(c.algebra, c.theory, envs), 1e-12) << name;
    }
    EXPECT_THROW(jg::construction_by_name("no-such"), jg::DomainError);
}

TEST(ZeroOne, AnchorsAndSectors) {
    const auto c = jg::s1_zero_one();
    const Point one = jg::constant_of(c.algebra, "one");
    const Point zero = jg::constant_of(c.algebra, "zero");
    EXPECT_EQ(arc_dist(one.x, zero.x, 2.0), 1.0);
    for (double z : {0.0, 0.3, 0.9, 1.5, 1.99}) {
        EXPECT_EQ(apply2(c.algebra, "F", one, Point::circle(z)).x, z);
        EXPECT_EQ(apply2(c.algebra, "F", zero, Point::circle(z)).x, zero.x);
    }
    // Middle sector of z sends a generic w to the zero anchor.
    EXPECT_EQ(apply2(c.algebra, "F", Point::circle(0.4), Point::circle(1.0)).x, zero.x);
    EXPECT_EQ(apply2(c.algebra, "F", Point::circle(0.4), Point::circle(2.0 / 3.0)).x, zero.x);
    // The three sector values are pairwise 2/3 apart.
    const double u = apply2(c.algebra, "F", Point::circle(0.4), Point::circle(0.1)).x;
    const double l = apply2(c.algebra, "F", Point::circle(0.4), Point::circle(1.5)).x;
    EXPECT_NEAR(arc_dist(u, zero.x, 2.0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(arc_dist(l, zero.x, 2.0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(arc_dist(u, l, 2.0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(c.constants.at("R"), 1.0 / M_PI, 1e-15);
}

TEST(IdemComm, JoinOnFirstThird) {
    const auto c = jg::s1_idem_comm();
    EXPECT_EQ(apply2(c.algebra, "F", Point::circle(0.2, 3.0), Point::circle(0.8, 3.0)).x, 0.8);
}

TEST(IdemComm, IdempotentAndCommutativeExactly) {
    const auto c = jg::s1_idem_comm();
    jg::Rng rng(4);
    for (int i = 0; i < 20000; ++i) {
        const Point s = jg::random_point(c.algebra.carrier, rng);
        const Point t = i % 10 == 0 ? Point::circle(std::floor(3.0 * jg::uniform01(rng)), 3.0)
                                    : jg::random_point(c.algebra.carrier, rng);
        EXPECT_EQ(apply2(c.algebra, "F", s, t).x, apply2(c.algebra, "F", t, s).x);
        EXPECT_EQ(apply2(c.algebra, "F", s, s).x, s.x);
    }
}

TEST(IdemComm, CornerTableMatchesDiagram) {
    // Rows from t in [2,3] down to [0,1]; corners tl, tr, bl, br; values reduced mod 3.
    const int diagram[3][3][4] = {
        {{1, 2, 0, 1}, {3, 3, 2, 2}, {3, 3, 2, 3}},
        {{1, 1, 0, 0}, {2, 2, 1, 2}, {2, 3, 2, 3}},
        {{1, 1, 0, 1}, {0, 1, 0, 1}, {1, 2, 0, 1}},
    };
    const auto table = jg::idem_comm::corner_table();
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) {
            for (int k = 0; k < 4; ++k) EXPECT_EQ(table[r][s][k], diagram[r][s][k] % 3) << r << s << k;
        }
    }
}

TEST(Majority, EquilateralTieBreak) {
    const auto c = jg::s1_majority();
    const std::array<Point, 3> tri{Point::circle(0.0), Point::circle(2.0 / 3.0), Point::circle(4.0 / 3.0)};
    EXPECT_EQ(c.algebra.op("F").fn(tri).x, 0.0);
}

TEST(Majority, ValueIsAnArgumentAndSymmetric) {
    const auto c = jg::s1_majority();
    jg::Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
        std::array<Point, 3> v{jg::random_point(c.algebra.carrier, rng), jg::random_point(c.algebra.carrier, rng),
                               jg::random_point(c.algebra.carrier, rng)};
        const double f = c.algebra.op("F").fn(v).x;
        EXPECT_TRUE(f == v[0].x || f == v[1].x || f == v[2].x);
        std::array<int, 3> p{0, 1, 2};
        while (std::next_permutation(p.begin(), p.end())) {
            const std::array<Point, 3> w{v[p[0]], v[p[1]], v[p[2]]};
            EXPECT_EQ(c.algebra.op("F").fn(w).x, f);
        }
    }
}

TEST(Majority, CloseArgumentsPinTheValueBetweenThem) {
    const auto c = jg::s1_majority();
    jg::Rng rng(9);
    int tested = 0;
    for (int i = 0; i < 10000; ++i) {
        const double a = 2.0 * jg::uniform01(rng);
        const double a2 = a + (jg::uniform01(rng) * 2.0 - 1.0) * (2.0 / 3.0) * 0.999999;
        const double b = 2.0 * jg::uniform01(rng);
        const std::array<Point, 3> v{Point::circle(a), Point::circle(a2), Point::circle(b)};
        const double f = c.algebra.op("F").fn(v).x;
        const double ab = arc_dist(v[0].x, v[1].x, 2.0);
        ASSERT_LT(ab, 2.0 / 3.0);
        EXPECT_LE(arc_dist(v[0].x, f, 2.0) + arc_dist(f, v[1].x, 2.0), ab + 1e-12);
        ++tested;
    }
    EXPECT_EQ(tested, 10000);
}

TEST(Hilbert, BijectiveAndAdjacent) {
    for (std::uint32_t m = 1; m <= 6; ++m) {
        const std::uint32_t side = 1u << m;
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        std::pair<std::uint32_t, std::uint32_t> prev{};
        for (std::uint64_t d = 0; d < std::uint64_t{side} * side; ++d) {
            const auto xy = jg::hilbert::d2xy(side, d);
            EXPECT_EQ(jg::hilbert::xy2d(side, xy.first, xy.second), d);
            seen.insert(xy);
            if (d > 0) {
                const auto dx = static_cast<int>(xy.first) - static_cast<int>(prev.first);
                const auto dy = static_cast<int>(xy.second) - static_cast<int>(prev.second);
                EXPECT_EQ(std::abs(dx) + std::abs(dy), 1);
            }
            prev = xy;
        }
        EXPECT_EQ(seen.size(), std::size_t{side} * side);
    }
}

TEST(Peano, CurveHitsEveryCellAndInvertsExactly) {
    const std::size_t m = 6;
    auto [c, pp] = jg::peano_pair(0.1, m);
    const jg::PeanoCurve curve(m);
    std::set<std::pair<double, double>> cells;
    for (std::uint64_t k = 0; k <= curve.last_index(); ++k) {
        const auto p = curve(static_cast<double>(k) / static_cast<double>(curve.last_index()));
        cells.insert({p[0], p[1]});
    }
    EXPECT_EQ(cells.size(), std::size_t{1} << (2 * m));
    for (std::uint32_t x = 0; x < curve.side(); ++x) {
        for (std::uint32_t y = 0; y < curve.side(); ++y) {
            const Point a = Point::interval(curve.cell_coordinate(x)), b = Point::interval(curve.cell_coordinate(y));
            const Point g = apply2(c.algebra, "G", a, b);
            const std::array<Point, 1> gv{g};
            ASSERT_EQ(c.algebra.op("F0").fn(gv).x, a.x);
            ASSERT_EQ(c.algebra.op("F1").fn(gv).x, b.x);
            ASSERT_LE(g.x, 0.1);
        }
    }
    EXPECT_GT(pp.h_jump, 0.5);
    EXPECT_THROW(jg::peano_pair(0.0, 4), jg::DomainError);
    EXPECT_THROW(jg::PeanoCurve(0), jg::DomainError);
}

TEST(Peano, DecodersFlattenWithRefinement) {
    auto [c, pp] = jg::peano_pair(0.05, 8);
    const auto f = jg::operation_map(c.algebra, "F0", jg::ProductMode::Sum);
    const std::vector<double> radii{1e-4, 1e-5, 1e-6};
    const auto est = jg::jump_sup(f, jg::domain_grid(f, 2000), {}, radii);
    EXPECT_GT(est.ladder.front().second, est.ladder.back().second);
    EXPECT_LE(est.value, 0.02);
}

TEST(LatticeGroup, ModelAndInterpretation) {
    const auto alg = jg::reals_lgroup_model();
    EXPECT_EQ(apply2(alg, "meet", Point::real(1.0), Point::real(2.0)).x, 1.0);
    const auto derived = jg::interpret_lgroup_to_sigma2(alg, 3, 3);
    EXPECT_EQ(apply2(derived, "K", Point::real(1.0), Point::real(2.0)).x, 1.0);
    EXPECT_EQ(apply2(derived, "psi2", Point::real(3.0), Point::real(1.0)).x, 4.0);
    const auto envs = jg::random_envs(alg.carrier, 3, 1000, 2);
    EXPECT_LE(jg::residual(alg, jg::catalog("lambda-gamma"), envs), 1e-9);
    EXPECT_LE(jg::residual(derived, jg::catalog("sigma2"), envs), 1e-9);
    jg::Algebra partial = alg;
    partial.ops.erase("meet");
    EXPECT_THROW(jg::interpret_lgroup_to_sigma2(partial, 1, 1), jg::DomainError);
}

TEST(TriodeLattice, ChainCoordinates) {
    using namespace jg::triode_chain;
    EXPECT_EQ(chain_value(Point::center()), 1.0 / 3.0);
    EXPECT_EQ(chain_value(Point::triode(jg::Leg::A, 1.0)), 0.0);
    EXPECT_EQ(chain_value(Point::triode(jg::Leg::B, 1.0)), 2.0 / 3.0);
    EXPECT_EQ(chain_value(Point::triode(jg::Leg::C, 1.0)), 1.0);
    jg::Rng rng(1);
    for (int i = 0; i < 5000; ++i) {
        const Point p = jg::random_point(MetricSpace::triode(), rng);
        const Point q = jg::random_point(MetricSpace::triode(), rng);
        EXPECT_EQ(less_equal(p, q), chain_value(p) <= chain_value(q));
        EXPECT_NEAR(jg::distance(MetricSpace::triode(), from_chain_value(chain_value(p)), p), 0.0, 1e-12);
    }
}

TEST(TriodeLattice, ExactLatticeAxioms) {
    const auto c = jg::triode_pullback_lattice();
    auto envs = jg::construction_samples(c, 10000, 5);
    const auto g = jg::grid(MetricSpace::triode(), 5).points;
    for (const auto& a : g) {
        for (const auto& b : g) {
            for (const auto& d : g) envs.push_back({a, b, d});
        }
    }
    EXPECT_EQ(jg::residual(c.algebra, jg::catalog("lattice"), envs), 0.0);
}
