#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jumpgauge/equations.hpp"
#include "jumpgauge/errors.hpp"
#include "jumpgauge/jumps.hpp"
#include "jumpgauge/metric.hpp"
#include "jumpgauge/sampling.hpp"

namespace jumpgauge {

struct Construction {
    std::string name;
    Algebra algebra;
    Theory theory;
    std::optional<double> claimed_chi;
    std::string scale_note;
    std::map<std::string, double> constants;
    // Operation whose jump the construction is about.
    std::string primary_op;
    // Carrier sampler for satisfaction checks when the equations hold only on a sublattice.
    std::function<Point(Rng&)> sample_point;
};

// Jump values on a circle of circumference L rescaled to the diameter-1 circle.
inline double normalize_circle_value(double value, double circumference) { return value * 2.0 / circumference; }

inline Point constant_of(const Algebra& alg, const std::string& name) { return alg.op(name).fn({}); }

// ---- zero-one on the circle of circumference 2 ----

namespace zero_one {
inline constexpr double kOne = 0.0;   // the anchor R (angle 0)
inline constexpr double kZero = 1.0;  // the anchor -R (angle pi)
inline constexpr double kUpper = 1.0 / 3.0;
inline constexpr double kMiddle = 1.0;
inline constexpr double kLower = 5.0 / 3.0;
inline constexpr double kFirstBoundary = 2.0 / 3.0;
inline constexpr double kSecondBoundary = 4.0 / 3.0;

inline double sector_value(double z) {
    if (z < kFirstBoundary) return kUpper;
    if (z < kSecondBoundary) return kMiddle;
    return kLower;
}

inline Point apply(const Point& w, const Point& z) {
    detail::require_kind(w, PointKind::Circle);
    detail::require_kind(z, PointKind::Circle);
    if (w.x == kOne) return z;
    if (w.x == kZero) return Point::circle(kZero);
    return Point::circle(sector_value(z.x));
}
}  // namespace zero_one

inline Construction s1_zero_one() {
    Construction c;
    c.name = "s1-zero-one";
    c.theory = catalog("zero-one");
    c.scale_note = "circle of circumference 2 (diameter 1); angle theta maps to arc parameter theta/pi";
    c.claimed_chi = 2.0 / 3.0;
    c.primary_op = "F";
    c.constants = {{"R", 1.0 / std::numbers::pi},
                   {"one_param", zero_one::kOne},
                   {"zero_param", zero_one::kZero},
                   {"upper_sector_value", zero_one::kUpper},
                   {"middle_sector_value", zero_one::kMiddle},
                   {"lower_sector_value", zero_one::kLower},
                   {"first_sector_boundary", zero_one::kFirstBoundary},
                   {"second_sector_boundary", zero_one::kSecondBoundary}};
    Algebra& a = c.algebra;
    a.carrier = MetricSpace::circle(2.0);
    a.ops["F"] = {2, [](std::span<const Point> x) { return zero_one::apply(x[0], x[1]); }};
    a.ops["zero"] = {0, [](std::span<const Point>) { return Point::circle(zero_one::kZero); }};
    a.ops["one"] = {0, [](std::span<const Point>) { return Point::circle(zero_one::kOne); }};
    auto& seams = a.seams["F"];
    for (double z : {0.0, zero_one::kFirstBoundary, zero_one::kSecondBoundary}) {
        seams.push_back({Point::circle(zero_one::kOne), Point::circle(z)});
    }
    for (int k = 0; k < 24; ++k) {
        const Point z = Point::circle(2.0 * k / 24.0);
        seams.push_back({Point::circle(zero_one::kOne), z});
        seams.push_back({Point::circle(zero_one::kZero), z});
    }
    for (double v : {zero_one::kOne, zero_one::kZero, zero_one::kUpper, zero_one::kFirstBoundary,
                     zero_one::kSecondBoundary, zero_one::kLower}) {
        a.seam_coords.push_back(Point::circle(v));
    }
    return c;
}

// ---- commutative idempotent on the circle of circumference 3 ----

namespace idem_comm {
inline constexpr double kL = 3.0;

// First matching clause wins after ordering the pair by parameter.
inline Point apply(const Point& s, const Point& t) {
    detail::require_kind(s, PointKind::Circle);
    detail::require_kind(t, PointKind::Circle);
    const double a = std::min(s.x, t.x);
    const double b = std::max(s.x, t.x);
    if (b <= 1.0) return Point::circle(b, kL);
    if (a >= 1.0) return Point::circle(b, kL);
    if (b >= 2.0) return Point::circle(1.0 + a + b, kL);
    return Point::circle(2.0 + b, kL);
}

// Limits of F at the four corners of each unit cell, approached from the cell interior, as
// integers mod 3. Indexed [t-row][s-column][corner] with rows listed from t in [2,3] down to
// t in [0,1] and corners ordered top-left, top-right, bottom-left, bottom-right.
inline std::array<std::array<std::array<int, 4>, 3>, 3> corner_table(double nudge = 1e-7) {
    std::array<std::array<std::array<int, 4>, 3>, 3> out{};
    for (int row = 0; row < 3; ++row) {
        const int t_lo = 2 - row;
        for (int col = 0; col < 3; ++col) {
            const int s_lo = col;
            const std::array<std::pair<double, double>, 4> corners{{
                {s_lo + nudge, t_lo + 1 - nudge},
                {s_lo + 1 - nudge, t_lo + 1 - nudge},
                {s_lo + nudge, t_lo + nudge},
                {s_lo + 1 - nudge, t_lo + nudge},
            }};
            for (int k = 0; k < 4; ++k) {
                const double v =
                    apply(Point::circle(corners[k].first, kL), Point::circle(corners[k].second, kL)).x;
                out[row][col][k] = static_cast<int>(std::lround(v)) % 3;
            }
        }
    }
    return out;
}
}  // namespace idem_comm

inline Construction s1_idem_comm() {
    Construction c;
    c.name = "s1-idem-comm";
    c.theory = catalog("idem-comm");
    c.scale_note = "circle of circumference 3 (diameter 3/2); divide jumps by 3/2 for the diameter-1 scale";
    c.claimed_chi = 1.0;
    c.primary_op = "F";
    c.constants = {{"L", idem_comm::kL}};
    Algebra& a = c.algebra;
    a.carrier = MetricSpace::circle(idem_comm::kL);
    a.ops["F"] = {2, [](std::span<const Point> x) { return idem_comm::apply(x[0], x[1]); }};
    auto& seams = a.seams["F"];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) seams.push_back({Point::circle(i, idem_comm::kL), Point::circle(j, idem_comm::kL)});
    }
    for (int i = 0; i < 3; ++i) a.seam_coords.push_back(Point::circle(i, idem_comm::kL));
    return c;
}

// ---- majority on the circle of circumference 2 ----

namespace majority {
inline constexpr double kL = 2.0;
inline constexpr double kSmall = kL / 3.0;
inline constexpr double kBetweenTolerance = 1e-9;

inline Point apply(const Point& p, const Point& q, const Point& r) {
    std::array<Point, 3> v{p, q, r};
    for (const auto& x : v) detail::require_kind(x, PointKind::Circle);
    std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    if (v[0] == v[1] || v[0] == v[2]) return v[0];
    if (v[1] == v[2]) return v[1];
    auto d = [](const Point& a, const Point& b) { return detail::circle_distance(a.x, b.x, kL); };
    // Pair (i, j) is stored at index of the third element k.
    const std::array<double, 3> opp{d(v[1], v[2]), d(v[0], v[2]), d(v[0], v[1])};
    int small = 0;
    for (double x : opp) small += x < kSmall ? 1 : 0;
    if (small == 3) {
        int best = -1;
        double best_defect = 0.0;
        for (int y = 0; y < 3; ++y) {
            const int x = (y + 1) % 3, z = (y + 2) % 3;
            const double defect = std::fabs(d(v[x], v[z]) - d(v[x], v[y]) - d(v[y], v[z]));
            if (defect <= kBetweenTolerance && (best < 0 || defect < best_defect)) {
                best = y;
                best_defect = defect;
            }
        }
        return v[best < 0 ? 0 : best];
    }
    if (small == 2) {
        for (int k = 0; k < 3; ++k) {
            if (!(opp[k] < kSmall)) return v[k];
        }
    }
    if (small == 1) {
        for (int k = 0; k < 3; ++k) {
            if (opp[k] < kSmall) return v[k == 0 ? 1 : 0];
        }
    }
    return v[0];
}

// Membership in the closed shorter arc between a and b (requires d(a,b) < L/2).
inline bool on_shorter_arc(const Point& a, const Point& b, const Point& x, double tol = 0.0) {
    const double ab = detail::circle_distance(a.x, b.x, kL);
    return detail::circle_distance(a.x, x.x, kL) + detail::circle_distance(x.x, b.x, kL) <= ab + tol;
}
}  // namespace majority

inline Construction s1_majority() {
    Construction c;
    c.name = "s1-majority";
    c.theory = catalog("majority-symmetric");
    c.scale_note = "circle of circumference 2 (diameter 1)";
    c.claimed_chi = 2.0 / 3.0;
    c.primary_op = "F";
    c.constants = {{"L", majority::kL}, {"closeness_threshold", majority::kSmall},
                   {"betweenness_tolerance", majority::kBetweenTolerance}};
    Algebra& a = c.algebra;
    a.carrier = MetricSpace::circle(majority::kL);
    a.ops["F"] = {3, [](std::span<const Point> x) { return majority::apply(x[0], x[1], x[2]); }};
    auto& seams = a.seams["F"];
    const double third = majority::kSmall;
    for (int k = 0; k < 8; ++k) {
        const double th = third * k / 8.0;
        std::array<Point, 3> tri{Point::circle(th), Point::circle(th + third), Point::circle(th + 2 * third)};
        std::array<int, 3> perm{0, 1, 2};
        do {
            seams.push_back({tri[perm[0]], tri[perm[1]], tri[perm[2]]});
        } while (std::next_permutation(perm.begin(), perm.end()));
        seams.push_back({tri[0], tri[1], Point::circle(th + third / 2)});
        seams.push_back({tri[0], tri[1], Point::circle(th + 1.5 * third)});
    }
    for (int k = 0; k < 6; ++k) a.seam_coords.push_back(Point::circle(k / 3.0));
    return c;
}

// ---- Hilbert curve ----

namespace hilbert {

inline void rotate(std::uint32_t n, std::uint32_t& x, std::uint32_t& y, std::uint32_t rx, std::uint32_t ry) {
    if (ry == 0) {
        if (rx == 1) {
            x = n - 1 - x;
            y = n - 1 - y;
        }
        std::swap(x, y);
    }
}

// Cell (x, y) visited at step d of the curve through a side x side grid (side a power of two).
inline std::pair<std::uint32_t, std::uint32_t> d2xy(std::uint32_t side, std::uint64_t d) {
    std::uint32_t x = 0, y = 0;
    std::uint64_t t = d;
    for (std::uint32_t s = 1; s < side; s *= 2) {
        const std::uint32_t rx = 1 & static_cast<std::uint32_t>(t / 2);
        const std::uint32_t ry = 1 & static_cast<std::uint32_t>(t ^ rx);
        rotate(s, x, y, rx, ry);
        x += s * rx;
        y += s * ry;
        t /= 4;
    }
    return {x, y};
}

inline std::uint64_t xy2d(std::uint32_t side, std::uint32_t x, std::uint32_t y) {
    std::uint64_t d = 0;
    for (std::uint32_t s = side / 2; s > 0; s /= 2) {
        const std::uint32_t rx = (x & s) > 0 ? 1 : 0;
        const std::uint32_t ry = (y & s) > 0 ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        rotate(side, x, y, rx, ry);
    }
    return d;
}

}  // namespace hilbert

struct PeanoPair {
    double epsilon = 0.0;
    std::size_t depth_m = 0;
    double h_jump = 0.0;
};

// Depth-m space-filling curve of the unit square with cell corners x / 2^m as nodes.
class PeanoCurve {
public:
    explicit PeanoCurve(std::size_t depth_m) : depth_(depth_m) {
        if (depth_m < 1 || depth_m > 16) throw DomainError("curve depth must be in [1,16]");
        side_ = std::uint32_t{1} << depth_m;
        last_ = static_cast<std::uint64_t>(side_) * side_ - 1;
    }

    std::size_t depth() const { return depth_; }
    std::uint32_t side() const { return side_; }
    std::uint64_t last_index() const { return last_; }
    double cell_coordinate(std::uint32_t i) const { return std::ldexp(static_cast<double>(i), -static_cast<int>(depth_)); }

    std::array<double, 2> node(std::uint64_t k) const {
        auto [x, y] = hilbert::d2xy(side_, k);
        return {cell_coordinate(x), cell_coordinate(y)};
    }

    // Piecewise linear through the nodes, node k at parameter k / (4^m - 1).
    std::array<double, 2> operator()(double u) const {
        u = std::clamp(u, 0.0, 1.0);
        const double t = u * static_cast<double>(last_);
        const double r = std::round(t);
        if (std::fabs(t - r) <= 1e-9) {
            return node(static_cast<std::uint64_t>(r));
        }
        const auto k = static_cast<std::uint64_t>(std::floor(t));
        if (k >= last_) return node(last_);
        const double frac = t - static_cast<double>(k);
        const auto a = node(k), b = node(k + 1);
        return {a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])};
    }

    std::uint32_t nearest_cell(double a) const {
        const double v = std::round(std::clamp(a, 0.0, 1.0) * side_);
        return static_cast<std::uint32_t>(std::min(v, static_cast<double>(side_ - 1)));
    }

    // Right inverse on the node set; other points use their nearest node.
    double inverse(double a0, double a1) const {
        const auto d = hilbert::xy2d(side_, nearest_cell(a0), nearest_cell(a1));
        return static_cast<double>(d) / static_cast<double>(last_);
    }

private:
    std::size_t depth_;
    std::uint32_t side_;
    std::uint64_t last_;
};

inline std::pair<Construction, PeanoPair> peano_pair(double epsilon, std::size_t depth_m) {
    if (!(epsilon > 0.0) || epsilon > 1.0) throw DomainError("epsilon must lie in (0,1]");
    const PeanoCurve curve(depth_m);
    Construction c;
    c.name = "peano";
    c.theory = catalog("injective-binary");
    c.scale_note = "unit interval; pair coded by a Hilbert curve of the given depth";
    c.claimed_chi = epsilon;
    c.primary_op = "G";
    c.constants = {{"epsilon", epsilon}, {"depth_m", static_cast<double>(depth_m)}};
    Algebra& a = c.algebra;
    a.carrier = MetricSpace::interval();
    a.ops["G"] = {2, [curve, epsilon](std::span<const Point> x) {
                      return Point::interval(epsilon * curve.inverse(x[0].x, x[1].x));
                  }};
    for (int coord = 0; coord < 2; ++coord) {
        a.ops[coord == 0 ? "F0" : "F1"] = {1, [curve, epsilon, coord](std::span<const Point> x) {
                                               return Point::interval(curve(std::min(1.0, x[0].x / epsilon))[coord]);
                                           }};
    }
    // Nearest-node switches of G along the quarter lines, where the curve index jumps the most.
    const double side = curve.side();
    auto& seams = a.seams["G"];
    for (int q = 1; q <= 3; ++q) {
        const double b = (q * side / 4.0 - 0.5) / side;
        a.seam_coords.push_back(Point::interval(b));
        for (std::uint32_t j = 0; j < curve.side(); j += 4) {
            const double y = (j + 0.5) / side;
            seams.push_back({Point::interval(b), Point::interval(y)});
            seams.push_back({Point::interval(y), Point::interval(b)});
        }
    }
    PeanoPair pp{epsilon, depth_m, 0.0};
    SampledMap h{"H", {MetricSpace::interval(), MetricSpace::interval()}, ProductMode::Sum, MetricSpace::interval(),
                 [curve](std::span<const Point> x) { return Point::interval(curve.inverse(x[0].x, x[1].x)); }};
    const std::vector<double> radii{1e-2, 1e-3};
    SamplingOptions opts;
    opts.random_samples = 4;
    pp.h_jump = jump_sup(h, domain_grid(h, 33), seams, radii, 0, opts).value;
    c.sample_point = [curve](Rng& rng) {
        const auto i = std::uniform_int_distribution<std::uint32_t>(0, curve.side() - 1)(rng);
        return Point::interval(curve.cell_coordinate(i));
    };
    return {std::move(c), pp};
}

// ---- lattice-ordered group of the reals ----

inline Algebra reals_lgroup_model(double lo = -64.0, double hi = 64.0) {
    Algebra a;
    a.carrier = MetricSpace::window(lo, hi);
    a.ops["meet"] = {2, [](std::span<const Point> x) { return Point::real(std::min(x[0].x, x[1].x)); }};
    a.ops["join"] = {2, [](std::span<const Point> x) { return Point::real(std::max(x[0].x, x[1].x)); }};
    a.ops["add"] = {2, [](std::span<const Point> x) { return Point::real(x[0].x + x[1].x); }};
    a.ops["sub"] = {2, [](std::span<const Point> x) { return Point::real(x[0].x - x[1].x); }};
    a.ops["zero"] = {0, [](std::span<const Point>) { return Point::real(0.0); }};
    return a;
}

// Terms in {meet, add, sub, zero} defining G, K and psi_m over the lattice-ordered group signature.
inline std::map<std::string, Term> sigma2_interpretation_terms(std::size_t m_max, std::size_t k_max) {
    using detail::ap;
    using detail::v;
    std::map<std::string, Term> out;
    out.emplace("G", ap(symbols::meet, {v(2), ap(symbols::add, {ap(symbols::sub, {v(0), v(1)}),
                                                                 ap(symbols::meet, {v(2), v(3)})})}));
    out.emplace("K", ap(symbols::meet, {v(0), v(1)}));
    for (std::size_t m = 0; m <= m_max + k_max; ++m) out.emplace("psi" + std::to_string(m), z_term(m));
    return out;
}

inline Algebra interpret_lgroup_to_sigma2(const Algebra& alg, std::size_t m_max, std::size_t k_max) {
    check_interprets(alg, catalog("lambda-gamma", {{"m_max", 0}, {"k_max", 0}}));
    Algebra out;
    out.carrier = alg.carrier;
    for (auto& [name, term] : sigma2_interpretation_terms(m_max, k_max)) {
        const std::size_t ar = name == "G" ? 4 : 2;
        out.ops[name] = {ar, [alg, term](std::span<const Point> x) { return eval(alg, term, x); }};
    }
    return out;
}

// ---- a lattice on the triode ----

namespace triode_chain {

// Position of a point in the chain: leg A (tip lowest), then D, then leg B, then leg C.
inline std::pair<int, double> order_key(const Point& p) {
    detail::require_kind(p, PointKind::Triode);
    if (p.x == 0.0) return {1, 0.0};
    switch (p.leg) {
        case Leg::A: return {0, -p.x};
        case Leg::B: return {2, p.x};
        case Leg::C: return {3, p.x};
    }
    return {1, 0.0};
}

inline bool less_equal(const Point& p, const Point& q) { return order_key(p) <= order_key(q); }

// The bijection onto [0,1]: leg A to [0,1/3], D to 1/3, leg B to (1/3,2/3], leg C to (2/3,1].
inline double chain_value(const Point& p) {
    auto [rank, key] = order_key(p);
    switch (rank) {
        case 0: return (1.0 + key) / 3.0;
        case 1: return 1.0 / 3.0;
        case 2: return (1.0 + key) / 3.0;
        default: return (2.0 + key) / 3.0;
    }
}

inline Point from_chain_value(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("chain value outside [0,1]");
    if (v < 1.0 / 3.0) return Point::triode(Leg::A, std::clamp(1.0 - 3.0 * v, 0.0, 1.0));
    if (v == 1.0 / 3.0) return Point::center();
    if (v <= 2.0 / 3.0) return Point::triode(Leg::B, std::clamp(3.0 * v - 1.0, 0.0, 1.0));
    return Point::triode(Leg::C, std::clamp(3.0 * v - 2.0, 0.0, 1.0));
}

inline Point meet(const Point& p, const Point& q) { return less_equal(p, q) ? p : q; }
inline Point join(const Point& p, const Point& q) { return less_equal(p, q) ? q : p; }

}  // namespace triode_chain

inline Construction triode_pullback_lattice() {
    Construction c;
    c.name = "triode-lattice";
    c.theory = catalog("lattice");
    c.scale_note = "triode with unit legs in the plane; order pulled back from a chain";
    c.primary_op = "meet";
    c.constants = {{"center_chain_value", 1.0 / 3.0}, {"b_tip_chain_value", 2.0 / 3.0}};
    Algebra& a = c.algebra;
    a.carrier = MetricSpace::triode();
    a.ops["meet"] = {2, [](std::span<const Point> x) { return triode_chain::meet(x[0], x[1]); }};
    a.ops["join"] = {2, [](std::span<const Point> x) { return triode_chain::join(x[0], x[1]); }};
    const Point d = Point::center();
    const Point b_tip = Point::triode(Leg::B, 1.0);
    a.seam_coords = {d, b_tip};
    const auto coarse = grid(MetricSpace::triode(), 21).points;
    for (const char* op : {"meet", "join"}) {
        auto& seams = a.seams[op];
        for (const auto& y : coarse) {
            for (const auto& s : {d, b_tip}) {
                seams.push_back({s, y});
                seams.push_back({y, s});
            }
        }
    }
    return c;
}

// Seeded environments for a construction's own theory.
inline std::vector<Tuple> construction_samples(const Construction& c, std::size_t count, std::uint64_t seed) {
    const std::size_t n_vars = std::max<std::size_t>(1, c.theory.n_vars());
    if (!c.sample_point) return random_envs(c.algebra.carrier, n_vars, count, seed);
    Rng rng(seed);
    std::vector<Tuple> out(count);
    for (auto& env : out) {
        for (std::size_t v = 0; v < n_vars; ++v) env.push_back(c.sample_point(rng));
    }
    return out;
}

inline std::vector<std::string> construction_names() {
    return {"s1-zero-one", "s1-idem-comm", "s1-majority", "peano", "triode-lattice"};
}

inline Construction construction_by_name(const std::string& name, double epsilon = 0.05, std::size_t depth_m = 8) {
    if (name == "s1-zero-one") return s1_zero_one();
    if (name == "s1-idem-comm") return s1_idem_comm();
    if (name == "s1-majority") return s1_majority();
    if (name == "peano") return peano_pair(epsilon, depth_m).first;
    if (name == "triode-lattice") return triode_pullback_lattice();
    throw DomainError("unknown construction " + name);
}

}  // namespace jumpgauge
