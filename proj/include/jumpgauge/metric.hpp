#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/errors.hpp"

namespace jumpgauge {

enum class Leg : std::uint8_t { A, B, C };

inline char leg_name(Leg leg) { return static_cast<char>('A' + static_cast<int>(leg)); }

enum class PointKind : std::uint8_t { Circle, Interval, Triode, Real, Product };

inline const char* kind_name(PointKind k) {
    switch (k) {
        case PointKind::Circle: return "circle";
        case PointKind::Interval: return "interval";
        case PointKind::Triode: return "triode";
        case PointKind::Real: return "real";
        case PointKind::Product: return "product";
    }
    return "?";
}

struct Point {
    PointKind kind = PointKind::Real;
    // Arc parameter, interval coordinate, position along a leg, or real value.
    double x = 0.0;
    Leg leg = Leg::A;
    std::vector<Point> parts;

    static Point circle(double s, double circumference = 2.0) {
        if (!std::isfinite(s) || !(circumference > 0.0)) {
            throw DomainError("circle parameter must be finite");
        }
        double c = std::fmod(s, circumference);
        if (c < 0.0) c += circumference;
        if (c >= circumference) c = 0.0;
        return Point{PointKind::Circle, c, Leg::A, {}};
    }
    static Point interval(double x) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("interval point outside [0,1]");
        return Point{PointKind::Interval, x, Leg::A, {}};
    }
    static Point triode(Leg leg, double t) {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("triode position outside [0,1]");
        return Point{PointKind::Triode, t, t == 0.0 ? Leg::A : leg, {}};
    }
    static Point center() { return triode(Leg::A, 0.0); }
    static Point real(double x) {
        if (!std::isfinite(x)) throw DomainError("real point must be finite");
        return Point{PointKind::Real, x, Leg::A, {}};
    }
    static Point product(std::vector<Point> parts) {
        return Point{PointKind::Product, 0.0, Leg::A, std::move(parts)};
    }

    bool is_center() const { return kind == PointKind::Triode && x == 0.0; }

    friend bool operator==(const Point& p, const Point& q) {
        if (p.kind != q.kind) return false;
        switch (p.kind) {
            case PointKind::Triode:
                return p.x == q.x && (p.x == 0.0 || p.leg == q.leg);
            case PointKind::Product:
                return p.parts == q.parts;
            default:
                return p.x == q.x;
        }
    }
};

using Tuple = std::vector<Point>;

struct CircleSpace {
    double circumference = 2.0;
};
struct IntervalSpace {};
struct TriodeSpace {};
struct RealWindow {
    double lo = -1.0;
    double hi = 1.0;
};
enum class ProductMode : std::uint8_t { Sum, Averaged };

struct MetricSpace;
struct ProductSpace {
    std::vector<MetricSpace> factors;
    ProductMode mode = ProductMode::Sum;
};

struct MetricSpace {
    std::variant<CircleSpace, IntervalSpace, TriodeSpace, RealWindow, ProductSpace> kind;

    static MetricSpace circle(double circumference = 2.0) {
        if (!(circumference > 0.0)) throw DomainError("circumference must be positive");
        return MetricSpace{CircleSpace{circumference}};
    }
    static MetricSpace interval() { return MetricSpace{IntervalSpace{}}; }
    static MetricSpace triode() { return MetricSpace{TriodeSpace{}}; }
    static MetricSpace window(double lo, double hi) {
        if (!(lo < hi)) throw DomainError("window needs lo < hi");
        return MetricSpace{RealWindow{lo, hi}};
    }
    static MetricSpace product(std::vector<MetricSpace> factors, ProductMode mode) {
        if (factors.empty()) throw DomainError("product needs at least one factor");
        return MetricSpace{ProductSpace{std::move(factors), mode}};
    }
    static MetricSpace power(const MetricSpace& base, std::size_t n, ProductMode mode) {
        return product(std::vector<MetricSpace>(n, base), mode);
    }

    bool is_circle() const { return std::holds_alternative<CircleSpace>(kind); }
    bool is_interval() const { return std::holds_alternative<IntervalSpace>(kind); }
    bool is_triode() const { return std::holds_alternative<TriodeSpace>(kind); }
    bool is_window() const { return std::holds_alternative<RealWindow>(kind); }
    bool is_product() const { return std::holds_alternative<ProductSpace>(kind); }
    // Spaces whose points carry a single real coordinate ordered like the reals.
    bool is_linear() const { return is_interval() || is_window(); }

    double circumference() const {
        if (auto* c = std::get_if<CircleSpace>(&kind)) return c->circumference;
        throw SpaceMismatch("not a circle space");
    }
    const ProductSpace& as_product() const {
        if (auto* p = std::get_if<ProductSpace>(&kind)) return *p;
        throw SpaceMismatch("not a product space");
    }
};

bool operator==(const MetricSpace& a, const MetricSpace& b);

inline bool operator==(const ProductSpace& a, const ProductSpace& b) {
    return a.mode == b.mode && a.factors == b.factors;
}

inline bool operator==(const MetricSpace& a, const MetricSpace& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.kind);
            if constexpr (std::is_same_v<T, CircleSpace>) return x.circumference == y.circumference;
            else if constexpr (std::is_same_v<T, RealWindow>) return x.lo == y.lo && x.hi == y.hi;
            else if constexpr (std::is_same_v<T, ProductSpace>) return x == y;
            else return true;
        },
        a.kind);
}

inline std::string space_name(const MetricSpace& space) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                return "circle(L=" + nlohmann::json(s.circumference).dump() + ")";
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                return "interval";
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                return "triode";
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                return "window[" + nlohmann::json(s.lo).dump() + "," + nlohmann::json(s.hi).dump() + "]";
            } else {
                std::string out = s.mode == ProductMode::Sum ? "sum(" : "avg(";
                for (std::size_t i = 0; i < s.factors.size(); ++i) {
                    if (i) out += ",";
                    out += space_name(s.factors[i]);
                }
                return out + ")";
            }
        },
        space.kind);
}

namespace triode_geometry {

// Unit vectors of the legs: A at 90 degrees, B at 210, C at 330.
inline std::array<double, 2> direction(Leg leg) {
    constexpr double h = 0.86602540378443864676;  // sqrt(3)/2
    switch (leg) {
        case Leg::A: return {0.0, 1.0};
        case Leg::B: return {-h, -0.5};
        case Leg::C: return {h, -0.5};
    }
    return {0.0, 0.0};
}

inline std::array<double, 2> coordinates(const Point& p) {
    auto d = direction(p.leg);
    return {p.x * d[0], p.x * d[1]};
}

// Planar distance; legs meet at 120 degrees.
inline double distance(const Point& p, const Point& q) {
    if (p.leg == q.leg || p.x == 0.0 || q.x == 0.0) {
        if (p.leg == q.leg) return std::fabs(p.x - q.x);
        return p.x == 0.0 ? q.x : p.x;
    }
    return std::sqrt(p.x * p.x + q.x * q.x + p.x * q.x);
}

// Length of the path inside the tree.
inline double tree_distance(const Point& p, const Point& q) {
    if (p.leg == q.leg || p.x == 0.0 || q.x == 0.0) {
        if (p.leg == q.leg) return std::fabs(p.x - q.x);
        return p.x + q.x;
    }
    return p.x + q.x;
}

// Whether m lies on the tree path between p and q.
inline bool on_tree_path(const Point& p, const Point& q, const Point& m) {
    return tree_distance(p, m) + tree_distance(m, q) <= tree_distance(p, q) + 1e-12;
}

}  // namespace triode_geometry

namespace detail {

inline void require_kind(const Point& p, PointKind k) {
    if (p.kind != k) {
        throw SpaceMismatch(std::string("expected a ") + kind_name(k) + " point, got " +
                            kind_name(p.kind));
    }
}

inline double circle_distance(double s, double t, double circumference) {
    double d = std::fabs(s - t);
    return std::min(d, circumference - d);
}

// Signed shorter increment from s to t, in [-L/2, L/2].
inline double circle_increment(double s, double t, double circumference) {
    double d = t - s;
    double half = circumference / 2.0;
    if (d > half) d -= circumference;
    else if (d < -half) d += circumference;
    return d;
}

}  // namespace detail

inline bool contains(const MetricSpace& space, const Point& p) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                return p.kind == PointKind::Circle && p.x >= 0.0 && p.x < s.circumference;
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                return p.kind == PointKind::Interval && p.x >= 0.0 && p.x <= 1.0;
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                return p.kind == PointKind::Triode && p.x >= 0.0 && p.x <= 1.0;
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                return p.kind == PointKind::Real && std::isfinite(p.x);
            } else {
                if (p.kind != PointKind::Product || p.parts.size() != s.factors.size()) return false;
                for (std::size_t i = 0; i < s.factors.size(); ++i) {
                    if (!contains(s.factors[i], p.parts[i])) return false;
                }
                return true;
            }
        },
        space.kind);
}

double distance(const MetricSpace& space, const Point& p, const Point& q);

// Distance between argument tuples of a product without materializing product points.
inline double tuple_distance(std::span<const MetricSpace> factors, ProductMode mode,
                             std::span<const Point> p, std::span<const Point> q) {
    if (p.size() != factors.size() || q.size() != factors.size()) {
        throw SpaceMismatch("tuple length does not match product arity");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) sum += distance(factors[i], p[i], q[i]);
    return mode == ProductMode::Sum ? sum : sum / static_cast<double>(factors.size());
}

inline double distance(const MetricSpace& space, const Point& p, const Point& q) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                detail::require_kind(p, PointKind::Circle);
                detail::require_kind(q, PointKind::Circle);
                return detail::circle_distance(p.x, q.x, s.circumference);
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                detail::require_kind(p, PointKind::Interval);
                detail::require_kind(q, PointKind::Interval);
                return std::fabs(p.x - q.x);
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                detail::require_kind(p, PointKind::Triode);
                detail::require_kind(q, PointKind::Triode);
                return triode_geometry::distance(p, q);
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                detail::require_kind(p, PointKind::Real);
                detail::require_kind(q, PointKind::Real);
                return std::fabs(p.x - q.x);
            } else {
                detail::require_kind(p, PointKind::Product);
                detail::require_kind(q, PointKind::Product);
                return tuple_distance(s.factors, s.mode, p.parts, q.parts);
            }
        },
        space.kind);
}

inline double space_diameter(const MetricSpace& space) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) return s.circumference / 2.0;
            else if constexpr (std::is_same_v<T, IntervalSpace>) return 1.0;
            else if constexpr (std::is_same_v<T, TriodeSpace>) return std::sqrt(3.0);
            else if constexpr (std::is_same_v<T, RealWindow>) return s.hi - s.lo;
            else {
                double sum = 0.0;
                for (const auto& f : s.factors) sum += space_diameter(f);
                return s.mode == ProductMode::Sum ? sum : sum / static_cast<double>(s.factors.size());
            }
        },
        space.kind);
}

namespace detail {

// Diameter of circle parameters: for each point the farthest partner sits next to its antipode.
inline double circle_set_diameter(std::vector<double> params, double circumference) {
    std::sort(params.begin(), params.end());
    const std::size_t n = params.size();
    const double half = circumference / 2.0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double target = params[i] + half;
        if (target >= circumference) target -= circumference;
        auto it = std::lower_bound(params.begin(), params.end(), target);
        std::size_t hi = static_cast<std::size_t>(it - params.begin()) % n;
        std::size_t lo = (hi + n - 1) % n;
        best = std::max(best, circle_distance(params[i], params[hi], circumference));
        best = std::max(best, circle_distance(params[i], params[lo], circumference));
        if (best == half) break;
    }
    return best;
}

}  // namespace detail

inline double diameter(const MetricSpace& space, std::span<const Point> pts) {
    if (pts.empty()) throw DomainError("diameter of an empty set");
    if (pts.size() == 1) {
        (void)distance(space, pts[0], pts[0]);
        return 0.0;
    }
    if (space.is_circle()) {
        std::vector<double> params;
        params.reserve(pts.size());
        for (const auto& p : pts) {
            detail::require_kind(p, PointKind::Circle);
            params.push_back(p.x);
        }
        return detail::circle_set_diameter(std::move(params), space.circumference());
    }
    if (space.is_linear()) {
        const PointKind k = space.is_interval() ? PointKind::Interval : PointKind::Real;
        double lo = pts[0].x, hi = pts[0].x;
        for (const auto& p : pts) {
            detail::require_kind(p, k);
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
        return hi - lo;
    }
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            best = std::max(best, distance(space, pts[i], pts[j]));
        }
    }
    return best;
}

struct Grid {
    MetricSpace space;
    std::vector<Point> points;
    double mesh = 0.0;
};

Grid grid(const MetricSpace& space, std::size_t n);

namespace detail {

inline Grid factor_grid(const MetricSpace& space, std::size_t n) {
    Grid g{space, {}, 0.0};
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                for (std::size_t k = 0; k < n; ++k) {
                    g.points.push_back(Point::circle(s.circumference * static_cast<double>(k) /
                                                         static_cast<double>(n),
                                                     s.circumference));
                }
                g.mesh = s.circumference / (2.0 * static_cast<double>(n));
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                for (std::size_t k = 0; k < n; ++k) {
                    g.points.push_back(
                        Point::interval(static_cast<double>(k) / static_cast<double>(n - 1)));
                }
                g.mesh = 0.5 / static_cast<double>(n - 1);
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                g.points.push_back(Point::center());
                for (Leg leg : {Leg::A, Leg::B, Leg::C}) {
                    for (std::size_t k = 1; k < n; ++k) {
                        g.points.push_back(
                            Point::triode(leg, static_cast<double>(k) / static_cast<double>(n - 1)));
                    }
                }
                g.mesh = 0.5 / static_cast<double>(n - 1);
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                const double span = s.hi - s.lo;
                for (std::size_t k = 0; k < n; ++k) {
                    double v = k + 1 == n ? s.hi
                                          : s.lo + span * static_cast<double>(k) /
                                                       static_cast<double>(n - 1);
                    g.points.push_back(Point::real(v));
                }
                g.mesh = span / (2.0 * static_cast<double>(n - 1));
            } else {
                std::vector<Grid> parts;
                double mesh_sum = 0.0;
                for (const auto& f : s.factors) {
                    parts.push_back(factor_grid(f, n));
                    mesh_sum += parts.back().mesh;
                }
                g.mesh = s.mode == ProductMode::Sum
                             ? mesh_sum
                             : mesh_sum / static_cast<double>(s.factors.size());
                std::vector<std::size_t> idx(parts.size(), 0);
                while (true) {
                    std::vector<Point> tuple;
                    tuple.reserve(parts.size());
                    for (std::size_t i = 0; i < parts.size(); ++i) tuple.push_back(parts[i].points[idx[i]]);
                    g.points.push_back(Point::product(std::move(tuple)));
                    std::size_t axis = parts.size();
                    while (axis > 0) {
                        --axis;
                        if (++idx[axis] < parts[axis].points.size()) break;
                        idx[axis] = 0;
                        if (axis == 0) return;
                    }
                }
            }
        },
        space.kind);
    return g;
}

}  // namespace detail

// Evenly spaced samples; products take the Cartesian product with the last factor varying fastest.
inline Grid grid(const MetricSpace& space, std::size_t n) {
    if (n < 2) throw DomainError("grid needs n >= 2");
    return detail::factor_grid(space, n);
}

inline Point geodesic_point(const MetricSpace& space, const Point& p, const Point& q, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic fraction outside [0,1]");
    return std::visit(
        [&](const auto& s) -> Point {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                detail::require_kind(p, PointKind::Circle);
                detail::require_kind(q, PointKind::Circle);
                if (detail::circle_distance(p.x, q.x, s.circumference) == s.circumference / 2.0) {
                    throw DomainError("antipodal points have no unique geodesic");
                }
                if (t == 0.0) return p;
                if (t == 1.0) return q;
                double inc = detail::circle_increment(p.x, q.x, s.circumference);
                return Point::circle(p.x + t * inc, s.circumference);
            } else if constexpr (std::is_same_v<T, IntervalSpace> || std::is_same_v<T, RealWindow>) {
                const PointKind k = std::is_same_v<T, IntervalSpace> ? PointKind::Interval : PointKind::Real;
                detail::require_kind(p, k);
                detail::require_kind(q, k);
                if (t == 0.0) return p;
                if (t == 1.0) return q;
                double v = p.x + t * (q.x - p.x);
                return Point{k, v, Leg::A, {}};
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                throw DomainError("the triode has no geodesics for its planar metric");
            } else {
                detail::require_kind(p, PointKind::Product);
                detail::require_kind(q, PointKind::Product);
                std::vector<Point> parts;
                for (std::size_t i = 0; i < s.factors.size(); ++i) {
                    parts.push_back(geodesic_point(s.factors[i], p.parts.at(i), q.parts.at(i), t));
                }
                return Point::product(std::move(parts));
            }
        },
        space.kind);
}

// ---- JSON ----

inline void to_json(nlohmann::json& j, const MetricSpace& space) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                j = {{"space", "circle"}, {"L", s.circumference}};
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                j = {{"space", "interval"}};
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                j = {{"space", "triode"}};
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                j = {{"space", "real"}, {"lo", s.lo}, {"hi", s.hi}};
            } else {
                nlohmann::json factors = nlohmann::json::array();
                for (const auto& f : s.factors) {
                    nlohmann::json fj;
                    to_json(fj, f);
                    factors.push_back(fj);
                }
                j = {{"space", "product"},
                     {"mode", s.mode == ProductMode::Sum ? "sum" : "averaged"},
                     {"factors", factors}};
            }
        },
        space.kind);
}

inline void from_json(const nlohmann::json& j, MetricSpace& space) {
    if (!j.is_object() || !j.contains("space")) throw ParseError("expected a space object", "space");
    const std::string tag = j.at("space").get<std::string>();
    if (tag == "circle") {
        space = MetricSpace::circle(j.value("L", 2.0));
    } else if (tag == "interval") {
        space = MetricSpace::interval();
    } else if (tag == "triode") {
        space = MetricSpace::triode();
    } else if (tag == "real") {
        space = MetricSpace::window(j.at("lo").get<double>(), j.at("hi").get<double>());
    } else if (tag == "product") {
        std::vector<MetricSpace> factors;
        for (const auto& f : j.at("factors")) {
            MetricSpace fs;
            from_json(f, fs);
            factors.push_back(std::move(fs));
        }
        const std::string mode = j.value("mode", "sum");
        if (mode != "sum" && mode != "averaged") throw ParseError("unknown product mode " + mode, "space.mode");
        space = MetricSpace::product(std::move(factors),
                                     mode == "sum" ? ProductMode::Sum : ProductMode::Averaged);
    } else {
        throw ParseError("unknown space tag " + tag, "space");
    }
}

inline Leg parse_leg(const std::string& s) {
    if (s == "A") return Leg::A;
    if (s == "B") return Leg::B;
    if (s == "C") return Leg::C;
    throw ParseError("unknown leg " + s, "leg");
}

inline void to_json(nlohmann::json& j, const Point& p) {
    switch (p.kind) {
        case PointKind::Circle: j = {{"circle", p.x}}; break;
        case PointKind::Interval: j = {{"interval", p.x}}; break;
        case PointKind::Real: j = {{"real", p.x}}; break;
        case PointKind::Triode:
            j = {{"triode", {{"leg", std::string(1, leg_name(p.leg))}, {"t", p.x}}}};
            break;
        case PointKind::Product: {
            nlohmann::json parts = nlohmann::json::array();
            for (const auto& q : p.parts) {
                nlohmann::json qj;
                to_json(qj, q);
                parts.push_back(qj);
            }
            j = {{"product", parts}};
            break;
        }
    }
}

// Circle parameters are stored canonical; decoding keeps the value as written.
inline void from_json(const nlohmann::json& j, Point& p) {
    if (!j.is_object() || j.size() != 1) throw ParseError("expected a tagged point object", "point");
    const auto& [tag, v] = *j.items().begin();
    if (tag == "circle") p = Point{PointKind::Circle, v.get<double>(), Leg::A, {}};
    else if (tag == "interval") p = Point::interval(v.get<double>());
    else if (tag == "real") p = Point::real(v.get<double>());
    else if (tag == "triode") p = Point::triode(parse_leg(v.at("leg").get<std::string>()), v.at("t").get<double>());
    else if (tag == "product") {
        std::vector<Point> parts;
        for (const auto& q : v) {
            Point qp;
            from_json(q, qp);
            parts.push_back(std::move(qp));
        }
        p = Point::product(std::move(parts));
    } else {
        throw ParseError("unknown point tag " + std::string(tag), "point");
    }
}

// Compact encodings relative to a known space, used by lookup tables:
// scalar spaces store a bare number, the triode stores [leg, t], products store arrays.
inline nlohmann::json encode_compact(const MetricSpace& space, const Point& p) {
    if (space.is_triode()) {
        detail::require_kind(p, PointKind::Triode);
        return nlohmann::json::array({std::string(1, leg_name(p.leg)), p.x});
    }
    if (space.is_product()) {
        detail::require_kind(p, PointKind::Product);
        const auto& ps = space.as_product();
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < ps.factors.size(); ++i) arr.push_back(encode_compact(ps.factors[i], p.parts.at(i)));
        return arr;
    }
    return p.x;
}

inline Point decode_compact(const MetricSpace& space, const nlohmann::json& j, const std::string& where) {
    try {
        if (space.is_triode()) {
            if (!j.is_array() || j.size() != 2) throw ParseError("expected [leg, t]", where);
            return Point::triode(parse_leg(j[0].get<std::string>()), j[1].get<double>());
        }
        if (space.is_product()) {
            const auto& ps = space.as_product();
            if (!j.is_array() || j.size() != ps.factors.size()) throw ParseError("expected product tuple", where);
            std::vector<Point> parts;
            for (std::size_t i = 0; i < ps.factors.size(); ++i) {
                parts.push_back(decode_compact(ps.factors[i], j[i], where + "[" + std::to_string(i) + "]"));
            }
            return Point::product(std::move(parts));
        }
        if (!j.is_number()) throw ParseError("expected a number", where);
        const double v = j.get<double>();
        if (space.is_circle()) return Point::circle(v, space.circumference());
        if (space.is_interval()) return Point::interval(v);
        return Point::real(v);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what(), where);
    }
}

}  // namespace jumpgauge
