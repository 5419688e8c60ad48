#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/equations.hpp"
#include "jumpgauge/errors.hpp"
#include "jumpgauge/metric.hpp"
#include "jumpgauge/sampling.hpp"
#include "jumpgauge/table_model.hpp"

namespace jumpgauge {

// ---- approximate intermediate values and fixed points ----

struct IvtResult {
    double b = 0.0;
    double fb = 0.0;
    // Largest |f(x_{k+1}) - f(x_k)| seen along the walk.
    double epsilon = 0.0;
    double step = 0.0;
    std::size_t steps = 0;
    std::optional<std::pair<double, double>> violation;

    bool is_violation() const { return violation.has_value(); }
};

namespace detail {

// Index k with values[k] and values[k+1] on opposite closed sides of s.
inline std::size_t crossing_index(std::span<const double> values, double s) {
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double a = values[k] - s;
        const double b = values[k + 1] - s;
        if (a == 0.0 || (a < 0.0) != (b < 0.0) || b == 0.0) return k;
    }
    throw DomainError("target is not between the end values");
}

inline bool between(double s, double u, double v) { return std::min(u, v) <= s && s <= std::max(u, v); }

}  // namespace detail

// Walks a to c on a dyadic lattice with steps below delta and returns a point whose value is
// within half the largest observed value step of s.
inline IvtResult approx_ivt_witness(const std::function<double(double)>& f, double a, double c, double s, double delta,
                                    std::optional<double> epsilon_bound = std::nullopt) {
    if (!(a < c)) throw DomainError("approx_ivt_witness needs a < c");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    std::size_t k = 1;
    while (!((c - a) / static_cast<double>(k) < delta)) {
        k *= 2;
        if (k > (std::size_t{1} << 26)) throw BudgetExceeded("walk steps", std::size_t{1} << 26);
    }
    const double fa = f(a), fc = f(c);
    if (!detail::between(s, fa, fc)) throw DomainError("s is not between f(a) and f(c)");
    std::vector<double> xs(k + 1), vs(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        xs[i] = i == k ? c : a + (c - a) * static_cast<double>(i) / static_cast<double>(k);
        vs[i] = i == 0 ? fa : (i == k ? fc : f(xs[i]));
    }
    IvtResult r;
    r.steps = k;
    r.step = (c - a) / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double d = std::fabs(vs[i + 1] - vs[i]);
        r.epsilon = std::max(r.epsilon, d);
        if (epsilon_bound && !r.violation && d >= *epsilon_bound) r.violation = std::make_pair(xs[i], xs[i + 1]);
    }
    const std::size_t j = detail::crossing_index(vs, s);
    const bool left = std::fabs(vs[j] - s) <= std::fabs(vs[j + 1] - s);
    r.b = left ? xs[j] : xs[j + 1];
    r.fb = left ? vs[j] : vs[j + 1];
    return r;
}

struct FixedPointResult {
    std::vector<double> e;
    // Sum-metric distance from e to f(e).
    double residual = 0.0;
    // Largest image distance over grid-adjacent inputs.
    double modulus = 0.0;
    double step = 0.0;
};

using CubeMap = std::function<std::vector<double>(std::span<const double>)>;

// Values outside the cube are clamped back into it, so any map on [0,1]^n is treated as a self-map.
inline FixedPointResult approx_fixed_point(const CubeMap& map, std::size_t n, double delta) {
    if (n < 1 || n > 2) throw DomainError("approx_fixed_point supports dimension 1 or 2");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const CubeMap f = [&map, n](std::span<const double> x) {
        auto y = map(x);
        if (y.size() != n) throw DomainError("map returned a point of the wrong dimension");
        for (double& v : y) v = std::clamp(v, 0.0, 1.0);
        return y;
    };
    FixedPointResult out;
    if (n == 1) {
        auto g = [&f](double x) {
            const std::array<double, 1> v{x};
            return f(v)[0] - x;
        };
        const auto r = approx_ivt_witness(g, 0.0, 1.0, 0.0, delta);
        out.e = {r.b};
        out.residual = std::fabs(r.fb);
        out.step = r.step;
        double prev = 0.0;
        for (std::size_t i = 0; i <= r.steps; ++i) {
            const std::array<double, 1> v{static_cast<double>(i) / static_cast<double>(r.steps)};
            const double y = f(v)[0];
            if (i > 0) out.modulus = std::max(out.modulus, std::fabs(y - prev));
            prev = y;
        }
        return out;
    }
    std::size_t k = 1;
    while (!(1.0 / static_cast<double>(k) < delta)) {
        k *= 2;
        if (k > 1024) throw BudgetExceeded("fixed-point grid per axis", 1024);
    }
    out.step = 1.0 / static_cast<double>(k);
    std::vector<std::vector<double>> img((k + 1) * (k + 1));
    out.residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= k; ++i) {
        for (std::size_t j = 0; j <= k; ++j) {
            const std::array<double, 2> x{static_cast<double>(i) / static_cast<double>(k),
                                          static_cast<double>(j) / static_cast<double>(k)};
            auto y = f(x);
            const double d = std::fabs(y[0] - x[0]) + std::fabs(y[1] - x[1]);
            if (d < out.residual) {
                out.residual = d;
                out.e = {x[0], x[1]};
            }
            img[i * (k + 1) + j] = std::move(y);
        }
    }
    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        return std::fabs(a[0] - b[0]) + std::fabs(a[1] - b[1]);
    };
    for (std::size_t i = 0; i <= k; ++i) {
        for (std::size_t j = 0; j <= k; ++j) {
            const auto& y = img[i * (k + 1) + j];
            if (i < k) out.modulus = std::max(out.modulus, dist(y, img[(i + 1) * (k + 1) + j]));
            if (j < k) out.modulus = std::max(out.modulus, dist(y, img[i * (k + 1) + j + 1]));
        }
    }
    return out;
}

// ---- certificates ----

struct CertDistance {
    std::string name;
    std::string space;  // "carrier" or "pair"
    std::string a;
    std::string b;
    double value = 0.0;
};

struct CertCheck {
    std::vector<std::string> lhs;  // summed
    std::string rel;               // "<", "<=" or ">="
    std::string rhs;
};

struct CertEval {
    std::string op;
    std::string input;
    std::string result;
};

struct Certificate {
    std::string kind;
    std::string driver;
    MetricSpace carrier;
    std::map<std::string, double> claims;
    std::map<std::string, Point> points;
    std::vector<CertDistance> distances;
    std::vector<CertCheck> checks;
    std::vector<CertEval> evaluations;
    std::string inequality;

    const Point& point(const std::string& name) const {
        auto it = points.find(name);
        if (it == points.end()) throw DomainError("certificate has no point " + name);
        return it->second;
    }
    double value(const std::string& name) const {
        if (auto it = claims.find(name); it != claims.end()) return it->second;
        for (const auto& d : distances) {
            if (d.name == name) return d.value;
        }
        throw DomainError("certificate has no value " + name);
    }
};

namespace detail {

inline double certificate_distance(const MetricSpace& carrier, const std::string& space, const Point& a,
                                   const Point& b) {
    if (space == "carrier") return distance(carrier, a, b);
    if (space == "pair") {
        require_kind(a, PointKind::Product);
        require_kind(b, PointKind::Product);
        if (a.parts.size() != b.parts.size() || a.parts.empty()) throw SpaceMismatch("pair points differ in arity");
        return distance(MetricSpace::power(carrier, a.parts.size(), ProductMode::Averaged), a, b);
    }
    throw DomainError("unknown certificate space " + space);
}

}  // namespace detail

class CertificateBuilder {
public:
    CertificateBuilder(std::string kind, std::string driver, const MetricSpace& carrier, double delta0, double delta_n) {
        cert_.kind = std::move(kind);
        cert_.driver = std::move(driver);
        cert_.carrier = carrier;
        cert_.claims = {{"delta0", delta0}, {"deltaN", delta_n}};
    }

    const std::string& point(const std::string& name, const Point& p) {
        cert_.points[name] = p;
        return cert_.points.find(name)->first;
    }
    void tuple(const std::string& name, const Tuple& t) { cert_.points[name] = Point::product(t); }

    double distance(const std::string& name, const std::string& space, const std::string& a, const std::string& b) {
        const double v = detail::certificate_distance(cert_.carrier, space, cert_.point(a), cert_.point(b));
        cert_.distances.push_back({name, space, a, b, v});
        return v;
    }
    void evaluation(const std::string& op, const std::string& input, const std::string& result) {
        cert_.evaluations.push_back({op, input, result});
    }
    void check(std::vector<std::string> lhs, const std::string& rel, const std::string& rhs) {
        cert_.checks.push_back({std::move(lhs), rel, rhs});
    }

    // A related pair: op applied to two argument tuples. Records inputs, outputs and both distances.
    void pair(const std::string& prefix, const std::string& op, const Tuple& in_a, const Tuple& in_b, const Point& out_a,
              const Point& out_b) {
        tuple(prefix + ".in_a", in_a);
        tuple(prefix + ".in_b", in_b);
        point(prefix + ".out_a", out_a);
        point(prefix + ".out_b", out_b);
        evaluation(op, prefix + ".in_a", prefix + ".out_a");
        evaluation(op, prefix + ".in_b", prefix + ".out_b");
        distance(prefix + ".d_in", "pair", prefix + ".in_a", prefix + ".in_b");
        distance(prefix + ".d_out", "carrier", prefix + ".out_a", prefix + ".out_b");
    }

    Certificate& cert() { return cert_; }
    Certificate take(std::string inequality) {
        cert_.inequality = std::move(inequality);
        return std::move(cert_);
    }

private:
    Certificate cert_;
};

struct SelfCheckReport {
    bool ok = true;
    double max_distance_error = 0.0;
    std::vector<std::string> failures;
};

inline constexpr double kCertificateTolerance = 1e-9;

inline SelfCheckReport self_check(const Certificate& c) {
    SelfCheckReport rep;
    for (const auto& d : c.distances) {
        double v = 0.0;
        try {
            v = detail::certificate_distance(c.carrier, d.space, c.point(d.a), c.point(d.b));
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.failures.push_back("distance " + d.name + ": " + e.what());
            continue;
        }
        const double err = std::fabs(v - d.value);
        rep.max_distance_error = std::max(rep.max_distance_error, err);
        if (!(err <= kCertificateTolerance)) {
            rep.ok = false;
            rep.failures.push_back("distance " + d.name + " recomputes to a different value");
        }
    }
    for (const auto& ch : c.checks) {
        try {
            double lhs = 0.0;
            for (const auto& n : ch.lhs) lhs += c.value(n);
            const double rhs = c.value(ch.rhs);
            bool holds = false;
            if (ch.rel == "<") holds = lhs < rhs;
            else if (ch.rel == "<=") holds = lhs <= rhs;
            else if (ch.rel == ">=") holds = lhs >= rhs;
            else throw DomainError("unknown relation " + ch.rel);
            if (!holds) {
                rep.ok = false;
                std::string text;
                for (const auto& n : ch.lhs) text += (text.empty() ? "" : " + ") + n;
                rep.failures.push_back("check " + text + " " + ch.rel + " " + ch.rhs + " does not hold");
            }
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.failures.push_back(e.what());
        }
    }
    return rep;
}

// Re-evaluates every recorded operation application against the model's tables.
inline SelfCheckReport verify_against_model(const Certificate& c, const TableModel& m) {
    SelfCheckReport rep;
    for (const auto& ev : c.evaluations) {
        try {
            const Point& in = c.point(ev.input);
            detail::require_kind(in, PointKind::Product);
            const Point got = m.apply(ev.op, in.parts);
            const double err = distance(m.space, got, c.point(ev.result));
            rep.max_distance_error = std::max(rep.max_distance_error, err);
            if (!(err <= kCertificateTolerance)) {
                rep.ok = false;
                rep.failures.push_back("evaluation " + ev.op + "(" + ev.input + ") differs from " + ev.result);
            }
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.failures.push_back(e.what());
        }
    }
    return rep;
}

inline void to_json(nlohmann::json& j, const Certificate& c) {
    nlohmann::json pts = nlohmann::json::object();
    for (const auto& [name, p] : c.points) pts[name] = p;
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& d : c.distances) {
        ds.push_back({{"name", d.name}, {"space", d.space}, {"a", d.a}, {"b", d.b}, {"value", d.value}});
    }
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& ch : c.checks) cs.push_back({{"lhs", ch.lhs}, {"rel", ch.rel}, {"rhs", ch.rhs}});
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : c.evaluations) es.push_back({{"op", e.op}, {"args", e.input}, {"result", e.result}});
    j = {{"kind", c.kind},
         {"driver", c.driver},
         {"spaces", {{"carrier", c.carrier}, {"pair", "averaged"}}},
         {"claims", c.claims},
         {"points", pts},
         {"distances", ds},
         {"checks", cs},
         {"evaluations", es},
         {"inequality", c.inequality}};
}

inline void from_json(const nlohmann::json& j, Certificate& c) {
    c.kind = j.at("kind").get<std::string>();
    c.driver = j.at("driver").get<std::string>();
    c.carrier = j.at("spaces").at("carrier").get<MetricSpace>();
    c.claims = j.at("claims").get<std::map<std::string, double>>();
    c.points.clear();
    for (const auto& [name, p] : j.at("points").items()) c.points[name] = p.get<Point>();
    c.distances.clear();
    for (const auto& d : j.at("distances")) {
        c.distances.push_back({d.at("name").get<std::string>(), d.at("space").get<std::string>(),
                               d.at("a").get<std::string>(), d.at("b").get<std::string>(),
                               d.at("value").get<double>()});
    }
    c.checks.clear();
    for (const auto& ch : j.at("checks")) {
        c.checks.push_back({ch.at("lhs").get<std::vector<std::string>>(), ch.at("rel").get<std::string>(),
                            ch.at("rhs").get<std::string>()});
    }
    c.evaluations.clear();
    for (const auto& e : j.at("evaluations")) {
        c.evaluations.push_back({e.at("op").get<std::string>(), e.at("args").get<std::string>(),
                                 e.at("result").get<std::string>()});
    }
    c.inequality = j.at("inequality").get<std::string>();
}

// ---- pair search on table models ----

struct PairWitness {
    std::string op;
    Tuple in_a, in_b;
    Point out_a, out_b;
    double d_in = 0.0;
    double d_out = -1.0;
};

inline constexpr std::size_t kPairSearchExhaustive = std::size_t{1} << 25;
inline constexpr std::size_t kPairSearchSamples = std::size_t{1} << 21;
inline constexpr std::size_t kPairSearchMaxNodes = 2048;

// Node distances: a dense matrix plus each row's neighbours sorted by distance.
class NodeNeighbors {
public:
    explicit NodeNeighbors(const TableModel& m) : n_(m.nodes.size()) {
        if (n_ > kPairSearchMaxNodes) throw BudgetExceeded("nodes for pair search", kPairSearchMaxNodes);
        dist_.resize(n_ * n_);
        rows_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            rows_[i].reserve(n_);
            for (std::size_t j = 0; j < n_; ++j) {
                const double d = i == j ? 0.0 : distance(m.space, m.nodes[i], m.nodes[j]);
                dist_[i * n_ + j] = d;
                rows_[i].emplace_back(d, static_cast<std::uint32_t>(j));
            }
            std::sort(rows_[i].begin(), rows_[i].end());
        }
    }

    double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    // Neighbours of i at distance below r (strict) or at most r.
    std::span<const std::pair<double, std::uint32_t>> within(std::size_t i, double r, bool strict) const {
        const auto& row = rows_[i];
        auto it = strict ? std::lower_bound(row.begin(), row.end(), std::make_pair(r, std::uint32_t{0}))
                         : std::upper_bound(row.begin(), row.end(),
                                            std::make_pair(r, std::numeric_limits<std::uint32_t>::max()));
        return {row.data(), static_cast<std::size_t>(it - row.begin())};
    }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<std::vector<std::pair<double, std::uint32_t>>> rows_;
};

namespace detail {

inline bool within_bound(double d, double r, bool strict) { return strict ? d < r : d <= r; }

// Largest output spread of a domain-tabulated unary op over input windows of width r.
inline PairWitness domain_window_search(const TableModel& m, const std::string& name, double r, bool strict) {
    const TableOp& o = m.op(name);
    PairWitness best;
    best.op = name;
    std::deque<std::size_t> hi, lo;
    std::size_t left = 0;
    for (std::size_t k = 0; k < o.domain.size(); ++k) {
        while (!within_bound(o.domain[k].x - o.domain[left].x, r, strict)) ++left;
        while (!hi.empty() && o.table[hi.back()].x <= o.table[k].x) hi.pop_back();
        hi.push_back(k);
        while (!lo.empty() && o.table[lo.back()].x >= o.table[k].x) lo.pop_back();
        lo.push_back(k);
        while (hi.front() < left) hi.pop_front();
        while (lo.front() < left) lo.pop_front();
        const double spread = o.table[hi.front()].x - o.table[lo.front()].x;
        if (spread > best.d_out) {
            const std::size_t a = std::min(hi.front(), lo.front()), b = std::max(hi.front(), lo.front());
            best.in_a = {o.domain[a]};
            best.in_b = {o.domain[b]};
            best.out_a = o.table[a];
            best.out_b = o.table[b];
            best.d_in = distance(m.space, o.domain[a], o.domain[b]);
            best.d_out = distance(m.space, o.table[a], o.table[b]);
        }
    }
    return best;
}

inline void consider(PairWitness& best, const TableModel& m, const std::string& name, const TableOp& o,
                     std::span<const std::size_t> a, std::span<const std::size_t> b, double d_in) {
    const Point& pa = o.table[m.flat_index(a)];
    const Point& pb = o.table[m.flat_index(b)];
    const double d = distance(m.space, pa, pb);
    if (d > best.d_out) {
        best.op = name;
        best.in_a.clear();
        best.in_b.clear();
        for (std::size_t i : a) best.in_a.push_back(m.nodes[i]);
        for (std::size_t i : b) best.in_b.push_back(m.nodes[i]);
        best.out_a = pa;
        best.out_b = pb;
        best.d_in = d_in;
        best.d_out = d;
    }
}

}  // namespace detail

// Pair of argument tuples within averaged distance r maximizing the output distance of the op.
inline PairWitness max_pair(const TableModel& m, const NodeNeighbors& nb, const std::string& name, double r,
                            bool strict, std::uint64_t seed) {
    const TableOp& o = m.op(name);
    PairWitness best;
    best.op = name;
    if (o.arity == 0) return best;
    if (o.has_domain()) return detail::domain_window_search(m, name, r, strict);
    const std::size_t n = nb.size();
    if (o.arity == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [d, j] : nb.within(i, r, strict)) {
                const std::array<std::size_t, 1> a{i}, b{j};
                detail::consider(best, m, name, o, a, b, d);
            }
        }
        return best;
    }
    if (o.arity != 2) throw DomainError("pair search supports arity at most 2");
    const double r2 = 2.0 * r;
    std::size_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += nb.within(i, r2, strict).size();
    const double count = static_cast<double>(s) * static_cast<double>(s);
    if (count <= static_cast<double>(kPairSearchExhaustive)) {
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [d1, i2] : nb.within(i, r2, strict)) {
                for (std::size_t j = 0; j < n; ++j) {
                    for (const auto& [d2, j2] : nb.within(j, r2 - d1, strict)) {
                        const double d_in = 0.5 * (d1 + d2);
                        if (!detail::within_bound(d_in, r, strict)) continue;
                        const std::array<std::size_t, 2> a{i, j}, b{i2, j2};
                        detail::consider(best, m, name, o, a, b, d_in);
                    }
                }
            }
        }
        return best;
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < kPairSearchSamples; ++t) {
        const std::size_t i = pick(rng);
        const auto ri = nb.within(i, r2, strict);
        const auto [d1, i2] = ri[std::uniform_int_distribution<std::size_t>(0, ri.size() - 1)(rng)];
        const std::size_t j = pick(rng);
        const auto rj = nb.within(j, r2 - d1, strict);
        if (rj.empty()) continue;
        const auto [d2, j2] = rj[std::uniform_int_distribution<std::size_t>(0, rj.size() - 1)(rng)];
        const double d_in = 0.5 * (d1 + d2);
        if (!detail::within_bound(d_in, r, strict)) continue;
        const std::array<std::size_t, 2> a{i, j}, b{i2, j2};
        detail::consider(best, m, name, o, a, b, d_in);
    }
    return best;
}

// ---- drivers ----

struct DriverOptions {
    // Search for a directly violated constraint chain before running the proof.
    bool precheck = true;
    std::uint64_t seed = 0;
};

struct DriverResult {
    Certificate certificate;
    GateReport gate;
    SelfCheckReport self_check;
    SelfCheckReport model_check;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

inline void require_claims(double delta0, double delta_n) {
    if (!(delta0 > 0.0) || !(delta_n > 0.0)) throw DomainError("claimed deltas must be positive");
}

inline GateReport run_gate(const TableModel& m, const Theory& thy, std::uint64_t seed) {
    auto gate = table_residual(m, thy, seed);
    if (gate.residual > 1e-9) throw GateFailure(thy.name, gate.residual);
    return gate;
}

// Greedy chain: at each level the widest output over pairs allowed by the previous level.
inline std::optional<Certificate> precheck_chain(const TableModel& m, const Theory& thy, const std::string& driver,
                                                 std::size_t levels, double delta0, double delta_n, std::uint64_t seed) {
    const NodeNeighbors nb(m);
    std::vector<PairWitness> chain;
    double r = delta0;
    for (std::size_t level = 0; level < levels; ++level) {
        PairWitness best;
        for (const auto& s : thy.symbols) {
            if (s.arity == 0) continue;
            auto w = max_pair(m, nb, s.name, r, level == 0, mix_seed(seed, level * 131 + hash_text(s.name)));
            if (w.d_out > best.d_out) best = std::move(w);
        }
        if (best.d_out < 0.0) return std::nullopt;
        chain.push_back(best);
        if (best.d_out >= delta_n) {
            CertificateBuilder b("constraint-violation", driver, m.space, delta0, delta_n);
            for (std::size_t i = 0; i < chain.size(); ++i) {
                const std::string p = "level" + std::to_string(i);
                b.pair(p, chain[i].op, chain[i].in_a, chain[i].in_b, chain[i].out_a, chain[i].out_b);
                if (i == 0) b.check({p + ".d_in"}, "<", "delta0");
                else b.check({p + ".d_in"}, "<=", "level" + std::to_string(i - 1) + ".d_out");
            }
            const std::string last = "level" + std::to_string(chain.size() - 1);
            b.check({last + ".d_out"}, ">=", "deltaN");
            std::string text = "a pair at level " + std::to_string(chain.size() - 1) + " has output distance " +
                               fmt(best.d_out) + " >= deltaN = " + fmt(delta_n) +
                               "; each level's input is below the bound forced by the level before";
            return b.take(std::move(text));
        }
        if (best.d_out <= r && level > 0) break;
        r = best.d_out;
    }
    return std::nullopt;
}

// Adds the level-1 input condition: at most the walk pair's output, or below delta0.
inline void bounded_by_walk(CertificateBuilder& b, const std::string& prefix, const std::string& walk, double d_in,
                            double walk_out, double delta0) {
    if (d_in <= walk_out) b.check({prefix + ".d_in"}, "<=", walk + ".d_out");
    else if (d_in < delta0) b.check({prefix + ".d_in"}, "<", "delta0");
    else throw DomainError("approximate intermediate value not resolved on this grid");
}

struct Walk {
    std::vector<Tuple> inputs;
    std::vector<Point> outputs;
    std::size_t max_step = 0;  // index k of the widest output step (k, k+1)
    double max_in = 0.0;
};

inline Walk run_walk(const TableModel& m, const std::string& op, std::vector<Tuple> inputs) {
    Walk w;
    w.inputs = std::move(inputs);
    if (w.inputs.size() < 2) throw DomainError("walk needs at least two points");
    for (const auto& t : w.inputs) w.outputs.push_back(m.apply(op, t));
    const auto sp = MetricSpace::power(m.space, w.inputs[0].size(), ProductMode::Averaged);
    double widest = -1.0;
    for (std::size_t k = 0; k + 1 < w.inputs.size(); ++k) {
        const double din = distance(sp, Point::product(w.inputs[k]), Point::product(w.inputs[k + 1]));
        w.max_in = std::max(w.max_in, din);
        const double dout = distance(m.space, w.outputs[k], w.outputs[k + 1]);
        if (dout > widest) {
            widest = dout;
            w.max_step = k;
        }
    }
    return w;
}

inline void record_walk(CertificateBuilder& b, const std::string& prefix, const std::string& op, const Walk& w,
                        double delta0) {
    if (!(w.max_in < delta0)) throw DomainError("grid too coarse: walk step " + fmt(w.max_in) + " is not below delta0");
    const std::size_t k = w.max_step;
    b.pair(prefix, op, w.inputs[k], w.inputs[k + 1], w.outputs[k], w.outputs[k + 1]);
    b.check({prefix + ".d_in"}, "<", "delta0");
}

inline std::vector<std::size_t> sorted_node_order(const TableModel& m) {
    std::vector<std::size_t> order(m.nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&m](std::size_t a, std::size_t b) { return m.nodes[a].x < m.nodes[b].x; });
    return order;
}

// Closest walk output to target on the real line, by the crossing of output - target.
inline std::size_t scalar_crossing(std::span<const double> values, double target) {
    const std::size_t k = crossing_index(values, target);
    return std::fabs(values[k] - target) <= std::fabs(values[k + 1] - target) ? k : k + 1;
}

inline Certificate finish_target(CertificateBuilder& b, const std::string& last, const std::string& a,
                                 const std::string& c, double delta_n, const std::string& text) {
    b.distance("target.d", "carrier", a, c);
    b.check({"deltaN"}, "<", "target.d");
    b.check({last + ".d_out"}, ">=", "deltaN");
    (void)delta_n;
    return b.take(text);
}

}  // namespace detail

// Injective binary operation on [0,1] with left inverses: two levels suffice for a contradiction.
inline DriverResult refute_interval_injective(const TableModel& m, double delta0, double delta2,
                                              const DriverOptions& opts = {}) {
    detail::require_claims(delta0, delta2);
    if (!m.space.is_interval()) throw SpaceMismatch("injective driver needs an interval carrier");
    const Theory thy = catalog("injective-binary");
    if (!(delta2 < m.node_diameter())) throw ScopeError("claim outside theorem scope: deltaN is not below the diameter");
    DriverResult res;
    res.gate = detail::run_gate(m, thy, opts.seed);
    const std::string driver = "interval-injective";
    if (opts.precheck) {
        if (auto c = detail::precheck_chain(m, thy, driver, 2, delta0, delta2, opts.seed)) {
            res.certificate = std::move(*c);
        }
    }
    if (res.certificate.kind.empty()) {
        const auto order = detail::sorted_node_order(m);
        std::array<Point, 2> a{m.nodes[order.front()], m.nodes[order.back()]};
        std::array<Point, 2> bb = a;
        auto g = [&m](const Point& x, const Point& y) { return m.apply("G", std::vector<Point>{x, y}); };
        double lowest = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                const double v = g(a[i], bb[j]).x;
                if (v < lowest) {
                    lowest = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == 1) std::swap(a[0], a[1]);
        if (bj == 1) std::swap(bb[0], bb[1]);
        const Point u = g(a[1], bb[0]);
        const Point w = g(a[0], bb[1]);
        const bool second = u.x <= w.x;
        // Walk one argument across the node set from its 0-end to its 1-end.
        const Point& from = second ? bb[0] : a[0];
        std::vector<std::size_t> path(order.begin(), order.end());
        if (m.nodes[path.front()].x != from.x) std::reverse(path.begin(), path.end());
        std::vector<Tuple> inputs;
        for (std::size_t k : path) inputs.push_back(second ? Tuple{a[0], m.nodes[k]} : Tuple{m.nodes[k], bb[0]});
        const auto walk = detail::run_walk(m, "G", inputs);
        const Point& target = second ? u : w;
        std::vector<double> vals;
        for (const auto& p : walk.outputs) vals.push_back(p.x);
        const std::size_t k = detail::scalar_crossing(vals, target.x);
        const Point z = walk.outputs[k];
        const std::string inv = second ? "F0" : "F1";

        CertificateBuilder b("distance-contradiction", driver, m.space, delta0, delta2);
        b.point("a0", a[0]);
        b.point("a1", a[1]);
        b.point("b0", bb[0]);
        b.point("b1", bb[1]);
        b.tuple("corner.in", second ? Tuple{a[1], bb[0]} : Tuple{a[0], bb[1]});
        b.point("corner", target);
        b.evaluation("G", "corner.in", "corner");
        b.tuple("witness.in", walk.inputs[k]);
        b.point("witness", z);
        b.evaluation("G", "witness.in", "witness");
        detail::record_walk(b, "walk", "G", walk, delta0);
        const Tuple za{z}, ta{target};
        b.pair("close", inv, za, ta, m.apply(inv, za), m.apply(inv, ta));
        detail::bounded_by_walk(b, "close", "walk", b.cert().value("close.d_in"), b.cert().value("walk.d_out"), delta0);
        const std::string far_a = second ? "a0" : "b0";
        const std::string far_b = second ? "a1" : "b1";
        res.certificate = detail::finish_target(
            b, "close", far_a, far_b, delta2,
            "walking G along one argument gives a level-0 pair and a level-1 pair whose " + inv +
                " outputs are the two ends of the interval; their distance " +
                detail::fmt(b.cert().value("close.d_out")) + " would have to be below deltaN = " +
                detail::fmt(delta2));
    }
    res.self_check = self_check(res.certificate);
    res.model_check = verify_against_model(res.certificate, m);
    return res;
}

namespace detail {

inline bool in_leg(const Point& p, Leg leg) { return p.x == 0.0 || p.leg == leg; }
inline bool in_open_leg(const Point& p, Leg leg) { return p.x > 0.0 && p.leg == leg; }

// Leg nodes from the tip (t = 1 end) down to the center, center included.
inline std::vector<Point> leg_nodes_inward(const TableModel& m, Leg leg) {
    std::vector<Point> pts;
    for (const auto& p : m.nodes) {
        if (p.x > 0.0 && p.leg == leg) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x > b.x; });
    pts.push_back(Point::center());
    return pts;
}

inline std::size_t closest_output(const MetricSpace& space, const std::vector<Point>& outs, const Point& target) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < outs.size(); ++k) {
        if (distance(space, outs[k], target) < distance(space, outs[best], target)) best = k;
    }
    return best;
}

}  // namespace detail

// Lattice operations on the triode cannot be 3-constrained by (delta0, delta3) with delta3 < 1/2.
inline DriverResult refute_triode_lattice(const TableModel& m, double delta0, double delta3,
                                          const DriverOptions& opts = {}) {
    detail::require_claims(delta0, delta3);
    if (!m.space.is_triode()) throw SpaceMismatch("triode driver needs a triode carrier");
    if (!(delta3 < 0.5)) throw ScopeError("claim outside theorem scope: deltaN must be below 0.5");
    const Theory thy = catalog("lattice");
    DriverResult res;
    res.gate = detail::run_gate(m, thy, opts.seed);
    const std::string driver = "triode-lattice";
    if (opts.precheck) {
        if (auto c = detail::precheck_chain(m, thy, driver, 3, delta0, delta3, opts.seed)) {
            res.certificate = std::move(*c);
        }
    }
    if (res.certificate.kind.empty()) {
        const Point D = Point::center();
        for (Leg leg : {Leg::A, Leg::B, Leg::C}) {
            if (!m.node_index(Point::triode(leg, 1.0))) throw DomainError("model lacks the tip of a leg");
        }
        if (!m.node_index(D)) throw DomainError("model lacks the center");
        auto ap = [&m](const std::string& op, const Point& x, const Point& y) {
            return m.apply(op, std::vector<Point>{x, y});
        };
        CertificateBuilder b("distance-contradiction", driver, m.space, delta0, delta3);
        b.point("D", D);

        struct VertexPlan {
            Leg leg;
            std::string q, p;
            Point target;
        };
        auto plan_vertex = [&](Leg leg) {
            const Point V = Point::triode(leg, 1.0);
            for (const std::string q : {"meet", "join"}) {
                const std::string p = q == "meet" ? "join" : "meet";
                const Point vq = ap(q, V, D);
                if (!detail::in_leg(vq, leg)) return VertexPlan{leg, q, p, D};
                const Point vp = ap(p, V, D);
                if (triode_geometry::on_tree_path(V, vq, vp)) return VertexPlan{leg, q, p, vp};
            }
            throw DomainError("no leg pattern found at a vertex");
        };
        // Walks X from the tip to D under X q V; the level-1 pair then pins V p D near V.
        auto close_vertex = [&](const VertexPlan& pl) {
            const Point V = Point::triode(pl.leg, 1.0);
            const std::string tag = std::string("v") + leg_name(pl.leg);
            std::vector<Tuple> inputs;
            for (const auto& x : detail::leg_nodes_inward(m, pl.leg)) inputs.push_back({x, V});
            const auto walk = detail::run_walk(m, pl.q, inputs);
            const std::size_t k = detail::closest_output(m.space, walk.outputs, pl.target);
            b.point(tag + ".V", V);
            detail::record_walk(b, tag + ".walk", pl.q, walk, delta0);
            b.tuple(tag + ".witness.in", walk.inputs[k]);
            b.point(tag + ".witness", walk.outputs[k]);
            b.evaluation(pl.q, tag + ".witness.in", tag + ".witness");
            const Tuple in_a{V, walk.outputs[k]}, in_b{V, pl.target};
            b.pair(tag + ".close", pl.p, in_a, in_b, ap(pl.p, V, walk.outputs[k]), ap(pl.p, V, pl.target));
            detail::bounded_by_walk(b, tag + ".close", tag + ".walk", b.cert().value(tag + ".close.d_in"),
                                    b.cert().value(tag + ".walk.d_out"), delta0);
            return tag;
        };

        std::vector<VertexPlan> plans;
        for (Leg leg : {Leg::A, Leg::B, Leg::C}) plans.push_back(plan_vertex(leg));
        std::size_t pi = 0, qi = 1;
        if (plans[0].p != plans[1].p) {
            if (plans[0].p == plans[2].p) qi = 2;
            else pi = 1, qi = 2;
        }
        const std::string join_op = plans[pi].p;
        const std::string meet_op = join_op == "join" ? "meet" : "join";
        Point P = Point::triode(plans[pi].leg, 1.0);
        Point Q = Point::triode(plans[qi].leg, 1.0);
        std::size_t q_plan = qi;
        if (detail::in_open_leg(ap(join_op, P, Q), Q.leg)) {
            std::swap(P, Q);
            q_plan = pi;
        }
        const std::string qtag = close_vertex(plans[q_plan]);

        // Walk X from Q through D to P under X join Q; D lies between Q and P join Q.
        std::vector<Tuple> inputs;
        for (const auto& x : detail::leg_nodes_inward(m, Q.leg)) inputs.push_back({x, Q});
        auto outward = detail::leg_nodes_inward(m, P.leg);
        outward.pop_back();
        for (auto it = outward.rbegin(); it != outward.rend(); ++it) inputs.push_back({*it, Q});
        const auto walk = detail::run_walk(m, join_op, inputs);
        const std::size_t k = detail::closest_output(m.space, walk.outputs, D);
        b.point("P", P);
        b.point("Q", Q);
        detail::record_walk(b, "part4.walk", join_op, walk, delta0);
        b.tuple("part4.witness.in", walk.inputs[k]);
        b.point("part4.witness", walk.outputs[k]);
        b.evaluation(join_op, "part4.witness.in", "part4.witness");
        const Point q_meet_d = ap(meet_op, Q, D);
        b.pair("part4.close", meet_op, Tuple{Q, walk.outputs[k]}, Tuple{Q, D}, ap(meet_op, Q, walk.outputs[k]),
               q_meet_d);
        detail::bounded_by_walk(b, "part4.close", "part4.walk", b.cert().value("part4.close.d_in"),
                                b.cert().value("part4.walk.d_out"), delta0);
        b.pair("part5", join_op, Tuple{D, q_meet_d}, Tuple{D, Q}, ap(join_op, D, q_meet_d), ap(join_op, D, Q));
        b.check({"part5.d_in"}, "<=", "part4.close.d_out");
        b.distance("d_QD", "carrier", "Q", "D");
        b.check({qtag + ".close.d_out", "part5.d_out"}, ">=", "d_QD");
        b.check({"deltaN", "deltaN"}, "<", "d_QD");
        std::string text = "with a nondecreasing chain every recorded output is below deltaN, yet d(Q,D) = " +
                           detail::fmt(b.cert().value("d_QD")) + " <= " + qtag + ".close.d_out + part5.d_out < 2 deltaN = " +
                           detail::fmt(2.0 * delta3);
        res.certificate = b.take(std::move(text));
    }
    res.self_check = self_check(res.certificate);
    res.model_check = verify_against_model(res.certificate, m);
    return res;
}

// Group operations on [0,1]^n (n = 1, 2): translation by a1 - a0 has an approximate fixed point.
inline DriverResult refute_group_fixed_point(const TableModel& m, double delta0, double delta2,
                                             const DriverOptions& opts = {}) {
    detail::require_claims(delta0, delta2);
    std::size_t dim = 0;
    if (m.space.is_interval()) dim = 1;
    else if (m.space.is_product()) {
        const auto& ps = m.space.as_product();
        if (ps.mode == ProductMode::Sum && ps.factors.size() == 2 &&
            std::all_of(ps.factors.begin(), ps.factors.end(), [](const MetricSpace& f) { return f.is_interval(); })) {
            dim = 2;
        }
    }
    if (dim == 0) throw SpaceMismatch("group driver needs [0,1] or [0,1]^2 with the sum metric");
    const Theory thy = catalog("group");
    // Farthest node pair.
    std::size_t ia = 0, ib = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < m.nodes.size(); ++j) {
            const double d = distance(m.space, m.nodes[i], m.nodes[j]);
            if (d > far) {
                far = d;
                ia = i;
                ib = j;
            }
        }
    }
    if (!(delta2 < far)) throw ScopeError("claim outside theorem scope: deltaN is not below the diameter");
    DriverResult res;
    res.gate = detail::run_gate(m, thy, opts.seed);
    const std::string driver = "group-fixed-point";
    if (opts.precheck) {
        if (auto c = detail::precheck_chain(m, thy, driver, 2, delta0, delta2, opts.seed)) {
            res.certificate = std::move(*c);
        }
    }
    if (res.certificate.kind.empty()) {
        auto add = [&m](const Point& x, const Point& y) { return m.apply("add", std::vector<Point>{x, y}); };
        auto neg = [&m](const Point& x) { return m.apply("neg", std::vector<Point>{x}); };
        const Point a0 = m.nodes[ia], a1 = m.nodes[ib];
        const Point na0 = neg(a0);
        const Point c = add(a1, na0);
        CertificateBuilder b("distance-contradiction", driver, m.space, delta0, delta2);
        b.point("a0", a0);
        b.point("a1", a1);
        b.tuple("a0.in", {a0});
        b.point("neg_a0", na0);
        b.evaluation("neg", "a0.in", "neg_a0");
        b.tuple("c.in", {a1, na0});
        b.point("c", c);
        b.evaluation("add", "c.in", "c");

        Point e;
        if (dim == 1) {
            const auto order = detail::sorted_node_order(m);
            std::vector<Tuple> inputs;
            for (std::size_t k : order) inputs.push_back({c, m.nodes[k]});
            const auto walk = detail::run_walk(m, "add", inputs);
            std::vector<double> g;
            for (std::size_t k = 0; k < order.size(); ++k) g.push_back(walk.outputs[k].x - m.nodes[order[k]].x);
            e = m.nodes[order[detail::scalar_crossing(g, 0.0)]];
            detail::record_walk(b, "walk", "add", walk, delta0);
        } else {
            const NodeNeighbors nb(m);
            double step = std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j < m.nodes.size(); ++j) step = std::min(step, nb(0, j));
            // Widest image step of translation over grid-adjacent nodes.
            detail::Walk adj;
            double widest = -1.0, res_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m.nodes.size(); ++i) {
                const Point fi = add(c, m.nodes[i]);
                const double r = distance(m.space, fi, m.nodes[i]);
                if (r < res_min) {
                    res_min = r;
                    e = m.nodes[i];
                }
                for (const auto& [d, j] : nb.within(i, step * (1.0 + 1e-9), false)) {
                    if (j == i) continue;
                    const Point fj = add(c, m.nodes[j]);
                    const double dout = distance(m.space, fi, fj);
                    if (dout > widest) {
                        widest = dout;
                        adj.inputs = {{c, m.nodes[i]}, {c, m.nodes[j]}};
                        adj.outputs = {fi, fj};
                        adj.max_step = 0;
                        adj.max_in = 0.5 * d;
                    }
                }
            }
            detail::record_walk(b, "walk", "add", adj, delta0);
        }
        const Point fe = add(c, e);
        const Point ne = neg(e);
        const Point kk = add(ne, a0);
        b.point("e", e);
        b.tuple("fe.in", {c, e});
        b.point("fe", fe);
        b.evaluation("add", "fe.in", "fe");
        b.tuple("e.in", {e});
        b.point("neg_e", ne);
        b.evaluation("neg", "e.in", "neg_e");
        b.tuple("k.in", {ne, a0});
        b.point("k", kk);
        b.evaluation("add", "k.in", "k");
        b.pair("close", "add", Tuple{e, kk}, Tuple{fe, kk}, add(e, kk), add(fe, kk));
        detail::bounded_by_walk(b, "close", "walk", b.cert().value("close.d_in"), b.cert().value("walk.d_out"), delta0);
        res.certificate = detail::finish_target(
            b, "close", "a0", "a1", delta2,
            "e is an approximate fixed point of x -> c + x with c = a1 - a0; adding k = -e + a0 to e and to "
            "f(e) gives a0 and a1, so d(a0,a1) = " + detail::fmt(b.cert().value("close.d_out")) +
                " would have to be below deltaN = " + detail::fmt(delta2));
    }
    res.self_check = self_check(res.certificate);
    res.model_check = verify_against_model(res.certificate, m);
    return res;
}

// Groups of exponent N on a real window: translation by a cycles N points, so it has an approximate fixed point.
inline DriverResult refute_exponent_group(const TableModel& m, std::size_t big_n, double delta0, double delta2,
                                          const DriverOptions& opts = {}) {
    detail::require_claims(delta0, delta2);
    if (big_n == 1) throw DomainError("trivial theory: exponent 1 forces a one-point carrier");
    if (big_n == 0) throw DomainError("exponent must be positive");
    if (!m.space.is_window() && !m.space.is_interval()) throw SpaceMismatch("exponent driver needs a linear carrier");
    const Theory thy = catalog("group-exponent-N", {{"N", static_cast<long long>(big_n)}});
    auto add = [&m](const Point& x, const Point& y) { return m.apply("add", std::vector<Point>{x, y}); };
    const Point zero = m.apply("zero", std::vector<Point>{});
    std::size_t ia = 0;
    for (std::size_t i = 1; i < m.nodes.size(); ++i) {
        if (distance(m.space, m.nodes[i], zero) > distance(m.space, m.nodes[ia], zero)) ia = i;
    }
    const Point a = m.nodes[ia];
    if (!(distance(m.space, a, zero) > delta2)) {
        throw ScopeError("claim outside theorem scope: no node lies farther than deltaN from zero");
    }
    DriverResult res;
    res.gate = detail::run_gate(m, thy, opts.seed);
    const std::string driver = "exponent-group";
    if (opts.precheck) {
        if (auto c = detail::precheck_chain(m, thy, driver, 2, delta0, delta2, opts.seed)) {
            res.certificate = std::move(*c);
        }
    }
    if (res.certificate.kind.empty()) {
        std::vector<Point> cycle{zero};
        for (std::size_t i = 1; i <= big_n; ++i) cycle.push_back(add(cycle.back(), a));
        std::optional<std::size_t> up, down;
        for (std::size_t i = 0; i < big_n; ++i) {
            const double g = cycle[i + 1].x - cycle[i].x;
            if (g >= 0.0 && !up) up = i;
            if (g <= 0.0 && !down) down = i;
        }
        if (!up || !down) throw DomainError("translation does not cycle on this table");
        const double from = cycle[*up].x, to = cycle[*down].x;
        std::vector<Point> path;
        for (const auto& p : m.nodes) {
            if (p.x >= std::min(from, to) && p.x <= std::max(from, to)) path.push_back(p);
        }
        std::sort(path.begin(), path.end(), [](const Point& x, const Point& y) { return x.x < y.x; });
        if (from > to) std::reverse(path.begin(), path.end());
        CertificateBuilder b("distance-contradiction", driver, m.space, delta0, delta2);
        b.point("zero", zero);
        b.tuple("zero.in", {});
        b.evaluation("zero", "zero.in", "zero");
        b.point("a", a);
        Point e;
        if (path.size() < 2) {
            e = path.front();
            detail::Walk w = detail::run_walk(m, "add", {{e, a}, {e, a}});
            detail::record_walk(b, "walk", "add", w, delta0);
        } else {
            std::vector<Tuple> inputs;
            for (const auto& p : path) inputs.push_back({p, a});
            const auto walk = detail::run_walk(m, "add", inputs);
            std::vector<double> g;
            for (std::size_t k = 0; k < path.size(); ++k) g.push_back(walk.outputs[k].x - path[k].x);
            e = path[detail::scalar_crossing(g, 0.0)];
            detail::record_walk(b, "walk", "add", walk, delta0);
        }
        const Point fe = add(e, a);
        b.point("e", e);
        b.tuple("fe.in", {e, a});
        b.point("fe", fe);
        b.evaluation("add", "fe.in", "fe");
        Point q = e;
        for (std::size_t i = 2; i < big_n; ++i) {
            const Point next = add(q, e);
            const std::string name = "power" + std::to_string(i);
            b.tuple(name + ".in", {q, e});
            b.point(name, next);
            b.evaluation("add", name + ".in", name);
            q = next;
        }
        b.point("q", q);
        b.pair("close", "add", Tuple{q, e}, Tuple{q, fe}, add(q, e), add(q, fe));
        detail::bounded_by_walk(b, "close", "walk", b.cert().value("close.d_in"), b.cert().value("walk.d_out"), delta0);
        res.certificate = detail::finish_target(
            b, "close", "zero", "a", delta2,
            "e is an approximate fixed point of x -> x + a; adding q = (N-1)e to e and to e + a gives zero and a, "
            "so d(zero,a) = " + detail::fmt(b.cert().value("close.d_out")) + " would have to be below deltaN = " +
                detail::fmt(delta2));
    }
    res.self_check = self_check(res.certificate);
    res.model_check = verify_against_model(res.certificate, m);
    return res;
}

inline std::vector<std::string> driver_names() {
    return {"interval-injective", "triode-lattice", "group-fixed-point", "exponent-group"};
}

inline DriverResult run_driver(const std::string& name, const TableModel& m, double delta0, double delta_n,
                               const DriverOptions& opts = {}) {
    if (name == "interval-injective") return refute_interval_injective(m, delta0, delta_n, opts);
    if (name == "triode-lattice") return refute_triode_lattice(m, delta0, delta_n, opts);
    if (name == "group-fixed-point") return refute_group_fixed_point(m, delta0, delta_n, opts);
    if (name == "exponent-group") {
        const Theory thy = model_theory(m, "group-exponent-2");
        auto it = thy.params.find("N");
        if (it == thy.params.end()) throw DomainError("model theory does not fix an exponent");
        return refute_exponent_group(m, static_cast<std::size_t>(it->second), delta0, delta_n, opts);
    }
    throw DomainError("unknown driver " + name);
}

inline void to_json(nlohmann::json& j, const SelfCheckReport& r) {
    j = {{"ok", r.ok}, {"max_distance_error", r.max_distance_error}, {"failures", r.failures}};
}

inline void to_json(nlohmann::json& j, const GateReport& g) {
    j = {{"theory", g.theory}, {"residual", g.residual}, {"envs", g.envs}, {"exhaustive", g.exhaustive}};
}

}  // namespace jumpgauge
