#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/constructions.hpp"
#include "jumpgauge/errors.hpp"
#include "jumpgauge/metric.hpp"

namespace jumpgauge {

// Closed arc running counterclockwise from start for `length`.
struct Arc {
    Point start;
    double length = 0.0;
    double circumference = 2.0;

    // Counterclockwise offset of p from the start, in [0, L).
    double offset(const Point& p) const {
        double o = p.x - start.x;
        if (o < 0.0) o += circumference;
        if (o >= circumference) o -= circumference;
        return o;
    }
    bool contains(const Point& p, double tol = 0.0) const {
        detail::require_kind(p, PointKind::Circle);
        const double o = offset(p);
        return o <= length + tol || circumference - o <= tol;
    }
    Point end() const { return Point::circle(start.x + length, circumference); }
};

// Arc spanned by a pair realizing the diameter, when the diameter is below L/3.
inline std::optional<Arc> arc_cover(std::span<const Point> pts, double circumference = 2.0) {
    if (pts.empty()) throw DomainError("arc_cover needs a nonempty set");
    for (const auto& p : pts) detail::require_kind(p, PointKind::Circle);
    if (pts.size() == 1) return Arc{pts[0], 0.0, circumference};
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double d = detail::circle_distance(pts[i].x, pts[j].x, circumference);
            if (d > best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    if (!(best < circumference / 3.0)) return std::nullopt;
    const bool forward = detail::circle_increment(pts[bi].x, pts[bj].x, circumference) >= 0.0;
    Arc arc{forward ? pts[bi] : pts[bj], 0.0, circumference};
    arc.length = arc.offset(forward ? pts[bj] : pts[bi]);
    return arc;
}

struct Loop {
    std::vector<Point> samples;
    double circumference = 2.0;
    double max_step = 0.0;

    Loop() = default;
    Loop(std::vector<Point> pts, double L) : samples(std::move(pts)), circumference(L) {
        if (samples.empty()) throw DomainError("loop needs at least one sample");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            detail::require_kind(samples[i], PointKind::Circle);
            max_step = std::max(max_step, step(i));
        }
    }

    // Distance from sample i to its cyclic successor.
    double step(std::size_t i) const {
        return detail::circle_distance(samples[i].x, samples[(i + 1) % samples.size()].x, circumference);
    }
};

inline Loop make_loop(std::span<const double> params, double circumference = 2.0) {
    std::vector<Point> pts;
    pts.reserve(params.size());
    for (double s : params) pts.push_back(Point::circle(s, circumference));
    return Loop(std::move(pts), circumference);
}

inline int winding_number(const Loop& loop) {
    const double L = loop.circumference;
    double total = 0.0;
    for (std::size_t i = 0; i < loop.samples.size(); ++i) {
        const double s = loop.samples[i].x;
        const double t = loop.samples[(i + 1) % loop.samples.size()].x;
        if (detail::circle_distance(s, t, L) >= L / 2.0) {
            throw DomainError("ambiguous lift at sample " + std::to_string(i) + ": step of half the circumference");
        }
        total += detail::circle_increment(s, t, L);
    }
    const double turns = total / L;
    const double rounded = std::round(turns);
    if (std::fabs(turns - rounded) > 1e-9) throw DomainError("loop increments do not close up");
    return static_cast<int>(rounded);
}

// Piecewise map of the domain circle: node i goes to value i and each cell is sent into its arc.
class UnaryInterpolant {
public:
    UnaryInterpolant(std::vector<double> nodes, std::vector<Point> values, std::vector<Arc> arcs,
                     double domain_circumference)
        : nodes_(std::move(nodes)), values_(std::move(values)), arcs_(std::move(arcs)), domain_l_(domain_circumference) {}

    Point operator()(const Point& s) const {
        detail::require_kind(s, PointKind::Circle);
        const double x = s.x;
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        std::size_t cell;
        double lo, hi;
        if (it == nodes_.begin()) {
            cell = nodes_.size() - 1;
            lo = nodes_.back() - domain_l_;
            hi = nodes_.front();
        } else {
            cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
            lo = nodes_[cell];
            hi = cell + 1 < nodes_.size() ? nodes_[cell + 1] : nodes_.front() + domain_l_;
        }
        if (x == lo) return values_[cell];
        const double frac = (x - lo) / (hi - lo);
        const Arc& arc = arcs_[cell];
        const double a = arc.offset(values_[cell]);
        const double b = arc.offset(values_[(cell + 1) % values_.size()]);
        return Point::circle(arc.start.x + a + frac * (b - a), arc.circumference);
    }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const Point> values() const { return values_; }

private:
    std::vector<double> nodes_;
    std::vector<Point> values_;
    std::vector<Arc> arcs_;
    double domain_l_;
};

// values: (domain node parameter, circle value) with strictly increasing nodes; arcs[i] covers cell i,
// the cell from node i to node i+1 (the last cell wraps to node 0).
inline UnaryInterpolant interpolate_unary(std::span<const std::pair<double, Point>> values, std::span<const Arc> arcs,
                                          double domain_circumference = 2.0) {
    if (values.empty()) throw DomainError("interpolate_unary needs at least one node");
    if (arcs.size() != values.size()) throw DomainError("one arc per cell is required");
    std::vector<double> nodes;
    std::vector<Point> vals;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double s = values[i].first;
        if (!(s >= 0.0 && s < domain_circumference)) throw DomainError("node outside the domain circle");
        if (i > 0 && !(s > nodes.back())) throw DomainError("nodes must increase strictly");
        detail::require_kind(values[i].second, PointKind::Circle);
        nodes.push_back(s);
        vals.push_back(values[i].second);
    }
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const Point& a = vals[i];
        const Point& b = vals[(i + 1) % vals.size()];
        if (arcs[i].length > arcs[i].circumference / 2.0) throw DomainError("cell arc " + std::to_string(i) + " too long");
        if (!arcs[i].contains(a) || !arcs[i].contains(b)) {
            throw DomainError("cell " + std::to_string(i) + ": endpoint values do not fit the arc");
        }
    }
    return UnaryInterpolant(std::move(nodes), std::move(vals), std::vector<Arc>(arcs.begin(), arcs.end()),
                            domain_circumference);
}

// Thrown when a loop family breaks the step or closeness precondition; carries the offending spot.
class FamilyPreconditionError : public DomainError {
public:
    FamilyPreconditionError(std::string kind, std::size_t loop_index, std::size_t sample_index, double value,
                            double limit)
        : DomainError("family precondition (" + kind + ") fails at loop " + std::to_string(loop_index) +
                      ", sample " + std::to_string(sample_index) + ": " + std::to_string(value) +
                      " is not below " + std::to_string(limit)),
          kind_(std::move(kind)), loop_(loop_index), sample_(sample_index), value_(value), limit_(limit) {}
    const std::string& kind() const noexcept { return kind_; }
    std::size_t loop_index() const noexcept { return loop_; }
    std::size_t sample_index() const noexcept { return sample_; }
    double value() const noexcept { return value_; }
    double limit() const noexcept { return limit_; }

private:
    std::string kind_;
    std::size_t loop_;
    std::size_t sample_;
    double value_;
    double limit_;
};

struct FamilyReport {
    std::vector<int> windings;
    bool consistent = true;
    std::optional<std::size_t> first_disagreement;
};

inline FamilyReport winding_family_check(std::span<const Loop> fam, double bound) {
    if (fam.empty()) throw DomainError("empty loop family");
    const double L = fam[0].circumference;
    if (!(bound < L / 3.0)) throw DomainError("closeness bound must be below a third of the circumference");
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const Loop& loop = fam[i];
        if (loop.circumference != L) throw DomainError("loops live on different circles");
        for (std::size_t k = 0; k < loop.samples.size(); ++k) {
            const double s = loop.step(k);
            if (!(s < L / 3.0)) throw FamilyPreconditionError("step", i, k, s, L / 3.0);
        }
        if (i == 0) continue;
        const Loop& prev = fam[i - 1];
        if (prev.samples.size() != loop.samples.size()) throw DomainError("loops have different sample counts");
        for (std::size_t k = 0; k < loop.samples.size(); ++k) {
            const double g = detail::circle_distance(prev.samples[k].x, loop.samples[k].x, L);
            if (g > bound) throw FamilyPreconditionError("closeness", i, k, g, bound);
        }
    }
    FamilyReport rep;
    for (const auto& loop : fam) rep.windings.push_back(winding_number(loop));
    for (std::size_t i = 1; i < rep.windings.size(); ++i) {
        if (rep.windings[i] != rep.windings[0]) {
            rep.consistent = false;
            rep.first_disagreement = i;
            break;
        }
    }
    return rep;
}

// Loops z -> F(w, z) of a binary circle operation on an N-point grid, for rows w stepping
// counterclockwise from w_from to w_to.
inline std::vector<Loop> row_loop_family(const Algebra& alg, const std::string& op, std::size_t n, double w_from,
                                         double w_to) {
    if (!alg.carrier.is_circle()) throw SpaceMismatch("row loops need a circle carrier");
    if (n < 3) throw DomainError("row loops need at least 3 samples");
    const double L = alg.carrier.circumference();
    const auto& f = alg.op(op);
    double span_ = w_to - w_from;
    if (span_ <= 0.0) span_ += L;
    const auto rows = static_cast<std::size_t>(std::llround(span_ / (L / static_cast<double>(n))));
    std::vector<Loop> fam;
    for (std::size_t i = 0; i <= rows; ++i) {
        const Point w = Point::circle(w_from + L * static_cast<double>(i) / static_cast<double>(n), L);
        std::vector<Point> pts;
        for (std::size_t j = 0; j < n; ++j) {
            const Point z = Point::circle(L * static_cast<double>(j) / static_cast<double>(n), L);
            const std::array<Point, 2> args{w, z};
            pts.push_back(f.fn(args));
        }
        fam.emplace_back(std::move(pts), L);
    }
    return fam;
}

struct ObstructionReport {
    std::size_t grid_n = 0;
    int start_winding = 0;
    int end_winding = 0;
    bool preconditions_hold = false;
    std::optional<FamilyReport> family;
    std::string witness;
    std::size_t witness_loop = 0;
    std::size_t witness_sample = 0;
    double witness_value = 0.0;
    // The family cannot be a homotopy of loops: either a precondition fails or windings disagree.
    bool obstruction_visible() const {
        return !preconditions_hold || (family && !family->consistent);
    }
};

// Runs the family check on the rows of the zero-one construction from the zero anchor to the one anchor.
inline ObstructionReport zero_one_obstruction(const Construction& c, std::size_t n) {
    const double L = c.algebra.carrier.circumference();
    const auto fam = row_loop_family(c.algebra, c.primary_op, n, c.constants.at("zero_param"),
                                     c.constants.at("one_param") + L);
    ObstructionReport rep;
    rep.grid_n = n;
    rep.start_winding = winding_number(fam.front());
    rep.end_winding = winding_number(fam.back());
    try {
        rep.family = winding_family_check(fam, L / 3.0 - 1e-12);
        rep.preconditions_hold = true;
    } catch (const FamilyPreconditionError& e) {
        rep.witness = e.what();
        rep.witness_loop = e.loop_index();
        rep.witness_sample = e.sample_index();
        rep.witness_value = e.value();
    }
    return rep;
}

inline void to_json(nlohmann::json& j, const Arc& a) {
    j = {{"start", a.start.x}, {"length", a.length}, {"L", a.circumference}};
}

inline void to_json(nlohmann::json& j, const Loop& loop) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& p : loop.samples) s.push_back(p.x);
    j = {{"L", loop.circumference}, {"max_step", loop.max_step}, {"samples", s}};
}

inline void to_json(nlohmann::json& j, const FamilyReport& r) {
    j = {{"windings", r.windings}, {"consistent", r.consistent}};
    j["first_disagreement"] = r.first_disagreement ? nlohmann::json(*r.first_disagreement) : nlohmann::json(nullptr);
}

inline void to_json(nlohmann::json& j, const ObstructionReport& r) {
    j = {{"grid_n", r.grid_n},
         {"start_winding", r.start_winding},
         {"end_winding", r.end_winding},
         {"preconditions_hold", r.preconditions_hold},
         {"obstruction_visible", r.obstruction_visible()}};
    j["family"] = r.family ? nlohmann::json(*r.family) : nlohmann::json(nullptr);
    if (!r.preconditions_hold) {
        j["witness"] = {{"message", r.witness}, {"loop", r.witness_loop}, {"sample", r.witness_sample},
                        {"value", r.witness_value}};
    }
}

}  // namespace jumpgauge
