#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/equations.hpp"
#include "jumpgauge/errors.hpp"
#include "jumpgauge/metric.hpp"
#include "jumpgauge/parallel.hpp"
#include "jumpgauge/sampling.hpp"

namespace jumpgauge {

// A map under study: argument tuples in a product (or a single space) to a codomain.
struct SampledMap {
    std::string name;
    std::vector<MetricSpace> arg_spaces;
    ProductMode mode = ProductMode::Sum;
    MetricSpace codomain;
    std::function<Point(std::span<const Point>)> fn;

    std::size_t arity() const { return arg_spaces.size(); }
    MetricSpace domain() const {
        return arity() == 1 ? arg_spaces[0] : MetricSpace::product(arg_spaces, mode);
    }
    double input_distance(std::span<const Point> a, std::span<const Point> b) const {
        return tuple_distance(arg_spaces, mode, a, b);
    }
};

inline SampledMap operation_map(const Algebra& alg, const std::string& name, ProductMode mode) {
    const Operation& op = alg.op(name);
    if (op.arity == 0) throw DomainError("constant " + name + " has no domain to sample");
    return SampledMap{name, std::vector<MetricSpace>(op.arity, alg.carrier), mode, alg.carrier, op.fn};
}

inline SampledMap term_map(const Algebra& alg, const Term& t, ProductMode mode) {
    const std::size_t k = t.n_vars();
    if (k == 0) throw DomainError("ground term has no domain to sample");
    auto fn = [&alg, t](std::span<const Point> env) { return eval(alg, t, env); };
    return SampledMap{to_string(t), std::vector<MetricSpace>(k, alg.carrier), mode, alg.carrier, fn};
}

struct SamplingOptions {
    // Lattice steps per radius along each axis, so adjacent lattice samples sit radius/k apart.
    int lattice_k = 8;
    std::size_t random_samples = 16;
};

struct JumpEstimate {
    double value = 0.0;
    std::vector<std::pair<double, double>> ladder;
    Tuple argmax_point;
    std::size_t grid_n = 0;
    std::uint64_t seed = 0;
    std::string label;
};

struct ConstraintProfile {
    std::vector<double> deltas;  // descending
    std::vector<double> omega;   // omega[i] belongs to deltas[i]
    double codomain_diameter = 0.0;

    // Smallest tabulated delta at or above d gives an upper bound, since omega is nondecreasing.
    double omega_at(double d) const {
        double best = codomain_diameter;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            if (deltas[i] >= d) best = omega[i];
        }
        return best;
    }
    bool constrained(double delta, double epsilon) const { return omega_at(delta) < epsilon; }
};

namespace detail {

inline void require_descending(std::span<const double> radii, const char* what) {
    if (radii.empty()) throw DomainError(std::string(what) + " ladder is empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError(std::string(what) + " ladder entries must be positive");
        if (i && !(radii[i] < radii[i - 1])) throw DomainError(std::string(what) + " ladder must be strictly descending");
    }
}

// Unit offsets (radius 1) strictly inside the ball for the given dimension and product mode.
inline std::vector<std::vector<double>> offset_pattern(std::size_t dim, ProductMode mode, int k) {
    std::vector<double> axis;
    const double edge = 1.0 - std::ldexp(1.0, -20);
    const double reach = mode == ProductMode::Averaged ? static_cast<double>(dim) : 1.0;
    axis.push_back(0.0);
    for (int j = 1; j <= k; ++j) {
        const double v = reach * static_cast<double>(j) / static_cast<double>(k);
        if (v < reach) {
            axis.push_back(v);
            axis.push_back(-v);
        }
    }
    axis.push_back(reach * edge);
    axis.push_back(-reach * edge);
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        double weight = 0.0;
        std::vector<double> o(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            o[i] = axis[idx[i]];
            weight += std::fabs(o[i]);
        }
        if (weight / reach < 1.0) out.push_back(std::move(o));
        std::size_t a = dim;
        bool done = true;
        while (a > 0) {
            --a;
            if (++idx[a] < axis.size()) {
                done = false;
                break;
            }
            idx[a] = 0;
        }
        if (done) break;
    }
    return out;
}

// Points at (tree) displacement o from p; all lie within |o| of p.
inline void displace(const MetricSpace& space, const Point& p, double o, std::vector<Point>& out) {
    out.clear();
    if (space.is_circle()) {
        out.push_back(Point::circle(p.x + o, space.circumference()));
    } else if (space.is_interval()) {
        out.push_back(Point{PointKind::Interval, std::clamp(p.x + o, 0.0, 1.0), Leg::A, {}});
    } else if (space.is_window()) {
        const auto& w = std::get<RealWindow>(space.kind);
        out.push_back(Point{PointKind::Real, std::clamp(p.x + o, w.lo, w.hi), Leg::A, {}});
    } else if (space.is_triode()) {
        if (o == 0.0) {
            out.push_back(p);
        } else if (p.x == 0.0) {
            const double t = std::min(1.0, std::fabs(o));
            for (Leg l : {Leg::A, Leg::B, Leg::C}) out.push_back(Point::triode(l, t));
        } else if (p.x + o >= 0.0) {
            out.push_back(Point::triode(p.leg, std::min(1.0, p.x + o)));
        } else {
            const double t = std::min(1.0, -(p.x + o));
            for (Leg l : {Leg::A, Leg::B, Leg::C}) {
                if (l != p.leg) out.push_back(Point::triode(l, t));
            }
        }
    } else {
        throw DomainError("ball sampling over nested products is not supported");
    }
}

class BallSampler {
public:
    BallSampler(const SampledMap& f, const SamplingOptions& opts)
        : f_(f), opts_(opts), pattern_(offset_pattern(f.arity(), f.mode, opts.lattice_k)) {}

    // Calls visit(tuple) for every sample in the open ball of radius r around base.
    template <class Visit>
    void for_each(const Tuple& base, double r, std::uint64_t seed, Visit&& visit) const {
        const std::size_t d = f_.arity();
        const double reach = f_.mode == ProductMode::Averaged ? static_cast<double>(d) : 1.0;
        std::vector<std::vector<Point>> choices(d);
        Tuple sample(d);
        auto emit = [&](const std::vector<double>& o) {
            for (std::size_t i = 0; i < d; ++i) displace(f_.arg_spaces[i], base[i], o[i] * r, choices[i]);
            std::vector<std::size_t> idx(d, 0);
            while (true) {
                for (std::size_t i = 0; i < d; ++i) sample[i] = choices[i][idx[i]];
                visit(std::as_const(sample));
                std::size_t a = d;
                bool done = true;
                while (a > 0) {
                    --a;
                    if (++idx[a] < choices[a].size()) {
                        done = false;
                        break;
                    }
                    idx[a] = 0;
                }
                if (done) break;
            }
        };
        for (const auto& o : pattern_) emit(o);
        Rng rng(seed);
        std::uniform_real_distribution<double> u(-reach, reach);
        std::vector<double> o(d);
        std::size_t made = 0, tries = 0;
        while (made < opts_.random_samples && tries < 64 * (opts_.random_samples + 1)) {
            ++tries;
            double w = 0.0;
            for (auto& x : o) {
                x = u(rng);
                w += std::fabs(x);
            }
            if (w / reach >= 1.0) continue;
            ++made;
            emit(o);
        }
    }

private:
    const SampledMap& f_;
    SamplingOptions opts_;
    std::vector<std::vector<double>> pattern_;
};

inline std::uint64_t level_seed(std::uint64_t task_seed, double r) {
    return mix_seed(task_seed, std::bit_cast<std::uint64_t>(r));
}

// Image diameters of nested sample sets: the set for radius r is the union of the samples of
// every ladder radius <= r, so the returned values are nondecreasing in r.
inline std::vector<double> nested_diameters(const SampledMap& f, const BallSampler& sampler, const Tuple& base,
                                            std::span<const double> radii, std::uint64_t task_seed) {
    std::vector<Point> images{f.fn(base)};
    std::vector<double> out(radii.size());
    for (std::size_t i = radii.size(); i-- > 0;) {
        sampler.for_each(base, radii[i], level_seed(task_seed, radii[i]),
                         [&](const Tuple& s) { images.push_back(f.fn(s)); });
        out[i] = diameter(f.codomain, images);
    }
    return out;
}

inline std::vector<double> nested_omega(const SampledMap& f, const BallSampler& sampler, const Tuple& base,
                                        std::span<const double> deltas, std::uint64_t task_seed) {
    const Point center = f.fn(base);
    std::vector<double> out(deltas.size());
    double best = 0.0;
    for (std::size_t i = deltas.size(); i-- > 0;) {
        sampler.for_each(base, deltas[i], level_seed(task_seed, deltas[i]), [&](const Tuple& s) {
            best = std::max(best, distance(f.codomain, center, f.fn(s)));
        });
        out[i] = best;
    }
    return out;
}

inline std::vector<Tuple> join_bases(std::span<const Tuple> grid, std::span<const Tuple> seams) {
    std::vector<Tuple> all(grid.begin(), grid.end());
    all.insert(all.end(), seams.begin(), seams.end());
    return all;
}

}  // namespace detail

inline constexpr std::size_t kBaseBudget = std::size_t{1} << 16;
inline constexpr std::size_t kBaseBudgetTernary = std::size_t{1} << 15;

inline std::size_t default_base_budget(std::size_t arity) {
    return arity >= 3 ? kBaseBudgetTernary : kBaseBudget;
}

// Argument tuples of a Grid over the map's domain (product points are unpacked).
inline std::vector<Tuple> grid_tuples(const Grid& g) {
    std::vector<Tuple> out;
    out.reserve(g.points.size());
    for (const auto& p : g.points) {
        if (p.kind == PointKind::Product) out.push_back(p.parts);
        else out.push_back(Tuple{p});
    }
    return out;
}

// Product grid over the map's domain with n samples per axis, thinned until the tuple count fits
// the budget.
inline std::vector<Tuple> domain_grid(const SampledMap& f, std::size_t n, std::size_t budget = 0) {
    if (n < 2) throw DomainError("grid needs n >= 2");
    if (budget == 0) budget = default_base_budget(f.arity());
    std::size_t m = n;
    while (true) {
        std::size_t total = 1;
        bool fits = true;
        for (const auto& s : f.arg_spaces) {
            total *= grid(s, m).points.size();
            if (total > budget) {
                fits = false;
                break;
            }
        }
        if (fits || m == 2) break;
        m = std::max<std::size_t>(2, static_cast<std::size_t>(static_cast<double>(m) * 0.9));
    }
    if (f.arity() == 1) return grid_tuples(grid(f.arg_spaces[0], m));
    return grid_tuples(grid(f.domain(), m));
}

inline JumpEstimate jump_at(const SampledMap& f, const Tuple& base, std::span<const double> radii,
                            const SamplingOptions& opts = {}, std::uint64_t seed = 0) {
    detail::require_descending(radii, "radius");
    detail::BallSampler sampler(f, opts);
    auto diams = detail::nested_diameters(f, sampler, base, radii, seed);
    JumpEstimate est;
    for (std::size_t i = 0; i < radii.size(); ++i) est.ladder.emplace_back(radii[i], diams[i]);
    est.value = diams.back();
    est.argmax_point = base;
    est.seed = seed;
    est.label = f.name;
    return est;
}

inline JumpEstimate jump_sup(const SampledMap& f, std::span<const Tuple> grid_pts, std::span<const Tuple> seams,
                             std::span<const double> radii, std::uint64_t seed = 0,
                             const SamplingOptions& opts = {}) {
    detail::require_descending(radii, "radius");
    const auto bases = detail::join_bases(grid_pts, seams);
    if (bases.empty()) throw DomainError("jump_sup needs at least one base point");
    detail::BallSampler sampler(f, opts);
    const double r_min = radii.back();
    std::vector<double> vals(bases.size());
    parallel_for(bases.size(), [&](std::size_t i) {
        vals[i] = detail::nested_diameters(f, sampler, bases[i], std::span<const double>(&r_min, 1),
                                           mix_seed(seed, i))[0];
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > vals[best]) best = i;
    }
    auto diams = detail::nested_diameters(f, sampler, bases[best], radii, mix_seed(seed, best));
    JumpEstimate est;
    for (std::size_t i = 0; i < radii.size(); ++i) est.ladder.emplace_back(radii[i], diams[i]);
    est.value = vals[best];
    est.argmax_point = bases[best];
    est.grid_n = grid_pts.size();
    est.seed = seed;
    est.label = f.name;
    return est;
}

// Seeds match jump_sup for equal base lists, so with the same ladder the two estimates share samples.
inline JumpEstimate uniform_jump(const SampledMap& f, std::span<const Tuple> grid_pts, std::span<const Tuple> seams,
                                 std::span<const double> deltas, std::uint64_t seed = 0,
                                 const SamplingOptions& opts = {}) {
    detail::require_descending(deltas, "delta");
    const auto bases = detail::join_bases(grid_pts, seams);
    if (bases.empty()) throw DomainError("uniform_jump needs at least one base point");
    detail::BallSampler sampler(f, opts);
    std::vector<std::vector<double>> per(bases.size());
    parallel_for(bases.size(), [&](std::size_t i) {
        per[i] = detail::nested_diameters(f, sampler, bases[i], deltas, mix_seed(seed, i));
    });
    JumpEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < deltas.size(); ++l) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < bases.size(); ++i) {
            if (per[i][l] > per[arg][l]) arg = i;
        }
        est.ladder.emplace_back(deltas[l], per[arg][l]);
        if (per[arg][l] <= est.value) {
            est.value = per[arg][l];
            est.argmax_point = bases[arg];
        }
    }
    est.grid_n = grid_pts.size();
    est.seed = seed;
    est.label = f.name;
    return est;
}

inline ConstraintProfile omega_profile(const SampledMap& f, std::span<const Tuple> grid_pts,
                                       std::span<const Tuple> seams, std::span<const double> deltas,
                                       std::uint64_t seed = 0, const SamplingOptions& opts = {}) {
    detail::require_descending(deltas, "delta");
    const auto bases = detail::join_bases(grid_pts, seams);
    detail::BallSampler sampler(f, opts);
    std::vector<std::vector<double>> per(bases.size());
    parallel_for(bases.size(), [&](std::size_t i) {
        per[i] = detail::nested_omega(f, sampler, bases[i], deltas, mix_seed(seed, i));
    });
    ConstraintProfile prof;
    prof.deltas.assign(deltas.begin(), deltas.end());
    prof.omega.assign(deltas.size(), 0.0);
    for (const auto& row : per) {
        for (std::size_t l = 0; l < deltas.size(); ++l) prof.omega[l] = std::max(prof.omega[l], row[l]);
    }
    prof.codomain_diameter = space_diameter(f.codomain);
    return prof;
}

// Suffix minima: the output pair (m_i, m_{i+1}) is implied by the input pair ending where m_{i+1} is attained.
inline std::vector<double> monotonize_deltas(std::vector<double> deltas) {
    if (deltas.empty()) throw DomainError("monotonize_deltas needs a nonempty list");
    for (double d : deltas) {
        if (!(d > 0.0)) throw DomainError("deltas must be positive");
    }
    for (std::size_t i = deltas.size() - 1; i-- > 0;) deltas[i] = std::min(deltas[i], deltas[i + 1]);
    return deltas;
}

namespace detail {

inline std::vector<Tuple> tuple_power(std::span<const Point> coords, std::size_t k) {
    std::vector<Tuple> out;
    if (coords.empty()) return out;
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        Tuple t;
        for (auto i : idx) t.push_back(coords[i]);
        out.push_back(std::move(t));
        std::size_t a = k;
        bool done = true;
        while (a > 0) {
            --a;
            if (++idx[a] < coords.size()) {
                done = false;
                break;
            }
            idx[a] = 0;
        }
        if (done) break;
    }
    return out;
}

// Seam tuples for a term operation: products of the algebra's seam coordinates, plus the
// operation's own seams when the term is a single application to x0..x(k-1) in order.
inline std::vector<Tuple> term_seams(const Algebra& alg, const Term& t) {
    auto out = tuple_power(alg.seam_coords, t.n_vars());
    if (!t.is_var()) {
        bool canonical = t.args().size() == t.n_vars();
        for (std::size_t i = 0; canonical && i < t.args().size(); ++i) {
            canonical = t.args()[i].is_var() && t.args()[i].var_index() == i;
        }
        auto it = alg.seams.find(t.symbol().name);
        if (canonical && it != alg.seams.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

inline std::vector<OperationSymbol> algebra_symbols(const Algebra& alg) {
    std::vector<OperationSymbol> syms;
    for (const auto& [name, op] : alg.ops) syms.push_back({name, op.arity});
    return syms;
}

}  // namespace detail

inline JumpEstimate chi_n(const Algebra& alg, std::size_t n, std::size_t n_vars, std::size_t grid_n,
                          std::span<const double> radii, std::uint64_t seed = 0,
                          ProductMode mode = ProductMode::Sum, const SamplingOptions& opts = {}) {
    const auto syms = detail::algebra_symbols(alg);
    const auto terms = enumerate_terms(syms, n, n_vars);
    JumpEstimate best;
    best.value = 0.0;
    best.seed = seed;
    best.label = "chi_" + std::to_string(n);
    for (const auto& t : terms) {
        if (t.is_var() || t.n_vars() == 0) continue;
        const auto f = term_map(alg, t, mode);
        const auto base = domain_grid(f, grid_n);
        const auto seams = detail::term_seams(alg, t);
        auto est = jump_sup(f, base, seams, radii, mix_seed(seed, hash_text(to_string(t))), opts);
        if (est.value > best.value || best.ladder.empty()) {
            best.value = est.value;
            best.ladder = est.ladder;
            best.argmax_point = est.argmax_point;
            best.grid_n = est.grid_n;
            best.label = "chi_" + std::to_string(n) + " at " + to_string(t);
        }
    }
    return best;
}

struct ChiStarOptions {
    std::size_t base_budget = std::size_t{1} << 12;
    // Omega is tabulated on delta0 values plus a geometric ladder of this ratio from the domain diameter down.
    double ladder_ratio = 0.7071067811865476;
    double slack = 1e-9;
    SamplingOptions sampling{};
};

inline JumpEstimate chi_n_star(const Algebra& alg, std::size_t n, std::span<const double> delta0_ladder,
                               std::size_t grid_n, std::uint64_t seed = 0, const ChiStarOptions& opts = {}) {
    if (n < 1) throw DomainError("chi_n_star needs n >= 1");
    if (delta0_ladder.empty()) throw DomainError("delta0 ladder is empty");
    const double d0_min = *std::min_element(delta0_ladder.begin(), delta0_ladder.end());
    std::vector<ConstraintProfile> profiles;
    for (const auto& [name, op] : alg.ops) {
        if (op.arity == 0) continue;
        const auto f = operation_map(alg, name, ProductMode::Averaged);
        std::vector<double> ladder(delta0_ladder.begin(), delta0_ladder.end());
        for (double d = space_diameter(f.domain()) * (1.0 + 1e-9); d > d0_min / 2.0; d *= opts.ladder_ratio) {
            ladder.push_back(d);
        }
        std::sort(ladder.begin(), ladder.end(), std::greater<>());
        ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
        const auto base = domain_grid(f, grid_n, opts.base_budget);
        std::vector<Tuple> seams;
        if (auto it = alg.seams.find(name); it != alg.seams.end()) seams = it->second;
        profiles.push_back(omega_profile(f, base, seams, ladder, mix_seed(seed, hash_text(name)), opts.sampling));
    }
    JumpEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    est.seed = seed;
    est.grid_n = grid_n;
    est.label = "chi_" + std::to_string(n) + "_star";
    for (double d0 : delta0_ladder) {
        double d = d0;
        for (std::size_t i = 0; i < n; ++i) {
            double next = 0.0;
            for (const auto& p : profiles) next = std::max(next, p.omega_at(d));
            d = next + opts.slack;
        }
        est.ladder.emplace_back(d0, d);
        est.value = std::min(est.value, d);
    }
    return est;
}

// ---- reports ----

struct MuBoundReport {
    std::string theory;
    std::string space;
    double upper_bound = 0.0;
    double paper_value = 0.0;
    std::string note;
};

inline void to_json(nlohmann::json& j, const JumpEstimate& e) {
    nlohmann::json ladder = nlohmann::json::array();
    for (const auto& [r, d] : e.ladder) ladder.push_back({r, d});
    nlohmann::json arg = nlohmann::json::array();
    for (const auto& p : e.argmax_point) arg.push_back(p);
    j = {{"value", e.value}, {"ladder", ladder}, {"argmax_point", arg},
         {"grid_n", e.grid_n}, {"seed", e.seed}, {"label", e.label}};
}

inline void to_json(nlohmann::json& j, const ConstraintProfile& p) {
    nlohmann::json table = nlohmann::json::array();
    for (std::size_t i = 0; i < p.deltas.size(); ++i) table.push_back({p.deltas[i], p.omega[i]});
    j = {{"omega_table", table}, {"codomain_diameter", p.codomain_diameter}};
}

inline void to_json(nlohmann::json& j, const MuBoundReport& r) {
    j = {{"theory", r.theory}, {"space", r.space}, {"upper_bound", r.upper_bound},
         {"paper_value", r.paper_value}, {"note", r.note}};
}

inline std::string ladder_csv(const JumpEstimate& e, const std::string& key = "radius") {
    std::ostringstream out;
    out.precision(17);
    out << key << ",diameter\n";
    for (const auto& [r, d] : e.ladder) out << r << "," << d << "\n";
    return out.str();
}

}  // namespace jumpgauge
