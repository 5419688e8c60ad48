#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/constructions.hpp"
#include "jumpgauge/equations.hpp"
#include "jumpgauge/errors.hpp"
#include "jumpgauge/metric.hpp"
#include "jumpgauge/sampling.hpp"

namespace jumpgauge {

struct TableOp {
    std::size_t arity = 0;
    // Row-major over node tuples (last argument fastest), or one value per domain point.
    std::vector<Point> table;
    // Unary ops may be tabulated on their own sorted scalar domain and interpolated linearly.
    std::vector<Point> domain;
    // Node index of each table entry, or -1 when the entry is not a node.
    std::vector<std::int32_t> out_index;

    bool has_domain() const { return !domain.empty(); }
    bool index_closed() const {
        return !has_domain() && std::all_of(out_index.begin(), out_index.end(), [](std::int32_t i) { return i >= 0; });
    }
};

namespace detail {

inline void append_key(std::string& key, const Point& p) {
    auto put = [&key](double v) {
        if (v == 0.0) v = 0.0;
        char buf[sizeof(double)];
        std::memcpy(buf, &v, sizeof v);
        key.append(buf, sizeof buf);
    };
    switch (p.kind) {
        case PointKind::Triode:
            put(p.x == 0.0 ? 0.0 : static_cast<double>(static_cast<int>(p.leg) + 1));
            put(p.x);
            break;
        case PointKind::Product:
            key.push_back('(');
            for (const auto& q : p.parts) append_key(key, q);
            key.push_back(')');
            break;
        default: put(p.x);
    }
}

inline std::string point_key(const Point& p) {
    std::string key;
    append_key(key, p);
    return key;
}

}  // namespace detail

class TableModel {
public:
    MetricSpace space;
    std::size_t grid_n = 0;
    std::string theory;
    std::vector<Point> nodes;
    std::map<std::string, TableOp> ops;

    // Builds lookup structures and output indices; call after filling nodes and ops.
    void finalize() {
        if (nodes.empty()) throw DomainError("table model has no nodes");
        index_.clear();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!contains(space, nodes[i])) throw DomainError("node " + std::to_string(i) + " is not in the space");
            if (!index_.emplace(detail::point_key(nodes[i]), i).second) {
                throw DomainError("duplicate node " + std::to_string(i));
            }
        }
        for (auto& [name, op] : ops) {
            if (op.has_domain()) {
                if (op.arity != 1) throw DomainError("op " + name + ": only unary ops may carry a domain");
                if (!(space.is_interval() || space.is_window())) {
                    throw DomainError("op " + name + ": domain interpolation needs a linear carrier");
                }
                if (op.domain.size() != op.table.size()) throw DomainError("op " + name + ": domain and table sizes differ");
                for (std::size_t i = 1; i < op.domain.size(); ++i) {
                    if (!(op.domain[i].x > op.domain[i - 1].x)) {
                        throw DomainError("op " + name + ": domain must increase strictly");
                    }
                }
            } else {
                const std::size_t need = table_size(op.arity);
                if (op.table.size() != need) {
                    throw DomainError("op " + name + ": table has " + std::to_string(op.table.size()) +
                                      " entries, expected " + std::to_string(need));
                }
            }
            op.out_index.assign(op.table.size(), -1);
            for (std::size_t i = 0; i < op.table.size(); ++i) {
                if (!contains(space, op.table[i])) throw DomainError("op " + name + ": entry " + std::to_string(i) + " is not in the space");
                if (auto k = node_index(op.table[i])) op.out_index[i] = static_cast<std::int32_t>(*k);
            }
        }
    }

    std::size_t table_size(std::size_t arity) const {
        std::size_t n = 1;
        for (std::size_t i = 0; i < arity; ++i) n *= nodes.size();
        return n;
    }

    const TableOp& op(const std::string& name) const {
        auto it = ops.find(name);
        if (it == ops.end()) throw DomainError("model has no op " + name);
        return it->second;
    }

    std::optional<std::size_t> node_index(const Point& p) const {
        auto it = index_.find(detail::point_key(p));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t nearest_node(const Point& p) const {
        if (auto k = node_index(p)) return *k;
        std::size_t best = 0;
        double bd = distance(space, p, nodes[0]);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double d = distance(space, p, nodes[i]);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const {
        std::size_t flat = 0;
        for (std::size_t i : idx) flat = flat * nodes.size() + i;
        return flat;
    }

    Point apply_nodes(const std::string& name, std::span<const std::size_t> idx) const {
        const TableOp& o = op(name);
        if (o.has_domain()) return apply(name, std::vector<Point>{nodes[idx[0]]});
        return o.table[flat_index(idx)];
    }

    std::int32_t apply_index(const TableOp& o, std::span<const std::size_t> idx) const {
        return o.out_index[flat_index(idx)];
    }

    // Exact node lookup first, nearest node otherwise; domain ops interpolate between domain points.
    Point apply(const std::string& name, std::span<const Point> args) const {
        const TableOp& o = op(name);
        if (args.size() != o.arity) throw DomainError("op " + name + " called with wrong arity");
        if (o.has_domain()) {
            const double x = args[0].x;
            const auto& dom = o.domain;
            if (x <= dom.front().x) return o.table.front();
            if (x >= dom.back().x) return o.table.back();
            auto it = std::lower_bound(dom.begin(), dom.end(), x, [](const Point& p, double v) { return p.x < v; });
            const auto k = static_cast<std::size_t>(it - dom.begin());
            if (it->x == x) return o.table[k];
            const double frac = (x - dom[k - 1].x) / (dom[k].x - dom[k - 1].x);
            const double y = o.table[k - 1].x + frac * (o.table[k].x - o.table[k - 1].x);
            return space.is_interval() ? Point::interval(std::clamp(y, 0.0, 1.0)) : Point::real(y);
        }
        std::vector<std::size_t> idx(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) idx[i] = nearest_node(args[i]);
        return o.table[flat_index(idx)];
    }

    Algebra algebra() const {
        Algebra a;
        a.carrier = space;
        for (const auto& [name, o] : ops) {
            a.ops[name] = {o.arity, [this, n = name](std::span<const Point> x) { return apply(n, x); }};
        }
        return a;
    }

    double node_diameter() const { return diameter(space, nodes); }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

// ---- JSON ----

inline nlohmann::json to_json(const TableModel& m) {
    nlohmann::json j;
    j["space"] = m.space;
    j["grid_n"] = m.grid_n;
    if (!m.theory.empty()) j["theory"] = m.theory;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& p : m.nodes) nodes.push_back(encode_compact(m.space, p));
    j["nodes"] = std::move(nodes);
    nlohmann::json ops = nlohmann::json::object();
    for (const auto& [name, o] : m.ops) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& p : o.table) t.push_back(encode_compact(m.space, p));
        nlohmann::json entry{{"arity", o.arity}, {"table", std::move(t)}};
        if (o.has_domain()) {
            nlohmann::json d = nlohmann::json::array();
            for (const auto& p : o.domain) d.push_back(encode_compact(m.space, p));
            entry["domain"] = std::move(d);
        }
        ops[name] = std::move(entry);
    }
    j["ops"] = std::move(ops);
    return j;
}

inline TableModel table_model_from_json(const nlohmann::json& j) {
    auto require = [](const nlohmann::json& obj, const char* key, const std::string& where) -> const nlohmann::json& {
        if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"", where);
        return obj.at(key);
    };
    TableModel m;
    try {
        m.space = require(j, "space", "/").get<MetricSpace>();
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what(), "/space");
    }
    const auto& gn = require(j, "grid_n", "/");
    if (!gn.is_number_unsigned()) throw ParseError("grid_n must be a nonnegative integer", "/grid_n");
    m.grid_n = gn.get<std::size_t>();
    if (j.contains("theory")) {
        if (!j["theory"].is_string()) throw ParseError("theory must be a string", "/theory");
        m.theory = j["theory"].get<std::string>();
    }
    const auto& nodes = require(j, "nodes", "/");
    if (!nodes.is_array()) throw ParseError("nodes must be an array", "/nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        m.nodes.push_back(decode_compact(m.space, nodes[i], "/nodes/" + std::to_string(i)));
    }
    const auto& ops = require(j, "ops", "/");
    if (!ops.is_object()) throw ParseError("ops must be an object", "/ops");
    for (const auto& [name, entry] : ops.items()) {
        const std::string where = "/ops/" + name;
        TableOp o;
        const auto& ar = require(entry, "arity", where);
        if (!ar.is_number_unsigned()) throw ParseError("arity must be a nonnegative integer", where + "/arity");
        o.arity = ar.get<std::size_t>();
        const auto& table = require(entry, "table", where);
        if (!table.is_array()) throw ParseError("table must be an array", where + "/table");
        for (std::size_t i = 0; i < table.size(); ++i) {
            o.table.push_back(decode_compact(m.space, table[i], where + "/table/" + std::to_string(i)));
        }
        if (entry.contains("domain")) {
            const auto& dom = entry["domain"];
            if (!dom.is_array()) throw ParseError("domain must be an array", where + "/domain");
            for (std::size_t i = 0; i < dom.size(); ++i) {
                o.domain.push_back(decode_compact(m.space, dom[i], where + "/domain/" + std::to_string(i)));
            }
        }
        m.ops.emplace(name, std::move(o));
    }
    try {
        m.finalize();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), "/ops");
    }
    return m;
}

inline TableModel parse_table_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), "byte " + std::to_string(e.byte));
    }
    return table_model_from_json(j);
}

// ---- residual gate ----

inline constexpr std::size_t kGateExhaustiveLimit = 1000000;
inline constexpr std::size_t kGateSamples = std::size_t{1} << 18;

struct GateReport {
    std::string theory;
    double residual = 0.0;
    std::size_t envs = 0;
    bool exhaustive = false;
};

namespace detail {

// Evaluates over node indices; returns -1 as soon as an intermediate value leaves the node set.
inline std::int32_t eval_index(const TableModel& m, const std::map<std::string, const TableOp*>& ops, const Term& t,
                               std::span<const std::size_t> env) {
    if (t.is_var()) return static_cast<std::int32_t>(env[t.var_index()]);
    const TableOp* o = ops.at(t.symbol().name);
    std::size_t idx[8];
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        const std::int32_t v = eval_index(m, ops, t.args()[i], env);
        if (v < 0) return -1;
        idx[i] = static_cast<std::size_t>(v);
    }
    return m.apply_index(*o, std::span<const std::size_t>(idx, t.args().size()));
}

}  // namespace detail

inline GateReport table_residual(const TableModel& m, const Theory& thy, std::uint64_t seed = 0) {
    for (const auto& s : thy.symbols) {
        const auto& o = m.op(s.name);
        if (o.arity != s.arity) throw DomainError("arity mismatch for symbol " + s.name);
    }
    const std::size_t nv = std::max<std::size_t>(1, thy.n_vars());
    const std::size_t n = m.nodes.size();
    GateReport rep;
    rep.theory = thy.name;
    double total = 1.0;
    for (std::size_t i = 0; i < nv; ++i) total *= static_cast<double>(n);
    rep.exhaustive = total <= static_cast<double>(kGateExhaustiveLimit);
    rep.envs = rep.exhaustive ? static_cast<std::size_t>(total) : kGateSamples;

    bool indexable = true;
    std::map<std::string, const TableOp*> ops;
    for (const auto& s : thy.symbols) {
        const auto& o = m.op(s.name);
        ops[s.name] = &o;
        indexable = indexable && o.index_closed();
    }
    const Algebra alg = m.algebra();
    Rng rng(seed);
    std::vector<std::size_t> env(nv, 0);
    std::vector<Point> penv(nv);
    for (std::size_t e = 0; e < rep.envs; ++e) {
        if (rep.exhaustive) {
            std::size_t r = e;
            for (std::size_t i = nv; i-- > 0;) {
                env[i] = r % n;
                r /= n;
            }
        } else {
            for (auto& v : env) v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        }
        for (const auto& eq : thy.equations) {
            if (indexable) {
                const auto l = detail::eval_index(m, ops, eq.lhs, env);
                const auto r = detail::eval_index(m, ops, eq.rhs, env);
                if (l >= 0 && r >= 0) {
                    if (l != r) rep.residual = std::max(rep.residual, distance(m.space, m.nodes[l], m.nodes[r]));
                    continue;
                }
            }
            for (std::size_t i = 0; i < nv; ++i) penv[i] = m.nodes[env[i]];
            rep.residual = std::max(rep.residual, distance(m.space, eval(alg, eq.lhs, penv), eval(alg, eq.rhs, penv)));
        }
    }
    return rep;
}

inline Theory model_theory(const TableModel& m, const std::string& fallback) {
    const std::string name = m.theory.empty() ? fallback : m.theory;
    if (name.rfind("group-exponent-", 0) == 0 && name != "group-exponent-N") {
        return catalog("group-exponent-N", {{"N", std::stoll(name.substr(15))}});
    }
    return catalog(name);
}

// ---- exporters ----

// Tabulates every non-domain op of a construction on the carrier grid of size grid_n.
inline TableModel export_construction(const Construction& c, std::size_t grid_n) {
    if (grid_n < 2) throw DomainError("grid below minimum");
    TableModel m;
    m.space = c.algebra.carrier;
    m.grid_n = grid_n;
    m.theory = c.theory.name;
    m.nodes = grid(m.space, grid_n).points;
    for (const auto& [name, op] : c.algebra.ops) {
        TableOp t;
        t.arity = op.arity;
        const std::size_t total = m.table_size(op.arity);
        if (total > (std::size_t{1} << 26)) throw BudgetExceeded("table entries", std::size_t{1} << 26);
        t.table.reserve(total);
        std::vector<std::size_t> idx(op.arity, 0);
        std::vector<Point> args(op.arity);
        for (std::size_t e = 0; e < total; ++e) {
            std::size_t r = e;
            for (std::size_t i = op.arity; i-- > 0;) {
                idx[i] = r % m.nodes.size();
                r /= m.nodes.size();
            }
            for (std::size_t i = 0; i < op.arity; ++i) args[i] = m.nodes[idx[i]];
            t.table.push_back(op.fn(args));
        }
        m.ops.emplace(name, std::move(t));
    }
    m.finalize();
    return m;
}

// The space-filling pair on nodes x/2^m, with the unary maps tabulated on the image of G.
inline TableModel export_peano(double epsilon, std::size_t depth_m, std::size_t grid_n = 0) {
    const PeanoCurve curve(depth_m);
    const std::size_t side = curve.side();
    if (grid_n == 0) grid_n = side;
    if (grid_n != side) throw DomainError("peano export needs grid_n equal to 2^depth");
    auto [c, pp] = peano_pair(epsilon, depth_m);
    TableModel m;
    m.space = MetricSpace::interval();
    m.grid_n = grid_n;
    m.theory = "injective-binary";
    for (std::uint32_t i = 0; i < side; ++i) m.nodes.push_back(Point::interval(curve.cell_coordinate(i)));
    const auto& g = c.algebra.op("G");
    TableOp gt;
    gt.arity = 2;
    for (const auto& a : m.nodes) {
        for (const auto& b : m.nodes) {
            const std::array<Point, 2> args{a, b};
            gt.table.push_back(g.fn(args));
        }
    }
    m.ops.emplace("G", std::move(gt));
    const std::uint64_t last = curve.last_index();
    for (int coord = 0; coord < 2; ++coord) {
        TableOp f;
        f.arity = 1;
        f.domain.reserve(last + 1);
        f.table.reserve(last + 1);
        for (std::uint64_t k = 0; k <= last; ++k) {
            f.domain.push_back(Point::interval(epsilon * (static_cast<double>(k) / static_cast<double>(last))));
            f.table.push_back(Point::interval(curve.node(k)[coord]));
        }
        m.ops.emplace(coord == 0 ? "F0" : "F1", std::move(f));
    }
    m.finalize();
    return m;
}

// Addition of Z_n carried to the grid of [0,1]^dim through a seeded shuffle of the nodes.
inline TableModel export_group_pullback(std::size_t n_per_axis, std::size_t dim, std::uint64_t seed) {
    if (dim < 1 || dim > 2) throw DomainError("group pullback supports dimension 1 or 2");
    if (n_per_axis < 2) throw DomainError("grid below minimum");
    TableModel m;
    m.space = dim == 1 ? MetricSpace::interval()
                       : MetricSpace::power(MetricSpace::interval(), dim, ProductMode::Sum);
    m.grid_n = n_per_axis;
    m.theory = "group";
    m.nodes = grid(m.space, n_per_axis).points;
    const std::size_t n = m.nodes.size();
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(label.begin(), label.end(), rng);
    std::vector<std::size_t> node_of(n);
    for (std::size_t i = 0; i < n; ++i) node_of[label[i]] = i;
    TableOp add, neg, zero;
    add.arity = 2;
    neg.arity = 1;
    zero.arity = 0;
    add.table.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) add.table.push_back(m.nodes[node_of[(label[i] + label[j]) % n]]);
        neg.table.push_back(m.nodes[node_of[(n - label[i]) % n]]);
    }
    zero.table.push_back(m.nodes[node_of[0]]);
    m.ops.emplace("add", std::move(add));
    m.ops.emplace("neg", std::move(neg));
    m.ops.emplace("zero", std::move(zero));
    m.finalize();
    return m;
}

// Exponent-2 group on a grid of the window: node indices combined by bitwise xor.
inline TableModel export_xor_group(double lo, double hi, std::size_t n_nodes) {
    if (n_nodes < 2 || (n_nodes & (n_nodes - 1)) != 0) throw DomainError("xor group needs a power-of-two node count");
    TableModel m;
    m.space = MetricSpace::window(lo, hi);
    m.grid_n = n_nodes;
    m.theory = "group-exponent-2";
    m.nodes = grid(m.space, n_nodes).points;
    TableOp add, neg, zero;
    add.arity = 2;
    neg.arity = 1;
    zero.arity = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        for (std::size_t j = 0; j < n_nodes; ++j) add.table.push_back(m.nodes[i ^ j]);
        neg.table.push_back(m.nodes[i]);
    }
    zero.table.push_back(m.nodes[0]);
    m.ops.emplace("add", std::move(add));
    m.ops.emplace("neg", std::move(neg));
    m.ops.emplace("zero", std::move(zero));
    m.finalize();
    return m;
}

inline TableModel export_triode_lattice(std::size_t leg_grid) { return export_construction(triode_pullback_lattice(), leg_grid); }

}  // namespace jumpgauge
