#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumpgauge/errors.hpp"
#include "jumpgauge/metric.hpp"

namespace jumpgauge {

struct OperationSymbol {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const OperationSymbol&, const OperationSymbol&) = default;
};

class Term {
public:
    static Term var(std::size_t index) {
        auto n = std::make_shared<Node>();
        n->is_var = true;
        n->index = index;
        n->n_vars = index + 1;
        return Term(std::move(n));
    }

    static Term app(OperationSymbol symbol, std::vector<Term> args) {
        if (args.size() != symbol.arity) {
            throw DomainError("symbol " + symbol.name + " expects " + std::to_string(symbol.arity) +
                              " arguments, got " + std::to_string(args.size()));
        }
        auto n = std::make_shared<Node>();
        n->symbol = std::move(symbol);
        std::size_t d = 0, v = 0;
        for (const auto& a : args) {
            d = std::max(d, a.depth());
            v = std::max(v, a.n_vars());
        }
        n->depth = d + 1;
        n->n_vars = v;
        n->args = std::move(args);
        return Term(std::move(n));
    }

    bool is_var() const { return node_->is_var; }
    std::size_t var_index() const { return node_->index; }
    const OperationSymbol& symbol() const { return node_->symbol; }
    std::span<const Term> args() const { return node_->args; }
    std::size_t depth() const { return node_->depth; }
    // One more than the largest variable index occurring, 0 for ground terms.
    std::size_t n_vars() const { return node_->n_vars; }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.node_ == b.node_) return true;
        if (a.is_var() != b.is_var()) return false;
        if (a.is_var()) return a.var_index() == b.var_index();
        if (!(a.symbol() == b.symbol())) return false;
        return std::equal(a.args().begin(), a.args().end(), b.args().begin(), b.args().end());
    }

private:
    struct Node {
        bool is_var = false;
        std::size_t index = 0;
        OperationSymbol symbol;
        std::vector<Term> args;
        std::size_t depth = 0;
        std::size_t n_vars = 0;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline std::size_t depth(const Term& t) { return t.depth(); }

inline std::string to_string(const Term& t) {
    if (t.is_var()) return "x" + std::to_string(t.var_index());
    std::string out = t.symbol().name;
    if (t.symbol().arity == 0) return out;
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        out += to_string(t.args()[i]);
    }
    return out + ")";
}

struct Equation {
    Term lhs;
    Term rhs;
};

inline std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

inline bool is_simple(const Equation& e) {
    auto single = [](const Term& t) {
        if (t.is_var()) return true;
        return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return a.is_var(); });
    };
    return single(e.lhs) && single(e.rhs);
}

struct Theory {
    std::string name;
    std::vector<OperationSymbol> symbols;
    std::vector<Equation> equations;
    std::map<std::string, long long> params;

    const OperationSymbol* find(const std::string& n) const {
        for (const auto& s : symbols) {
            if (s.name == n) return &s;
        }
        return nullptr;
    }

    std::size_t n_vars() const {
        std::size_t v = 0;
        for (const auto& e : equations) v = std::max({v, e.lhs.n_vars(), e.rhs.n_vars()});
        return v;
    }

    // Throws if a symbol is declared twice or an equation uses an undeclared symbol.
    void validate() const {
        std::set<std::string> names;
        for (const auto& s : symbols) {
            if (!names.insert(s.name).second) throw DomainError("duplicate symbol " + s.name);
        }
        std::function<void(const Term&)> walk = [&](const Term& t) {
            if (t.is_var()) return;
            const auto* s = find(t.symbol().name);
            if (!s || s->arity != t.symbol().arity) {
                throw DomainError("theory " + name + " uses undeclared symbol " + t.symbol().name);
            }
            for (const auto& a : t.args()) walk(a);
        };
        for (const auto& e : equations) {
            walk(e.lhs);
            walk(e.rhs);
        }
    }
};

struct Operation {
    std::size_t arity = 0;
    std::function<Point(std::span<const Point>)> fn;
};

struct Algebra {
    MetricSpace carrier;
    std::map<std::string, Operation> ops;
    // Argument tuples near which an operation is suspected to jump, per symbol.
    std::map<std::string, std::vector<Tuple>> seams;
    // Carrier points whose products seed the seam list of derived term operations.
    std::vector<Point> seam_coords;

    const Operation& op(const std::string& name) const {
        auto it = ops.find(name);
        if (it == ops.end()) throw DomainError("symbol " + name + " is not interpreted");
        return it->second;
    }
};

inline Point eval(const Algebra& alg, const Term& t, std::span<const Point> env) {
    if (t.is_var()) {
        if (t.var_index() >= env.size()) {
            throw DomainError("unbound variable x" + std::to_string(t.var_index()));
        }
        return env[t.var_index()];
    }
    const Operation& op = alg.op(t.symbol().name);
    if (op.arity != t.symbol().arity) {
        throw DomainError("arity mismatch for symbol " + t.symbol().name);
    }
    std::vector<Point> args;
    args.reserve(op.arity);
    for (const auto& a : t.args()) args.push_back(eval(alg, a, env));
    return op.fn(args);
}

// Replaces variable `index` by `replacement` everywhere in t.
inline Term substitute(const Term& t, std::size_t index, const Term& replacement) {
    if (t.is_var()) return t.var_index() == index ? replacement : t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(substitute(a, index, replacement));
    return Term::app(t.symbol(), std::move(args));
}

inline void check_interprets(const Algebra& alg, const Theory& thy) {
    for (const auto& s : thy.symbols) {
        auto it = alg.ops.find(s.name);
        if (it == alg.ops.end()) throw DomainError("symbol " + s.name + " is not interpreted");
        if (it->second.arity != s.arity) throw DomainError("arity mismatch for symbol " + s.name);
    }
}

inline double residual(const Algebra& alg, const Theory& thy, std::span<const Tuple> samples) {
    check_interprets(alg, thy);
    const std::size_t need = thy.n_vars();
    double worst = 0.0;
    for (const auto& env : samples) {
        if (env.size() < need) {
            throw DomainError("environment binds " + std::to_string(env.size()) + " variables, theory needs " +
                              std::to_string(need));
        }
        for (const auto& e : thy.equations) {
            worst = std::max(worst, distance(alg.carrier, eval(alg, e.lhs, env), eval(alg, e.rhs, env)));
        }
    }
    return worst;
}

inline constexpr std::size_t kMaxTermDepth = 3;
inline constexpr std::size_t kMaxTermVars = 3;
inline constexpr std::size_t kTermBudget = 250000;

// Terms ordered by depth, then symbol order, then argument tuples in lexicographic index order.
inline std::vector<Term> enumerate_terms(std::span<const OperationSymbol> symbols, std::size_t max_depth,
                                         std::size_t n_vars, std::size_t budget = kTermBudget) {
    if (max_depth > kMaxTermDepth) throw BudgetExceeded("max_depth", kMaxTermDepth);
    if (n_vars > kMaxTermVars) throw BudgetExceeded("n_vars", kMaxTermVars);
    std::vector<Term> all;
    for (std::size_t v = 0; v < n_vars; ++v) all.push_back(Term::var(v));
    std::size_t prev_start = 0;
    for (std::size_t d = 1; d <= max_depth; ++d) {
        const std::size_t prev_end = all.size();
        const double m_all = static_cast<double>(prev_end);
        const double m_old = static_cast<double>(prev_start);
        double fresh = 0.0;
        for (const auto& s : symbols) {
            if (s.arity == 0) fresh += d == 1 ? 1.0 : 0.0;
            else fresh += std::pow(m_all, static_cast<double>(s.arity)) - std::pow(m_old, static_cast<double>(s.arity));
        }
        if (static_cast<double>(all.size()) + fresh > static_cast<double>(budget)) {
            throw BudgetExceeded("term count", budget);
        }
        for (const auto& s : symbols) {
            if (s.arity == 0) {
                if (d == 1) all.push_back(Term::app(s, {}));
                continue;
            }
            if (prev_end == 0) continue;
            std::vector<std::size_t> idx(s.arity, 0);
            while (true) {
                bool fresh_arg = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= prev_start; });
                if (fresh_arg) {
                    std::vector<Term> args;
                    for (auto i : idx) args.push_back(all[i]);
                    all.push_back(Term::app(s, std::move(args)));
                }
                std::size_t axis = s.arity;
                bool done = false;
                while (true) {
                    if (axis == 0) {
                        done = true;
                        break;
                    }
                    --axis;
                    if (++idx[axis] < prev_end) break;
                    idx[axis] = 0;
                }
                if (done) break;
            }
        }
        prev_start = prev_end;
        if (all.size() == prev_end) break;
    }
    return all;
}

// ---- catalog ----

namespace symbols {
inline const OperationSymbol meet{"meet", 2};
inline const OperationSymbol join{"join", 2};
inline const OperationSymbol add{"add", 2};
inline const OperationSymbol sub{"sub", 2};
inline const OperationSymbol neg{"neg", 1};
inline const OperationSymbol zero{"zero", 0};
inline const OperationSymbol one{"one", 0};
}  // namespace symbols

namespace detail {
inline Term ap(const OperationSymbol& s, std::vector<Term> args) { return Term::app(s, std::move(args)); }
inline Term v(std::size_t i) { return Term::var(i); }
}  // namespace detail

// z_0 = 0 and z_{n+1} = z_n + (x - (x meet y)) in the variables x = x0, y = x1.
inline Term z_term(std::size_t n) {
    using detail::ap;
    using detail::v;
    Term z = ap(symbols::zero, {});
    for (std::size_t i = 0; i < n; ++i) {
        z = ap(symbols::add, {z, ap(symbols::sub, {v(0), ap(symbols::meet, {v(0), v(1)})})});
    }
    return z;
}

inline long long param_or(const std::map<std::string, long long>& params, const std::string& key, long long dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

inline Theory catalog(const std::string& name, const std::map<std::string, long long>& params = {}) {
    using detail::ap;
    using detail::v;
    Theory thy;
    thy.name = name;
    auto eq = [&](Term l, Term r) { thy.equations.push_back({std::move(l), std::move(r)}); };
    auto bound = [&](const std::string& key) {
        long long b = param_or(params, key, 3);
        if (b < 0) throw DomainError(key + " must be nonnegative");
        thy.params[key] = b;
        return static_cast<std::size_t>(b);
    };

    if (name == "zero-one") {
        OperationSymbol f{"F", 2};
        thy.symbols = {f, symbols::zero, symbols::one};
        eq(ap(f, {ap(symbols::zero, {}), v(0)}), ap(symbols::zero, {}));
        eq(ap(f, {ap(symbols::one, {}), v(0)}), v(0));
    } else if (name == "idem-comm") {
        OperationSymbol f{"F", 2};
        thy.symbols = {f};
        eq(ap(f, {v(0), v(1)}), ap(f, {v(1), v(0)}));
        eq(ap(f, {v(0), v(0)}), v(0));
    } else if (name == "majority" || name == "majority-symmetric") {
        OperationSymbol f{"F", 3};
        thy.symbols = {f};
        eq(ap(f, {v(0), v(0), v(1)}), v(0));
        eq(ap(f, {v(0), v(1), v(0)}), v(0));
        eq(ap(f, {v(1), v(0), v(0)}), v(0));
        if (name == "majority-symmetric") {
            eq(ap(f, {v(0), v(1), v(2)}), ap(f, {v(0), v(2), v(1)}));
            eq(ap(f, {v(0), v(2), v(1)}), ap(f, {v(1), v(2), v(0)}));
        }
    } else if (name == "injective-binary") {
        OperationSymbol g{"G", 2}, f0{"F0", 1}, f1{"F1", 1};
        thy.symbols = {g, f0, f1};
        eq(ap(f0, {ap(g, {v(0), v(1)})}), v(0));
        eq(ap(f1, {ap(g, {v(0), v(1)})}), v(1));
    } else if (name == "sigma1") {
        OperationSymbol f{"F", 3}, phi{"phi", 1};
        thy.symbols = {f, phi};
        const std::size_t kmax = bound("k_max");
        for (std::size_t k = 1; k <= kmax; ++k) {
            Term it = v(0);
            for (std::size_t i = 0; i < k; ++i) it = ap(phi, {it});
            eq(ap(f, {it, v(0), v(1)}), v(0));
        }
        eq(ap(f, {v(0), v(0), v(1)}), v(1));
    } else if (name == "sigma2") {
        const std::size_t mmax = bound("m_max");
        const std::size_t kmax = bound("k_max");
        OperationSymbol g{"G", 4}, k2{"K", 2};
        thy.symbols = {g, k2};
        std::vector<OperationSymbol> psi;
        for (std::size_t m = 0; m <= mmax + kmax; ++m) {
            psi.push_back({"psi" + std::to_string(m), 2});
            thy.symbols.push_back(psi.back());
        }
        for (std::size_t m = 0; m <= mmax; ++m) {
            for (std::size_t k = 1; k <= kmax; ++k) {
                eq(ap(g, {ap(psi[m + k], {v(0), v(1)}), ap(psi[m], {v(0), v(1)}), v(0), v(1)}), v(0));
            }
        }
        Term guu = ap(g, {v(2), v(2), v(0), v(1)});
        eq(ap(k2, {v(0), v(1)}), guu);
        eq(guu, ap(k2, {v(1), v(0)}));
    } else if (name == "lambda-gamma") {
        const std::size_t mmax = bound("m_max");
        const std::size_t kmax = bound("k_max");
        thy.symbols = {symbols::meet, symbols::join, symbols::add, symbols::sub, symbols::zero};
        Term xy = ap(symbols::meet, {v(0), v(1)});
        for (std::size_t m = 0; m <= mmax; ++m) {
            for (std::size_t k = 1; k <= kmax; ++k) {
                Term diff = ap(symbols::sub, {z_term(m + k), z_term(m)});
                eq(v(0), ap(symbols::meet, {v(0), ap(symbols::add, {diff, xy})}));
            }
        }
        Term mid = ap(symbols::meet, {v(0), ap(symbols::add, {ap(symbols::sub, {v(2), v(2)}), xy})});
        eq(xy, mid);
        eq(mid, ap(symbols::meet, {v(1), v(0)}));
    } else if (name == "lattice") {
        const auto& m = symbols::meet;
        const auto& j = symbols::join;
        thy.symbols = {m, j};
        eq(ap(m, {v(0), v(0)}), v(0));
        eq(ap(j, {v(0), v(0)}), v(0));
        eq(ap(m, {v(0), v(1)}), ap(m, {v(1), v(0)}));
        eq(ap(j, {v(0), v(1)}), ap(j, {v(1), v(0)}));
        eq(ap(m, {ap(m, {v(0), v(1)}), v(2)}), ap(m, {v(0), ap(m, {v(1), v(2)})}));
        eq(ap(j, {ap(j, {v(0), v(1)}), v(2)}), ap(j, {v(0), ap(j, {v(1), v(2)})}));
        eq(ap(m, {v(0), ap(j, {v(0), v(1)})}), v(0));
        eq(ap(j, {v(0), ap(m, {v(0), v(1)})}), v(0));
    } else if (name == "group" || name == "group-exponent-N") {
        const auto& a = symbols::add;
        const auto& n = symbols::neg;
        Term z = ap(symbols::zero, {});
        thy.symbols = {a, n, symbols::zero};
        eq(ap(a, {ap(a, {v(0), v(1)}), v(2)}), ap(a, {v(0), ap(a, {v(1), v(2)})}));
        eq(ap(a, {v(0), z}), v(0));
        eq(ap(a, {z, v(0)}), v(0));
        eq(ap(a, {v(0), ap(n, {v(0)})}), z);
        eq(ap(a, {ap(n, {v(0)}), v(0)}), z);
        if (name == "group-exponent-N") {
            long long big_n = param_or(params, "N", 2);
            if (big_n < 1) throw DomainError("exponent N must be at least 1");
            thy.params["N"] = big_n;
            Term power = v(0);
            for (long long i = 1; i < big_n; ++i) power = ap(a, {power, v(0)});
            eq(power, z);
        }
    } else {
        throw DomainError("unknown theory " + name);
    }
    thy.validate();
    return thy;
}

// ---- JSON ----

inline nlohmann::json term_to_json(const Term& t) {
    if (t.is_var()) return t.var_index();
    nlohmann::json arr = nlohmann::json::array({t.symbol().name});
    for (const auto& a : t.args()) arr.push_back(term_to_json(a));
    return arr;
}

inline Term term_from_json(const nlohmann::json& j, const Theory& thy) {
    if (j.is_number_unsigned()) return Term::var(j.get<std::size_t>());
    if (!j.is_array() || j.empty() || !j[0].is_string()) throw ParseError("malformed term", "term");
    const auto* s = thy.find(j[0].get<std::string>());
    if (!s) throw ParseError("unknown symbol " + j[0].get<std::string>(), "term");
    std::vector<Term> args;
    for (std::size_t i = 1; i < j.size(); ++i) args.push_back(term_from_json(j[i], thy));
    return Term::app(*s, std::move(args));
}

inline nlohmann::json theory_to_json(const Theory& thy) {
    nlohmann::json syms = nlohmann::json::array();
    for (const auto& s : thy.symbols) syms.push_back({{"name", s.name}, {"arity", s.arity}});
    nlohmann::json eqs = nlohmann::json::array();
    for (const auto& e : thy.equations) eqs.push_back({term_to_json(e.lhs), term_to_json(e.rhs)});
    return {{"name", thy.name}, {"symbols", syms}, {"equations", eqs}, {"params", thy.params}};
}

inline Theory theory_from_json(const nlohmann::json& j) {
    Theory thy;
    thy.name = j.at("name").get<std::string>();
    for (const auto& s : j.at("symbols")) {
        thy.symbols.push_back({s.at("name").get<std::string>(), s.at("arity").get<std::size_t>()});
    }
    for (const auto& e : j.at("equations")) {
        thy.equations.push_back({term_from_json(e.at(0), thy), term_from_json(e.at(1), thy)});
    }
    if (j.contains("params")) thy.params = j.at("params").get<std::map<std::string, long long>>();
    thy.validate();
    return thy;
}

}  // namespace jumpgauge
