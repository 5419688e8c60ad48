#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "jumpgauge/constructions.hpp"
#include "jumpgauge/equations.hpp"
#include "jumpgauge/sampling.hpp"

namespace jg = jumpgauge;
using jg::OperationSymbol;
using jg::Point;
using jg::Term;

namespace {

Term x(std::size_t i) { return Term::var(i); }

// Independent generator: full cartesian expansion level by level, compared by printed form.
std::vector<Term> brute_level(const std::vector<OperationSymbol>& syms, std::size_t d, std::size_t vars) {
    std::vector<Term> ts;
    for (std::size_t i = 0; i < vars; ++i) ts.push_back(x(i));
    if (d == 0) return ts;
    const auto sub = brute_level(syms, d - 1, vars);
    for (const auto& s : syms) {
        std::vector<std::size_t> idx(s.arity, 0);
        while (true) {
            std::vector<Term> args;
            for (auto k : idx) args.push_back(sub[k]);
            ts.push_back(Term::app(s, args));
            std::size_t p = 0;
            while (p < idx.size() && ++idx[p] == sub.size()) idx[p++] = 0;
            if (p == idx.size()) break;
        }
    }
    return ts;
}

std::set<std::string> brute_terms(const std::vector<OperationSymbol>& syms, std::size_t d, std::size_t vars) {
    std::set<std::string> out;
    for (const auto& t : brute_level(syms, d, vars)) out.insert(jg::to_string(t));
    return out;
}

std::size_t count_terms(const std::vector<OperationSymbol>& syms, std::size_t d, std::size_t vars) {
    if (d == 0) return vars;
    const std::size_t sub = count_terms(syms, d - 1, vars);
    std::size_t total = vars;
    for (const auto& s : syms) {
        std::size_t p = 1;
        for (std::size_t i = 0; i < s.arity; ++i) p *= sub;
        total += p;
    }
    return total;
}

jg::Algebra rotation_algebra() {
    jg::Algebra a;
    a.carrier = jg::MetricSpace::circle(2.0);
    a.ops["F"] = {2, [](std::span<const Point> v) { return Point::circle(v[0].x + v[1].x); }};
    return a;
}

}  // namespace

TEST(TermDepth, Examples) {
    const OperationSymbol f{"F", 2}, g{"G", 2}, f0{"F0", 1};
    EXPECT_EQ(jg::depth(x(0)), 0u);
    EXPECT_EQ(jg::depth(Term::app(f, {x(0), x(1)})), 1u);
    EXPECT_EQ(jg::depth(Term::app(f0, {Term::app(g, {x(0), x(1)})})), 2u);
}

TEST(TermApp, ArityChecked) {
    EXPECT_THROW(Term::app({"F", 2}, {x(0)}), jg::DomainError);
}

TEST(SimpleEquations, Examples) {
    const OperationSymbol f{"F", 2}, g{"G", 2}, f0{"F0", 1};
    EXPECT_TRUE(jg::is_simple({Term::app(f, {x(0), x(1)}), Term::app(f, {x(1), x(0)})}));
    EXPECT_FALSE(jg::is_simple({Term::app(f0, {Term::app(g, {x(0), x(1)})}), x(0)}));
    EXPECT_TRUE(jg::is_simple({x(0), x(1)}));
}

TEST(Eval, VariableAndAnchor) {
    const auto c = jg::s1_zero_one();
    const std::vector<Point> env{Point::circle(0.3), Point::circle(1.7)};
    EXPECT_EQ(jg::eval(c.algebra, x(1), env).x, 1.7);
    const Term one = Term::app(jg::symbols::one, {});
    const Term f = Term::app({"F", 2}, {one, x(1)});
    EXPECT_EQ(jg::eval(c.algebra, f, env).x, 1.7);
    EXPECT_THROW(jg::eval(c.algebra, x(4), env), jg::DomainError);
}

TEST(Eval, LatticeGroupRecursion) {
    const auto alg = jg::reals_lgroup_model();
    const std::vector<Point> env{Point::real(3.0), Point::real(1.0)};
    // z1 = 3 - min(3,1) = 2, z2 = z1 + 2.
    EXPECT_EQ(jg::eval(alg, jg::z_term(2), env).x, 4.0);
    EXPECT_EQ(jg::eval(alg, jg::z_term(0), env).x, 0.0);
    EXPECT_EQ(jg::to_string(jg::z_term(1)), jg::to_string(Term::app(
        jg::symbols::add, {Term::app(jg::symbols::zero, {}),
                           Term::app(jg::symbols::sub, {x(0), Term::app(jg::symbols::meet, {x(0), x(1)})})})));
}

TEST(Residual, RotationFailsIdempotence) {
    jg::Theory idem;
    idem.name = "idempotent";
    idem.symbols = {{"F", 2}};
    idem.equations = {{Term::app({"F", 2}, {x(0), x(0)}), x(0)}};
    const std::vector<jg::Tuple> envs{{Point::circle(0.5)}};
    EXPECT_DOUBLE_EQ(jg::residual(rotation_algebra(), idem, envs), 0.5);
}

TEST(Residual, EmptyTheoryIsZero) {
    jg::Theory empty;
    const std::vector<jg::Tuple> envs{{Point::circle(0.5)}, {Point::circle(1.5)}};
    EXPECT_EQ(jg::residual(rotation_algebra(), empty, envs), 0.0);
}

TEST(Residual, UninterpretedSymbolThrows) {
    const std::vector<jg::Tuple> envs{{Point::circle(0.5), Point::circle(0.1), Point::circle(0.2)}};
    EXPECT_THROW(jg::residual(rotation_algebra(), jg::catalog("majority"), envs), jg::DomainError);
}

TEST(Residual, MonotoneUnderTheoryExtension) {
    const auto c = jg::s1_zero_one();
    jg::Algebra tweaked = c.algebra;
    // A three-argument operation that ignores its third argument.
    tweaked.ops["F"] = {3, [](std::span<const Point> v) { return v[0]; }};
    const auto envs = jg::random_envs(tweaked.carrier, 3, 2000, 3);
    const double base = jg::residual(tweaked, jg::catalog("majority"), envs);
    const double ext = jg::residual(tweaked, jg::catalog("majority-symmetric"), envs);
    EXPECT_LE(base, ext);
    EXPECT_GT(ext, 0.0);
}

TEST(Substitution, CompositionalOnRandomEnvironments) {
    const auto alg = jg::reals_lgroup_model();
    const auto& ts = jg::catalog("lambda-gamma").symbols;
    const auto terms = jg::enumerate_terms(ts, 2, 2);
    jg::Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const Term& t = terms[rng() % terms.size()];
        const Term& u = terms[rng() % terms.size()];
        const std::vector<Point> env{Point::real(jg::uniform01(rng) * 4 - 2), Point::real(jg::uniform01(rng) * 4 - 2)};
        std::vector<Point> env2 = env;
        env2[0] = jg::eval(alg, u, env);
        EXPECT_EQ(jg::eval(alg, jg::substitute(t, 0, u), env).x, jg::eval(alg, t, env2).x);
    }
}

TEST(EnumerateTerms, SmallCounts) {
    const std::vector<OperationSymbol> f{{"F", 2}};
    EXPECT_EQ(jg::enumerate_terms(f, 1, 2).size(), 6u);
    EXPECT_EQ(jg::enumerate_terms(f, 0, 3).size(), 3u);
    EXPECT_EQ(jg::enumerate_terms(f, 2, 1).size(), 5u);
}

TEST(EnumerateTerms, MatchesBruteForceGenerator) {
    const std::vector<std::vector<OperationSymbol>> families{
        {{"F", 2}}, {{"F", 1}, {"G", 2}}, {{"F", 3}}, {{"c", 0}, {"F", 2}}, {{"F", 1}, {"G", 1}}};
    for (const auto& syms : families) {
        for (std::size_t d = 0; d <= 3; ++d) {
            for (std::size_t v = 1; v <= 3; ++v) {
                if (count_terms(syms, d, v) > jg::kTermBudget) {
                    EXPECT_THROW(jg::enumerate_terms(syms, d, v), jg::BudgetExceeded);
                    continue;
                }
                const auto got = jg::enumerate_terms(syms, d, v);
                std::set<std::string> names;
                for (const auto& t : got) names.insert(jg::to_string(t));
                EXPECT_EQ(names.size(), got.size());
                EXPECT_EQ(names, brute_terms(syms, d, v)) << "depth " << d << " vars " << v;
            }
        }
    }
}

TEST(EnumerateTerms, CapsNamed) {
    const std::vector<OperationSymbol> f{{"F", 2}};
    try {
        jg::enumerate_terms(f, 4, 1);
        FAIL();
    } catch (const jg::BudgetExceeded& e) {
        EXPECT_EQ(e.cap(), "max_depth");
    }
}

TEST(Catalog, Shapes) {
    EXPECT_EQ(jg::catalog("majority").equations.size(), 3u);
    const auto zo = jg::catalog("zero-one");
    EXPECT_EQ(zo.equations.size(), 2u);
    EXPECT_NE(zo.find("zero"), nullptr);
    EXPECT_NE(zo.find("one"), nullptr);
    // (m_max + 1) * k_max schema instances plus the two-part chained equation.
    EXPECT_EQ(jg::catalog("lambda-gamma", {{"m_max", 2}, {"k_max", 2}}).equations.size(), 3u * 2u + 2u);
    EXPECT_EQ(jg::catalog("sigma2", {{"m_max", 2}, {"k_max", 2}}).equations.size(), 3u * 2u + 2u);
    EXPECT_EQ(jg::catalog("lattice").equations.size(), 8u);
    EXPECT_EQ(jg::catalog("group-exponent-N", {{"N", 3}}).params.at("N"), 3);
    EXPECT_THROW(jg::catalog("no-such-theory"), jg::DomainError);
    EXPECT_THROW(jg::catalog("group-exponent-N", {{"N", 0}}), jg::DomainError);
}

TEST(Catalog, JsonRoundTrip) {
    for (const char* name : {"zero-one", "idem-comm", "majority-symmetric", "sigma2", "lambda-gamma", "lattice"}) {
        const auto thy = jg::catalog(name);
        const auto back = jg::theory_from_json(jg::theory_to_json(thy));
        ASSERT_EQ(back.equations.size(), thy.equations.size());
        for (std::size_t i = 0; i < thy.equations.size(); ++i) {
            EXPECT_EQ(jg::to_string(back.equations[i]), jg::to_string(thy.equations[i]));
        }
    }
}
