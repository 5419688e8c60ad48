#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "jumpgauge/constructions.hpp"
#include "jumpgauge/equations.hpp"
#include "jumpgauge/table_model.hpp"

namespace jg = jumpgauge;

namespace {

// Nodes {0, 1}; G walks the four pairs in Peano order onto {0, 1/3, 2/3, 1}.
jg::TableModel four_point_toy() {
    jg::TableModel m;
    m.space = jg::MetricSpace::interval();
    m.grid_n = 2;
    m.theory = "injective-binary";
    m.nodes = {jg::Point::interval(0.0), jg::Point::interval(1.0)};
    jg::TableOp g;
    g.arity = 2;
    for (double v : {0.0, 1.0 / 3.0, 1.0, 2.0 / 3.0}) g.table.push_back(jg::Point::interval(v));
    jg::TableOp f0, f1;
    f0.arity = f1.arity = 1;
    for (double v : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
        f0.domain.push_back(jg::Point::interval(v));
        f1.domain.push_back(jg::Point::interval(v));
    }
    for (double v : {0.0, 0.0, 1.0, 1.0}) f0.table.push_back(jg::Point::interval(v));
    for (double v : {0.0, 1.0, 1.0, 0.0}) f1.table.push_back(jg::Point::interval(v));
    m.ops.emplace("G", g);
    m.ops.emplace("F0", f0);
    m.ops.emplace("F1", f1);
    m.finalize();
    return m;
}

void expect_same_model(const jg::TableModel& a, const jg::TableModel& b) {
    EXPECT_TRUE(a.space == b.space);
    EXPECT_EQ(a.grid_n, b.grid_n);
    EXPECT_EQ(a.theory, b.theory);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) EXPECT_TRUE(a.nodes[i] == b.nodes[i]) << i;
    ASSERT_EQ(a.ops.size(), b.ops.size());
    for (const auto& [name, o] : a.ops) {
        const auto& p = b.op(name);
        EXPECT_EQ(o.arity, p.arity);
        ASSERT_EQ(o.table.size(), p.table.size()) << name;
        for (std::size_t i = 0; i < o.table.size(); ++i) EXPECT_TRUE(o.table[i] == p.table[i]) << name << " " << i;
        ASSERT_EQ(o.domain.size(), p.domain.size());
        EXPECT_EQ(o.out_index, p.out_index);
    }
}

}  // namespace

TEST(TableModel, ToyLookupAndInterpolation) {
    const auto m = four_point_toy();
    EXPECT_DOUBLE_EQ(m.apply("G", std::vector{jg::Point::interval(1.0), jg::Point::interval(0.0)}).x, 1.0);
    EXPECT_DOUBLE_EQ(m.apply("G", std::vector{jg::Point::interval(1.0), jg::Point::interval(1.0)}).x, 2.0 / 3.0);
    // Off-node arguments snap to the nearest node.
    EXPECT_DOUBLE_EQ(m.apply("G", std::vector{jg::Point::interval(0.2), jg::Point::interval(0.9)}).x, 1.0 / 3.0);
    // F0 interpolates linearly between its domain points.
    EXPECT_DOUBLE_EQ(m.apply("F0", std::vector{jg::Point::interval(0.5)}).x, 0.5);
    EXPECT_DOUBLE_EQ(m.apply("F1", std::vector{jg::Point::interval(5.0 / 6.0)}).x, 0.5);
    EXPECT_EQ(m.op("G").out_index, (std::vector<std::int32_t>{0, -1, 1, -1}));
    EXPECT_THROW(m.op("H"), jg::DomainError);
    EXPECT_THROW(m.apply("G", std::vector{jg::Point::interval(0.0)}), jg::DomainError);
}

TEST(TableModel, FinalizeRejectsMalformedTables) {
    auto m = four_point_toy();
    m.ops.at("G").table.pop_back();
    EXPECT_THROW(m.finalize(), jg::DomainError);

    m = four_point_toy();
    m.nodes.push_back(jg::Point::interval(1.0));
    EXPECT_THROW(m.finalize(), jg::DomainError);

    m = four_point_toy();
    std::swap(m.ops.at("F0").domain[1], m.ops.at("F0").domain[2]);
    EXPECT_THROW(m.finalize(), jg::DomainError);

    m = four_point_toy();
    m.ops.at("G").domain = m.ops.at("F0").domain;
    EXPECT_THROW(m.finalize(), jg::DomainError);

    jg::TableModel empty;
    empty.space = jg::MetricSpace::interval();
    EXPECT_THROW(empty.finalize(), jg::DomainError);
}

TEST(TableModel, JsonRoundTrip) {
    const std::vector<jg::TableModel> models{four_point_toy(), jg::export_xor_group(-1.0, 1.0, 8),
                                             jg::export_group_pullback(6, 2, 3), jg::export_triode_lattice(12),
                                             jg::export_peano(0.05, 2)};
    for (const auto& m : models) {
        const std::string text = jg::to_json(m).dump();
        const auto back = jg::parse_table_model(text);
        expect_same_model(m, back);
        EXPECT_EQ(jg::to_json(back).dump(), text);
    }
}

TEST(TableModel, ParseErrorNamesByteOffset) {
    try {
        jg::parse_table_model(R"({"grid_n": 2,, "nodes": []})");
        FAIL() << "expected a parse error";
    } catch (const jg::ParseError& e) {
        EXPECT_EQ(e.location(), "byte 14");
    }
    try {
        jg::parse_table_model("");
        FAIL() << "expected a parse error";
    } catch (const jg::ParseError& e) {
        EXPECT_EQ(e.location().rfind("byte ", 0), 0u);
    }
}

TEST(TableModel, StructuralErrorsNameJsonPath) {
    auto j = jg::to_json(four_point_toy());
    auto expect_at = [](const nlohmann::json& doc, const std::string& where) {
        try {
            jg::table_model_from_json(doc);
            ADD_FAILURE() << "expected a parse error at " << where;
        } catch (const jg::ParseError& e) {
            EXPECT_EQ(e.location(), where);
        }
    };
    auto bad = j;
    bad.erase("nodes");
    expect_at(bad, "/");
    bad = j;
    bad["grid_n"] = -3;
    expect_at(bad, "/grid_n");
    bad = j;
    bad["ops"]["G"]["table"][2] = 4.0;
    expect_at(bad, "/ops/G/table/2");
    bad = j;
    bad["ops"]["G"]["table"][2] = "x";
    expect_at(bad, "/ops/G/table/2");
    bad = j;
    bad["ops"]["F0"].erase("arity");
    expect_at(bad, "/ops/F0");
    bad = j;
    bad["ops"]["G"]["table"].erase(0);
    expect_at(bad, "/ops");
}

TEST(TableModel, GateExhaustiveOnSmallModels) {
    const auto toy = four_point_toy();
    const auto rep = jg::table_residual(toy, jg::catalog("injective-binary"));
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.envs, 4u);
    EXPECT_EQ(rep.residual, 0.0);

    const auto xr = jg::export_xor_group(0.0, 1.0, 4);
    const auto g = jg::table_residual(xr, jg::model_theory(xr, "group"));
    EXPECT_TRUE(g.exhaustive);
    EXPECT_EQ(g.residual, 0.0);
}

TEST(TableModel, GateSamplesLargeModels) {
    // 256 nodes and three variables exceed the exhaustive limit.
    const auto m = jg::export_group_pullback(16, 2, 5);
    const auto rep = jg::table_residual(m, jg::catalog("group"), 9);
    EXPECT_FALSE(rep.exhaustive);
    EXPECT_EQ(rep.envs, jg::kGateSamples);
    EXPECT_EQ(rep.residual, 0.0);
}

TEST(TableModel, GateDetectsBrokenTables) {
    auto toy = four_point_toy();
    toy.ops.at("F1").table[2] = jg::Point::interval(0.5);
    toy.finalize();
    EXPECT_NEAR(jg::table_residual(toy, jg::catalog("injective-binary")).residual, 0.5, 1e-12);

    // Averaging is continuous and not injective.
    jg::TableModel avg;
    avg.space = jg::MetricSpace::interval();
    avg.grid_n = 9;
    avg.nodes = jg::grid(avg.space, 9).points;
    jg::TableOp g, id;
    g.arity = 2;
    id.arity = 1;
    for (const auto& a : avg.nodes) {
        for (const auto& b : avg.nodes) g.table.push_back(jg::Point::interval((a.x + b.x) / 2.0));
        id.table.push_back(a);
    }
    avg.ops.emplace("G", g);
    avg.ops.emplace("F0", id);
    avg.ops.emplace("F1", id);
    avg.finalize();
    EXPECT_GT(jg::table_residual(avg, jg::catalog("injective-binary")).residual, 0.1);

    auto xr = jg::export_xor_group(0.0, 1.0, 4);
    xr.ops.at("add").table[1] = xr.nodes[2];
    xr.finalize();
    EXPECT_GT(jg::table_residual(xr, jg::catalog("group")).residual, 0.3);
}

TEST(TableModel, XorGroupTablesMatchBitwiseXor) {
    const auto m = jg::export_xor_group(-2.0, 2.0, 8);
    EXPECT_EQ(m.theory, "group-exponent-2");
    const auto& add = m.op("add");
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(add.out_index[i * 8 + j], static_cast<std::int32_t>(i ^ j));
        EXPECT_EQ(m.op("neg").out_index[i], static_cast<std::int32_t>(i));
    }
    EXPECT_TRUE(m.op("zero").table[0] == m.nodes[0]);
    EXPECT_THROW(jg::export_xor_group(0.0, 1.0, 6), jg::DomainError);
}

TEST(TableModel, GroupPullbackIsCyclicGroup) {
    const auto m = jg::export_group_pullback(32, 1, 11);
    EXPECT_TRUE(m.op("add").index_closed());
    const auto zero = *m.node_index(m.op("zero").table[0]);
    // Order of every element divides 32 and some element generates the whole group.
    std::size_t max_order = 0;
    for (std::size_t a = 0; a < m.nodes.size(); ++a) {
        std::size_t x = a, order = 1;
        while (x != zero) {
            const std::size_t idx[2] = {x, a};
            x = static_cast<std::size_t>(m.apply_index(m.op("add"), idx));
            ++order;
            ASSERT_LE(order, 32u);
        }
        EXPECT_EQ(32u % order, 0u);
        max_order = std::max(max_order, order);
    }
    EXPECT_EQ(max_order, 32u);
    EXPECT_THROW(jg::export_group_pullback(8, 3, 0), jg::DomainError);
    EXPECT_THROW(jg::export_group_pullback(1, 1, 0), jg::DomainError);
}

TEST(TableModel, PeanoExportInvertsOnNodes) {
    const auto m = jg::export_peano(0.05, 3);
    EXPECT_EQ(m.nodes.size(), 8u);
    EXPECT_EQ(jg::table_residual(m, jg::catalog("injective-binary")).residual, 0.0);
    for (const auto& a : m.nodes) {
        for (const auto& b : m.nodes) {
            const auto z = m.apply("G", std::vector{a, b});
            EXPECT_LE(z.x, 0.05 + 1e-15);
            EXPECT_EQ(m.apply("F0", std::vector{z}).x, a.x);
            EXPECT_EQ(m.apply("F1", std::vector{z}).x, b.x);
        }
    }
    EXPECT_THROW(jg::export_peano(0.05, 3, 16), jg::DomainError);
}

TEST(TableModel, ExportedConstructionMatchesClosure) {
    const auto c = jg::s1_majority();
    const auto m = jg::export_construction(c, 24);
    EXPECT_EQ(m.nodes.size(), 24u);
    const auto& maj = c.algebra.op("F");
    for (std::size_t i = 0; i < 24; i += 5) {
        for (std::size_t j = 0; j < 24; j += 3) {
            for (std::size_t k = 0; k < 24; k += 7) {
                const std::array<jg::Point, 3> args{m.nodes[i], m.nodes[j], m.nodes[k]};
                EXPECT_TRUE(m.apply("F", args) == maj.fn(args));
            }
        }
    }
    EXPECT_THROW(jg::export_construction(c, 1), jg::DomainError);
}

TEST(TableModel, TriodeLatticeExportPassesGate) {
    const auto m = jg::export_triode_lattice(20);
    const auto rep = jg::table_residual(m, jg::model_theory(m, "lattice"));
    EXPECT_EQ(rep.residual, 0.0);
    EXPECT_TRUE(m.op("join").index_closed());
    EXPECT_TRUE(m.op("meet").index_closed());
}
