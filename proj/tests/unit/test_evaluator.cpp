#include <gtest/gtest.h>

#include "cmc/error.hpp"
#include "cmc/evaluator.hpp"
#include "cmc/generators.hpp"
#include "oracles.hpp"

using namespace cmc;
using cmctest::fig1_history;
using cmctest::make_op;

namespace {

AbstractExecution two_ops(bool a_first) {
    AbstractExecution x;
    x.history.meta = {{"p1", "p2"}, {"x"}, {"v"}};
    x.history.ops = {make_op("a", "p1", 1, 2, OpType::write, "x", "v", "_"),
                     make_op("b", "p2", 3, 4, OpType::read, "x", "_", "v")};
    x.vis = Relation(2);
    x.ar = Relation(2);
    if (a_first) x.ar.insert(0, 1); else x.ar.insert(1, 0);
    return x;
}

}  // namespace

TEST(Evaluator, SessionIntervalsAreOrdered) {
    const auto phi = parse_formula("forall1 a. forall1 b. ss(a,b) & a.stime != b.stime => (rb(a,b) | rb(b,a))");
    EXPECT_TRUE(check_model(Model(fig1_history()), phi));
}

TEST(Evaluator, TruthAndEmptyDomain) {
    EXPECT_TRUE(check_model(Model(fig1_history()), f::truth()));
    History empty;
    empty.meta = {{"p1"}, {"x"}, {"v"}};
    EXPECT_FALSE(check_model(Model(empty), parse_formula("exists1 a. true")));
    EXPECT_TRUE(check_model(Model(empty), parse_formula("forall1 a. false")));
}

TEST(Evaluator, IntervalsAreProper) {
    EXPECT_TRUE(check_model(Model(fig1_history()), parse_formula("forall1 a. a.stime < a.rtime")));
    EXPECT_FALSE(check_model(Model(fig1_history()), parse_formula("exists1 a. rb(a,a)")));
}

TEST(Evaluator, RealTimeTruthTable) {
    const auto rt = parse_formula("forall1 a. forall1 b. rb(a,b) => ar(a,b)");
    EXPECT_TRUE(check_model(Model(two_ops(true)), rt));
    EXPECT_FALSE(check_model(Model(two_ops(false)), rt));
}

TEST(Evaluator, ErrorsOnMisuse) {
    const auto h = fig1_history();
    EXPECT_THROW(check_model(Model(h), parse_formula("forall1 a. forall1 b. ar(a,b) | ar(b,a) | a.stime = b.stime")),
                 EvaluationError);
    EXPECT_THROW(check_model(Model(h), f::rb("a", "b")), Error);  // not closed
    EXPECT_THROW(eval(Model(h), Assignment{}, f::rb("a", "b")), EvaluationError);
}

TEST(Evaluator, SetQuantifierCap) {
    GeneratorConfig cfg;
    cfg.num_ops = 6;
    const auto h = gen_history(cfg);
    EvalOptions small;
    small.max_ops_for_sets = 4;
    EXPECT_THROW(check_model(Model(h), parse_formula("exists2 S. forall1 a. a in S"), small), Error);
    EXPECT_TRUE(check_model(Model(h), parse_formula("exists2 S. forall1 a. a in S")));
}

TEST(Evaluator, CounterexampleNamesTheUniversalPrefix) {
    const auto rt = parse_formula("forall1 a. forall1 b. rb(a,b) => ar(a,b)");
    const auto x = two_ops(false);
    const auto cex = find_counterexample(Model(x), rt);
    ASSERT_TRUE(cex.has_value());
    EXPECT_EQ(cex->fo.at("a"), 0u);
    EXPECT_EQ(cex->fo.at("b"), 1u);
    EXPECT_FALSE(find_counterexample(Model(two_ops(true)), rt).has_value());
}

// Pushing a negation through the outer quantifier never changes the verdict.
TEST(Evaluator, QuantifierDualities) {
    const MetaParams meta{{"p1", "p2"}, {"x1"}, {"v1", "v2"}};
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        cmctest::HistFormulaGen gen(seed * 13, meta, true);
        const auto phi = gen(3);
        ASSERT_TRUE(phi->is_quantifier());
        const bool universal = phi->kind == Formula::Kind::forall_fo || phi->kind == Formula::Kind::forall_so;
        const auto dual = universal ? f::exists(phi->x, f::lnot(phi->left)) : f::forall(phi->x, f::lnot(phi->left));
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_ops = 1 + seed % 5;
        cfg.k = 0;
        const auto x = gen_exec(cfg);
        EXPECT_NE(check_model(Model(x), phi), check_model(Model(x), dual)) << to_string(phi);
        EXPECT_EQ(check_model(Model(x), phi), check_model(Model(x), to_primitive(phi))) << to_string(phi);
    }
}
