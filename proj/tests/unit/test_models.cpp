#include <gtest/gtest.h>

#include "cmc/error.hpp"
#include "cmc/generators.hpp"
#include "cmc/models.hpp"
#include "cmc/trace_io.hpp"
#include "oracles.hpp"

using namespace cmc;
using cmctest::make_op;

namespace {

// w(x,v1) then r(x) on one process, vis = ar = returns-before.
AbstractExecution register_run(const std::string& read_value) {
    AbstractExecution x;
    x.history.meta = {{"p1"}, {"x"}, {"v1", "v2"}};
    x.history.ops = {make_op("w", "p1", 1, 2, OpType::write, "x", "v1", "_"),
                     make_op("r", "p1", 3, 4, OpType::read, "x", "_", read_value)};
    x.vis = Relation(2);
    x.vis.insert(0, 1);
    x.ar = x.vis;
    return x;
}

bool holds(const Trace& t, const std::string& model, Engine e = Engine::direct, int k = 0) {
    CheckOptions o;
    o.engine = e;
    o.k = k;
    return check_trace(t, find_model(model), o).holds;
}

}  // namespace

TEST(Catalog, DefinitionsAreClosedAndFlagged) {
    std::vector<std::string> names;
    for (const auto& m : builtin_models()) {
        names.push_back(m.name);
        EXPECT_TRUE(free_variables(m.formula).closed()) << m.name;
        EXPECT_EQ(m.requires_exec, uses_exec_relations(m.formula)) << m.name;
    }
    const std::vector<std::string> want{"RVal", "RealTime", "SingleOrder", "Linearizability", "QuiescentConsistency",
                                        "MonotonicReads", "ReadYourWrites"};
    EXPECT_EQ(names, want);
    EXPECT_THROW(find_model("Nope"), Error);
}

TEST(Catalog, LinearizabilityIsTheConjunction) {
    const auto& lin = find_model("Linearizability").formula;
    const auto want = f::land(f::land(find_model("SingleOrder").formula, find_model("RealTime").formula),
                              find_model("RVal").formula);
    EXPECT_TRUE(alpha_equivalent(expand_macros(lin), expand_macros(want))) << to_string(lin);
}

TEST(Catalog, SequentialRegister) {
    EXPECT_TRUE(holds(register_run("v1"), "RVal"));
    EXPECT_FALSE(holds(register_run("v2"), "RVal"));
    EXPECT_TRUE(holds(register_run("v1"), "Linearizability"));
    EXPECT_TRUE(holds(register_run("v1"), "RVal", Engine::automata));
    EXPECT_FALSE(holds(register_run("v2"), "RVal", Engine::automata));
}

TEST(Catalog, EmptyExecutionSatisfiesUniversalModels) {
    AbstractExecution x;
    x.history.meta = {{"p1"}, {"x"}, {"v1"}};
    for (const char* m : {"RVal", "RealTime", "MonotonicReads", "ReadYourWrites", "SingleOrder"}) {
        EXPECT_TRUE(holds(x, m)) << m;
    }
    // Finitely many writes but no read at all: the conclusion needs a read.
    EXPECT_FALSE(holds(x, "QuiescentConsistency"));
}

TEST(CheckTrace, Errors) {
    EXPECT_THROW(holds(register_run("v1").history, "RealTime"), Error);
    auto x = register_run("v1");
    x.vis = Relation(2);  // r does not see w: not 0-transient
    EXPECT_THROW(holds(x, "RVal", Engine::automata, 0), EncodingError);
    EXPECT_NO_THROW(holds(x, "RVal", Engine::automata, 1));
}

TEST(CheckTrace, WitnessNamesOperations) {
    CheckOptions o;
    const auto v = check_trace(register_run("v2"), find_model("RVal"), o);
    ASSERT_FALSE(v.holds);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_NE(v.witness_text.find("r"), std::string::npos);
}

TEST(Manifest, FixturesMatchExpectations) {
    const std::string dir = CMC_FIXTURE_DIR;
    const auto entries = parse_manifest(read_file(dir + "/manifest.txt"));
    ASSERT_GE(entries.size(), 10u);
    for (const auto& e : entries) {
        const auto trace = parse_trace(read_file(dir + "/" + e.file));
        const auto engine = e.engine == "automata" ? Engine::automata : Engine::direct;
        EXPECT_EQ(holds(trace, e.model, engine, e.k), e.holds) << e.file << " " << e.model << " " << e.engine;
    }
}

TEST(ModelFile, DefinitionsAndReferences) {
    const auto defs = load_model_file(R"(
        # strengthened real time
        Rt := @RealTime ;
        Both := @Rt & @RVal ;
        Reads := forall1 a. a.type = read ;
    )");
    ASSERT_EQ(defs.size(), 3u);
    EXPECT_TRUE(defs[0].requires_exec);
    EXPECT_FALSE(defs[2].requires_exec);
    EXPECT_EQ(find_model("Both", defs).name, "Both");
    EXPECT_TRUE(check_trace(register_run("v1"), find_model("Both", defs)).holds);
    EXPECT_FALSE(check_trace(register_run("v2"), find_model("Both", defs)).holds);
    EXPECT_THROW(load_model_file("X := @Missing ;"), Error);
    EXPECT_THROW(load_model_file("X := forall1 a. ;"), Error);
}

TEST(ImplicationSearch, LinearizabilityImpliesRealTime) {
    SearchBounds b;
    b.values = 1;
    const auto r = implication_search(find_model("Linearizability"), find_model("RealTime"), b);
    EXPECT_FALSE(r.counterexample.has_value());
}

TEST(ImplicationSearch, ReadYourWritesDoesNotGiveMonotonicReads) {
    SearchBounds b;
    const auto r = implication_search(find_model("ReadYourWrites"), find_model("MonotonicReads"), b);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_TRUE(r.confirmed);
    const auto& x = std::get<AbstractExecution>(*r.counterexample);
    EXPECT_TRUE(check_model(Model(x), find_model("ReadYourWrites").formula));
    EXPECT_FALSE(check_model(Model(x), find_model("MonotonicReads").formula));
}

TEST(ImplicationSearch, EnumerationEngineAgrees) {
    SearchBounds b;
    b.max_ops = 3;
    const auto r = implication_search(find_model("ReadYourWrites"), find_model("MonotonicReads"), b, Engine::direct);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_TRUE(r.confirmed);
    EXPECT_GT(r.explored, 0u);
    const auto none = implication_search(find_model("Linearizability"), find_model("RVal"), b, Engine::direct);
    EXPECT_FALSE(none.counterexample.has_value());
}

// Both engines give the same verdict on random transient executions.
TEST(Engines, AgreeOnRandomExecutions) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_ops = 2 + seed % 3;
        cfg.k = static_cast<int>(seed % 2);
        cfg.undef_prob = 0;
        const auto x = gen_exec(cfg);
        for (const char* m : {"RVal", "RealTime", "MonotonicReads", "ReadYourWrites"}) {
            EXPECT_EQ(holds(x, m), holds(x, m, Engine::automata, cfg.k)) << m << " seed " << seed;
        }
    }
}
