#include <gtest/gtest.h>

#include "cmc/error.hpp"
#include "cmc/generators.hpp"
#include "cmc/trace_io.hpp"
#include "cmc/word.hpp"
#include "oracles.hpp"

using namespace cmc;

namespace {

std::string fixture(const std::string& name) { return read_file(std::string(CMC_FIXTURE_DIR) + "/" + name); }

std::size_t error_line(const std::string& text) {
    try {
        parse_trace(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

// Every rb pair is ordered by ar: ar extends returns-before.
bool extends_rb(const AbstractExecution& x) {
    for (std::size_t a = 0; a < x.history.size(); ++a) {
        for (std::size_t b = 0; b < x.history.size(); ++b) {
            if (cmctest::oracle_rb(x.history, a, b) && !x.ar.contains(a, b)) return false;
        }
    }
    return true;
}

}  // namespace

TEST(TraceText, Fixture) {
    const auto t = parse_trace(fixture("fig1.trace"));
    ASSERT_TRUE(std::holds_alternative<AbstractExecution>(t));
    const auto& x = std::get<AbstractExecution>(t);
    EXPECT_EQ(x.history.size(), 6u);
    EXPECT_EQ(x.history.ops[2].stime, Timestamp(31, 2));
    EXPECT_TRUE(x.ar.is_strict_total_order());
    EXPECT_EQ(x.vis, x.ar);
    EXPECT_EQ(history_of(t).meta.processes.size(), 3u);
}

TEST(TraceText, EmptyTraceIsAHistory) {
    const auto t = parse_trace(fixture("empty.trace"));
    ASSERT_TRUE(std::holds_alternative<History>(t));
    EXPECT_EQ(history_of(t).size(), 0u);
}

TEST(TraceText, ValidationListsProblems) {
    try {
        parse_trace(fixture("invalid_overlap.trace"));
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("process intervals disjoint"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(parse_trace_unchecked(fixture("invalid_overlap.trace")));
}

TEST(TraceText, SyntaxErrorsCarryLineNumbers) {
    const std::string head = "processes p1\nobjects x\nvalues v\n";
    EXPECT_EQ(error_line(head + "op a p1 1 2 write x ival=v\n"), 4u);
    EXPECT_EQ(error_line(head + "op a p1 1 2 write x ival=v oval=_\nvis a zz\n"), 5u);
    EXPECT_EQ(error_line(head + "# comment\nop a p1 x 2 write x ival=v oval=_\n"), 5u);
    EXPECT_EQ(error_line(head + "bogus line\n"), 4u);
    // Without headers the line parses but the trace is not valid.
    EXPECT_THROW(parse_trace("op a p1 1 2 write x ival=v oval=_\n"), ValidationError);
}

TEST(TraceText, RoundTripsGeneratedTraces) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 1 + seed % 3;
        cfg.num_ops = seed % 8;
        cfg.num_objects = 1 + seed % 2;
        const auto h = gen_history(cfg);
        EXPECT_EQ(std::get<History>(parse_trace(serialize_trace(h))), h);
        const auto x = gen_exec(cfg);
        const auto back = std::get<AbstractExecution>(parse_trace(serialize_trace(x)));
        EXPECT_EQ(back.history, x.history);
        EXPECT_EQ(back.ar, x.ar);
        EXPECT_EQ(back.vis, x.vis);
    }
}

TEST(TraceJson, RoundTripAndAutodetect) {
    const auto t = parse_trace(fixture("fig1.trace"));
    const auto json = trace_to_json(t);
    EXPECT_EQ(json.front(), '{');
    const auto back = trace_from_json(json);
    const auto& a = std::get<AbstractExecution>(t);
    const auto& b = std::get<AbstractExecution>(back);
    EXPECT_EQ(a.history, b.history);
    EXPECT_EQ(a.vis, b.vis);
    EXPECT_EQ(a.ar, b.ar);
    // parse_trace recognises JSON on its own.
    EXPECT_EQ(std::get<AbstractExecution>(parse_trace(json)).history, a.history);
    EXPECT_THROW(trace_from_json("{\"processes\": 3}"), Error);
}

TEST(Manifest, Parses) {
    const auto m = parse_manifest("# c\nf.trace RVal direct 0 holds\ng.trace MonotonicReads automata 1 violated\n");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[1].k, 1);
    EXPECT_FALSE(m[1].holds);
    EXPECT_EQ(m[1].engine, "automata");
    EXPECT_THROW(parse_manifest("f.trace RVal direct 0 maybe\n"), ParseError);
}

TEST(Generators, Deterministic) {
    GeneratorConfig cfg;
    cfg.seed = 42;
    cfg.num_ops = 7;
    EXPECT_EQ(gen_history(cfg), gen_history(cfg));
    const auto a = gen_exec(cfg);
    const auto b = gen_exec(cfg);
    EXPECT_EQ(a.ar, b.ar);
    EXPECT_EQ(a.vis, b.vis);
    cfg.seed = 43;
    EXPECT_FALSE(gen_history(cfg) == gen_history(GeneratorConfig{}));
}

TEST(Generators, ProduceValidTraces) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 1 + seed % 4;
        cfg.num_ops = seed % 10;
        cfg.k = static_cast<int>(seed % 4) - 1;
        const auto x = gen_exec(cfg);
        EXPECT_TRUE(validate_execution(x, true).empty()) << "seed " << seed;
        EXPECT_TRUE(extends_rb(x));
        if (cfg.k >= 0) EXPECT_FALSE(transience_violation(x, cfg.k).has_value()) << "seed " << seed;
    }
    GeneratorConfig bad;
    bad.num_procs = 0;
    EXPECT_THROW(check_config(bad), ValidationError);
}

TEST(Generators, EnumerationCounts) {
    // One process, one object, one value: a single operation is a write
    // (input v, output EMPTY or UNDEF) or a read (output v, EMPTY or UNDEF).
    const MetaParams meta{{"p1"}, {"x"}, {"v"}};
    EXPECT_EQ(enumerate_histories(meta, 0, [](const History&) { return true; }), 1u);
    EXPECT_EQ(enumerate_histories(meta, 1, [](const History&) { return true; }), 5u);
    History h;
    h.meta = meta;
    h.ops = {cmctest::make_op("a", "p1", 1, 2, OpType::write, "x", "v", "_"),
             cmctest::make_op("b", "p1", 3, 4, OpType::read, "x", "_", "v")};
    // ar is forced; vis(a,b) is free, vis(b,a) is forbidden.
    EXPECT_EQ(enumerate_executions(h, true, -1, [](const AbstractExecution&) { return true; }), 2u);
    EXPECT_EQ(enumerate_executions(h, true, 0, [](const AbstractExecution&) { return true; }), 1u);
}
