#include <gtest/gtest.h>

#include "cmc/error.hpp"
#include "cmc/generators.hpp"
#include "cmc/history.hpp"
#include "oracles.hpp"

using namespace cmc;
using cmctest::fig1_history;
using cmctest::make_op;

namespace {

bool has_invariant(const std::vector<Violation>& v, const std::string& needle) {
    for (const auto& e : v) {
        if (e.invariant.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(Timestamp, ParsesIntegersDecimalsAndFractions) {
    EXPECT_EQ(Timestamp::parse("12"), Timestamp(12));
    EXPECT_EQ(Timestamp::parse("15.5"), Timestamp(31, 2));
    EXPECT_EQ(Timestamp::parse("31/2"), Timestamp(31, 2));
    EXPECT_EQ(Timestamp(62, 4).to_string(), "31/2");
    EXPECT_LT(Timestamp(31, 2), Timestamp(16));
    EXPECT_THROW(Timestamp::parse("abc"), Error);
    EXPECT_THROW(Timestamp::parse("1/0"), Error);
}

TEST(Timestamp, PrintedFormParsesBack) {
    for (auto t : {Timestamp(0), Timestamp(7), Timestamp(1, 3), Timestamp(22, 7)}) {
        EXPECT_EQ(Timestamp::parse(t.to_string()), t);
    }
}

TEST(ValidateHistory, RunningExampleIsLegal) { EXPECT_TRUE(validate_history(fig1_history()).empty()); }

TEST(ValidateHistory, FlagsEmptyInterval) {
    auto h = fig1_history();
    h.ops[0].rtime = h.ops[0].stime;
    EXPECT_TRUE(has_invariant(validate_history(h), "stime < rtime"));
}

TEST(ValidateHistory, FlagsSharedTimestamp) {
    auto h = fig1_history();
    h.ops[3].stime = Timestamp(5);  // d starts when a returns
    EXPECT_TRUE(has_invariant(validate_history(h), "distinct"));
}

TEST(ValidateHistory, FlagsStartAtZeroOverlapAndUnknownNames) {
    History h;
    h.meta = {{"p1"}, {"x"}, {"v"}};
    h.ops = {make_op("a", "p1", 0, 3, OpType::write, "x", "v", "_"), make_op("b", "p1", 1, 2, OpType::read, "x", "_", "v"),
             make_op("c", "p9", 4, 5, OpType::read, "y", "_", "w")};
    const auto v = validate_history(h);
    EXPECT_TRUE(has_invariant(v, "stime > 0"));
    EXPECT_TRUE(has_invariant(v, "disjoint"));
    EXPECT_GE(v.size(), 4u);
}

TEST(ValidateHistory, FlagsReadWithInputValue) {
    History h;
    h.meta = {{"p1"}, {"x"}, {"v"}};
    h.ops = {make_op("a", "p1", 1, 2, OpType::read, "x", "v", "v")};
    EXPECT_FALSE(validate_history(h).empty());
}

TEST(ValidateHistory, EmptyHistoryNeedsNoUniverse) {
    EXPECT_TRUE(validate_history(History{}).empty());
}

TEST(ReturnsBefore, RunningExample) {
    const auto h = fig1_history();
    EXPECT_TRUE(rb(h, "a", "f"));
    EXPECT_TRUE(rb(h, "d", "f"));
    EXPECT_FALSE(rb(h, "b", "e"));
    EXPECT_FALSE(rb(h, "a", "a"));
}

TEST(Sessions, RunningExample) {
    const auto h = fig1_history();
    EXPECT_TRUE(same_session(h, "a", "b"));
    EXPECT_TRUE(same_session(h, "a", "a"));
    EXPECT_FALSE(same_session(h, "a", "d"));
    EXPECT_TRUE(session_order(h, "a", "b"));
    EXPECT_FALSE(session_order(h, "a", "a"));
    EXPECT_FALSE(session_order(h, "a", "d"));
}

TEST(Successors, RunningExample) {
    const auto h = fig1_history();
    EXPECT_EQ(direct_successor_on(h, "a", "p3"), std::optional<std::string>("f"));
    EXPECT_EQ(direct_successor_on(h, "c", "p1"), std::nullopt);
    EXPECT_EQ(direct_successor_on(h, "a", "p2"), std::optional<std::string>("e"));
    const auto s = succs(h, "a");
    EXPECT_EQ(std::set<std::string>(s.begin(), s.end()), (std::set<std::string>{"b", "e", "f"}));
    EXPECT_TRUE(succs(h, "c").empty());
}

TEST(Successors, SingleProcessChain) {
    History h;
    h.meta = {{"p1"}, {"x"}, {"v"}};
    h.ops = {make_op("a", "p1", 1, 2, OpType::write, "x", "v", "_"), make_op("b", "p1", 3, 4, OpType::read, "x", "_", "v"),
             make_op("c", "p1", 5, 6, OpType::read, "x", "_", "v")};
    EXPECT_EQ(succs(h, "a"), (std::vector<std::string>{"b"}));
}

TEST(Relations, ClosureAcyclicityAndTotality) {
    Relation r(3);
    r.insert(0, 1);
    r.insert(1, 2);
    EXPECT_TRUE(r.is_acyclic());
    EXPECT_FALSE(r.is_strict_total_order());
    const auto c = r.transitive_closure();
    EXPECT_TRUE(c.contains(0, 2));
    EXPECT_TRUE(c.is_strict_total_order());
    r.insert(2, 0);
    EXPECT_FALSE(r.is_acyclic());
}

// Returns-before is a strict partial order, successor sets are bounded by
// the process count, and rb holds exactly when a chain of direct successors
// on the target's process leads there.
TEST(ReturnsBefore, PropertiesOnRandomHistories) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 1 + seed % 3;
        cfg.num_ops = seed % 9;
        const auto h = gen_history(cfg);
        const auto n = h.size();
        for (std::size_t a = 0; a < n; ++a) {
            EXPECT_FALSE(rb(h, a, a));
            EXPECT_LE(succs(h, a).size(), h.meta.processes.size());
            for (std::size_t b = 0; b < n; ++b) {
                EXPECT_EQ(rb(h, a, b), cmctest::oracle_rb(h, a, b));
                if (session_order(h, a, b)) EXPECT_TRUE(rb(h, a, b));
                for (std::size_t c = 0; c < n; ++c) {
                    if (rb(h, a, b) && rb(h, b, c)) EXPECT_TRUE(rb(h, a, c));
                }
                // Chain of direct successors towards b's process.
                const auto p = h.proc_index(b);
                bool reach = false;
                auto cur = direct_successor_on(h, a, p);
                while (cur && !reach) {
                    reach = *cur == b;
                    cur = direct_successor_on(h, *cur, p);
                }
                EXPECT_EQ(reach, rb(h, a, b)) << "seed " << seed;
            }
        }
    }
}

TEST(Validation, ExecutionInvariants) {
    AbstractExecution x;
    x.history = fig1_history();
    const auto n = x.history.size();
    x.vis = Relation(n);
    x.ar = Relation(n);
    EXPECT_FALSE(validate_execution(x, false).empty());  // ar not total
    const auto ord = x.history.ord();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) x.ar.insert(ord[i], ord[j]);
    }
    EXPECT_TRUE(validate_execution(x, true).empty());
    const auto a = *x.history.find("a");
    const auto f = *x.history.find("f");
    x.vis.insert(a, f);  // a returns before f starts
    EXPECT_TRUE(validate_execution(x, true).empty());
    x.vis.insert(f, a);  // contradicts returns-before and closes a cycle
    EXPECT_FALSE(validate_execution(x, true).empty());
}
