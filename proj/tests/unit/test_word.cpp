#include <gtest/gtest.h>

#include "cmc/error.hpp"
#include "cmc/generators.hpp"
#include "cmc/word.hpp"
#include "oracles.hpp"

using namespace cmc;
using cmctest::fig1_history;
using cmctest::make_op;

namespace {

std::string row(const Bits& b, std::size_t from, std::size_t width) {
    std::string s;
    for (std::size_t i = from; i < from + width; ++i) s += b[i] ? '1' : '0';
    return s;
}

}  // namespace

TEST(BitLayout, GroupWidths) {
    const MetaParams meta{{"p1", "p2", "p3"}, {"x", "y", "z"}, {"v1", "v2"}};
    const BitLayout h(meta, EncodingMode::history);
    EXPECT_EQ(h.group("active").width, 3u);
    EXPECT_EQ(h.group("type").width, 1u);
    EXPECT_EQ(h.group("val").width, 2u);  // two values, EMPTY and UNDEF
    EXPECT_EQ(h.group("obj").width, 2u);
    EXPECT_EQ(h.width(), 8u);
    EXPECT_EQ(h.empty_code(), 2u);
    EXPECT_EQ(h.undef_code(), 3u);

    const BitLayout x(meta, EncodingMode::exec, 2);
    EXPECT_EQ(x.group("arc").width, 2u);
    EXPECT_EQ(x.group("visc").width, 4u);
    EXPECT_EQ(x.group("visrb").width, 6u);
    EXPECT_EQ(x.width(), 8u + 2 + 4 + 6);
    EXPECT_THROW(BitLayout(meta, EncodingMode::exec, -1), ValidationError);
}

TEST(BitLayout, SingleObjectNeedsNoObjectLanes) {
    const BitLayout l(MetaParams{{"p1"}, {"x"}, {"v"}}, EncodingMode::history);
    EXPECT_EQ(l.group("obj").width, 0u);
    EXPECT_EQ(l.group("val").width, 2u);  // 1 value + EMPTY needs 2 codes, UNDEF needs a third
}

TEST(Encode, TimelineOfTheRunningExample) {
    const auto w = encode_timeline(fig1_history());
    ASSERT_EQ(w.letters.size(), 13u);
    EXPECT_EQ(row(w.letters[0], 0, 3), "000");
    EXPECT_EQ(row(w.letters[2], 0, 3), "110");
    EXPECT_EQ(row(w.letters[10], 0, 3), "110");
    EXPECT_EQ(row(w.letters[12], 0, 3), "000");
    ASSERT_TRUE(w.events[1].has_value());
    EXPECT_EQ(w.events[1]->op, "a");
    EXPECT_TRUE(w.events[1]->start);
    EXPECT_FALSE(w.events[0].has_value());
}

TEST(Encode, HistoryLanesExtendTheTimeline) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 3;
        cfg.num_ops = seed % 8;
        const auto h = gen_history(cfg);
        const auto t = encode_timeline(h);
        const auto full = encode(h);
        ASSERT_EQ(t.letters.size(), full.letters.size());
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
            EXPECT_EQ(row(full.letters[i], 0, 3), row(t.letters[i], 0, 3));
        }
    }
}

TEST(Encode, ValueLanesAtStartAndReturn) {
    History h;
    h.meta = {{"p1"}, {"x"}, {"v1", "v2"}};
    h.ops = {make_op("w", "p1", 1, 2, OpType::write, "x", "v2", "undef"),
             make_op("r", "p1", 3, 4, OpType::read, "x", "_", "v1")};
    const auto w = encode(h);
    const auto& L = w.layout;
    EXPECT_EQ(read_group(L, w.letters[1], "val"), 1u);             // write input v2
    EXPECT_EQ(read_group(L, w.letters[2], "val"), L.undef_code());  // its output
    EXPECT_EQ(read_group(L, w.letters[3], "val"), 0u);             // read output v1, known at start
    EXPECT_EQ(read_group(L, w.letters[3], "type"), 0u);
    EXPECT_EQ(read_group(L, w.letters[1], "type"), 1u);
}

TEST(Encode, RejectsInvalidHistories) {
    History h;
    h.meta = {{"p1"}, {"x"}, {"v"}};
    h.ops = {make_op("a", "p1", 1, 4, OpType::write, "x", "v", "_"),
             make_op("b", "p1", 2, 3, OpType::write, "x", "v", "_")};
    EXPECT_THROW(encode(h), ValidationError);
}

TEST(Decode, RoundTripsHistories) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 1 + seed % 4;
        cfg.num_ops = seed % 9;
        cfg.num_objects = 1 + seed % 3;
        const auto h = gen_history(cfg);
        EXPECT_EQ(decode_history(encode(h)), canonical_form(h)) << "seed " << seed;
    }
}

TEST(Decode, RoundTripsExecutions) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.num_procs = 1 + seed % 3;
        cfg.num_ops = seed % 7;
        cfg.k = static_cast<int>(seed % 3);
        const auto x = gen_exec(cfg);
        const auto back = decode_exec(encode_exec(x, cfg.k));
        const auto want = canonical_form(x);
        EXPECT_EQ(back.history, want.history);
        EXPECT_EQ(back.ar, want.ar);
        EXPECT_EQ(back.vis, want.vis);
    }
}

TEST(Decode, RejectsTwoSimultaneousFlips) {
    History h;
    h.meta = {{"p1", "p2"}, {"x"}, {"v"}};
    h.ops = {make_op("a", "p1", 1, 3, OpType::write, "x", "v", "_"),
             make_op("b", "p2", 2, 4, OpType::write, "x", "v", "_")};
    auto w = encode(h);
    w.events.clear();
    // Merge the two starts into one letter.
    w.letters.erase(w.letters.begin() + 1);
    EXPECT_THROW(decode_history(w), EncodingError);

    auto bad_first = encode(h);
    bad_first.letters[0][0] = 1;
    EXPECT_THROW(decode_history(bad_first), EncodingError);
}

TEST(EncodeExec, ChecksTransience) {
    AbstractExecution x;
    x.history.meta = {{"p1", "p2"}, {"x"}, {"v"}};
    x.history.ops = {make_op("a", "p1", 1, 2, OpType::write, "x", "v", "_"),
                     make_op("b", "p2", 3, 4, OpType::read, "x", "_", "v"),
                     make_op("c", "p2", 5, 6, OpType::read, "x", "_", "v")};
    x.ar = Relation(3);
    x.ar.insert(0, 1);
    x.ar.insert(0, 2);
    x.ar.insert(1, 2);
    x.vis = Relation(3);
    x.vis.insert(0, 2);  // c sees a but b does not
    EXPECT_THROW(encode_exec(x, 0), EncodingError);
    EXPECT_THROW(encode_exec(x, 1), EncodingError);  // vis(a,b) must equal vis(a,c) from index 0 on
    EXPECT_NO_THROW(encode_exec(x, 2));
    EXPECT_TRUE(transience_violation(x, 1).has_value());
    EXPECT_FALSE(transience_violation(x, 2).has_value());
    EXPECT_THROW(encode_exec(x, -1), EncodingError);

    x.vis.insert(0, 1);
    EXPECT_THROW(encode_exec(x, 0), EncodingError);  // c must also see b
    x.vis.insert(1, 2);
    EXPECT_NO_THROW(encode_exec(x, 0));
}

TEST(EncodeExec, RejectsArAgainstReturnsBefore) {
    AbstractExecution x;
    x.history.meta = {{"p1"}, {"x"}, {"v"}};
    x.history.ops = {make_op("a", "p1", 1, 2, OpType::write, "x", "v", "_"),
                     make_op("b", "p1", 3, 4, OpType::write, "x", "v", "_")};
    x.ar = Relation(2);
    x.ar.insert(1, 0);
    x.vis = Relation(2);
    x.vis.insert(0, 1);
    EXPECT_THROW(encode_exec(x, 0), EncodingError);
}

TEST(WordText, RoundTrip) {
    GeneratorConfig cfg;
    cfg.seed = 9;
    cfg.num_ops = 5;
    cfg.k = 1;
    const auto w = encode_exec(gen_exec(cfg), 1);
    const auto text = serialize(w);
    EXPECT_EQ(parse_word(text), w);
    EXPECT_THROW(parse_word("nonsense"), ParseError);
}
