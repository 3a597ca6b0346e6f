#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmc::ws1s {

// Monadic second-order logic over finite words. First-order variables
// denote positions of the word, set variables denote sets of positions; a
// model with free variables v1..vn is a word over {0,1}^n whose j-th track
// marks the positions of vj.
struct WordFormula;
using WPtr = std::shared_ptr<const WordFormula>;

struct WordFormula {
    enum class Kind : std::uint8_t {
        true_,
        false_,
        less,      // x < y
        less_eq,   // x <= y
        equal,     // x = y
        succ,      // y = x + 1
        first,     // x = 0
        last,      // x is the last position
        in,        // x in X
        not_,
        and_,
        or_,
        implies,
        iff,
        exists1,
        exists2,
        forall1,
        forall2,
    };

    Kind kind;
    std::string x;
    std::string y;    // second FO variable, or the set of `in`
    WPtr left;
    WPtr right;
};

namespace w {

WPtr truth();
WPtr falsity();
WPtr lt(std::string x, std::string y);
WPtr le(std::string x, std::string y);
WPtr eq(std::string x, std::string y);
WPtr succ(std::string x, std::string y);  // y = x + 1
WPtr first(std::string x);
WPtr last(std::string x);
WPtr in(std::string x, std::string set);
WPtr neg(WPtr a);
WPtr conj(WPtr a, WPtr b);
WPtr disj(WPtr a, WPtr b);
WPtr implies(WPtr a, WPtr b);
WPtr iff(WPtr a, WPtr b);
WPtr ex1(std::string x, WPtr body);
WPtr ex2(std::string x, WPtr body);
WPtr all1(std::string x, WPtr body);
WPtr all2(std::string x, WPtr body);
WPtr conj_all(const std::vector<WPtr>& parts);  // true when empty
WPtr disj_all(const std::vector<WPtr>& parts);  // false when empty

}  // namespace w

struct WordFreeVars {
    std::set<std::string> fo;
    std::set<std::string> so;
};

// Throws cmc::FormulaError when a name is used both as a position and a set.
WordFreeVars free_variables(const WPtr& phi);

std::size_t node_count(const WPtr& phi);

// MONA concrete syntax. When `last_var` is non-empty every quantifier is
// relativized to positions <= last_var, which makes ws1s semantics agree
// with the finite-word semantics of this engine, and last(x) prints as
// x = last_var.
std::string to_mona(const WPtr& phi, const std::string& last_var = {});

// A letter assigns one bit to each track; a word is a sequence of letters.
using Letter = std::vector<std::uint8_t>;
using Word = std::vector<Letter>;

struct CompileOptions {
    // Upper bound on the state count of any intermediate automaton.
    std::size_t max_states = 1'000'000;
    // Optional formula over set tracks of var_order that are never bound
    // inside phi. Every intermediate automaton is intersected with it, so
    // the result accepts L(phi) ∩ L(restriction). Words outside the
    // restriction then share one rejecting sink, which keeps automata small
    // when only those words matter.
    WPtr restriction;
};

// Deterministic complete automaton over {0,1}^tracks. Transitions are stored
// per state as a reduced ordered decision diagram over track indices.
class Automaton {
public:
    struct Node {
        std::uint32_t var;  // kLeaf for terminals
        std::uint32_t lo;   // state id when terminal
        std::uint32_t hi;
    };
    static constexpr std::uint32_t kLeaf = 0xFFFFFFFFu;

    Automaton() = default;
    Automaton(std::vector<std::string> tracks, std::vector<Node> nodes, std::vector<std::uint32_t> roots,
              std::vector<std::uint8_t> accepting, std::uint32_t initial);

    const std::vector<std::string>& tracks() const noexcept { return tracks_; }
    std::size_t num_states() const noexcept { return roots_.size(); }
    std::size_t initial() const noexcept { return initial_; }
    bool is_accepting(std::size_t s) const { return accepting_.at(s) != 0; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    std::size_t step(std::size_t state, const Letter& letter) const;
    // Throws cmc::Error on track-count mismatch.
    bool accepts(const Word& word) const;

    // Shortest accepted word, length-lexicographically smallest (letters
    // compared track by track, 0 < 1). Nothing when the language is empty.
    std::optional<Word> shortest_accepted() const;

    // Deterministic textual listing: tracks, states, initial, accepting and
    // per-state transitions as don't-care patterns over the tracks.
    std::string dump() const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<std::uint32_t>& roots() const noexcept { return roots_; }

private:
    std::vector<std::string> tracks_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> roots_;
    std::vector<std::uint8_t> accepting_;
    std::uint32_t initial_ = 0;
};

// Free variables of phi must all appear in var_order; the i-th track of
// the result is var_order[i]. Tracks of free first-order variables must
// mark exactly one position; tracks not free in phi are unconstrained. Throws cmc::CapExceeded when an intermediate
// automaton exceeds opts.max_states.
Automaton compile(const WPtr& phi, const std::vector<std::string>& var_order, const CompileOptions& opts = {});

struct SatResult {
    bool satisfiable = false;
    std::vector<std::string> tracks;  // sorted free variables
    std::optional<Word> witness;
};

SatResult is_satisfiable(const WPtr& phi, const CompileOptions& opts = {});
// Valid iff the negation is unsatisfiable.
bool is_valid(const WPtr& phi, const CompileOptions& opts = {});

bool accepts(const Automaton& a, const Word& word);
bool accepts(const WPtr& phi, const std::vector<std::string>& tracks, const Word& word,
             const CompileOptions& opts = {});

}  // namespace cmc::ws1s
