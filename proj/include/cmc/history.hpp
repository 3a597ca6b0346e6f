#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/timestamp.hpp"

namespace cmc {

enum class OpType : std::uint8_t { read, write };

std::string_view to_string(OpType t) noexcept;

// A value slot of an operation: a member of the value universe, the
// distinguished "no value" symbol, or the "never returned a value" symbol.
struct Value {
    enum class Kind : std::uint8_t { value, empty, undef };

    Kind kind = Kind::empty;
    std::string name;  // only meaningful for Kind::value

    static Value empty() { return {Kind::empty, {}}; }
    static Value undef() { return {Kind::undef, {}}; }
    static Value of(std::string v) { return {Kind::value, std::move(v)}; }

    bool is_empty() const noexcept { return kind == Kind::empty; }
    bool is_undef() const noexcept { return kind == Kind::undef; }
    bool is_value() const noexcept { return kind == Kind::value; }

    friend bool operator==(const Value&, const Value&) = default;
};

// The finite universes a history lives over. Processes are enumerated in
// the given order; that order fixes lane numbering in word encodings.
struct MetaParams {
    std::vector<std::string> processes;
    std::vector<std::string> objects;
    std::vector<std::string> values;

    std::optional<std::size_t> process_index(std::string_view p) const;
    std::optional<std::size_t> object_index(std::string_view o) const;
    std::optional<std::size_t> value_index(std::string_view v) const;

    // Human-readable invariant breaches; empty when well formed.
    std::vector<std::string> problems() const;

    friend bool operator==(const MetaParams&, const MetaParams&) = default;
};

struct Operation {
    std::string id;
    std::string proc;
    Timestamp stime;
    Timestamp rtime;
    OpType type = OpType::read;
    std::string obj;
    Value ival;
    Value oval;

    friend bool operator==(const Operation&, const Operation&) = default;
};

struct History {
    MetaParams meta;
    std::vector<Operation> ops;

    std::size_t size() const noexcept { return ops.size(); }
    std::optional<std::size_t> find(std::string_view id) const;
    // Throws cmc::Error for unknown ids.
    std::size_t index_of(std::string_view id) const;
    std::size_t proc_index(std::size_t op) const;

    // Operation indices sorted by start time.
    std::vector<std::size_t> ord() const;

    friend bool operator==(const History&, const History&) = default;
};

// Dense boolean relation over operation indices.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool contains(std::size_t a, std::size_t b) const { return bits_[a * n_ + b] != 0; }
    void insert(std::size_t a, std::size_t b) { bits_[a * n_ + b] = 1; }
    void erase(std::size_t a, std::size_t b) { bits_[a * n_ + b] = 0; }
    void set(std::size_t a, std::size_t b, bool v) { bits_[a * n_ + b] = v ? 1 : 0; }
    std::size_t count() const;

    Relation transitive_closure() const;
    bool is_acyclic() const;
    bool is_strict_total_order() const;

    friend bool operator==(const Relation&, const Relation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> bits_;
};

// A history enriched with visibility and arbitration. Relations are indexed
// by positions in history.ops.
struct AbstractExecution {
    History history;
    Relation vis;
    Relation ar;

    friend bool operator==(const AbstractExecution&, const AbstractExecution&) = default;
};

struct Violation {
    std::string invariant;
    std::vector<std::string> ops;

    std::string message() const;
};

std::vector<Violation> validate_history(const History& h);

// ar strict total order, vis acyclic and, when real_time is set, rb ⊆ ar and
// rb(a,b) ⇒ ¬vis(b,a). History violations are included.
std::vector<Violation> validate_execution(const AbstractExecution& x, bool real_time);

// Returns-before: a.rtime < b.stime.
bool rb(const History& h, std::size_t a, std::size_t b);
bool rb(const History& h, std::string_view a, std::string_view b);

bool same_session(const History& h, std::size_t a, std::size_t b);
bool same_session(const History& h, std::string_view a, std::string_view b);

// Per-process returns-before.
bool session_order(const History& h, std::size_t a, std::size_t b);
bool session_order(const History& h, std::string_view a, std::string_view b);

// First operation on process p that starts after a returns.
std::optional<std::size_t> direct_successor_on(const History& h, std::size_t a, std::size_t p);
std::optional<std::string> direct_successor_on(const History& h, std::string_view a, std::string_view p);

// Direct successors over all processes, in ord order. At most |P| entries.
std::vector<std::size_t> succs(const History& h, std::size_t a);
std::vector<std::string> succs(const History& h, std::string_view a);

// The successive operations b0, b1, ... of process p that start after a returns.
std::vector<std::size_t> successors_on(const History& h, std::size_t a, std::size_t p);

// rb as a dense relation.
Relation rb_relation(const History& h);

}  // namespace cmc
