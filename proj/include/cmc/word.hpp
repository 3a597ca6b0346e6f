#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmc/history.hpp"

namespace cmc {

// timeline: active lanes only; history: plus attribute lanes; exec: plus
// arbitration and visibility lanes.
enum class EncodingMode : std::uint8_t { timeline, history, exec };

struct LaneGroup {
    std::string name;
    std::size_t offset = 0;
    std::size_t width = 0;

    friend bool operator==(const LaneGroup&, const LaneGroup&) = default;
};

// Bit positions of every lane of an encoding letter. Groups, in order (a
// mode includes a prefix of them):
//   active  one per process
//   type    0 = read, 1 = write
//   val     value code, MSB first
//   obj     object index, MSB first (zero bits when there is one object)
//   arc     exec only; one slot per other process
//   visc    exec only; an "out" and an "in" bit per other process
//   visrb   exec only; k slots per process
//
// Value codes: i < |V| is the i-th value, |V| is EMPTY and the all-ones
// code is UNDEF; the remaining codes are invalid.
class BitLayout {
public:
    BitLayout() = default;
    // Throws ValidationError when meta is malformed or k < 0 in exec mode.
    BitLayout(const MetaParams& meta, EncodingMode mode, int k = 0);

    EncodingMode mode() const noexcept { return mode_; }
    std::size_t processes() const noexcept { return m_; }
    std::size_t num_values() const noexcept { return num_values_; }
    std::size_t num_objects() const noexcept { return num_objects_; }
    int k() const noexcept { return k_; }
    std::size_t width() const noexcept { return width_; }
    const std::vector<LaneGroup>& groups() const noexcept { return groups_; }
    const LaneGroup& group(std::string_view name) const;

    std::size_t active(std::size_t proc) const;
    std::size_t type() const;
    std::size_t val(std::size_t bit) const;
    std::size_t obj(std::size_t bit) const;
    // Slot of process j as seen from an operation on process i (j != i).
    static std::size_t slot(std::size_t i, std::size_t j) { return j < i ? j : j - 1; }
    std::size_t arc(std::size_t slot) const;
    // Set when the starting operation is visible to the concurrent one.
    std::size_t visc_out(std::size_t slot) const;
    // Set when the concurrent operation is visible to the starting one.
    std::size_t visc_in(std::size_t slot) const;
    std::size_t visrb(std::size_t proc, std::size_t idx) const;

    std::uint32_t empty_code() const noexcept { return static_cast<std::uint32_t>(num_values_); }
    std::uint32_t undef_code() const noexcept { return (1U << group("val").width) - 1U; }

    // Name of the lane at a bit index, such as "active1" or "val0".
    std::string lane_name(std::size_t bit) const;

    friend bool operator==(const BitLayout&, const BitLayout&) = default;

private:
    void add(std::string name, std::size_t width);

    EncodingMode mode_ = EncodingMode::history;
    std::size_t m_ = 0;
    std::size_t num_values_ = 0;
    std::size_t num_objects_ = 0;
    int k_ = 0;
    std::size_t width_ = 0;
    std::vector<LaneGroup> groups_;
};

using Bits = std::vector<std::uint8_t>;

struct WordEvent {
    std::string op;  // operation id
    bool start = true;

    friend bool operator==(const WordEvent&, const WordEvent&) = default;
};

struct WordModel {
    MetaParams meta;
    BitLayout layout;
    std::vector<Bits> letters;
    // Same length as letters; empty at position 0 and in words that did not
    // come from an encoder (e.g. solver witnesses).
    std::vector<std::optional<WordEvent>> events;

    friend bool operator==(const WordModel&, const WordModel&) = default;
};

// Code stored in the value lane for a value slot.
std::uint32_t value_code(const BitLayout& layout, const MetaParams& meta, const Value& v);
std::uint32_t read_group(const BitLayout& layout, const Bits& letter, std::string_view group);

// Throws ValidationError for invalid histories.
WordModel encode_timeline(const History& h);
WordModel encode(const History& h);

// k-transience: for each a and process p with successive operations
// b0, b1, ... starting after a returns, vis(a, bi) equals vis(a, b_{k-1})
// for every i >= k. With k = 0 every bi must see a.
std::optional<std::string> transience_violation(const AbstractExecution& x, int k);

// Throws EncodingError when x is not real-time or not k-transient, or k < 0.
WordModel encode_exec(const AbstractExecution& x, int k);

// Inverse of the encoders. Timestamps become position indices; ids come
// from the event annotations when present, otherwise o1, o2, ... in start
// order. Throws EncodingError for any word outside the image of the
// encoder (the same set of words the well-formedness formula accepts).
std::variant<History, AbstractExecution> decode(const WordModel& w);
History decode_history(const WordModel& w);
AbstractExecution decode_exec(const WordModel& w);

// Operations sorted by start time, timestamps replaced by their rank in the
// sorted list of all 2n timestamps (starting at 1).
History canonical_form(const History& h);
AbstractExecution canonical_form(const AbstractExecution& x);

// Text form: header lines, a lane line, then one row per position with
// groups separated by '|' and an optional "; <id> start|return" tail.
std::string serialize(const WordModel& w);
WordModel parse_word(std::string_view text);

}  // namespace cmc
