#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmc/formula.hpp"
#include "cmc/word.hpp"
#include "cmc/ws1s.hpp"

namespace cmc {

// Everything the translation needs to know about the word alphabet: one
// set variable per bit lane, named "L" + lane name (e.g. "Lactive0").
// Variables of the logic of histories map to word variables "h_" + name;
// helper variables introduced by the translation are named "t<N>".
class TranslationContext {
public:
    TranslationContext(const MetaParams& meta, EncodingMode mode = EncodingMode::history, int k = 0);

    const MetaParams& meta() const noexcept { return meta_; }
    const BitLayout& layout() const noexcept { return layout_; }
    EncodingMode mode() const noexcept { return layout_.mode(); }

    const std::string& lane(std::size_t bit) const { return lanes_.at(bit); }
    // Lane variables in bit order; this is the track order of every
    // automaton compiled from a translated formula.
    const std::vector<std::string>& lanes() const noexcept { return lanes_; }

    static std::string word_var(const std::string& name) { return "h_" + name; }

private:
    MetaParams meta_;
    BitLayout layout_;
    std::vector<std::string> lanes_;
};

// Macros are expanded first. Throws FormulaError for vis/ar atoms outside
// exec mode.
ws1s::WPtr translate(const FormulaPtr& phi, const TranslationContext& ctx);

// Satisfied by exactly the words the encoder can produce for this layout.
ws1s::WPtr is_encoding(const TranslationContext& ctx);

// The letter-local part of is_encoding: null first letter, one lane flip
// per step, idle last letter and, in exec mode, exec lanes only at starts.
// Every encoding satisfies it, so it is a sound compile restriction for
// questions about encodings only.
ws1s::WPtr encoding_shape(const TranslationContext& ctx);

struct Definition {
    std::string name;
    std::vector<std::string> params;
    ws1s::WPtr body;
};

// isStart, isReturn, procOf_<p>, rtimeOf, rb, ss, so and, in exec mode,
// arc, visc, visrb, ar, vis. Throws FormulaError when an exec relation is
// requested in history mode (see derived_relation).
std::vector<Definition> derived_relations(const TranslationContext& ctx);
Definition derived_relation(const TranslationContext& ctx, const std::string& name);

// Self-contained MONA input: ws1s header, lane and free-variable
// declarations, a bound `wlast` on every lane, and the formula relativized
// to positions <= wlast.
std::string emit_mona(const ws1s::WPtr& phi, const TranslationContext& ctx, const std::string& title = {});

// Satisfied only by the letters of this word (lane tracks only).
ws1s::WPtr spells_word(const TranslationContext& ctx, const WordModel& word);

// accepts(compile(translate(phi)), w). phi must be closed and w must use
// the context's layout. Unless opts carries a restriction, compilation is
// restricted to spells_word(w): the lanes are pinned to the word, as when
// a model checker is handed the lane sets as constants, and only the
// quantified variables stay open.
bool holds_on_word(const FormulaPtr& phi, const WordModel& w, const ws1s::CompileOptions& opts = {});

// Shortest word satisfying is_encoding ∧ translate(phi), decoded.
std::optional<WordModel> find_model_word(const FormulaPtr& phi, const TranslationContext& ctx,
                                         const ws1s::CompileOptions& opts = {});

// Turns a solver witness over ctx.lanes() into a word model.
WordModel word_from_letters(const TranslationContext& ctx, const ws1s::Word& letters);

}  // namespace cmc
