#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmc/evaluator.hpp"
#include "cmc/formula.hpp"
#include "cmc/trace_io.hpp"
#include "cmc/ws1s.hpp"

namespace cmc {

struct ModelDef {
    std::string name;
    FormulaPtr formula;  // closed
    bool requires_exec = false;
    std::string notes;
};

// RVal, RealTime, SingleOrder, Linearizability, QuiescentConsistency,
// MonotonicReads, ReadYourWrites.
const std::vector<ModelDef>& builtin_models();

// Shared sub-formulas of the catalog as text, e.g. "W", "R",
// "FiniteInconsistency".
const std::vector<std::pair<std::string, std::string>>& catalog_macros();

// Model files hold definitions "NAME := formula ;". A formula may refer to
// earlier definitions and to the builtins by writing @NAME. '#' comments.
std::vector<ModelDef> load_model_file(std::string_view text);

// Looks up extra first, then the builtins. Throws Error for unknown names.
const ModelDef& find_model(std::string_view name, const std::vector<ModelDef>& extra = {});

enum class Engine { direct, automata };

struct CheckOptions {
    Engine engine = Engine::direct;
    int k = 0;  // transience bound for the automata engine on executions
    ws1s::CompileOptions compile;
    EvalOptions eval;
};

struct Verdict {
    bool holds = true;
    // Direct engine: falsifying assignment of the outermost universal prefix.
    std::optional<Assignment> witness;
    std::string witness_text;
};

// Throws Error when an exec model meets a bare history, EncodingError when
// the automata engine meets a non real-time or non k-transient execution,
// and CapExceeded when the automaton outgrows its cap.
Verdict check_trace(const Trace& trace, const ModelDef& model, const CheckOptions& opts = {});

struct SearchBounds {
    std::size_t processes = 2;
    std::size_t objects = 1;
    std::size_t values = 1;
    int k = 0;                // automata engine, exec models
    std::size_t max_ops = 4;  // enumeration engine
    // Enumeration engine: executions are real-time and, when k >= 0,
    // k-transient. Throws CapExceeded past max_candidates traces.
    std::size_t max_candidates = 5'000'000;
};

struct SearchResult {
    std::optional<Trace> counterexample;  // satisfies m1 and violates m2
    bool confirmed = false;               // evaluator agrees on the counterexample
    std::size_t explored = 0;             // enumeration engine only
};

// Looks for a trace satisfying m1 ∧ ¬m2. The automata engine decides it
// for every length over the bounded universe (and, for exec models, the
// given k); the enumeration engine tries every trace with up to max_ops
// operations. Histories are used when neither model needs vis/ar.
SearchResult implication_search(const ModelDef& m1, const ModelDef& m2, const SearchBounds& bounds,
                                Engine engine = Engine::automata, const CheckOptions& opts = {});

MetaParams search_universe(const SearchBounds& bounds);

}  // namespace cmc
