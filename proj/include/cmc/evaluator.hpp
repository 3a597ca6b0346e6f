#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cmc/formula.hpp"
#include "cmc/history.hpp"

namespace cmc {

// A read-only view over either a bare history or an abstract execution.
class Model {
public:
    Model(const History& h) : history_(&h) {}  // NOLINT(google-explicit-constructor)
    Model(const AbstractExecution& x)          // NOLINT(google-explicit-constructor)
        : history_(&x.history), vis_(&x.vis), ar_(&x.ar) {}

    const History& history() const noexcept { return *history_; }
    bool has_relations() const noexcept { return vis_ != nullptr; }
    const Relation& vis() const { return *vis_; }
    const Relation& ar() const { return *ar_; }

private:
    const History* history_;
    const Relation* vis_ = nullptr;
    const Relation* ar_ = nullptr;
};

struct Assignment {
    std::map<std::string, std::size_t> fo;       // variable -> operation index
    std::map<std::string, std::uint64_t> so;     // variable -> bitmask over operation indices

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct EvalOptions {
    // Second-order quantifiers enumerate all 2^n subsets; refuse beyond this.
    std::size_t max_ops_for_sets = 16;
};

// Tarskian truth value. Macros are interpreted directly through the
// history-level relations, not through their expansion.
bool eval(const Model& model, const Assignment& env, const FormulaPtr& phi, const EvalOptions& opts = {});

// phi must be closed.
bool check_model(const Model& model, const FormulaPtr& phi, const EvalOptions& opts = {});

// For a closed phi of the form ∀x1...∀xn. ψ (FO or SO prefix, possibly
// empty), returns an assignment of the prefix under which ψ is false, or
// nothing when phi holds.
std::optional<Assignment> find_counterexample(const Model& model, const FormulaPtr& phi,
                                              const EvalOptions& opts = {});

std::string describe(const Model& model, const Assignment& a);

}  // namespace cmc
