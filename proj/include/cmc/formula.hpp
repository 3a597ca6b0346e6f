#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/history.hpp"

namespace cmc {

enum class Attr : std::uint8_t { proc, obj, type, ival, oval, stime, rtime };
enum class AttrKind : std::uint8_t { process, object, type, value, time };

AttrKind kind_of(Attr a) noexcept;
std::string_view to_string(Attr a) noexcept;

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Node of the logic of histories. Core atoms and connectives come first;
// And/Implies/Iff/Exists* are the usual boolean and quantifier sugar; the
// remaining kinds are named macros removed by expand_macros.
struct Formula {
    enum class Kind : std::uint8_t {
        // atoms
        attr_eq,        // x.attr1 = y.attr2
        time_lt,        // x.attr1 < y.attr2, both time attributes
        proc_is,        // x.proc = literal
        ival_empty,     // x.ival = Φ
        oval_empty,     // x.oval = Φ
        oval_undef,     // x.oval = ∇
        type_is,        // x.type = op_type
        obj_is,         // x.obj = literal
        val_eq,         // x.attr1 = literal value (attr1 ∈ {ival, oval})
        in_set,         // x ∈ set
        vis,            // x →vis y
        ar,             // x →ar y
        // connectives
        or_,
        not_,
        forall_fo,
        forall_so,
        // sugar
        and_,
        implies,
        iff,
        exists_fo,
        exists_so,
        // macros
        rb,             // x.rtime < y.stime
        ss,             // x.proc = y.proc
        so,             // ss ∧ rb
        sorr,           // both reads ∧ so
        succ_rb,        // x ≻p_rb y, p = literal
        ctxt,           // x ∈ ctxt(y)
        last_write,     // y.oval = lastWrite(ctxt(x))
        finite,         // Finite({var | left})
        time_le,        // x.attr1 ≤ y.attr2
        true_,
        false_,
    };

    Kind kind;
    std::string x;        // first FO variable, or the bound variable of a quantifier/finite
    std::string y;        // second FO variable
    std::string set;      // SO variable of in_set
    Attr attr1 = Attr::stime;
    Attr attr2 = Attr::stime;
    OpType op_type = OpType::read;
    std::string literal;  // process, object or value literal
    FormulaPtr left;
    FormulaPtr right;

    bool is_atom() const noexcept { return kind <= Kind::ar; }
    bool is_macro() const noexcept { return kind >= Kind::rb; }
    bool is_quantifier() const noexcept {
        return kind == Kind::forall_fo || kind == Kind::forall_so || kind == Kind::exists_fo ||
               kind == Kind::exists_so;
    }
};

// Variable naming discipline: first-order names start lower-case, set
// names start upper-case. Builders enforce it.
bool is_fo_name(std::string_view name) noexcept;
bool is_so_name(std::string_view name) noexcept;

namespace f {

FormulaPtr attr_eq(std::string x, Attr a, std::string y, Attr b);
FormulaPtr time_lt(std::string x, Attr a, std::string y, Attr b);
FormulaPtr proc_is(std::string x, std::string process);
FormulaPtr ival_empty(std::string x);
FormulaPtr oval_empty(std::string x);
FormulaPtr oval_undef(std::string x);
FormulaPtr type_is(std::string x, OpType t);
FormulaPtr obj_is(std::string x, std::string object);
FormulaPtr val_eq(std::string x, Attr a, std::string value);
FormulaPtr in_set(std::string x, std::string set);
FormulaPtr vis(std::string x, std::string y);
FormulaPtr ar(std::string x, std::string y);

FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr lnot(FormulaPtr a);
FormulaPtr forall(std::string var, FormulaPtr body);  // FO or SO by name
FormulaPtr exists(std::string var, FormulaPtr body);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
// ∀x ∈ X. body  ≝ ∀x. x ∈ X ⇒ body
FormulaPtr forall_in(std::string var, std::string set, FormulaPtr body);
FormulaPtr exists_in(std::string var, std::string set, FormulaPtr body);

FormulaPtr rb(std::string x, std::string y);
FormulaPtr ss(std::string x, std::string y);
FormulaPtr so(std::string x, std::string y);
FormulaPtr sorr(std::string x, std::string y);
FormulaPtr succ_rb(std::string x, std::string y, std::string process);
FormulaPtr ctxt(std::string member, std::string of);
FormulaPtr last_write(std::string ctxt_of, std::string value_of);
FormulaPtr finite(std::string var, FormulaPtr body);
FormulaPtr time_le(std::string x, Attr a, std::string y, Attr b);
FormulaPtr truth();
FormulaPtr falsity();

}  // namespace f

struct FreeVars {
    std::set<std::string> fo;
    std::set<std::string> so;

    bool closed() const noexcept { return fo.empty() && so.empty(); }
    friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

FreeVars free_variables(const FormulaPtr& phi);

// Every variable name occurring anywhere, bound or free.
std::set<std::string> all_variable_names(const FormulaPtr& phi);

bool uses_exec_relations(const FormulaPtr& phi);
bool contains_macros(const FormulaPtr& phi);

// Rewrites every named macro into core atoms and connectives. Sugar
// connectives are kept. Fresh bound variables never collide with names
// already present in phi.
FormulaPtr expand_macros(const FormulaPtr& phi);

// Removes sugar too: only atoms, ∨, ¬, ∀ remain. Implies expand_macros.
FormulaPtr to_primitive(const FormulaPtr& phi);

// Renames every bound variable to a fresh, globally unique name so that no
// binder shadows another or a free variable.
FormulaPtr alpha_normalize(const FormulaPtr& phi);

bool alpha_equivalent(const FormulaPtr& a, const FormulaPtr& b);

// Replaces free occurrences of FO variable `from` by `to`. `to` must not be
// bound anywhere inside phi.
FormulaPtr rename_free(const FormulaPtr& phi, const std::string& from, const std::string& to);

std::size_t quantifier_depth(const FormulaPtr& phi);

// Textual syntax, see parse_formula. The printed text re-parses to an
// alpha-equivalent formula.
std::string to_string(const FormulaPtr& phi);

// Grammar (lowest to highest precedence):
//   φ ::= φ <=> φ | φ => φ | φ '|' φ | φ & φ | ~φ
//       | forall1 a. φ | exists1 a. φ | forall1 a in A. φ | exists1 a in A. φ
//       | forall2 A. φ | exists2 A. φ | ( φ ) | atom
//   atom ::= a.attr = b.attr | a.attr != b.attr | a.t < b.t | a.t <= b.t
//          | a.proc = p | a.obj = o | a.type = read|write
//          | a.ival = v|_ | a.oval = v|_|undef | a in A
//          | vis(a,b) | ar(a,b) | rb(a,b) | ss(a,b) | so(a,b) | sorr(a,b)
//          | succ(a,b,p) | ctxt(b,a) | lastwrite(a,b) | finite{a | φ}
//          | true | false
// Quantifier bodies extend as far right as possible.
FormulaPtr parse_formula(std::string_view text);

}  // namespace cmc
