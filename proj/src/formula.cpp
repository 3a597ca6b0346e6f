#include "cmc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <utility>

#include "cmc/error.hpp"

namespace cmc {

AttrKind kind_of(Attr a) noexcept {
    switch (a) {
        case Attr::proc: return AttrKind::process;
        case Attr::obj: return AttrKind::object;
        case Attr::type: return AttrKind::type;
        case Attr::ival:
        case Attr::oval: return AttrKind::value;
        case Attr::stime:
        case Attr::rtime: return AttrKind::time;
    }
    return AttrKind::time;
}

std::string_view to_string(Attr a) noexcept {
    switch (a) {
        case Attr::proc: return "proc";
        case Attr::obj: return "obj";
        case Attr::type: return "type";
        case Attr::ival: return "ival";
        case Attr::oval: return "oval";
        case Attr::stime: return "stime";
        case Attr::rtime: return "rtime";
    }
    return "?";
}

bool is_fo_name(std::string_view name) noexcept {
    return !name.empty() && std::islower(static_cast<unsigned char>(name.front()));
}

bool is_so_name(std::string_view name) noexcept {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name.front()));
}

namespace {

using Kind = Formula::Kind;

void require_fo(const std::string& v) {
    if (!is_fo_name(v)) throw FormulaError("'" + v + "' is not a first-order variable name");
}

void require_so(const std::string& v) {
    if (!is_so_name(v)) throw FormulaError("'" + v + "' is not a set variable name");
}

FormulaPtr make(Formula node) { return std::make_shared<const Formula>(std::move(node)); }

FormulaPtr binary(Kind k, std::string x, std::string y) {
    require_fo(x);
    require_fo(y);
    Formula n{k};
    n.x = std::move(x);
    n.y = std::move(y);
    return make(std::move(n));
}

FormulaPtr unary_var(Kind k, std::string x) {
    require_fo(x);
    Formula n{k};
    n.x = std::move(x);
    return make(std::move(n));
}

FormulaPtr connective(Kind k, FormulaPtr a, FormulaPtr b) {
    if (!a || (k != Kind::not_ && !b)) throw FormulaError("null operand");
    Formula n{k};
    n.left = std::move(a);
    n.right = std::move(b);
    return make(std::move(n));
}

FormulaPtr quantifier(Kind k, std::string var, FormulaPtr body) {
    if (!body) throw FormulaError("null quantifier body");
    Formula n{k};
    n.x = std::move(var);
    n.left = std::move(body);
    return make(std::move(n));
}

}  // namespace

namespace f {

FormulaPtr attr_eq(std::string x, Attr a, std::string y, Attr b) {
    if (kind_of(a) != kind_of(b)) {
        throw FormulaError("ill-kinded comparison " + std::string(to_string(a)) + " = " + std::string(to_string(b)));
    }
    auto n = *binary(Kind::attr_eq, std::move(x), std::move(y));
    n.attr1 = a;
    n.attr2 = b;
    return make(std::move(n));
}

FormulaPtr time_lt(std::string x, Attr a, std::string y, Attr b) {
    if (kind_of(a) != AttrKind::time || kind_of(b) != AttrKind::time) {
        throw FormulaError("< compares time attributes only");
    }
    auto n = *binary(Kind::time_lt, std::move(x), std::move(y));
    n.attr1 = a;
    n.attr2 = b;
    return make(std::move(n));
}

FormulaPtr time_le(std::string x, Attr a, std::string y, Attr b) {
    if (kind_of(a) != AttrKind::time || kind_of(b) != AttrKind::time) {
        throw FormulaError("<= compares time attributes only");
    }
    auto n = *binary(Kind::time_le, std::move(x), std::move(y));
    n.attr1 = a;
    n.attr2 = b;
    return make(std::move(n));
}

FormulaPtr proc_is(std::string x, std::string process) {
    auto n = *unary_var(Kind::proc_is, std::move(x));
    n.literal = std::move(process);
    return make(std::move(n));
}

FormulaPtr ival_empty(std::string x) { return unary_var(Kind::ival_empty, std::move(x)); }
FormulaPtr oval_empty(std::string x) { return unary_var(Kind::oval_empty, std::move(x)); }
FormulaPtr oval_undef(std::string x) { return unary_var(Kind::oval_undef, std::move(x)); }

FormulaPtr type_is(std::string x, OpType t) {
    auto n = *unary_var(Kind::type_is, std::move(x));
    n.op_type = t;
    return make(std::move(n));
}

FormulaPtr obj_is(std::string x, std::string object) {
    auto n = *unary_var(Kind::obj_is, std::move(x));
    n.literal = std::move(object);
    return make(std::move(n));
}

FormulaPtr val_eq(std::string x, Attr a, std::string value) {
    if (a != Attr::ival && a != Attr::oval) throw FormulaError("value literal compared with non-value attribute");
    auto n = *unary_var(Kind::val_eq, std::move(x));
    n.attr1 = a;
    n.literal = std::move(value);
    return make(std::move(n));
}

FormulaPtr in_set(std::string x, std::string set) {
    require_so(set);
    auto n = *unary_var(Kind::in_set, std::move(x));
    n.set = std::move(set);
    return make(std::move(n));
}

FormulaPtr vis(std::string x, std::string y) { return binary(Kind::vis, std::move(x), std::move(y)); }
FormulaPtr ar(std::string x, std::string y) { return binary(Kind::ar, std::move(x), std::move(y)); }

FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return connective(Kind::or_, std::move(a), std::move(b)); }
FormulaPtr lnot(FormulaPtr a) { return connective(Kind::not_, std::move(a), nullptr); }
FormulaPtr land(FormulaPtr a, FormulaPtr b) { return connective(Kind::and_, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return connective(Kind::implies, std::move(a), std::move(b)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return connective(Kind::iff, std::move(a), std::move(b)); }

FormulaPtr forall(std::string var, FormulaPtr body) {
    if (is_so_name(var)) return quantifier(Kind::forall_so, std::move(var), std::move(body));
    require_fo(var);
    return quantifier(Kind::forall_fo, std::move(var), std::move(body));
}

FormulaPtr exists(std::string var, FormulaPtr body) {
    if (is_so_name(var)) return quantifier(Kind::exists_so, std::move(var), std::move(body));
    require_fo(var);
    return quantifier(Kind::exists_fo, std::move(var), std::move(body));
}

FormulaPtr forall_in(std::string var, std::string set, FormulaPtr body) {
    auto guard = in_set(var, std::move(set));
    return forall(std::move(var), implies(std::move(guard), std::move(body)));
}

FormulaPtr exists_in(std::string var, std::string set, FormulaPtr body) {
    auto guard = in_set(var, std::move(set));
    return exists(std::move(var), land(std::move(guard), std::move(body)));
}

FormulaPtr rb(std::string x, std::string y) { return binary(Kind::rb, std::move(x), std::move(y)); }
FormulaPtr ss(std::string x, std::string y) { return binary(Kind::ss, std::move(x), std::move(y)); }
FormulaPtr so(std::string x, std::string y) { return binary(Kind::so, std::move(x), std::move(y)); }
FormulaPtr sorr(std::string x, std::string y) { return binary(Kind::sorr, std::move(x), std::move(y)); }

FormulaPtr succ_rb(std::string x, std::string y, std::string process) {
    auto n = *binary(Kind::succ_rb, std::move(x), std::move(y));
    n.literal = std::move(process);
    return make(std::move(n));
}

FormulaPtr ctxt(std::string member, std::string of) { return binary(Kind::ctxt, std::move(member), std::move(of)); }
FormulaPtr last_write(std::string ctxt_of, std::string value_of) {
    return binary(Kind::last_write, std::move(ctxt_of), std::move(value_of));
}

FormulaPtr finite(std::string var, FormulaPtr body) {
    require_fo(var);
    return quantifier(Kind::finite, std::move(var), std::move(body));
}

FormulaPtr truth() { return make(Formula{Kind::true_}); }
FormulaPtr falsity() { return make(Formula{Kind::false_}); }

}  // namespace f

namespace {

// Which node fields are variable occurrences.
bool uses_x(Kind k) {
    switch (k) {
        case Kind::or_:
        case Kind::not_:
        case Kind::and_:
        case Kind::implies:
        case Kind::iff:
        case Kind::true_:
        case Kind::false_: return false;
        default: return true;
    }
}

bool uses_y(Kind k) {
    switch (k) {
        case Kind::attr_eq:
        case Kind::time_lt:
        case Kind::vis:
        case Kind::ar:
        case Kind::rb:
        case Kind::ss:
        case Kind::so:
        case Kind::sorr:
        case Kind::succ_rb:
        case Kind::ctxt:
        case Kind::last_write:
        case Kind::time_le: return true;
        default: return false;
    }
}

bool binds(Kind k) { return k == Kind::forall_fo || k == Kind::forall_so || k == Kind::exists_fo ||
                            k == Kind::exists_so || k == Kind::finite; }

void collect_free(const FormulaPtr& phi, std::set<std::string>& bound_fo, std::set<std::string>& bound_so,
                  FreeVars& out) {
    const auto& n = *phi;
    if (binds(n.kind)) {
        auto& scope = is_so_name(n.x) ? bound_so : bound_fo;
        const bool fresh = scope.insert(n.x).second;
        collect_free(n.left, bound_fo, bound_so, out);
        if (fresh) scope.erase(n.x);
        return;
    }
    if (uses_x(n.kind) && !bound_fo.count(n.x)) out.fo.insert(n.x);
    if (uses_y(n.kind) && !bound_fo.count(n.y)) out.fo.insert(n.y);
    if (n.kind == Kind::in_set && !bound_so.count(n.set)) out.so.insert(n.set);
    if (n.left) collect_free(n.left, bound_fo, bound_so, out);
    if (n.right) collect_free(n.right, bound_fo, bound_so, out);
}

class Fresh {
public:
    explicit Fresh(std::set<std::string> used) : used_(std::move(used)) {}

    std::string fo(std::string_view hint = "v") { return next(std::string(hint)); }
    std::string so(std::string_view hint = "S") { return next(std::string(hint)); }

private:
    std::string next(const std::string& stem) {
        for (;;) {
            std::string name = stem + std::to_string(++counter_);
            if (used_.insert(name).second) return name;
        }
    }

    std::set<std::string> used_;
    std::size_t counter_ = 0;
};

FormulaPtr rebuild(const Formula& n, FormulaPtr left, FormulaPtr right) {
    Formula copy = n;
    copy.left = std::move(left);
    copy.right = std::move(right);
    return make(std::move(copy));
}

FormulaPtr expand(const FormulaPtr& phi, Fresh& fresh) {
    using namespace f;
    const auto& n = *phi;
    switch (n.kind) {
        case Kind::rb: return time_lt(n.x, Attr::rtime, n.y, Attr::stime);
        case Kind::ss: return attr_eq(n.x, Attr::proc, n.y, Attr::proc);
        case Kind::so:
            return land(attr_eq(n.x, Attr::proc, n.y, Attr::proc), time_lt(n.x, Attr::rtime, n.y, Attr::stime));
        case Kind::sorr:
            return land(land(type_is(n.x, OpType::read), type_is(n.y, OpType::read)),
                        land(attr_eq(n.x, Attr::proc, n.y, Attr::proc), time_lt(n.x, Attr::rtime, n.y, Attr::stime)));
        case Kind::succ_rb: {
            // b.proc = p ∧ a →rb b ∧ ¬∃c. c ≈ss b ∧ a →rb c ∧ c →rb b
            const auto c = fresh.fo("c");
            auto between = land(attr_eq(c, Attr::proc, n.y, Attr::proc),
                                land(time_lt(n.x, Attr::rtime, c, Attr::stime), time_lt(c, Attr::rtime, n.y, Attr::stime)));
            return land(land(proc_is(n.y, n.literal), time_lt(n.x, Attr::rtime, n.y, Attr::stime)),
                        lnot(exists(c, between)));
        }
        case Kind::ctxt:
            return land(vis(n.x, n.y), land(type_is(n.x, OpType::write), attr_eq(n.x, Attr::obj, n.y, Attr::obj)));
        case Kind::last_write: {
            // ∀b. (b ∈ ctxt(a) ∧ b.ival ≠ v.oval) ⇒ ∃c ∈ ctxt(a). b →ar c
            const auto b = fresh.fo("b");
            const auto c = fresh.fo("c");
            auto in_ctxt = [&](const std::string& m) {
                return land(vis(m, n.x), land(type_is(m, OpType::write), attr_eq(m, Attr::obj, n.x, Attr::obj)));
            };
            auto lhs = land(in_ctxt(b), lnot(attr_eq(b, Attr::ival, n.y, Attr::oval)));
            return forall(b, implies(lhs, exists(c, land(in_ctxt(c), ar(b, c)))));
        }
        case Kind::time_le:
            return lor(time_lt(n.x, n.attr1, n.y, n.attr2), attr_eq(n.x, n.attr1, n.y, n.attr2));
        case Kind::finite: {
            // (¬∃a.ψ) ∨ ∃a.(ψ ∧ ∀b.(ψ[b/a] ⇒ b.stime ≤ a.stime))
            auto body = expand(n.left, fresh);
            const auto b = fresh.fo("b");
            auto le = lor(time_lt(b, Attr::stime, n.x, Attr::stime), attr_eq(b, Attr::stime, n.x, Attr::stime));
            auto max = forall(b, implies(rename_free(body, n.x, b), le));
            return lor(lnot(exists(n.x, body)), exists(n.x, land(body, max)));
        }
        case Kind::true_: {
            const auto a = fresh.fo("t");
            return forall(a, attr_eq(a, Attr::stime, a, Attr::stime));
        }
        case Kind::false_: {
            const auto a = fresh.fo("t");
            return lnot(forall(a, attr_eq(a, Attr::stime, a, Attr::stime)));
        }
        default: break;
    }
    if (n.is_atom()) return phi;
    auto l = n.left ? expand(n.left, fresh) : nullptr;
    auto r = n.right ? expand(n.right, fresh) : nullptr;
    if (l == n.left && r == n.right) return phi;
    return rebuild(n, std::move(l), std::move(r));
}

FormulaPtr primitive(const FormulaPtr& phi) {
    using namespace f;
    const auto& n = *phi;
    if (n.is_atom()) return phi;
    auto l = n.left ? primitive(n.left) : nullptr;
    auto r = n.right ? primitive(n.right) : nullptr;
    switch (n.kind) {
        case Kind::and_: return lnot(lor(lnot(l), lnot(r)));
        case Kind::implies: return lor(lnot(l), r);
        case Kind::iff: {
            auto ab = lor(lnot(l), r);
            auto ba = lor(lnot(r), l);
            return lnot(lor(lnot(ab), lnot(ba)));
        }
        case Kind::exists_fo:
        case Kind::exists_so: return lnot(forall(n.x, lnot(l)));
        default: break;
    }
    if (l == n.left && r == n.right) return phi;
    return rebuild(n, std::move(l), std::move(r));
}

FormulaPtr rename_bound(const FormulaPtr& phi, Fresh& fresh, std::vector<std::pair<std::string, std::string>>& env) {
    const auto& n = *phi;
    auto lookup = [&](const std::string& v) {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            if (it->first == v) return it->second;
        }
        return v;
    };
    Formula copy = n;
    if (binds(n.kind)) {
        const auto renamed = is_so_name(n.x) ? fresh.so(std::string(1, n.x.front())) : fresh.fo(std::string(1, n.x.front()));
        env.emplace_back(n.x, renamed);
        copy.x = renamed;
        copy.left = rename_bound(n.left, fresh, env);
        env.pop_back();
        return make(std::move(copy));
    }
    if (uses_x(n.kind)) copy.x = lookup(n.x);
    if (uses_y(n.kind)) copy.y = lookup(n.y);
    if (n.kind == Kind::in_set) copy.set = lookup(n.set);
    if (n.left) copy.left = rename_bound(n.left, fresh, env);
    if (n.right) copy.right = rename_bound(n.right, fresh, env);
    return make(std::move(copy));
}

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b, std::vector<std::pair<std::string, std::string>>& env) {
    const auto& x = *a;
    const auto& y = *b;
    if (x.kind != y.kind) return false;
    auto same = [&](const std::string& u, const std::string& v) {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            if (it->first == u || it->second == v) return it->first == u && it->second == v;
        }
        return u == v;
    };
    if (binds(x.kind)) {
        if (is_so_name(x.x) != is_so_name(y.x)) return false;
        env.emplace_back(x.x, y.x);
        const bool ok = alpha_eq(x.left, y.left, env);
        env.pop_back();
        return ok;
    }
    if (uses_x(x.kind) && !same(x.x, y.x)) return false;
    if (uses_y(x.kind) && !same(x.y, y.y)) return false;
    if (x.kind == Kind::in_set && !same(x.set, y.set)) return false;
    if (x.attr1 != y.attr1 && (x.kind == Kind::attr_eq || x.kind == Kind::time_lt || x.kind == Kind::time_le ||
                               x.kind == Kind::val_eq)) {
        return false;
    }
    if (x.attr2 != y.attr2 && (x.kind == Kind::attr_eq || x.kind == Kind::time_lt || x.kind == Kind::time_le)) {
        return false;
    }
    if (x.kind == Kind::type_is && x.op_type != y.op_type) return false;
    if (x.literal != y.literal) return false;
    if (static_cast<bool>(x.left) != static_cast<bool>(y.left)) return false;
    if (static_cast<bool>(x.right) != static_cast<bool>(y.right)) return false;
    if (x.left && !alpha_eq(x.left, y.left, env)) return false;
    if (x.right && !alpha_eq(x.right, y.right, env)) return false;
    return true;
}

FormulaPtr rename_free_rec(const FormulaPtr& phi, const std::string& from, const std::string& to) {
    const auto& n = *phi;
    if (binds(n.kind)) {
        if (n.x == from) return phi;
        if (n.x == to) throw FormulaError("rename target '" + to + "' is bound inside the formula");
        auto body = rename_free_rec(n.left, from, to);
        if (body == n.left) return phi;
        return rebuild(n, std::move(body), nullptr);
    }
    Formula copy = n;
    bool changed = false;
    if (uses_x(n.kind) && n.x == from) {
        copy.x = to;
        changed = true;
    }
    if (uses_y(n.kind) && n.y == from) {
        copy.y = to;
        changed = true;
    }
    if (n.left) {
        copy.left = rename_free_rec(n.left, from, to);
        changed |= copy.left != n.left;
    }
    if (n.right) {
        copy.right = rename_free_rec(n.right, from, to);
        changed |= copy.right != n.right;
    }
    return changed ? make(std::move(copy)) : phi;
}

void collect_names(const FormulaPtr& phi, std::set<std::string>& out) {
    const auto& n = *phi;
    if (uses_x(n.kind)) out.insert(n.x);
    if (uses_y(n.kind)) out.insert(n.y);
    if (n.kind == Kind::in_set) out.insert(n.set);
    if (n.left) collect_names(n.left, out);
    if (n.right) collect_names(n.right, out);
}

bool any_node(const FormulaPtr& phi, const std::function<bool(const Formula&)>& pred) {
    if (pred(*phi)) return true;
    if (phi->left && any_node(phi->left, pred)) return true;
    return phi->right && any_node(phi->right, pred);
}

std::string value_literal(const std::string& v) { return v; }

void print(const FormulaPtr& phi, std::string& out) {
    const auto& n = *phi;
    auto attr = [](const std::string& v, Attr a) { return v + "." + std::string(to_string(a)); };
    auto call = [&](const char* name) { out += std::string(name) + "(" + n.x + "," + n.y + ")"; };
    switch (n.kind) {
        case Kind::attr_eq: out += attr(n.x, n.attr1) + " = " + attr(n.y, n.attr2); return;
        case Kind::time_lt: out += attr(n.x, n.attr1) + " < " + attr(n.y, n.attr2); return;
        case Kind::time_le: out += attr(n.x, n.attr1) + " <= " + attr(n.y, n.attr2); return;
        case Kind::proc_is: out += n.x + ".proc = " + n.literal; return;
        case Kind::ival_empty: out += n.x + ".ival = _"; return;
        case Kind::oval_empty: out += n.x + ".oval = _"; return;
        case Kind::oval_undef: out += n.x + ".oval = undef"; return;
        case Kind::type_is: out += n.x + ".type = " + std::string(to_string(n.op_type)); return;
        case Kind::obj_is: out += n.x + ".obj = " + n.literal; return;
        case Kind::val_eq: out += attr(n.x, n.attr1) + " = " + value_literal(n.literal); return;
        case Kind::in_set: out += n.x + " in " + n.set; return;
        case Kind::vis: call("vis"); return;
        case Kind::ar: call("ar"); return;
        case Kind::rb: call("rb"); return;
        case Kind::ss: call("ss"); return;
        case Kind::so: call("so"); return;
        case Kind::sorr: call("sorr"); return;
        case Kind::ctxt: call("ctxt"); return;
        case Kind::last_write: call("lastwrite"); return;
        case Kind::succ_rb: out += "succ(" + n.x + "," + n.y + "," + n.literal + ")"; return;
        case Kind::true_: out += "true"; return;
        case Kind::false_: out += "false"; return;
        case Kind::finite:
            out += "finite{" + n.x + " | ";
            print(n.left, out);
            out += "}";
            return;
        case Kind::not_:
            out += "~";
            if (n.left->is_atom() || n.left->is_macro() || n.left->kind == Kind::not_) {
                print(n.left, out);
            } else {
                out += "(";
                print(n.left, out);
                out += ")";
            }
            return;
        case Kind::or_:
        case Kind::and_:
        case Kind::implies:
        case Kind::iff: {
            const char* op = n.kind == Kind::or_ ? " | " : n.kind == Kind::and_ ? " & " : n.kind == Kind::implies ? " => " : " <=> ";
            out += "(";
            print(n.left, out);
            out += op;
            print(n.right, out);
            out += ")";
            return;
        }
        case Kind::forall_fo:
        case Kind::forall_so:
        case Kind::exists_fo:
        case Kind::exists_so: {
            const bool so = n.kind == Kind::forall_so || n.kind == Kind::exists_so;
            const bool all = n.kind == Kind::forall_fo || n.kind == Kind::forall_so;
            out += "(";
            out += all ? "forall" : "exists";
            out += so ? "2 " : "1 ";
            out += n.x + ". ";
            print(n.left, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

FreeVars free_variables(const FormulaPtr& phi) {
    FreeVars out;
    std::set<std::string> bound_fo, bound_so;
    collect_free(phi, bound_fo, bound_so, out);
    return out;
}

std::set<std::string> all_variable_names(const FormulaPtr& phi) {
    std::set<std::string> out;
    collect_names(phi, out);
    return out;
}

bool uses_exec_relations(const FormulaPtr& phi) {
    return any_node(phi, [](const Formula& n) {
        return n.kind == Kind::vis || n.kind == Kind::ar || n.kind == Kind::ctxt || n.kind == Kind::last_write;
    });
}

bool contains_macros(const FormulaPtr& phi) {
    return any_node(phi, [](const Formula& n) { return n.is_macro(); });
}

FormulaPtr expand_macros(const FormulaPtr& phi) {
    Fresh fresh(all_variable_names(phi));
    return expand(phi, fresh);
}

FormulaPtr to_primitive(const FormulaPtr& phi) { return primitive(expand_macros(phi)); }

FormulaPtr alpha_normalize(const FormulaPtr& phi) {
    Fresh fresh(all_variable_names(phi));
    std::vector<std::pair<std::string, std::string>> env;
    return rename_bound(phi, fresh, env);
}

bool alpha_equivalent(const FormulaPtr& a, const FormulaPtr& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alpha_eq(a, b, env);
}

FormulaPtr rename_free(const FormulaPtr& phi, const std::string& from, const std::string& to) {
    require_fo(from);
    require_fo(to);
    return rename_free_rec(phi, from, to);
}

std::size_t quantifier_depth(const FormulaPtr& phi) {
    const auto& n = *phi;
    std::size_t d = 0;
    if (n.left) d = std::max(d, quantifier_depth(n.left));
    if (n.right) d = std::max(d, quantifier_depth(n.right));
    return d + (binds(n.kind) ? 1 : 0);
}

std::string to_string(const FormulaPtr& phi) {
    std::string out;
    print(phi, out);
    return out;
}

}  // namespace cmc
