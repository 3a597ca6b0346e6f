#include "cmc/translator.hpp"

#include <algorithm>

#include "cmc/error.hpp"

namespace cmc {

using ws1s::WPtr;
namespace w = ws1s::w;

TranslationContext::TranslationContext(const MetaParams& meta, EncodingMode mode, int k)
    : meta_(meta), layout_(meta, mode == EncodingMode::timeline ? EncodingMode::history : mode, k) {
    for (std::size_t b = 0; b < layout_.width(); ++b) lanes_.push_back("L" + layout_.lane_name(b));
}

namespace {

using Kind = Formula::Kind;

// Builds word formulas over the lane variables of one context. Every helper
// variable gets a fresh name, so no binder ever captures another.
class Builder {
public:
    explicit Builder(const TranslationContext& ctx) : ctx_(ctx), L_(ctx.layout()) {}

    std::string fresh() { return "t" + std::to_string(++counter_); }

    WPtr bit(const std::string& x, std::size_t b) { return w::in(x, ctx_.lane(b)); }

    WPtr group_is(const std::string& x, const std::string& group, std::uint32_t code) {
        const auto& g = L_.group(group);
        std::vector<WPtr> parts;
        for (std::size_t b = 0; b < g.width; ++b) {
            const bool one = (code >> (g.width - 1 - b)) & 1U;
            parts.push_back(one ? bit(x, g.offset + b) : w::neg(bit(x, g.offset + b)));
        }
        return w::conj_all(parts);
    }

    WPtr group_equal(const std::string& x, const std::string& y, const std::string& group) {
        const auto& g = L_.group(group);
        std::vector<WPtr> parts;
        for (std::size_t b = 0; b < g.width; ++b) parts.push_back(w::iff(bit(x, g.offset + b), bit(y, g.offset + b)));
        return w::conj_all(parts);
    }

    WPtr not_first(const std::string& x) { return w::neg(w::first(x)); }

    // Lane i flips from 0 to 1 at x.
    WPtr proc_is(const std::string& x, std::size_t i) {
        const auto p = fresh();
        return w::ex1(p, w::conj_all({w::succ(p, x), bit(x, L_.active(i)), w::neg(bit(p, L_.active(i)))}));
    }

    // x is the start of an operation: exactly one process lane changes
    // between x-1 and x, and it becomes 1.
    WPtr is_start(const std::string& x) {
        const auto p = fresh();
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) {
            std::vector<WPtr> parts{bit(x, L_.active(i)), w::neg(bit(p, L_.active(i)))};
            for (std::size_t j = 0; j < L_.processes(); ++j) {
                if (j != i) parts.push_back(w::iff(bit(x, L_.active(j)), bit(p, L_.active(j))));
            }
            cases.push_back(w::conj_all(parts));
        }
        return w::ex1(p, w::conj(w::succ(p, x), w::disj_all(cases)));
    }

    WPtr is_return(const std::string& x) {
        const auto p = fresh();
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) {
            std::vector<WPtr> parts{w::neg(bit(x, L_.active(i))), bit(p, L_.active(i))};
            for (std::size_t j = 0; j < L_.processes(); ++j) {
                if (j != i) parts.push_back(w::iff(bit(x, L_.active(j)), bit(p, L_.active(j))));
            }
            cases.push_back(w::conj_all(parts));
        }
        return w::ex1(p, w::conj(w::succ(p, x), w::disj_all(cases)));
    }

    // r is the first position after start x where x's process lane is 0.
    WPtr rtime_of(const std::string& x, const std::string& r) {
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) {
            const auto z = fresh();
            const auto lane = L_.active(i);
            cases.push_back(w::conj_all({proc_is(x, i), w::lt(x, r), w::neg(bit(r, lane)),
                                         w::all1(z, w::implies(w::conj(w::lt(x, z), w::lt(z, r)), bit(z, lane)))}));
        }
        return w::disj_all(cases);
    }

    // Operation starting at b is still running at position x > b.
    WPtr running_at(const std::string& b, const std::string& x) {
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) {
            const auto z = fresh();
            const auto lane = L_.active(i);
            cases.push_back(w::conj(proc_is(b, i), w::all1(z, w::implies(w::conj(w::lt(b, z), w::le(z, x)), bit(z, lane)))));
        }
        return w::conj(w::lt(b, x), w::disj_all(cases));
    }

    WPtr rb(const std::string& x, const std::string& y) {
        const auto r = fresh();
        return w::ex1(r, w::conj(rtime_of(x, r), w::lt(r, y)));
    }

    WPtr same_proc(const std::string& x, const std::string& y) {
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) cases.push_back(w::conj(proc_is(x, i), proc_is(y, i)));
        return w::disj_all(cases);
    }

    // Lane of group `which` for the pair (x on p_i, y on p_j) set at x.
    WPtr slot_bit(const std::string& x, const std::string& y, const std::string& which) {
        std::vector<WPtr> cases;
        const auto m = L_.processes();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                const auto s = BitLayout::slot(i, j);
                const auto lane = which == "arc" ? L_.arc(s) : which == "out" ? L_.visc_out(s) : L_.visc_in(s);
                cases.push_back(w::conj_all({proc_is(x, i), proc_is(y, j), bit(x, lane)}));
            }
        }
        return w::disj_all(cases);
    }

    // Arbitration between concurrent operations, read off the later start.
    WPtr arc(const std::string& x, const std::string& y) {
        return w::disj(w::conj(running_at(y, x), slot_bit(x, y, "arc")),
                       w::conj(running_at(x, y), w::neg(slot_bit(y, x, "arc"))));
    }

    WPtr visc(const std::string& x, const std::string& y) {
        return w::disj(w::conj(running_at(y, x), slot_bit(x, y, "out")), w::conj(running_at(x, y), slot_bit(y, x, "in")));
    }

    // Consecutive starts on process q.
    WPtr next_on(const std::string& u, const std::string& y, std::size_t q) {
        const auto c = fresh();
        return w::conj_all({w::lt(u, y), proc_is(y, q),
                            w::neg(w::ex1(c, w::conj_all({w::lt(u, c), w::lt(c, y), proc_is(c, q)})))});
    }

    // y is the idx-th start on q after x returns (counting from 0).
    WPtr nth_on(const std::string& x, const std::string& y, std::size_t q, std::size_t idx) {
        if (idx == 0) {
            const auto c = fresh();
            return w::conj_all({proc_is(y, q), rb(x, y),
                                w::neg(w::ex1(c, w::conj_all({w::lt(c, y), proc_is(c, q), rb(x, c)})))});
        }
        const auto u = fresh();
        return w::ex1(u, w::conj(nth_on(x, u, q, idx - 1), next_on(u, y, q)));
    }

    WPtr visrb(const std::string& x, const std::string& y) {
        const auto k = static_cast<std::size_t>(L_.k());
        if (k == 0) return rb(x, y);
        std::vector<WPtr> cases;
        for (std::size_t q = 0; q < L_.processes(); ++q) {
            for (std::size_t idx = 0; idx + 1 < k; ++idx) {
                cases.push_back(w::conj(nth_on(x, y, q, idx), bit(x, L_.visrb(q, idx))));
            }
            const auto u = fresh();
            cases.push_back(w::conj_all({bit(x, L_.visrb(q, k - 1)), proc_is(y, q),
                                         w::ex1(u, w::conj(nth_on(x, u, q, k - 1), w::le(u, y)))}));
        }
        return w::disj_all(cases);
    }

    WPtr ar(const std::string& x, const std::string& y) { return w::disj(rb(x, y), arc(x, y)); }
    WPtr vis(const std::string& x, const std::string& y) { return w::disj(visc(x, y), visrb(x, y)); }

    // Value slots of the operation starting at x.
    WPtr value_is(const std::string& x, Attr a, std::uint32_t code) {
        const auto type = bit(x, L_.type());
        if (a == Attr::ival) {
            if (code == L_.empty_code()) return w::neg(type);
            if (code == L_.undef_code()) return w::falsity();
            return w::conj(type, group_is(x, "val", code));
        }
        const auto r = fresh();
        return w::disj(w::conj(w::neg(type), group_is(x, "val", code)),
                       w::conj(type, w::ex1(r, w::conj(rtime_of(x, r), group_is(r, "val", code)))));
    }

    std::vector<std::uint32_t> value_codes() const {
        std::vector<std::uint32_t> codes;
        for (std::uint32_t c = 0; c <= L_.empty_code(); ++c) codes.push_back(c);
        codes.push_back(L_.undef_code());
        return codes;
    }

    // Position of a time attribute: the start itself or its return.
    WPtr time_cmp(const std::string& x, Attr ax, const std::string& y, Attr ay, bool strict) {
        std::vector<std::string> bound;
        std::vector<WPtr> parts;
        auto pos = [&](const std::string& v, Attr a) {
            if (a == Attr::stime) return v;
            const auto r = fresh();
            bound.push_back(r);
            parts.push_back(rtime_of(v, r));
            return r;
        };
        const auto px = pos(x, ax);
        const auto py = pos(y, ay);
        parts.push_back(strict ? w::lt(px, py) : w::eq(px, py));
        WPtr body = w::conj_all(parts);
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) body = w::ex1(*it, body);
        return body;
    }

    WPtr attr_eq(const std::string& x, Attr ax, const std::string& y, Attr ay) {
        switch (kind_of(ax)) {
            case AttrKind::process: return same_proc(x, y);
            case AttrKind::object: return group_equal(x, y, "obj");
            case AttrKind::type: return w::iff(bit(x, L_.type()), bit(y, L_.type()));
            case AttrKind::time: return time_cmp(x, ax, y, ay, false);
            case AttrKind::value: {
                std::vector<WPtr> cases;
                for (auto c : value_codes()) cases.push_back(w::conj(value_is(x, ax, c), value_is(y, ay, c)));
                return w::disj_all(cases);
            }
        }
        throw FormulaError("ill-kinded attribute comparison");
    }

    WPtr starts_only(const std::string& set) {
        const auto t = fresh();
        return w::all1(t, w::implies(w::in(t, set), is_start(t)));
    }

    WPtr translate(const Formula& n) {
        const auto v = [](const std::string& s) { return TranslationContext::word_var(s); };
        switch (n.kind) {
            case Kind::attr_eq: return attr_eq(v(n.x), n.attr1, v(n.y), n.attr2);
            case Kind::time_lt: return time_cmp(v(n.x), n.attr1, v(n.y), n.attr2, true);
            case Kind::proc_is: {
                auto p = ctx_.meta().process_index(n.literal);
                return p ? proc_is(v(n.x), *p) : w::falsity();
            }
            case Kind::ival_empty: return w::neg(bit(v(n.x), L_.type()));
            case Kind::oval_empty: return value_is(v(n.x), Attr::oval, L_.empty_code());
            case Kind::oval_undef: return value_is(v(n.x), Attr::oval, L_.undef_code());
            case Kind::type_is: {
                auto t = bit(v(n.x), L_.type());
                return n.op_type == OpType::write ? t : w::neg(t);
            }
            case Kind::obj_is: {
                auto o = ctx_.meta().object_index(n.literal);
                return o ? group_is(v(n.x), "obj", static_cast<std::uint32_t>(*o)) : w::falsity();
            }
            case Kind::val_eq: {
                auto i = ctx_.meta().value_index(n.literal);
                return i ? value_is(v(n.x), n.attr1, static_cast<std::uint32_t>(*i)) : w::falsity();
            }
            case Kind::in_set: return w::in(v(n.x), v(n.set));
            case Kind::vis:
            case Kind::ar:
                if (ctx_.mode() != EncodingMode::exec) {
                    throw FormulaError("vis/ar atoms need an exec-mode translation context");
                }
                return n.kind == Kind::vis ? vis(v(n.x), v(n.y)) : ar(v(n.x), v(n.y));
            case Kind::or_: return w::disj(translate(*n.left), translate(*n.right));
            case Kind::and_: return w::conj(translate(*n.left), translate(*n.right));
            case Kind::not_: return w::neg(translate(*n.left));
            case Kind::implies: return w::implies(translate(*n.left), translate(*n.right));
            case Kind::iff: return w::iff(translate(*n.left), translate(*n.right));
            case Kind::forall_fo: return w::all1(v(n.x), w::implies(is_start(v(n.x)), translate(*n.left)));
            case Kind::exists_fo: return w::ex1(v(n.x), w::conj(is_start(v(n.x)), translate(*n.left)));
            case Kind::forall_so: return w::all2(v(n.x), w::implies(starts_only(v(n.x)), translate(*n.left)));
            case Kind::exists_so: return w::ex2(v(n.x), w::conj(starts_only(v(n.x)), translate(*n.left)));
            default: break;
        }
        throw FormulaError("macro survived expansion: " + to_string(std::make_shared<const Formula>(n)));
    }

    // ---- well-formedness ------------------------------------------------

    WPtr null_letter(const std::string& x) {
        std::vector<WPtr> parts;
        for (std::size_t b = 0; b < L_.width(); ++b) parts.push_back(w::neg(bit(x, b)));
        return w::conj_all(parts);
    }

    WPtr one_flip(const std::string& x) {
        const auto p = fresh();
        std::vector<WPtr> cases;
        for (std::size_t i = 0; i < L_.processes(); ++i) {
            std::vector<WPtr> parts{w::neg(w::iff(bit(x, L_.active(i)), bit(p, L_.active(i))))};
            for (std::size_t j = 0; j < L_.processes(); ++j) {
                if (j != i) parts.push_back(w::iff(bit(x, L_.active(j)), bit(p, L_.active(j))));
            }
            cases.push_back(w::conj_all(parts));
        }
        return w::ex1(p, w::conj(w::succ(p, x), w::disj_all(cases)));
    }

    WPtr code_in(const std::string& x, const std::string& group, const std::vector<std::uint32_t>& codes) {
        std::vector<WPtr> cases;
        for (auto c : codes) cases.push_back(group_is(x, group, c));
        return w::disj_all(cases);
    }

    WPtr attributes_consistent(const std::string& x) {
        std::vector<std::uint32_t> values, returns{L_.empty_code(), L_.undef_code()};
        for (std::uint32_t c = 0; c < L_.empty_code(); ++c) values.push_back(c);
        std::vector<std::uint32_t> objects;
        for (std::uint32_t c = 0; c < L_.num_objects(); ++c) objects.push_back(c);
        const auto type = bit(x, L_.type());
        const auto r = fresh();
        const auto rtype = bit(r, L_.type());
        std::vector<WPtr> parts{
            code_in(x, "obj", objects),
            w::implies(type, code_in(x, "val", values)),
            w::implies(w::neg(type), code_in(x, "val", value_codes())),
            w::ex1(r, w::conj_all({rtime_of(x, r), w::iff(type, rtype), group_equal(x, r, "obj"),
                                   w::implies(type, code_in(r, "val", returns)),
                                   w::implies(w::neg(type), group_equal(x, r, "val"))}))};
        return w::conj_all(parts);
    }

    WPtr exec_lanes_zero(const std::string& x) {
        std::vector<WPtr> parts;
        for (const char* g : {"arc", "visc", "visrb"}) {
            const auto& grp = L_.group(g);
            for (std::size_t b = 0; b < grp.width; ++b) parts.push_back(w::neg(bit(x, grp.offset + b)));
        }
        return w::conj_all(parts);
    }

    // Slots that refer to idle processes or missing successors are zero.
    WPtr exec_slots_justified(const std::string& x) {
        std::vector<WPtr> parts;
        const auto m = L_.processes();
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<WPtr> idle;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const auto s = BitLayout::slot(i, j);
                idle.push_back(w::implies(w::neg(bit(x, L_.active(j))),
                                          w::conj_all({w::neg(bit(x, L_.arc(s))), w::neg(bit(x, L_.visc_out(s))),
                                                       w::neg(bit(x, L_.visc_in(s)))})));
            }
            parts.push_back(w::implies(proc_is(x, i), w::conj_all(idle)));
        }
        for (std::size_t q = 0; q < m; ++q) {
            for (std::size_t idx = 0; idx < static_cast<std::size_t>(L_.k()); ++idx) {
                const auto y = fresh();
                parts.push_back(w::implies(bit(x, L_.visrb(q, idx)), w::ex1(y, nth_on(x, y, q, idx))));
            }
        }
        return w::conj_all(parts);
    }

    // No nonempty set of starts in which every member has a predecessor.
    template <class Rel>
    WPtr acyclic(Rel rel) {
        const auto S = "S" + fresh();
        const auto x = fresh();
        const auto y = fresh();
        const auto z = fresh();
        return w::neg(w::ex2(S, w::conj_all({w::ex1(z, w::in(z, S)), starts_only(S),
                                              w::all1(x, w::implies(w::in(x, S),
                                                                     w::ex1(y, w::conj(w::in(y, S), rel(y, x)))))})));
    }

    // Conditions on single letters and neighbouring pairs only.
    std::vector<WPtr> shape() {
        const auto x = fresh();
        std::vector<WPtr> parts;
        parts.push_back(w::ex1(x, w::first(x)));
        {
            const auto v = fresh();
            parts.push_back(w::all1(v, w::implies(w::first(v), null_letter(v))));
        }
        {
            const auto v = fresh();
            parts.push_back(w::all1(v, w::implies(not_first(v), one_flip(v))));
        }
        {
            const auto v = fresh();
            std::vector<WPtr> idle;
            for (std::size_t i = 0; i < L_.processes(); ++i) idle.push_back(w::neg(bit(v, L_.active(i))));
            parts.push_back(w::all1(v, w::implies(w::last(v), w::conj_all(idle))));
        }
        if (L_.mode() == EncodingMode::exec) {
            const auto v = fresh();
            parts.push_back(w::all1(v, w::implies(w::neg(is_start(v)), exec_lanes_zero(v))));
        }
        return parts;
    }

    // The lane tracks spell exactly these letters.
    WPtr spells(const std::vector<Bits>& letters) {
        if (letters.empty()) {
            const auto x = fresh();
            return w::neg(w::ex1(x, w::truth()));
        }
        std::vector<std::string> pos;
        for (std::size_t i = 0; i < letters.size(); ++i) pos.push_back(fresh());
        WPtr body = w::last(pos.back());
        for (std::size_t i = letters.size(); i-- > 0;) {
            std::vector<WPtr> parts;
            for (std::size_t b = 0; b < L_.width(); ++b) {
                parts.push_back(letters[i].at(b) ? bit(pos[i], b) : w::neg(bit(pos[i], b)));
            }
            parts.push_back(i == 0 ? w::first(pos[0]) : w::succ(pos[i - 1], pos[i]));
            parts.push_back(body);
            body = w::ex1(pos[i], w::conj_all(parts));
        }
        return body;
    }

    WPtr encoding() {
        auto parts = shape();
        {
            const auto v = fresh();
            parts.push_back(w::all1(v, w::implies(is_start(v), attributes_consistent(v))));
        }
        if (L_.mode() == EncodingMode::exec) {
            const auto u = fresh();
            parts.push_back(w::all1(u, w::implies(is_start(u), exec_slots_justified(u))));
            parts.push_back(acyclic([this](const std::string& a, const std::string& b) { return ar(a, b); }));
            parts.push_back(acyclic([this](const std::string& a, const std::string& b) { return vis(a, b); }));
        }
        return w::conj_all(parts);
    }

private:
    const TranslationContext& ctx_;
    const BitLayout& L_;
    std::size_t counter_ = 0;
};

}  // namespace

WPtr translate(const FormulaPtr& phi, const TranslationContext& ctx) {
    if (uses_exec_relations(phi) && ctx.mode() != EncodingMode::exec) {
        throw FormulaError("formula uses vis/ar but the translation context is not in exec mode");
    }
    const auto core = contains_macros(phi) ? expand_macros(phi) : phi;
    Builder b(ctx);
    return b.translate(*core);
}

WPtr is_encoding(const TranslationContext& ctx) { return Builder(ctx).encoding(); }

WPtr encoding_shape(const TranslationContext& ctx) { return w::conj_all(Builder(ctx).shape()); }

WPtr spells_word(const TranslationContext& ctx, const WordModel& word) {
    if (ctx.layout() != word.layout) throw EncodingError("word layout does not match the translation context");
    return Builder(ctx).spells(word.letters);
}


Definition derived_relation(const TranslationContext& ctx, const std::string& name) {
    Builder b(ctx);
    const std::string x = "x";
    const std::string y = "y";
    const bool exec_only = name == "arc" || name == "visc" || name == "visrb" || name == "ar" || name == "vis";
    if (exec_only && ctx.mode() != EncodingMode::exec) {
        throw FormulaError("relation '" + name + "' needs an exec-mode translation context");
    }
    if (name == "isStart") return {name, {x}, b.is_start(x)};
    if (name == "isReturn") return {name, {x}, b.is_return(x)};
    if (name == "rtimeOf") return {name, {x, y}, b.rtime_of(x, y)};
    if (name == "rb") return {name, {x, y}, b.rb(x, y)};
    if (name == "ss") return {name, {x, y}, b.same_proc(x, y)};
    if (name == "so") return {name, {x, y}, ws1s::w::conj(b.same_proc(x, y), b.rb(x, y))};
    if (name == "arc") return {name, {x, y}, b.arc(x, y)};
    if (name == "visc") return {name, {x, y}, b.visc(x, y)};
    if (name == "visrb") return {name, {x, y}, b.visrb(x, y)};
    if (name == "ar") return {name, {x, y}, b.ar(x, y)};
    if (name == "vis") return {name, {x, y}, b.vis(x, y)};
    if (name.rfind("procOf_", 0) == 0) {
        const auto p = ctx.meta().process_index(name.substr(7));
        if (!p) throw FormulaError("unknown process in '" + name + "'");
        return {name, {x}, b.proc_is(x, *p)};
    }
    throw FormulaError("unknown derived relation '" + name + "'");
}

std::vector<Definition> derived_relations(const TranslationContext& ctx) {
    std::vector<std::string> names{"isStart", "isReturn"};
    for (const auto& p : ctx.meta().processes) names.push_back("procOf_" + p);
    for (const char* n : {"rtimeOf", "rb", "ss", "so"}) names.emplace_back(n);
    if (ctx.mode() == EncodingMode::exec) {
        for (const char* n : {"arc", "visc", "visrb", "ar", "vis"}) names.emplace_back(n);
    }
    std::vector<Definition> out;
    for (const auto& n : names) out.push_back(derived_relation(ctx, n));
    return out;
}

std::string emit_mona(const WPtr& phi, const TranslationContext& ctx, const std::string& title) {
    const std::string last = "wlast";
    const auto fv = ws1s::free_variables(phi);
    std::string out;
    if (!title.empty()) out += "# " + title + "\n";
    out += "ws1s;\n";
    std::vector<std::string> fo(fv.fo.begin(), fv.fo.end());
    std::vector<std::string> so;
    for (const auto& l : ctx.lanes()) so.push_back(l);
    for (const auto& s : fv.so) {
        if (std::find(so.begin(), so.end(), s) == so.end()) so.push_back(s);
    }
    out += "var1 " + last;
    for (const auto& v : fo) out += ", " + v;
    out += ";\n";
    if (!so.empty()) {
        out += "var2 ";
        for (std::size_t i = 0; i < so.size(); ++i) out += (i ? ", " : "") + so[i];
        out += ";\n";
    }
    for (const auto& v : fo) out += "assert " + v + " <= " + last + ";\n";
    for (const auto& s : so) out += "assert all1 e: e in " + s + " => e <= " + last + ";\n";
    out += ws1s::to_mona(phi, last) + ";\n";
    return out;
}

bool holds_on_word(const FormulaPtr& phi, const WordModel& word, const ws1s::CompileOptions& opts) {
    if (!free_variables(phi).closed()) throw FormulaError("formula is not closed: " + to_string(phi));
    const TranslationContext ctx(word.meta, word.layout.mode(), word.layout.k());
    if (ctx.layout() != word.layout) throw EncodingError("word layout does not match a translation context");
    auto pinned = opts;
    if (!pinned.restriction) pinned.restriction = spells_word(ctx, word);
    const auto a = ws1s::compile(translate(phi, ctx), ctx.lanes(), pinned);
    return a.accepts(word.letters);
}

WordModel word_from_letters(const TranslationContext& ctx, const ws1s::Word& letters) {
    WordModel wm;
    wm.meta = ctx.meta();
    wm.layout = ctx.layout();
    for (const auto& l : letters) {
        if (l.size() != ctx.layout().width()) throw EncodingError("witness letter width does not match the layout");
        wm.letters.emplace_back(l.begin(), l.end());
    }
    return wm;
}

std::optional<WordModel> find_model_word(const FormulaPtr& phi, const TranslationContext& ctx,
                                         const ws1s::CompileOptions& opts) {
    if (!free_variables(phi).closed()) throw FormulaError("formula is not closed: " + to_string(phi));
    const auto problem = ws1s::w::conj(is_encoding(ctx), translate(phi, ctx));
    const auto a = ws1s::compile(problem, ctx.lanes(), opts);
    auto word = a.shortest_accepted();
    if (!word) return std::nullopt;
    return word_from_letters(ctx, *word);
}

}  // namespace cmc
