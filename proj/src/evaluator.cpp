#include "cmc/evaluator.hpp"

#include "cmc/error.hpp"

namespace cmc {

namespace {

using Kind = Formula::Kind;

class Evaluator {
public:
    Evaluator(const Model& m, const EvalOptions& opts) : m_(m), h_(m.history()), opts_(opts) {}

    bool run(const FormulaPtr& phi, Assignment& env) { return go(*phi, env); }

private:
    std::size_t op(const Assignment& env, const std::string& v) const {
        auto it = env.fo.find(v);
        if (it == env.fo.end()) throw EvaluationError("unbound variable '" + v + "'");
        return it->second;
    }

    const Relation& vis() const {
        if (!m_.has_relations()) throw EvaluationError("vis atom evaluated against a bare history");
        return m_.vis();
    }

    const Relation& ar() const {
        if (!m_.has_relations()) throw EvaluationError("ar atom evaluated against a bare history");
        return m_.ar();
    }

    const Value& value_attr(std::size_t o, Attr a) const { return a == Attr::ival ? h_.ops[o].ival : h_.ops[o].oval; }

    const Timestamp& time_attr(std::size_t o, Attr a) const {
        return a == Attr::stime ? h_.ops[o].stime : h_.ops[o].rtime;
    }

    bool attr_equal(std::size_t a, Attr x, std::size_t b, Attr y) const {
        const auto& oa = h_.ops[a];
        const auto& ob = h_.ops[b];
        switch (kind_of(x)) {
            case AttrKind::process: return oa.proc == ob.proc;
            case AttrKind::object: return oa.obj == ob.obj;
            case AttrKind::type: return oa.type == ob.type;
            case AttrKind::value: return value_attr(a, x) == value_attr(b, y);
            case AttrKind::time: return time_attr(a, x) == time_attr(b, y);
        }
        return false;
    }

    bool in_ctxt(std::size_t member, std::size_t of) const {
        return vis().contains(member, of) && h_.ops[member].type == OpType::write &&
               h_.ops[member].obj == h_.ops[of].obj;
    }

    // y.oval = lastWrite(ctxt(x))
    bool last_write(std::size_t x, std::size_t y) const {
        const auto& v = h_.ops[y].oval;
        for (std::size_t b = 0; b < h_.size(); ++b) {
            if (!in_ctxt(b, x) || h_.ops[b].ival == v) continue;
            bool dominated = false;
            for (std::size_t c = 0; c < h_.size() && !dominated; ++c) {
                dominated = in_ctxt(c, x) && ar().contains(b, c);
            }
            if (!dominated) return false;
        }
        return true;
    }

    template <class F>
    bool all_ops(Assignment& env, const std::string& var, F&& body) {
        auto saved = env.fo.find(var) != env.fo.end() ? std::optional<std::size_t>(env.fo[var]) : std::nullopt;
        bool result = true;
        for (std::size_t o = 0; o < h_.size() && result; ++o) {
            env.fo[var] = o;
            result = body();
        }
        if (saved) env.fo[var] = *saved; else env.fo.erase(var);
        return result;
    }

    template <class F>
    bool all_sets(Assignment& env, const std::string& var, F&& body) {
        if (h_.size() > opts_.max_ops_for_sets || h_.size() >= 64) {
            throw CapExceeded("set quantifier over " + std::to_string(h_.size()) + " operations exceeds the cap of " +
                              std::to_string(opts_.max_ops_for_sets));
        }
        auto saved = env.so.find(var) != env.so.end() ? std::optional<std::uint64_t>(env.so[var]) : std::nullopt;
        bool result = true;
        const std::uint64_t limit = std::uint64_t{1} << h_.size();
        for (std::uint64_t s = 0; s < limit && result; ++s) {
            env.so[var] = s;
            result = body();
        }
        if (saved) env.so[var] = *saved; else env.so.erase(var);
        return result;
    }

    bool go(const Formula& n, Assignment& env) {
        switch (n.kind) {
            case Kind::attr_eq: return attr_equal(op(env, n.x), n.attr1, op(env, n.y), n.attr2);
            case Kind::time_lt: return time_attr(op(env, n.x), n.attr1) < time_attr(op(env, n.y), n.attr2);
            case Kind::time_le: return time_attr(op(env, n.x), n.attr1) <= time_attr(op(env, n.y), n.attr2);
            case Kind::proc_is: return h_.ops[op(env, n.x)].proc == n.literal;
            case Kind::ival_empty: return h_.ops[op(env, n.x)].ival.is_empty();
            case Kind::oval_empty: return h_.ops[op(env, n.x)].oval.is_empty();
            case Kind::oval_undef: return h_.ops[op(env, n.x)].oval.is_undef();
            case Kind::type_is: return h_.ops[op(env, n.x)].type == n.op_type;
            case Kind::obj_is: return h_.ops[op(env, n.x)].obj == n.literal;
            case Kind::val_eq: return value_attr(op(env, n.x), n.attr1) == Value::of(n.literal);
            case Kind::in_set: {
                auto it = env.so.find(n.set);
                if (it == env.so.end()) throw EvaluationError("unbound set variable '" + n.set + "'");
                return (it->second >> op(env, n.x)) & 1U;
            }
            case Kind::vis: return vis().contains(op(env, n.x), op(env, n.y));
            case Kind::ar: return ar().contains(op(env, n.x), op(env, n.y));
            case Kind::or_: return go(*n.left, env) || go(*n.right, env);
            case Kind::and_: return go(*n.left, env) && go(*n.right, env);
            case Kind::not_: return !go(*n.left, env);
            case Kind::implies: return !go(*n.left, env) || go(*n.right, env);
            case Kind::iff: return go(*n.left, env) == go(*n.right, env);
            case Kind::forall_fo: return all_ops(env, n.x, [&] { return go(*n.left, env); });
            case Kind::exists_fo: return !all_ops(env, n.x, [&] { return !go(*n.left, env); });
            case Kind::forall_so: return all_sets(env, n.x, [&] { return go(*n.left, env); });
            case Kind::exists_so: return !all_sets(env, n.x, [&] { return !go(*n.left, env); });
            case Kind::rb: return rb(h_, op(env, n.x), op(env, n.y));
            case Kind::ss: return same_session(h_, op(env, n.x), op(env, n.y));
            case Kind::so: return session_order(h_, op(env, n.x), op(env, n.y));
            case Kind::sorr: {
                const auto a = op(env, n.x);
                const auto b = op(env, n.y);
                return h_.ops[a].type == OpType::read && h_.ops[b].type == OpType::read && session_order(h_, a, b);
            }
            case Kind::succ_rb: {
                auto p = h_.meta.process_index(n.literal);
                if (!p) return false;
                auto s = direct_successor_on(h_, op(env, n.x), *p);
                return s && *s == op(env, n.y);
            }
            case Kind::ctxt: return in_ctxt(op(env, n.x), op(env, n.y));
            case Kind::last_write: return last_write(op(env, n.x), op(env, n.y));
            // Every subset of a finite history is finite.
            case Kind::finite: return true;
            case Kind::true_: return true;
            case Kind::false_: return false;
        }
        throw EvaluationError("unhandled formula node");
    }

    const Model& m_;
    const History& h_;
    const EvalOptions& opts_;
};

void require_closed(const FormulaPtr& phi) {
    if (!free_variables(phi).closed()) throw EvaluationError("formula is not closed: " + to_string(phi));
}

}  // namespace

bool eval(const Model& model, const Assignment& env, const FormulaPtr& phi, const EvalOptions& opts) {
    Assignment scratch = env;
    const auto fv = free_variables(phi);
    for (const auto& v : fv.fo) {
        if (!env.fo.count(v)) throw EvaluationError("unbound variable '" + v + "'");
    }
    for (const auto& v : fv.so) {
        if (!env.so.count(v)) throw EvaluationError("unbound set variable '" + v + "'");
    }
    if (uses_exec_relations(phi) && !model.has_relations()) {
        throw EvaluationError("formula uses vis/ar but the model is a bare history");
    }
    for (const auto& [v, o] : env.fo) {
        if (o >= model.history().size()) throw EvaluationError("variable '" + v + "' bound outside the model");
    }
    return Evaluator(model, opts).run(phi, scratch);
}

bool check_model(const Model& model, const FormulaPtr& phi, const EvalOptions& opts) {
    require_closed(phi);
    return eval(model, {}, phi, opts);
}

std::optional<Assignment> find_counterexample(const Model& model, const FormulaPtr& phi, const EvalOptions& opts) {
    require_closed(phi);
    // Peel the universal prefix.
    std::vector<const Formula*> prefix;
    const Formula* body = phi.get();
    while (body->kind == Kind::forall_fo || body->kind == Kind::forall_so) {
        prefix.push_back(body);
        body = body->left.get();
    }
    const auto n = model.history().size();
    Evaluator ev(model, opts);
    Assignment env;
    FormulaPtr body_ptr = std::shared_ptr<const Formula>(phi, body);

    std::optional<Assignment> found;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (found) return;
        if (depth == prefix.size()) {
            if (!ev.run(body_ptr, env)) found = env;
            return;
        }
        const auto& q = *prefix[depth];
        if (q.kind == Kind::forall_fo) {
            for (std::size_t o = 0; o < n && !found; ++o) {
                env.fo[q.x] = o;
                self(self, depth + 1);
            }
            env.fo.erase(q.x);
        } else {
            if (n > opts.max_ops_for_sets || n >= 64) throw CapExceeded("set quantifier exceeds the operation cap");
            for (std::uint64_t s = 0; s < (std::uint64_t{1} << n) && !found; ++s) {
                env.so[q.x] = s;
                self(self, depth + 1);
            }
            env.so.erase(q.x);
        }
    };
    rec(rec, 0);
    return found;
}

std::string describe(const Model& model, const Assignment& a) {
    const auto& h = model.history();
    std::string out;
    for (const auto& [v, o] : a.fo) {
        if (!out.empty()) out += ", ";
        out += v + "=" + h.ops[o].id;
    }
    for (const auto& [v, s] : a.so) {
        if (!out.empty()) out += ", ";
        out += v + "={";
        bool first = true;
        for (std::size_t o = 0; o < h.size(); ++o) {
            if (!((s >> o) & 1U)) continue;
            if (!first) out += ",";
            out += h.ops[o].id;
            first = false;
        }
        out += "}";
    }
    return out;
}

}  // namespace cmc
