#include "cmc/history.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cmc/error.hpp"

namespace cmc {

std::string_view to_string(OpType t) noexcept {
    return t == OpType::read ? "read" : "write";
}

namespace {

std::optional<std::size_t> position(const std::vector<std::string>& v, std::string_view x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

bool has_duplicates(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

}  // namespace

std::optional<std::size_t> MetaParams::process_index(std::string_view p) const { return position(processes, p); }
std::optional<std::size_t> MetaParams::object_index(std::string_view o) const { return position(objects, o); }
std::optional<std::size_t> MetaParams::value_index(std::string_view v) const { return position(values, v); }

std::vector<std::string> MetaParams::problems() const {
    std::vector<std::string> out;
    auto check = [&](const std::vector<std::string>& v, const char* what) {
        if (v.empty()) out.push_back(std::string(what) + " must be non-empty");
        if (has_duplicates(v)) out.push_back(std::string(what) + " must be duplicate-free");
    };
    check(processes, "processes");
    check(objects, "objects");
    check(values, "values");
    for (const auto& v : values) {
        if (v == "_" || v == "undef") out.push_back("value '" + v + "' collides with a reserved symbol");
    }
    return out;
}

std::optional<std::size_t> History::find(std::string_view id) const {
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t History::index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw Error("unknown operation id '" + std::string(id) + "'");
}

std::size_t History::proc_index(std::size_t op) const {
    if (auto p = meta.process_index(ops[op].proc)) return *p;
    throw Error("operation '" + ops[op].id + "' on unknown process '" + ops[op].proc + "'");
}

std::vector<std::size_t> History::ord() const {
    std::vector<std::size_t> idx(ops.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return ops[a].stime < ops[b].stime; });
    return idx;
}

std::size_t Relation::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Relation Relation::transitive_closure() const {
    Relation c = *this;
    for (std::size_t k = 0; k < n_; ++k) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (!c.contains(i, k)) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (c.contains(k, j)) c.insert(i, j);
            }
        }
    }
    return c;
}

bool Relation::is_acyclic() const {
    const Relation c = transitive_closure();
    for (std::size_t i = 0; i < n_; ++i) {
        if (c.contains(i, i)) return false;
    }
    return true;
}

bool Relation::is_strict_total_order() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (contains(i, i)) return false;
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (contains(i, j) == contains(j, i)) return false;
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!contains(i, j)) continue;
            for (std::size_t k = 0; k < n_; ++k) {
                if (contains(j, k) && !contains(i, k)) return false;
            }
        }
    }
    return true;
}

std::string Violation::message() const {
    std::string s = invariant;
    if (!ops.empty()) {
        s += " [";
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (i) s += ", ";
            s += ops[i];
        }
        s += "]";
    }
    return s;
}

std::vector<Violation> validate_history(const History& h) {
    std::vector<Violation> out;
    // An empty history needs no universe; an empty trace file is one.
    for (const auto& p : h.meta.problems()) {
        if (h.ops.empty() && p.find("must be non-empty") != std::string::npos) continue;
        out.push_back({"meta: " + p, {}});
    }

    std::map<std::string, int> ids;
    for (const auto& op : h.ops) {
        if (++ids[op.id] == 2) out.push_back({"unique ids", {op.id}});
    }

    for (const auto& op : h.ops) {
        if (!(op.stime < op.rtime)) out.push_back({"stime < rtime", {op.id}});
        if (!(Timestamp{0} < op.stime)) out.push_back({"stime > 0", {op.id}});
        if (!h.meta.process_index(op.proc)) out.push_back({"known process", {op.id}});
        if (!h.meta.object_index(op.obj)) out.push_back({"known object", {op.id}});
        for (const Value* v : {&op.ival, &op.oval}) {
            if (v->is_value() && !h.meta.value_index(v->name)) out.push_back({"known value", {op.id}});
        }
        if (op.type == OpType::read && !op.ival.is_empty()) out.push_back({"read has empty ival", {op.id}});
        if (op.type == OpType::write && !op.ival.is_value()) out.push_back({"write has a value ival", {op.id}});
        if (op.type == OpType::write && op.oval.is_value()) out.push_back({"write oval is empty or undef", {op.id}});
    }

    // Every stime and rtime is a distinct point.
    std::map<Timestamp, std::vector<std::string>> points;
    for (const auto& op : h.ops) {
        points[op.stime].push_back(op.id);
        points[op.rtime].push_back(op.id);
    }
    for (const auto& [t, who] : points) {
        if (who.size() > 1) out.push_back({"distinct timestamps at " + t.to_string(), who});
    }

    for (std::size_t i = 0; i < h.ops.size(); ++i) {
        for (std::size_t j = i + 1; j < h.ops.size(); ++j) {
            const auto& a = h.ops[i];
            const auto& b = h.ops[j];
            if (a.proc != b.proc) continue;
            const bool disjoint = a.rtime < b.stime || b.rtime < a.stime;
            if (!disjoint) out.push_back({"process intervals disjoint", {a.id, b.id}});
        }
    }
    return out;
}

std::vector<Violation> validate_execution(const AbstractExecution& x, bool real_time) {
    auto out = validate_history(x.history);
    const auto& h = x.history;
    const std::size_t n = h.size();
    if (x.vis.size() != n || x.ar.size() != n) {
        out.push_back({"relation size matches operation count", {}});
        return out;
    }
    if (!x.ar.is_strict_total_order()) out.push_back({"ar is a strict total order", {}});
    if (!x.vis.is_acyclic()) out.push_back({"vis is acyclic", {}});
    if (real_time) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (!rb(h, a, b)) continue;
                if (!x.ar.contains(a, b)) out.push_back({"rb ⊆ ar", {h.ops[a].id, h.ops[b].id}});
                if (x.vis.contains(b, a)) out.push_back({"rb(a,b) ⇒ ¬vis(b,a)", {h.ops[a].id, h.ops[b].id}});
            }
        }
    }
    return out;
}

bool rb(const History& h, std::size_t a, std::size_t b) { return h.ops[a].rtime < h.ops[b].stime; }
bool rb(const History& h, std::string_view a, std::string_view b) { return rb(h, h.index_of(a), h.index_of(b)); }

bool same_session(const History& h, std::size_t a, std::size_t b) { return h.ops[a].proc == h.ops[b].proc; }
bool same_session(const History& h, std::string_view a, std::string_view b) {
    return same_session(h, h.index_of(a), h.index_of(b));
}

bool session_order(const History& h, std::size_t a, std::size_t b) { return same_session(h, a, b) && rb(h, a, b); }
bool session_order(const History& h, std::string_view a, std::string_view b) {
    return session_order(h, h.index_of(a), h.index_of(b));
}

std::vector<std::size_t> successors_on(const History& h, std::size_t a, std::size_t p) {
    std::vector<std::size_t> out;
    for (std::size_t b : h.ord()) {
        if (h.proc_index(b) == p && rb(h, a, b)) out.push_back(b);
    }
    return out;
}

std::optional<std::size_t> direct_successor_on(const History& h, std::size_t a, std::size_t p) {
    std::optional<std::size_t> best;
    for (std::size_t b = 0; b < h.size(); ++b) {
        if (h.proc_index(b) != p || !rb(h, a, b)) continue;
        if (!best || h.ops[b].stime < h.ops[*best].stime) best = b;
    }
    return best;
}

std::optional<std::string> direct_successor_on(const History& h, std::string_view a, std::string_view p) {
    auto pi = h.meta.process_index(p);
    if (!pi) throw Error("unknown process '" + std::string(p) + "'");
    if (auto b = direct_successor_on(h, h.index_of(a), *pi)) return h.ops[*b].id;
    return std::nullopt;
}

std::vector<std::size_t> succs(const History& h, std::size_t a) {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < h.meta.processes.size(); ++p) {
        if (auto b = direct_successor_on(h, a, p)) out.push_back(*b);
    }
    std::sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) { return h.ops[x].stime < h.ops[y].stime; });
    return out;
}

std::vector<std::string> succs(const History& h, std::string_view a) {
    std::vector<std::string> out;
    for (std::size_t b : succs(h, h.index_of(a))) out.push_back(h.ops[b].id);
    return out;
}

Relation rb_relation(const History& h) {
    Relation r(h.size());
    for (std::size_t a = 0; a < h.size(); ++a) {
        for (std::size_t b = 0; b < h.size(); ++b) {
            if (rb(h, a, b)) r.insert(a, b);
        }
    }
    return r;
}

}  // namespace cmc
