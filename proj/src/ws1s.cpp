#include "cmc/ws1s.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "cmc/error.hpp"

namespace cmc::ws1s {

using Kind = WordFormula::Kind;

namespace w {

namespace {

WPtr node(Kind k, std::string x = {}, std::string y = {}, WPtr l = nullptr, WPtr r = nullptr) {
    return std::make_shared<const WordFormula>(WordFormula{k, std::move(x), std::move(y), std::move(l), std::move(r)});
}

}  // namespace

WPtr truth() { return node(Kind::true_); }
WPtr falsity() { return node(Kind::false_); }
WPtr lt(std::string x, std::string y) { return node(Kind::less, std::move(x), std::move(y)); }
WPtr le(std::string x, std::string y) { return node(Kind::less_eq, std::move(x), std::move(y)); }
WPtr eq(std::string x, std::string y) { return node(Kind::equal, std::move(x), std::move(y)); }
WPtr succ(std::string x, std::string y) { return node(Kind::succ, std::move(x), std::move(y)); }
WPtr first(std::string x) { return node(Kind::first, std::move(x)); }
WPtr last(std::string x) { return node(Kind::last, std::move(x)); }
WPtr in(std::string x, std::string set) { return node(Kind::in, std::move(x), std::move(set)); }
WPtr neg(WPtr a) { return node(Kind::not_, {}, {}, std::move(a)); }
WPtr conj(WPtr a, WPtr b) { return node(Kind::and_, {}, {}, std::move(a), std::move(b)); }
WPtr disj(WPtr a, WPtr b) { return node(Kind::or_, {}, {}, std::move(a), std::move(b)); }
WPtr implies(WPtr a, WPtr b) { return node(Kind::implies, {}, {}, std::move(a), std::move(b)); }
WPtr iff(WPtr a, WPtr b) { return node(Kind::iff, {}, {}, std::move(a), std::move(b)); }
WPtr ex1(std::string x, WPtr body) { return node(Kind::exists1, std::move(x), {}, std::move(body)); }
WPtr ex2(std::string x, WPtr body) { return node(Kind::exists2, std::move(x), {}, std::move(body)); }
WPtr all1(std::string x, WPtr body) { return node(Kind::forall1, std::move(x), {}, std::move(body)); }
WPtr all2(std::string x, WPtr body) { return node(Kind::forall2, std::move(x), {}, std::move(body)); }

WPtr conj_all(const std::vector<WPtr>& parts) {
    if (parts.empty()) return truth();
    WPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
}

WPtr disj_all(const std::vector<WPtr>& parts) {
    if (parts.empty()) return falsity();
    WPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
}

}  // namespace w

namespace {

bool binds_fo(Kind k) { return k == Kind::exists1 || k == Kind::forall1; }
bool binds_so(Kind k) { return k == Kind::exists2 || k == Kind::forall2; }

int fo_arity(Kind k) {
    switch (k) {
        case Kind::less:
        case Kind::less_eq:
        case Kind::equal:
        case Kind::succ: return 2;
        case Kind::first:
        case Kind::last:
        case Kind::in: return 1;
        default: return 0;
    }
}

void collect(const WordFormula& n, std::vector<std::string>& bfo, std::vector<std::string>& bso, WordFreeVars& out) {
    auto bound = [](const std::vector<std::string>& s, const std::string& v) {
        return std::find(s.begin(), s.end(), v) != s.end();
    };
    const int ar = fo_arity(n.kind);
    if (ar >= 1 && !bound(bfo, n.x)) out.fo.insert(n.x);
    if (ar == 2 && !bound(bfo, n.y)) out.fo.insert(n.y);
    if (n.kind == Kind::in && !bound(bso, n.y)) out.so.insert(n.y);
    if (binds_fo(n.kind)) bfo.push_back(n.x);
    if (binds_so(n.kind)) bso.push_back(n.x);
    if (n.left) collect(*n.left, bfo, bso, out);
    if (n.right) collect(*n.right, bfo, bso, out);
    if (binds_fo(n.kind)) bfo.pop_back();
    if (binds_so(n.kind)) bso.pop_back();
}

}  // namespace

WordFreeVars free_variables(const WPtr& phi) {
    WordFreeVars out;
    std::vector<std::string> bfo, bso;
    collect(*phi, bfo, bso, out);
    for (const auto& v : out.fo) {
        if (out.so.count(v)) throw FormulaError("variable '" + v + "' used both as position and as set");
    }
    return out;
}

std::size_t node_count(const WPtr& phi) {
    if (!phi) return 0;
    return 1 + node_count(phi->left) + node_count(phi->right);
}

namespace {

void mona(const WordFormula& n, const std::string& last, std::string& out) {
    auto sub = [&](const WPtr& p) {
        out += "(";
        mona(*p, last, out);
        out += ")";
    };
    switch (n.kind) {
        case Kind::true_: out += "true"; return;
        case Kind::false_: out += "false"; return;
        case Kind::less: out += n.x + " < " + n.y; return;
        case Kind::less_eq: out += n.x + " <= " + n.y; return;
        case Kind::equal: out += n.x + " = " + n.y; return;
        case Kind::succ: out += n.y + " = " + n.x + " + 1"; return;
        case Kind::first: out += n.x + " = 0"; return;
        case Kind::last:
            if (last.empty()) {
                out += "~(ex1 q__: q__ = " + n.x + " + 1)";
            } else {
                out += n.x + " = " + last;
            }
            return;
        case Kind::in: out += n.x + " in " + n.y; return;
        case Kind::not_: out += "~"; sub(n.left); return;
        case Kind::and_: sub(n.left); out += " & "; sub(n.right); return;
        case Kind::or_: sub(n.left); out += " | "; sub(n.right); return;
        case Kind::implies: sub(n.left); out += " => "; sub(n.right); return;
        case Kind::iff: sub(n.left); out += " <=> "; sub(n.right); return;
        case Kind::exists1:
        case Kind::forall1: {
            out += n.kind == Kind::exists1 ? "ex1 " : "all1 ";
            out += n.x + ": ";
            if (!last.empty()) out += n.x + " <= " + last + (n.kind == Kind::exists1 ? " & " : " => ");
            sub(n.left);
            return;
        }
        case Kind::exists2:
        case Kind::forall2: {
            out += n.kind == Kind::exists2 ? "ex2 " : "all2 ";
            out += n.x + ": ";
            if (!last.empty()) {
                const auto e = "e_" + n.x;
                out += "(all1 " + e + ": " + e + " in " + n.x + " => " + e + " <= " + last + ")";
                out += n.kind == Kind::exists2 ? " & " : " => ";
            }
            sub(n.left);
            return;
        }
    }
}

}  // namespace

std::string to_mona(const WPtr& phi, const std::string& last_var) {
    std::string out;
    mona(*phi, last_var, out);
    return out;
}

// ---------------------------------------------------------------------------
// Automata

namespace {

constexpr std::uint32_t kLeaf = Automaton::kLeaf;
using Node = Automaton::Node;

struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept {
        std::uint64_t h = n.var;
        h = h * 0x9E3779B97F4A7C15ULL ^ n.lo;
        h = h * 0x9E3779B97F4A7C15ULL ^ n.hi;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

struct NodeEq {
    bool operator()(const Node& a, const Node& b) const noexcept {
        return a.var == b.var && a.lo == b.lo && a.hi == b.hi;
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::uint64_t h = v.size();
        for (auto x : v) h = (h ^ x) * 0x100000001B3ULL + (h >> 31);
        return static_cast<std::size_t>(h);
    }
};

// Hash-consed node store; structurally equal nodes share one id, so equal
// roots denote equal transition functions.
class Table {
public:
    std::vector<Node> nodes;

    std::uint32_t leaf(std::uint32_t state) { return intern({kLeaf, state, 0}); }

    std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
        if (lo == hi) return lo;
        return intern({var, lo, hi});
    }

    const Node& operator[](std::uint32_t i) const { return nodes[i]; }

private:
    std::uint32_t intern(const Node& n) {
        auto [it, inserted] = index_.try_emplace(n, static_cast<std::uint32_t>(nodes.size()));
        if (inserted) nodes.push_back(n);
        return it->second;
    }

    std::unordered_map<Node, std::uint32_t, NodeHash, NodeEq> index_;
};

struct Dfa {
    Table t;
    std::vector<std::uint32_t> root;
    std::vector<std::uint8_t> acc;
    std::uint32_t init = 0;

    std::size_t size() const { return root.size(); }
};

void check_cap(std::size_t states, const CompileOptions& opts) {
    if (states > opts.max_states) {
        throw CapExceeded("automaton exceeded the state cap of " + std::to_string(opts.max_states));
    }
}

// Atomic automaton over the given variable indices (argument order; equal
// indices allowed). next(state, bits) sees bit i as the value of args[i].
Dfa atomic(std::uint32_t nstates, std::uint32_t init, std::vector<std::uint8_t> acc, const std::vector<std::uint32_t>& args,
           const std::function<std::uint32_t(std::uint32_t, std::uint32_t)>& next) {
    std::vector<std::uint32_t> vars = args;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    Dfa d;
    d.acc = std::move(acc);
    d.init = init;
    for (std::uint32_t s = 0; s < nstates; ++s) {
        std::function<std::uint32_t(std::size_t, std::vector<std::uint8_t>&)> rec =
            [&](std::size_t i, std::vector<std::uint8_t>& val) -> std::uint32_t {
            if (i == vars.size()) {
                std::uint32_t bits = 0;
                for (std::size_t a = 0; a < args.size(); ++a) {
                    const auto pos = std::lower_bound(vars.begin(), vars.end(), args[a]) - vars.begin();
                    if (val[static_cast<std::size_t>(pos)]) bits |= 1U << a;
                }
                return d.t.leaf(next(s, bits));
            }
            val[i] = 0;
            const auto lo = rec(i + 1, val);
            val[i] = 1;
            const auto hi = rec(i + 1, val);
            return d.t.mk(vars[i], lo, hi);
        };
        std::vector<std::uint8_t> val(vars.size(), 0);
        d.root.push_back(rec(0, val));
    }
    return d;
}

Dfa constant(bool value) {
    Dfa d;
    d.root.push_back(d.t.leaf(0));
    d.acc.push_back(value ? 1 : 0);
    return d;
}

std::vector<std::uint32_t> successors(const Dfa& d, std::uint32_t s) {
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> stack{d.root[s]};
    std::vector<std::uint32_t> seen;
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
        seen.push_back(n);
        const auto& node = d.t[n];
        if (node.var == kLeaf) {
            out.push_back(node.lo);
        } else {
            stack.push_back(node.hi);
            stack.push_back(node.lo);
        }
    }
    return out;
}

Dfa minimize(const Dfa& a) {
    const auto n = static_cast<std::uint32_t>(a.size());
    std::vector<std::uint8_t> reach(n, 0);
    std::vector<std::uint32_t> order{a.init};
    reach[a.init] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (auto t : successors(a, order[i])) {
            if (!reach[t]) {
                reach[t] = 1;
                order.push_back(t);
            }
        }
    }

    std::vector<std::uint32_t> cls(n, 0);
    for (auto s : order) cls[s] = a.acc[s] ? 1 : 0;
    std::size_t ncls = 0;
    {
        bool any[2] = {false, false};
        for (auto s : order) any[cls[s]] = true;
        ncls = static_cast<std::size_t>(any[0]) + static_cast<std::size_t>(any[1]);
    }

    for (;;) {
        Table sig;
        std::unordered_map<std::uint32_t, std::uint32_t> memo;
        std::function<std::uint32_t(std::uint32_t)> remap = [&](std::uint32_t x) -> std::uint32_t {
            if (auto it = memo.find(x); it != memo.end()) return it->second;
            const auto& nd = a.t[x];
            const auto r = nd.var == kLeaf ? sig.leaf(cls[nd.lo]) : sig.mk(nd.var, remap(nd.lo), remap(nd.hi));
            memo.emplace(x, r);
            return r;
        };
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n, 0);
        for (auto s : order) {
            auto key = std::make_pair(cls[s], remap(a.root[s]));
            auto [it, _] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
            next[s] = it->second;
        }
        const bool stable = ids.size() == ncls;
        cls = std::move(next);
        ncls = ids.size();
        if (stable) break;
    }

    // Canonical numbering: breadth-first from the initial class, visiting
    // decision-diagram leaves low branch first.
    std::vector<std::uint32_t> rep(ncls, kLeaf);
    for (auto s : order) {
        if (rep[cls[s]] == kLeaf) rep[cls[s]] = s;
    }
    std::vector<std::uint32_t> number(ncls, kLeaf);
    std::vector<std::uint32_t> bfs{cls[a.init]};
    number[cls[a.init]] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        for (auto t : successors(a, rep[bfs[i]])) {
            const auto c = cls[t];
            if (number[c] == kLeaf) {
                number[c] = static_cast<std::uint32_t>(bfs.size());
                bfs.push_back(c);
            }
        }
    }

    Dfa m;
    m.init = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    std::function<std::uint32_t(std::uint32_t)> build = [&](std::uint32_t x) -> std::uint32_t {
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        const auto& nd = a.t[x];
        const auto r = nd.var == kLeaf ? m.t.leaf(number[cls[nd.lo]]) : m.t.mk(nd.var, build(nd.lo), build(nd.hi));
        memo.emplace(x, r);
        return r;
    };
    for (auto c : bfs) {
        m.root.push_back(build(a.root[rep[c]]));
        m.acc.push_back(a.acc[rep[c]]);
    }
    return m;
}

enum class BoolOp { and_, or_ };

Dfa product(const Dfa& a, const Dfa& b, BoolOp op, const CompileOptions& opts) {
    Dfa r;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_id;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    auto get_pair = [&](std::uint32_t s, std::uint32_t t) {
        const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | t;
        auto [it, inserted] = pair_id.try_emplace(key, static_cast<std::uint32_t>(pairs.size()));
        if (inserted) pairs.emplace_back(s, t);
        return it->second;
    };
    std::unordered_map<std::uint64_t, std::uint32_t> memo;
    std::function<std::uint32_t(std::uint32_t, std::uint32_t)> apply = [&](std::uint32_t na, std::uint32_t nb) {
        const std::uint64_t key = (static_cast<std::uint64_t>(na) << 32) | nb;
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const Node x = a.t[na];
        const Node y = b.t[nb];
        std::uint32_t res;
        if (x.var == kLeaf && y.var == kLeaf) {
            res = r.t.leaf(get_pair(x.lo, y.lo));
        } else {
            const auto v = std::min(x.var, y.var);
            const auto a0 = x.var == v ? x.lo : na;
            const auto a1 = x.var == v ? x.hi : na;
            const auto b0 = y.var == v ? y.lo : nb;
            const auto b1 = y.var == v ? y.hi : nb;
            const auto lo = apply(a0, b0);
            const auto hi = apply(a1, b1);
            res = r.t.mk(v, lo, hi);
        }
        memo.emplace(key, res);
        return res;
    };
    get_pair(a.init, b.init);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [s, t] = pairs[i];
        const auto root = apply(a.root[s], b.root[t]);
        r.root.push_back(root);
        const bool acc = op == BoolOp::and_ ? (a.acc[s] && b.acc[t]) : (a.acc[s] || b.acc[t]);
        r.acc.push_back(acc ? 1 : 0);
        check_cap(pairs.size(), opts);
    }
    r.init = 0;
    return r;
}

Dfa complement(const Dfa& a) {
    Dfa c = a;
    for (auto& x : c.acc) x = x ? 0 : 1;
    return c;
}

// incl[s * n + t] is set iff L(s) ⊆ L(t): the greatest relation that
// respects acceptance and is closed under letter-aligned successors.
std::vector<std::uint8_t> inclusion(const Dfa& a) {
    const auto n = a.size();
    std::vector<std::uint8_t> incl(n * n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) incl[s * n + t] = (!a.acc[s] || a.acc[t]) ? 1 : 0;
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    std::unordered_map<std::uint64_t, char> seen;
    // True when every letter leads to a pair still in the relation.
    auto closed = [&](std::uint32_t s, std::uint32_t t) {
        stack.clear();
        seen.clear();
        stack.emplace_back(a.root[s], a.root[t]);
        while (!stack.empty()) {
            const auto [x, y] = stack.back();
            stack.pop_back();
            const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
            if (!seen.emplace(key, 1).second) continue;
            const Node& nx = a.t[x];
            const Node& ny = a.t[y];
            if (nx.var == kLeaf && ny.var == kLeaf) {
                if (!incl[nx.lo * n + ny.lo]) return false;
                continue;
            }
            const auto v = std::min(nx.var, ny.var);
            stack.emplace_back(nx.var == v ? nx.lo : x, ny.var == v ? ny.lo : y);
            stack.emplace_back(nx.var == v ? nx.hi : x, ny.var == v ? ny.hi : y);
        }
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t s = 0; s < n; ++s) {
            for (std::uint32_t t = 0; t < n; ++t) {
                if (s != t && incl[s * n + t] && !closed(s, t)) {
                    incl[s * n + t] = 0;
                    changed = true;
                }
            }
        }
    }
    return incl;
}

struct SubsetBudget {};

// Existentially quantifies `var` out and determinizes. With an inclusion
// relation, subsets keep only their maximal members (antichains), which
// preserves the language of every subset.
Dfa project_with(const Dfa& a, std::uint32_t var, const CompileOptions& opts, const std::vector<std::uint8_t>* incl,
                 std::size_t budget) {
    const auto n = a.size();
    Dfa r;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> subset_id;
    std::vector<std::vector<std::uint32_t>> subsets;
    auto get_subset = [&](std::vector<std::uint32_t> s) {
        if (incl && s.size() > 1) {
            std::vector<std::uint32_t> kept;
            for (auto x : s) {
                bool dominated = false;
                for (auto y : s) {
                    if (y != x && (*incl)[x * n + y] && (!(*incl)[y * n + x] || y < x)) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) kept.push_back(x);
            }
            s = std::move(kept);
        }
        auto [it, inserted] = subset_id.try_emplace(s, static_cast<std::uint32_t>(subsets.size()));
        if (inserted) subsets.push_back(std::move(s));
        return it->second;
    };
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> memo;
    std::function<std::uint32_t(std::vector<std::uint32_t>)> det = [&](std::vector<std::uint32_t> ns) -> std::uint32_t {
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
        if (auto it = memo.find(ns); it != memo.end()) return it->second;
        std::uint32_t top = kLeaf;
        for (auto x : ns) top = std::min(top, a.t[x].var);
        std::uint32_t res;
        if (top == kLeaf) {
            std::vector<std::uint32_t> states;
            states.reserve(ns.size());
            for (auto x : ns) states.push_back(a.t[x].lo);
            std::sort(states.begin(), states.end());
            states.erase(std::unique(states.begin(), states.end()), states.end());
            res = r.t.leaf(get_subset(std::move(states)));
        } else if (top == var) {
            std::vector<std::uint32_t> merged;
            merged.reserve(ns.size() + 2);
            for (auto x : ns) {
                const auto& nd = a.t[x];
                if (nd.var == top) {
                    merged.push_back(nd.lo);
                    merged.push_back(nd.hi);
                } else {
                    merged.push_back(x);
                }
            }
            res = det(std::move(merged));
        } else {
            std::vector<std::uint32_t> lo, hi;
            lo.reserve(ns.size());
            hi.reserve(ns.size());
            for (auto x : ns) {
                const auto& nd = a.t[x];
                lo.push_back(nd.var == top ? nd.lo : x);
                hi.push_back(nd.var == top ? nd.hi : x);
            }
            const auto l = det(std::move(lo));
            const auto h = det(std::move(hi));
            res = r.t.mk(top, l, h);
        }
        memo.emplace(ns, res);
        return res;
    };
    get_subset({a.init});
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        std::vector<std::uint32_t> roots;
        bool acc = false;
        for (auto s : subsets[i]) {
            roots.push_back(a.root[s]);
            acc = acc || a.acc[s];
        }
        r.root.push_back(det(std::move(roots)));
        r.acc.push_back(acc ? 1 : 0);
        if (subsets.size() > budget) throw SubsetBudget{};
        check_cap(subsets.size(), opts);
    }
    r.init = 0;
    return r;
}

// Plain subset construction first; when it grows large and the input is
// small enough for an inclusion check, redo it over antichains.
Dfa project(const Dfa& a, std::uint32_t var, const CompileOptions& opts) {
    constexpr std::size_t kPlainBudget = 4096;
    constexpr std::size_t kInclusionLimit = 2500;
    if (a.size() > kInclusionLimit) return project_with(a, var, opts, nullptr, SIZE_MAX);
    try {
        return project_with(a, var, opts, nullptr, kPlainBudget);
    } catch (const SubsetBudget&) {
        const auto incl = inclusion(a);
        return project_with(a, var, opts, &incl, SIZE_MAX);
    }
}

// Exactly one position carries the bit of var.
Dfa singleton(std::uint32_t var) {
    return atomic(3, 0, {0, 1, 0}, {var}, [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
        if (s == 0) return b ? 1 : 0;
        if (s == 1) return b ? 2 : 1;
        return 2;
    });
}

Dfa nonempty() {
    Dfa d;
    d.root.push_back(d.t.leaf(1));
    d.root.push_back(d.t.leaf(1));
    d.acc = {0, 1};
    return d;
}

struct Compiled {
    Dfa dfa;
    std::vector<std::uint32_t> fo;    // free first-order variable indices (sorted)
    std::vector<std::uint32_t> vars;  // all free variable indices (sorted)
};

std::vector<std::uint32_t> merge(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

class Compiler {
public:
    Compiler(const CompileOptions& opts, const std::vector<std::string>& order, const WordFreeVars& fv) : opts_(opts) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            const bool fo = fv.fo.count(order[i]) > 0;
            scope_[order[i]].push_back({static_cast<std::uint32_t>(i), fo});
        }
        next_ = static_cast<std::uint32_t>(order.size());
        if (opts.restriction) {
            const auto rv = free_variables(opts.restriction);
            if (!rv.fo.empty()) throw FormulaError("a restriction may only mention set variables");
            for (const auto& v : rv.so) {
                if (std::find(order.begin(), order.end(), v) == order.end()) {
                    throw FormulaError("restriction variable '" + v + "' is not a track");
                }
                fixed_.insert(v);
            }
            restriction_ = run(*opts.restriction);
        }
    }

    Compiled run(const WordFormula& n) {
        try {
            return dispatch(n);
        } catch (const CapExceeded& e) {
            if (!e.subformula().empty()) throw;
            auto text = to_mona(std::make_shared<const WordFormula>(n));
            if (text.size() > 400) text = text.substr(0, 400) + "...";
            throw CapExceeded(e.what(), text);
        }
    }

private:
    struct Binding {
        std::uint32_t index;
        bool fo;
    };

    std::uint32_t var(const std::string& name, bool want_fo) {
        auto it = scope_.find(name);
        if (it == scope_.end() || it->second.empty()) throw FormulaError("unbound word variable '" + name + "'");
        const auto& b = it->second.back();
        if (b.fo != want_fo) {
            throw FormulaError("variable '" + name + "' used as " + (want_fo ? "position" : "set") + " but declared otherwise");
        }
        return b.index;
    }

    Compiled finish(Dfa d, std::vector<std::uint32_t> fo, std::vector<std::uint32_t> vars) {
        if (restriction_) {
            d = product(d, restriction_->dfa, BoolOp::and_, opts_);
            vars = merge(restriction_->vars, vars);
        }
        auto m = minimize(d);
        check_cap(m.size(), opts_);
        std::sort(fo.begin(), fo.end());
        fo.erase(std::unique(fo.begin(), fo.end()), fo.end());
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        return {std::move(m), std::move(fo), std::move(vars)};
    }

    Compiled with_singletons(Compiled c, const std::vector<std::uint32_t>& extra) {
        std::vector<std::uint32_t> missing;
        std::set_difference(extra.begin(), extra.end(), c.fo.begin(), c.fo.end(), std::back_inserter(missing));
        if (missing.empty()) return c;
        Dfa d = std::move(c.dfa);
        for (auto v : missing) d = minimize(product(d, singleton(v), BoolOp::and_, opts_));
        auto fo = merge(c.fo, missing);
        auto vars = merge(c.vars, missing);
        return finish(std::move(d), std::move(fo), std::move(vars));
    }

    Compiled negate(const Compiled& c) {
        Dfa d = complement(c.dfa);
        for (auto v : c.fo) d = minimize(product(d, singleton(v), BoolOp::and_, opts_));
        return finish(std::move(d), c.fo, c.vars);
    }

    Compiled conj(const Compiled& a, const Compiled& b) {
        return finish(product(a.dfa, b.dfa, BoolOp::and_, opts_), merge(a.fo, b.fo), merge(a.vars, b.vars));
    }

    Compiled disj(const Compiled& a, const Compiled& b) {
        const auto fo = merge(a.fo, b.fo);
        auto x = with_singletons(a, fo);
        auto y = with_singletons(b, fo);
        return finish(product(x.dfa, y.dfa, BoolOp::or_, opts_), fo, merge(a.vars, b.vars));
    }

    Compiled exists(std::uint32_t index, bool fo, const Compiled& body) {
        auto fo_vars = body.fo;
        auto vars = body.vars;
        const bool free = std::binary_search(vars.begin(), vars.end(), index);
        if (!free) {
            if (!fo) return body;
            return finish(product(body.dfa, nonempty(), BoolOp::and_, opts_), fo_vars, vars);
        }
        fo_vars.erase(std::remove(fo_vars.begin(), fo_vars.end(), index), fo_vars.end());
        vars.erase(std::remove(vars.begin(), vars.end(), index), vars.end());
        return finish(project(body.dfa, index, opts_), fo_vars, vars);
    }

    Compiled quantified(const WordFormula& n, bool fo, bool universal) {
        if (fixed_.count(n.x)) throw FormulaError("restriction variable '" + n.x + "' is bound inside the formula");
        const auto index = next_++;
        scope_[n.x].push_back({index, fo});
        Compiled body = run(*n.left);
        scope_[n.x].pop_back();
        if (universal) return negate(exists(index, fo, negate(body)));
        return exists(index, fo, body);
    }

    Compiled dispatch(const WordFormula& n) {
        switch (n.kind) {
            case Kind::true_: return finish(constant(true), {}, {});
            case Kind::false_: return finish(constant(false), {}, {});
            case Kind::less:
            case Kind::less_eq:
            case Kind::equal:
            case Kind::succ: return binary(n);
            case Kind::first: {
                const auto x = var(n.x, true);
                // 0: at position 0, 1: x seen, 2: sink
                auto d = atomic(3, 0, {0, 1, 0}, {x}, [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    if (s == 0) return b ? 1 : 2;
                    if (s == 1) return b ? 2 : 1;
                    return 2;
                });
                return finish(std::move(d), {x}, {x});
            }
            case Kind::last: {
                const auto x = var(n.x, true);
                // 0: before x, 1: x just read, 2: sink
                auto d = atomic(3, 0, {0, 1, 0}, {x}, [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    if (s == 0) return b ? 1 : 0;
                    return 2;
                });
                return finish(std::move(d), {x}, {x});
            }
            case Kind::in: {
                const auto x = var(n.x, true);
                const auto set = var(n.y, false);
                auto d = atomic(3, 0, {0, 1, 0}, {x, set}, [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    const bool bx = b & 1U;
                    const bool bs = b & 2U;
                    if (s == 0) return bx ? (bs ? 1 : 2) : 0;
                    if (s == 1) return bx ? 2 : 1;
                    return 2;
                });
                return finish(std::move(d), {x}, {x, set});
            }
            case Kind::not_: return negate(run(*n.left));
            case Kind::and_: {
                auto a = run(*n.left);
                auto b = run(*n.right);
                return conj(a, b);
            }
            case Kind::or_: {
                auto a = run(*n.left);
                auto b = run(*n.right);
                return disj(a, b);
            }
            case Kind::implies: {
                auto a = run(*n.left);
                auto b = run(*n.right);
                return disj(negate(a), b);
            }
            case Kind::iff: {
                auto a = run(*n.left);
                auto b = run(*n.right);
                auto na = negate(a);
                auto nb = negate(b);
                return conj(disj(na, b), disj(nb, a));
            }
            case Kind::exists1: return quantified(n, true, false);
            case Kind::forall1: return quantified(n, true, true);
            case Kind::exists2: return quantified(n, false, false);
            case Kind::forall2: return quantified(n, false, true);
        }
        throw FormulaError("unhandled word formula node");
    }

    Compiled binary(const WordFormula& n) {
        const auto x = var(n.x, true);
        const auto y = var(n.y, true);
        // States: 0 = neither seen, 1 = first seen, 2 = done (accepting), 3 = sink.
        std::function<std::uint32_t(std::uint32_t, std::uint32_t)> next;
        switch (n.kind) {
            case Kind::less:
                next = [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    const bool bx = b & 1U, by = b & 2U;
                    if (s == 0) return by ? 3 : (bx ? 1 : 0);
                    if (s == 1) return bx ? 3 : (by ? 2 : 1);
                    if (s == 2) return (bx || by) ? 3 : 2;
                    return 3;
                };
                break;
            case Kind::less_eq:
                next = [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    const bool bx = b & 1U, by = b & 2U;
                    if (s == 0) return bx && by ? 2 : by ? 3 : (bx ? 1 : 0);
                    if (s == 1) return bx ? 3 : (by ? 2 : 1);
                    if (s == 2) return (bx || by) ? 3 : 2;
                    return 3;
                };
                break;
            case Kind::equal:
                next = [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    const bool bx = b & 1U, by = b & 2U;
                    if (s == 0) return bx && by ? 2 : (bx || by) ? 3 : 0;
                    if (s == 2) return (bx || by) ? 3 : 2;
                    return 3;
                };
                break;
            default:  // succ: y = x + 1
                next = [](std::uint32_t s, std::uint32_t b) -> std::uint32_t {
                    const bool bx = b & 1U, by = b & 2U;
                    if (s == 0) return by ? 3 : (bx ? 1 : 0);
                    if (s == 1) return (by && !bx) ? 2 : 3;
                    if (s == 2) return (bx || by) ? 3 : 2;
                    return 3;
                };
                break;
        }
        auto d = atomic(4, 0, {0, 0, 1, 0}, {x, y}, next);
        return finish(std::move(d), {x, y}, {x, y});
    }

    const CompileOptions& opts_;
    std::map<std::string, std::vector<Binding>> scope_;
    std::uint32_t next_ = 0;
    std::optional<Compiled> restriction_;
    std::set<std::string> fixed_;
};

std::string pattern_of(const std::vector<char>& p) { return std::string(p.begin(), p.end()); }

}  // namespace

Automaton::Automaton(std::vector<std::string> tracks, std::vector<Node> nodes, std::vector<std::uint32_t> roots,
                     std::vector<std::uint8_t> accepting, std::uint32_t initial)
    : tracks_(std::move(tracks)),
      nodes_(std::move(nodes)),
      roots_(std::move(roots)),
      accepting_(std::move(accepting)),
      initial_(initial) {}

std::size_t Automaton::step(std::size_t state, const Letter& letter) const {
    auto n = roots_.at(state);
    while (nodes_[n].var != kLeaf) {
        const auto& nd = nodes_[n];
        n = letter.at(nd.var) ? nd.hi : nd.lo;
    }
    return nodes_[n].lo;
}

bool Automaton::accepts(const Word& word) const {
    std::size_t s = initial_;
    for (const auto& letter : word) {
        if (letter.size() != tracks_.size()) {
            throw Error("letter width " + std::to_string(letter.size()) + " does not match " +
                        std::to_string(tracks_.size()) + " tracks");
        }
        s = step(s, letter);
    }
    return accepting_[s] != 0;
}

std::optional<Word> Automaton::shortest_accepted() const {
    const auto n = roots_.size();
    std::vector<std::int64_t> parent(n, -1);
    std::vector<Letter> via(n);
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<std::uint32_t> queue{initial_};
    seen[initial_] = 1;
    std::int64_t goal = -1;
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        if (accepting_[s]) {
            goal = s;
            break;
        }
        // Smallest letter reaching each successor.
        std::map<std::uint32_t, Letter> best;
        Letter cur(tracks_.size(), 0);
        std::function<void(std::uint32_t)> walk = [&](std::uint32_t x) {
            const auto& nd = nodes_[x];
            if (nd.var == kLeaf) {
                auto it = best.find(nd.lo);
                if (it == best.end() || cur < it->second) best[nd.lo] = cur;
                return;
            }
            cur[nd.var] = 0;
            walk(nd.lo);
            cur[nd.var] = 1;
            walk(nd.hi);
            cur[nd.var] = 0;
        };
        walk(roots_[s]);
        std::vector<std::pair<Letter, std::uint32_t>> ordered;
        for (auto& [t, l] : best) ordered.emplace_back(l, t);
        std::sort(ordered.begin(), ordered.end());
        for (auto& [l, t] : ordered) {
            if (seen[t]) continue;
            seen[t] = 1;
            parent[t] = s;
            via[t] = l;
            queue.push_back(t);
        }
    }
    if (goal < 0) return std::nullopt;
    Word w;
    for (auto s = goal; s != static_cast<std::int64_t>(initial_); s = parent[static_cast<std::size_t>(s)]) {
        w.push_back(via[static_cast<std::size_t>(s)]);
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::string Automaton::dump() const {
    std::string out = "tracks:";
    for (const auto& t : tracks_) out += " " + t;
    out += "\nstates: " + std::to_string(roots_.size()) + "\ninitial: " + std::to_string(initial_) + "\naccepting:";
    for (std::size_t s = 0; s < roots_.size(); ++s) {
        if (accepting_[s]) out += " " + std::to_string(s);
    }
    out += "\n";
    for (std::size_t s = 0; s < roots_.size(); ++s) {
        out += "state " + std::to_string(s) + ":\n";
        std::vector<char> pat(tracks_.size(), 'X');
        std::function<void(std::uint32_t)> walk = [&](std::uint32_t x) {
            const auto& nd = nodes_[x];
            if (nd.var == kLeaf) {
                out += "  " + (pat.empty() ? std::string("-") : pattern_of(pat)) + " -> " + std::to_string(nd.lo) + "\n";
                return;
            }
            pat[nd.var] = '0';
            walk(nd.lo);
            pat[nd.var] = '1';
            walk(nd.hi);
            pat[nd.var] = 'X';
        };
        walk(roots_[s]);
    }
    return out;
}

Automaton compile(const WPtr& phi, const std::vector<std::string>& var_order, const CompileOptions& opts) {
    const auto fv = free_variables(phi);
    for (const auto* group : {&fv.fo, &fv.so}) {
        for (const auto& v : *group) {
            if (std::find(var_order.begin(), var_order.end(), v) == var_order.end()) {
                throw FormulaError("free variable '" + v + "' missing from the track order");
            }
        }
    }
    Compiler c(opts, var_order, fv);
    auto result = c.run(*phi);
    auto& d = result.dfa;
    return Automaton(var_order, std::move(d.t.nodes), std::move(d.root), std::move(d.acc), d.init);
}

SatResult is_satisfiable(const WPtr& phi, const CompileOptions& opts) {
    const auto fv = free_variables(phi);
    std::vector<std::string> tracks(fv.fo.begin(), fv.fo.end());
    tracks.insert(tracks.end(), fv.so.begin(), fv.so.end());
    std::sort(tracks.begin(), tracks.end());
    const auto a = compile(phi, tracks, opts);
    SatResult r;
    r.tracks = tracks;
    r.witness = a.shortest_accepted();
    r.satisfiable = r.witness.has_value();
    return r;
}

bool is_valid(const WPtr& phi, const CompileOptions& opts) { return !is_satisfiable(w::neg(phi), opts).satisfiable; }

bool accepts(const Automaton& a, const Word& word) { return a.accepts(word); }

bool accepts(const WPtr& phi, const std::vector<std::string>& tracks, const Word& word, const CompileOptions& opts) {
    return compile(phi, tracks, opts).accepts(word);
}

}  // namespace cmc::ws1s
