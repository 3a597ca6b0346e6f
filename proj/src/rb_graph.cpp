#include "cmc/rb_graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "cmc/error.hpp"

namespace cmc {

bool GenGraph::has_edge(std::size_t a, std::size_t b) const {
    return std::any_of(edges.begin(), edges.end(), [&](const GenEdge& e) { return e.source == a && e.target == b; });
}

bool GenGraph::has_path(std::size_t a, std::size_t b) const {
    // Forward search; graphs here are small.
    std::vector<bool> seen(history.size(), false);
    std::vector<std::size_t> stack{a};
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (const auto& e : edges) {
            if (e.source != u || seen[e.target]) continue;
            if (e.target == b) return true;
            seen[e.target] = true;
            stack.push_back(e.target);
        }
    }
    return false;
}

std::size_t GenGraph::out_degree(std::size_t a) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const GenEdge& e) { return e.source == a; }));
}

std::size_t GenGraph::in_degree(std::size_t a) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const GenEdge& e) { return e.target == a; }));
}

GenGraph build_generator(const History& h, SuccessorRule rule) {
    if (const auto v = validate_history(h); !v.empty()) throw ValidationError("invalid history: " + v.front().message());
    GenGraph g;
    g.history = h;
    g.ord = h.ord();
    g.position.assign(h.size(), 0);
    for (std::size_t i = 0; i < g.ord.size(); ++i) g.position[g.ord[i]] = i;
    const auto n = g.ord.size();
    for (std::size_t i = n >= 1 ? n - 1 : 0; i-- > 0;) {
        const auto a = g.ord[i];
        const auto s = succs(h, a);  // already in ord order
        for (std::size_t j = 0; j < s.size(); ++j) {
            const auto b = rule == SuccessorRule::each ? s[j] : s.back();
            if (!g.has_path(a, b)) g.edges.push_back({a, b, h.proc_index(b)});
        }
    }
    return g;
}

Relation transitive_closure(const GenGraph& g) {
    Relation r(g.history.size());
    for (const auto& e : g.edges) r.insert(e.source, e.target);
    return r.transitive_closure();
}

CutReport cut(const GenGraph& g, std::size_t ell) {
    const auto n = g.ord.size();
    if (ell < 1 || ell > n) throw std::out_of_range("cut index out of range");
    CutReport r;
    r.ell = ell;
    r.left.assign(g.ord.begin(), g.ord.begin() + static_cast<std::ptrdiff_t>(ell));
    r.right.assign(g.ord.begin() + static_cast<std::ptrdiff_t>(ell), g.ord.end());
    const auto m = g.processes();
    std::vector<std::optional<std::size_t>> last(m), first(m);
    for (auto a : r.left) last[g.history.proc_index(a)] = a;
    for (auto it = r.right.rbegin(); it != r.right.rend(); ++it) first[g.history.proc_index(*it)] = *it;
    for (std::size_t p = 0; p < m; ++p) {
        if (last[p]) r.gamma.push_back(*last[p]);
        if (first[p]) r.lambda.push_back(*first[p]);
    }
    auto in = [](const std::vector<std::size_t>& v, std::size_t a) { return std::find(v.begin(), v.end(), a) != v.end(); };
    for (const auto& e : g.edges) {
        const bool src_left = g.position[e.source] < ell;
        const bool dst_left = g.position[e.target] < ell;
        if (src_left == dst_left) continue;
        ++r.crossing;
        if (!src_left) ++r.right_to_left;
        if (src_left && !in(r.gamma, e.source) && !in(r.lambda, e.target)) ++r.interior_crossing;
    }
    return r;
}

std::vector<std::size_t> cut_profile(const GenGraph& g) {
    std::vector<std::size_t> out;
    for (std::size_t ell = 1; ell <= g.ord.size(); ++ell) out.push_back(cut(g, ell).crossing);
    return out;
}

std::size_t cutwidth_along_ord(const GenGraph& g) {
    const auto p = cut_profile(g);
    return p.empty() ? 0 : *std::max_element(p.begin(), p.end());
}

std::size_t exact_cutwidth(const GenGraph& g, std::size_t max_ops) {
    const auto n = g.history.size();
    if (n > max_ops) throw CapExceeded("exact cutwidth is limited to " + std::to_string(max_ops) + " operations");
    if (n > 24) throw CapExceeded("exact cutwidth is limited to 24 operations");
    // best[S]: smallest achievable maximum cut over layouts whose prefix of
    // size |S| is exactly S.
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<std::size_t> best(full + 1, 0);
    auto boundary = [&](std::size_t s) {
        std::size_t c = 0;
        for (const auto& e : g.edges) c += (((s >> e.source) & 1U) != ((s >> e.target) & 1U)) ? 1 : 0;
        return c;
    };
    for (std::size_t s = 1; s <= full; ++s) {
        std::size_t m = SIZE_MAX;
        for (std::size_t v = 0; v < n; ++v) {
            if ((s >> v) & 1U) m = std::min(m, best[s & ~(std::size_t{1} << v)]);
        }
        best[s] = std::max(m, boundary(s));
    }
    return best[full];
}

std::string to_dot(const GenGraph& g) {
    std::string out = "digraph generator {\n";
    for (auto a : g.ord) {
        const auto& op = g.history.ops[a];
        out += "  \"" + op.id + "\" [label=\"" + op.id + "\\n" + op.proc + " [" + op.stime.to_string() + "," +
               op.rtime.to_string() + "]\"];\n";
    }
    for (const auto& e : g.edges) {
        out += "  \"" + g.history.ops[e.source].id + "\" -> \"" + g.history.ops[e.target].id + "\";\n";
    }
    out += "}\n";
    return out;
}

std::string cut_profile_csv(const GenGraph& g) {
    std::string out = "ell,crossing\n";
    const auto p = cut_profile(g);
    for (std::size_t i = 0; i < p.size(); ++i) out += std::to_string(i + 1) + "," + std::to_string(p[i]) + "\n";
    return out;
}

}  // namespace cmc
