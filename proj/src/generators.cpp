#include "cmc/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "cmc/error.hpp"
#include "cmc/word.hpp"

namespace cmc {

namespace {

MetaParams make_meta(const GeneratorConfig& cfg) {
    MetaParams meta;
    for (std::size_t i = 1; i <= cfg.num_procs; ++i) meta.processes.push_back("p" + std::to_string(i));
    for (std::size_t i = 1; i <= cfg.num_objects; ++i) meta.objects.push_back("x" + std::to_string(i));
    for (std::size_t i = 1; i <= cfg.num_values; ++i) meta.values.push_back("v" + std::to_string(i));
    return meta;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

void random_attributes(std::mt19937_64& rng, const GeneratorConfig& cfg, const MetaParams& meta, Operation& op) {
    op.obj = pick(rng, meta.objects);
    if (coin(rng, cfg.read_fraction)) {
        op.type = OpType::read;
        op.ival = Value::empty();
        if (coin(rng, cfg.undef_prob)) {
            op.oval = Value::undef();
        } else if (coin(rng, cfg.empty_read_prob)) {
            op.oval = Value::empty();
        } else {
            op.oval = Value::of(pick(rng, meta.values));
        }
    } else {
        op.type = OpType::write;
        op.ival = Value::of(pick(rng, meta.values));
        op.oval = coin(rng, cfg.undef_prob) ? Value::undef() : Value::empty();
    }
}

// A random linear extension of rb: repeatedly take a uniformly chosen
// operation all of whose rb-predecessors are already placed.
std::vector<std::size_t> random_extension(std::mt19937_64& rng, const History& h) {
    const auto n = h.size();
    const auto rbr = rb_relation(h);
    std::vector<std::size_t> pending(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) pending[b] += rbr.contains(a, b) ? 1 : 0;
    }
    std::vector<std::size_t> order;
    std::vector<bool> placed(n, false);
    while (order.size() < n) {
        std::vector<std::size_t> ready;
        for (std::size_t a = 0; a < n; ++a) {
            if (!placed[a] && pending[a] == 0) ready.push_back(a);
        }
        const auto a = pick(rng, ready);
        placed[a] = true;
        order.push_back(a);
        for (std::size_t b = 0; b < n; ++b) {
            if (rbr.contains(a, b)) --pending[b];
        }
    }
    return order;
}

Relation order_relation(const std::vector<std::size_t>& order) {
    Relation r(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) r.insert(order[i], order[j]);
    }
    return r;
}

}  // namespace

void check_config(const GeneratorConfig& cfg) {
    if (cfg.num_procs == 0 || cfg.num_objects == 0 || cfg.num_values == 0) {
        throw ValidationError("generator needs at least one process, object and value");
    }
    for (double p : {cfg.overlap, cfg.read_fraction, cfg.undef_prob, cfg.empty_read_prob, cfg.vis_density}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("generator probabilities must lie in [0, 1]");
    }
    if (cfg.k >= 0 && !cfg.real_time) throw ValidationError("k-transient generation needs real-time executions");
}

History gen_history(const GeneratorConfig& cfg) {
    check_config(cfg);
    std::mt19937_64 rng(cfg.seed);
    History h;
    h.meta = make_meta(cfg);
    const auto m = cfg.num_procs;
    std::vector<std::optional<std::size_t>> running(m);
    std::size_t started = 0;
    std::int64_t clock = 0;
    while (true) {
        std::vector<std::size_t> idle, busy;
        for (std::size_t p = 0; p < m; ++p) (running[p] ? busy : idle).push_back(p);
        const bool can_start = started < cfg.num_ops && !idle.empty();
        if (!can_start && busy.empty()) break;
        clock += std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
        const bool start = can_start && (busy.empty() || coin(rng, cfg.overlap));
        if (start) {
            const auto p = pick(rng, idle);
            Operation op;
            op.id = "o" + std::to_string(++started);
            op.proc = h.meta.processes[p];
            op.stime = Timestamp(clock);
            random_attributes(rng, cfg, h.meta, op);
            running[p] = h.ops.size();
            h.ops.push_back(std::move(op));
        } else {
            const auto p = pick(rng, busy);
            h.ops[*running[p]].rtime = Timestamp(clock);
            running[p].reset();
        }
    }
    return h;
}

AbstractExecution gen_exec(const GeneratorConfig& cfg) {
    auto h = gen_history(cfg);
    // A separate stream keeps the history identical to gen_history's.
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto n = h.size();
    AbstractExecution x;
    if (cfg.real_time) {
        x.ar = order_relation(random_extension(rng, h));
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        x.ar = order_relation(order);
    }
    // vis only points forward along some linear extension of rb, so it is
    // acyclic and never contradicts rb; freezing below keeps that.
    const auto vis_order = order_relation(cfg.real_time ? random_extension(rng, h) : [&] {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        return order;
    }());
    x.vis = Relation(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (vis_order.contains(a, b) && coin(rng, cfg.vis_density)) x.vis.insert(a, b);
        }
    }
    if (cfg.k >= 0) {
        const auto k = static_cast<std::size_t>(cfg.k);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t p = 0; p < h.meta.processes.size(); ++p) {
                const auto succ = successors_on(h, a, p);
                for (std::size_t i = 0; i < succ.size(); ++i) {
                    if (k == 0) {
                        x.vis.insert(a, succ[i]);
                    } else if (i >= k) {
                        x.vis.set(a, succ[i], x.vis.contains(a, succ[k - 1]));
                    }
                }
            }
        }
    }
    x.history = std::move(h);
    return x;
}

std::size_t enumerate_histories(const MetaParams& meta, std::size_t n,
                                const std::function<bool(const History&)>& visit) {
    if (!meta.problems().empty()) throw ValidationError("malformed universe for enumeration");
    const auto m = meta.processes.size();
    std::vector<Operation> options;
    for (const auto& o : meta.objects) {
        for (const auto& v : meta.values) {
            for (const auto& out : {Value::empty(), Value::undef()}) {
                Operation op;
                op.type = OpType::write;
                op.obj = o;
                op.ival = Value::of(v);
                op.oval = out;
                options.push_back(op);
            }
        }
        std::vector<Value> outs{Value::empty(), Value::undef()};
        for (const auto& v : meta.values) outs.push_back(Value::of(v));
        for (const auto& out : outs) {
            Operation op;
            op.type = OpType::read;
            op.obj = o;
            op.ival = Value::empty();
            op.oval = out;
            options.push_back(op);
        }
    }

    History h;
    h.meta = meta;
    std::size_t visited = 0;
    bool stop = false;
    std::function<void(std::size_t)> attrs = [&](std::size_t i) {
        if (stop) return;
        if (i == h.ops.size()) {
            ++visited;
            if (!visit(h)) stop = true;
            return;
        }
        for (const auto& o : options) {
            h.ops[i].type = o.type;
            h.ops[i].obj = o.obj;
            h.ops[i].ival = o.ival;
            h.ops[i].oval = o.oval;
            attrs(i + 1);
            if (stop) return;
        }
    };
    std::vector<std::optional<std::size_t>> running(m);
    std::function<void(std::int64_t, std::size_t, std::size_t)> shape = [&](std::int64_t pos, std::size_t started,
                                                                             std::size_t open) {
        if (stop) return;
        if (started == n && open == 0) {
            attrs(0);
            return;
        }
        for (std::size_t p = 0; p < m; ++p) {
            if (running[p]) {
                const auto idx = *running[p];
                h.ops[idx].rtime = Timestamp(pos);
                running[p].reset();
                shape(pos + 1, started, open - 1);
                running[p] = idx;
            } else if (started < n) {
                Operation op;
                op.id = "o" + std::to_string(started + 1);
                op.proc = meta.processes[p];
                op.stime = Timestamp(pos);
                h.ops.push_back(op);
                running[p] = h.ops.size() - 1;
                shape(pos + 1, started + 1, open + 1);
                running[p].reset();
                h.ops.pop_back();
            }
            if (stop) return;
        }
    };
    shape(1, 0, 0);
    return visited;
}

std::size_t enumerate_executions(const History& h, bool real_time, int k,
                                 const std::function<bool(const AbstractExecution&)>& visit) {
    const auto n = h.size();
    const auto rbr = rb_relation(h);
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && !rbr.contains(b, a)) candidates.emplace_back(a, b);
        }
    }
    if (candidates.size() > 20) throw CapExceeded("too many visibility candidates to enumerate");
    std::vector<Relation> visses;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
        Relation vis(n);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if ((mask >> i) & 1U) vis.insert(candidates[i].first, candidates[i].second);
        }
        if (vis.is_acyclic()) visses.push_back(std::move(vis));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t visited = 0;
    AbstractExecution x;
    x.history = h;
    do {
        auto ar = order_relation(order);
        bool ok = true;
        if (real_time) {
            for (std::size_t a = 0; a < n && ok; ++a) {
                for (std::size_t b = 0; b < n && ok; ++b) ok = !rbr.contains(a, b) || ar.contains(a, b);
            }
        }
        if (!ok) continue;
        x.ar = std::move(ar);
        for (const auto& vis : visses) {
            x.vis = vis;
            if (k >= 0 && transience_violation(x, k)) continue;
            ++visited;
            if (!visit(x)) return visited;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return visited;
}

}  // namespace cmc
