#include "cmc/word.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "cmc/error.hpp"

namespace cmc {

namespace {

std::size_t bits_for(std::size_t n) {
    std::size_t w = 0;
    while ((std::size_t{1} << w) < n) ++w;
    return w;
}

void write_group(const BitLayout& layout, Bits& letter, std::string_view group, std::uint32_t code) {
    const auto& g = layout.group(group);
    for (std::size_t b = 0; b < g.width; ++b) {
        letter[g.offset + b] = (code >> (g.width - 1 - b)) & 1U;
    }
}

void require_valid(const History& h) {
    const auto v = validate_history(h);
    if (!v.empty()) throw ValidationError("invalid history: " + v.front().message());
}

struct Event {
    Timestamp t;
    std::size_t op;
    bool start;
};

std::vector<Event> events_of(const History& h) {
    std::vector<Event> ev;
    ev.reserve(2 * h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        ev.push_back({h.ops[i].stime, i, true});
        ev.push_back({h.ops[i].rtime, i, false});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return ev;
}

WordModel encode_with(const History& h, const BitLayout& layout) {
    require_valid(h);
    WordModel w;
    w.meta = h.meta;
    w.layout = layout;
    w.letters.emplace_back(layout.width(), 0);
    w.events.emplace_back();
    Bits active(layout.width(), 0);
    for (const auto& e : events_of(h)) {
        const auto& op = h.ops[e.op];
        const auto p = h.proc_index(e.op);
        active[layout.active(p)] = e.start ? 1 : 0;
        Bits letter = active;
        if (layout.mode() != EncodingMode::timeline) {
            letter[layout.type()] = op.type == OpType::write ? 1 : 0;
            const Value& v = e.start && op.type == OpType::write ? op.ival : op.oval;
            write_group(layout, letter, "val", value_code(layout, h.meta, v));
            write_group(layout, letter, "obj", static_cast<std::uint32_t>(*h.meta.object_index(op.obj)));
        }
        w.letters.push_back(std::move(letter));
        w.events.push_back(WordEvent{op.id, e.start});
    }
    return w;
}

std::string group_row(const BitLayout& layout, const Bits& letter) {
    std::string row;
    bool first = true;
    for (const auto& g : layout.groups()) {
        if (!first) row += '|';
        first = false;
        for (std::size_t b = 0; b < g.width; ++b) row += letter[g.offset + b] ? '1' : '0';
    }
    return row;
}

}  // namespace

BitLayout::BitLayout(const MetaParams& meta, EncodingMode mode, int k) : mode_(mode), k_(k) {
    const auto problems = meta.problems();
    if (!problems.empty()) throw ValidationError("invalid meta parameters: " + problems.front());
    if (mode == EncodingMode::exec && k < 0) throw ValidationError("transience bound must be non-negative");
    if (mode != EncodingMode::exec) k_ = 0;
    m_ = meta.processes.size();
    num_values_ = meta.values.size();
    num_objects_ = meta.objects.size();
    add("active", m_);
    if (mode == EncodingMode::timeline) return;
    add("type", 1);
    add("val", bits_for(num_values_ + 2));
    add("obj", bits_for(num_objects_));
    if (mode == EncodingMode::history) return;
    add("arc", m_ - 1);
    add("visc", 2 * (m_ - 1));
    add("visrb", static_cast<std::size_t>(k_) * m_);
}

void BitLayout::add(std::string name, std::size_t width) {
    groups_.push_back({std::move(name), width_, width});
    width_ += width;
}

const LaneGroup& BitLayout::group(std::string_view name) const {
    for (const auto& g : groups_) {
        if (g.name == name) return g;
    }
    throw EncodingError("layout has no lane group '" + std::string(name) + "'");
}

namespace {

std::size_t at(const LaneGroup& g, std::size_t i) {
    if (i >= g.width) throw EncodingError("lane index out of range in group '" + g.name + "'");
    return g.offset + i;
}

}  // namespace

std::size_t BitLayout::active(std::size_t proc) const { return at(group("active"), proc); }
std::size_t BitLayout::type() const { return at(group("type"), 0); }
std::size_t BitLayout::val(std::size_t bit) const { return at(group("val"), bit); }
std::size_t BitLayout::obj(std::size_t bit) const { return at(group("obj"), bit); }
std::size_t BitLayout::arc(std::size_t slot) const { return at(group("arc"), slot); }
std::size_t BitLayout::visc_out(std::size_t slot) const { return at(group("visc"), slot); }
std::size_t BitLayout::visc_in(std::size_t slot) const { return at(group("visc"), m_ - 1 + slot); }

std::size_t BitLayout::visrb(std::size_t proc, std::size_t idx) const {
    if (idx >= static_cast<std::size_t>(k_)) throw EncodingError("visrb index beyond the transience bound");
    return at(group("visrb"), proc * static_cast<std::size_t>(k_) + idx);
}

std::string BitLayout::lane_name(std::size_t bit) const {
    for (const auto& g : groups_) {
        if (bit >= g.offset && bit < g.offset + g.width) return g.name + std::to_string(bit - g.offset);
    }
    throw EncodingError("bit index " + std::to_string(bit) + " outside the layout");
}

std::uint32_t value_code(const BitLayout& layout, const MetaParams& meta, const Value& v) {
    if (v.is_empty()) return layout.empty_code();
    if (v.is_undef()) return layout.undef_code();
    auto i = meta.value_index(v.name);
    if (!i) throw EncodingError("value '" + v.name + "' not in the value universe");
    return static_cast<std::uint32_t>(*i);
}

std::uint32_t read_group(const BitLayout& layout, const Bits& letter, std::string_view group) {
    const auto& g = layout.group(group);
    std::uint32_t code = 0;
    for (std::size_t b = 0; b < g.width; ++b) code = (code << 1) | (letter[g.offset + b] ? 1U : 0U);
    return code;
}

WordModel encode_timeline(const History& h) {
    require_valid(h);
    return encode_with(h, BitLayout(h.meta, EncodingMode::timeline));
}

WordModel encode(const History& h) {
    require_valid(h);
    return encode_with(h, BitLayout(h.meta, EncodingMode::history));
}

std::optional<std::string> transience_violation(const AbstractExecution& x, int k) {
    if (k < 0) return "transience bound must be non-negative";
    const auto& h = x.history;
    for (std::size_t a = 0; a < h.size(); ++a) {
        for (std::size_t p = 0; p < h.meta.processes.size(); ++p) {
            const auto bs = successors_on(h, a, p);
            for (std::size_t i = static_cast<std::size_t>(k); i < bs.size(); ++i) {
                const bool expected = k == 0 ? true : x.vis.contains(a, bs[static_cast<std::size_t>(k) - 1]);
                if (x.vis.contains(a, bs[i]) != expected) {
                    return "visibility of " + h.ops[a].id + " to " + h.ops[bs[i]].id + " on " + h.meta.processes[p] +
                           " differs from the frozen value after " + std::to_string(k) + " successors";
                }
            }
        }
    }
    return std::nullopt;
}

WordModel encode_exec(const AbstractExecution& x, int k) {
    if (k < 0) throw EncodingError("transience bound must be non-negative");
    const auto problems = validate_execution(x, true);
    if (!problems.empty()) throw EncodingError("execution is not a valid real-time execution: " + problems.front().message());
    if (auto v = transience_violation(x, k)) throw EncodingError("execution is not " + std::to_string(k) + "-transient: " + *v);

    const auto& h = x.history;
    const BitLayout layout(h.meta, EncodingMode::exec, k);
    WordModel w = encode_with(h, layout);
    const auto m = layout.processes();

    // Operation active on each process just before each start.
    std::vector<std::optional<std::size_t>> running(m);
    for (std::size_t pos = 1; pos < w.letters.size(); ++pos) {
        const auto& ev = *w.events[pos];
        const auto a = h.index_of(ev.op);
        const auto i = h.proc_index(a);
        if (!ev.start) {
            running[i].reset();
            continue;
        }
        auto& letter = w.letters[pos];
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i || !running[j]) continue;
            const auto b = *running[j];
            const auto s = BitLayout::slot(i, j);
            letter[layout.arc(s)] = x.ar.contains(a, b) ? 1 : 0;
            letter[layout.visc_out(s)] = x.vis.contains(a, b) ? 1 : 0;
            letter[layout.visc_in(s)] = x.vis.contains(b, a) ? 1 : 0;
        }
        for (std::size_t q = 0; q < m; ++q) {
            const auto bs = successors_on(h, a, q);
            for (std::size_t idx = 0; idx < static_cast<std::size_t>(k) && idx < bs.size(); ++idx) {
                letter[layout.visrb(q, idx)] = x.vis.contains(a, bs[idx]) ? 1 : 0;
            }
        }
        running[i] = a;
    }
    return w;
}

namespace {

[[noreturn]] void bad(std::size_t pos, const std::string& what) {
    throw EncodingError("position " + std::to_string(pos) + ": " + what);
}

struct Skeleton {
    History h;
    std::vector<std::size_t> start_pos;   // per op
    std::vector<std::size_t> return_pos;  // per op
    std::vector<std::size_t> op_at;       // per position, ops index (unused at 0)
};

Skeleton decode_skeleton(const WordModel& w) {
    const auto& L = w.layout;
    if (L.processes() != w.meta.processes.size() || L.num_values() != w.meta.values.size() ||
        L.num_objects() != w.meta.objects.size()) {
        throw EncodingError("layout does not match the meta parameters");
    }
    if (w.letters.empty()) throw EncodingError("empty word");
    for (std::size_t p = 0; p < w.letters.size(); ++p) {
        if (w.letters[p].size() != L.width()) bad(p, "letter width does not match the layout");
    }
    if (std::any_of(w.letters[0].begin(), w.letters[0].end(), [](auto b) { return b != 0; })) {
        bad(0, "first letter is not null");
    }
    const bool annotated = w.events.size() == w.letters.size();
    const auto m = L.processes();
    const bool attrs = L.mode() != EncodingMode::timeline;
    const bool exec = L.mode() == EncodingMode::exec;

    Skeleton sk;
    sk.h.meta = w.meta;
    sk.op_at.assign(w.letters.size(), 0);
    std::vector<std::optional<std::size_t>> running(m);
    std::vector<std::uint32_t> start_val;

    for (std::size_t pos = 1; pos < w.letters.size(); ++pos) {
        const auto& prev = w.letters[pos - 1];
        const auto& cur = w.letters[pos];
        std::vector<std::size_t> flips;
        for (std::size_t i = 0; i < m; ++i) {
            if (prev[L.active(i)] != cur[L.active(i)]) flips.push_back(i);
        }
        if (flips.size() != 1) bad(pos, std::to_string(flips.size()) + " process lanes change (expected exactly one)");
        const auto i = flips.front();
        const bool start = cur[L.active(i)] == 1;
        const auto type = attrs && cur[L.type()] ? OpType::write : OpType::read;
        const auto val = attrs ? read_group(L, cur, "val") : L.empty_code();
        const auto obj = attrs ? read_group(L, cur, "obj") : 0U;
        if (attrs) {
            if (obj >= L.num_objects()) bad(pos, "object code out of range");
            if (val > L.empty_code() && val != L.undef_code()) bad(pos, "invalid value code");
        }
        if (start) {
            Operation op;
            const auto idx = sk.h.ops.size();
            if (annotated && w.events[pos]) {
                op.id = w.events[pos]->op;
            } else {
                op.id = "o" + std::to_string(idx + 1);
            }
            op.proc = w.meta.processes[i];
            op.stime = Timestamp(static_cast<std::int64_t>(pos));
            op.type = type;
            op.obj = w.meta.objects[obj];
            auto as_value = [&](std::uint32_t code) {
                if (code == L.empty_code()) return Value::empty();
                if (code == L.undef_code()) return Value::undef();
                return Value::of(w.meta.values[code]);
            };
            if (type == OpType::write) {
                if (val >= L.num_values()) bad(pos, "write starts without an input value");
                op.ival = as_value(val);
            } else {
                op.ival = Value::empty();
                op.oval = attrs ? as_value(val) : Value::empty();
            }
            sk.h.ops.push_back(std::move(op));
            sk.start_pos.push_back(pos);
            sk.return_pos.push_back(0);
            start_val.push_back(val);
            running[i] = idx;
            sk.op_at[pos] = idx;
        } else {
            const auto idx = *running[i];
            auto& op = sk.h.ops[idx];
            if (attrs) {
                if (type != op.type) bad(pos, "type lane differs between start and return");
                if (w.meta.objects[obj] != op.obj) bad(pos, "object lane differs between start and return");
                if (op.type == OpType::write) {
                    if (val == L.empty_code()) {
                        op.oval = Value::empty();
                    } else if (val == L.undef_code()) {
                        op.oval = Value::undef();
                    } else {
                        bad(pos, "write returns a value");
                    }
                } else if (val != start_val[idx]) {
                    bad(pos, "read output differs between start and return");
                }
            }
            op.rtime = Timestamp(static_cast<std::int64_t>(pos));
            sk.return_pos[idx] = pos;
            sk.op_at[pos] = idx;
            running[i].reset();
        }
        if (annotated && pos < w.events.size() && w.events[pos]) {
            const auto& ev = *w.events[pos];
            if (ev.start != start || ev.op != sk.h.ops[sk.op_at[pos]].id) bad(pos, "event annotation disagrees with the lanes");
        }
        // Exec lanes: zero except at starts, and then only where justified.
        if (exec) {
            const auto& arc = L.group("arc");
            const auto& visrb = L.group("visrb");
            const auto first_exec = arc.offset;
            const auto end_exec = visrb.offset + visrb.width;
            if (!start) {
                for (std::size_t b = first_exec; b < end_exec; ++b) {
                    if (cur[b]) bad(pos, "exec lane set at a return position");
                }
            } else {
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i || running[j]) continue;
                    const auto s = BitLayout::slot(i, j);
                    if (cur[L.arc(s)] || cur[L.visc_out(s)] || cur[L.visc_in(s)]) {
                        bad(pos, "concurrency lane set for an idle process");
                    }
                }
            }
        }
    }
    const auto& last = w.letters.back();
    for (std::size_t i = 0; i < m; ++i) {
        if (last[L.active(i)]) bad(w.letters.size() - 1, "operation never returns");
    }
    return sk;
}

}  // namespace

History decode_history(const WordModel& w) {
    if (w.layout.mode() == EncodingMode::exec) throw EncodingError("exec-mode word: use decode_exec");
    return decode_skeleton(w).h;
}

AbstractExecution decode_exec(const WordModel& w) {
    if (w.layout.mode() != EncodingMode::exec) throw EncodingError("word is not in exec mode");
    auto sk = decode_skeleton(w);
    const auto& L = w.layout;
    const auto& h = sk.h;
    const auto n = h.size();
    const auto m = L.processes();
    const auto k = static_cast<std::size_t>(L.k());

    AbstractExecution x{h, Relation(n), Relation(n)};
    for (std::size_t a = 0; a < n; ++a) {
        const auto& letter = w.letters[sk.start_pos[a]];
        const auto i = h.proc_index(a);
        for (std::size_t b = 0; b < n; ++b) {
            if (rb(h, a, b)) x.ar.insert(a, b);
        }
        // Concurrent operations that started earlier are exactly the ones
        // still running at this start.
        for (std::size_t b = 0; b < n; ++b) {
            if (h.proc_index(b) == i || sk.start_pos[b] > sk.start_pos[a] || sk.return_pos[b] < sk.start_pos[a]) continue;
            const auto s = BitLayout::slot(i, h.proc_index(b));
            if (letter[L.arc(s)]) {
                x.ar.insert(a, b);
            } else {
                x.ar.insert(b, a);
            }
            if (letter[L.visc_out(s)]) x.vis.insert(a, b);
            if (letter[L.visc_in(s)]) x.vis.insert(b, a);
        }
        for (std::size_t q = 0; q < m; ++q) {
            const auto bs = successors_on(h, a, q);
            for (std::size_t idx = 0; idx < k; ++idx) {
                if (letter[L.visrb(q, idx)] && idx >= bs.size()) {
                    bad(sk.start_pos[a], "visibility lane set for a missing successor");
                }
            }
            for (std::size_t idx = 0; idx < bs.size(); ++idx) {
                const bool v = k == 0 ? true : letter[L.visrb(q, std::min(idx, k - 1))] != 0;
                if (v) x.vis.insert(a, bs[idx]);
            }
        }
    }
    if (!x.ar.is_strict_total_order()) throw EncodingError("reconstructed arbitration is cyclic");
    if (!x.vis.is_acyclic()) throw EncodingError("reconstructed visibility is cyclic");
    return x;
}

std::variant<History, AbstractExecution> decode(const WordModel& w) {
    if (w.layout.mode() == EncodingMode::exec) return decode_exec(w);
    return decode_history(w);
}

namespace {

std::vector<std::size_t> canonical_order(const History& h) { return h.ord(); }

History renumber(const History& h, const std::vector<std::size_t>& order) {
    std::vector<Timestamp> times;
    for (const auto& op : h.ops) {
        times.push_back(op.stime);
        times.push_back(op.rtime);
    }
    std::sort(times.begin(), times.end());
    auto rank = [&](const Timestamp& t) {
        return Timestamp(static_cast<std::int64_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin()) + 1);
    };
    History out;
    out.meta = h.meta;
    for (auto i : order) {
        auto op = h.ops[i];
        op.stime = rank(op.stime);
        op.rtime = rank(op.rtime);
        out.ops.push_back(std::move(op));
    }
    return out;
}

}  // namespace

History canonical_form(const History& h) { return renumber(h, canonical_order(h)); }

AbstractExecution canonical_form(const AbstractExecution& x) {
    const auto order = canonical_order(x.history);
    const auto n = order.size();
    AbstractExecution out{renumber(x.history, order), Relation(n), Relation(n)};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            out.vis.set(a, b, x.vis.contains(order[a], order[b]));
            out.ar.set(a, b, x.ar.contains(order[a], order[b]));
        }
    }
    return out;
}

namespace {

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += " " + x;
    return out;
}

std::string_view mode_name(EncodingMode m) {
    switch (m) {
        case EncodingMode::timeline: return "timeline";
        case EncodingMode::history: return "history";
        case EncodingMode::exec: return "exec";
    }
    return "history";
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::string serialize(const WordModel& w) {
    std::string out = "processes" + join(w.meta.processes) + "\n";
    out += "objects" + join(w.meta.objects) + "\n";
    out += "values" + join(w.meta.values) + "\n";
    out += "mode " + std::string(mode_name(w.layout.mode()));
    if (w.layout.mode() == EncodingMode::exec) out += " k=" + std::to_string(w.layout.k());
    out += "\nlanes";
    for (const auto& g : w.layout.groups()) out += " " + g.name + ":" + std::to_string(g.width);
    out += "\n";
    for (std::size_t p = 0; p < w.letters.size(); ++p) {
        out += group_row(w.layout, w.letters[p]);
        if (p < w.events.size() && w.events[p]) {
            out += " ; " + w.events[p]->op + (w.events[p]->start ? " start" : " return");
        }
        out += "\n";
    }
    return out;
}

WordModel parse_word(std::string_view text) {
    WordModel w;
    std::optional<EncodingMode> mode;
    int k = 0;
    bool have_lanes = false;
    bool any_event = false;
    std::vector<std::pair<std::string, std::size_t>> lanes;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        auto toks = split_ws(line);
        const auto& head = toks.front();
        if (!have_lanes) {
            std::vector<std::string> rest(toks.begin() + 1, toks.end());
            if (head == "processes") {
                w.meta.processes = rest;
            } else if (head == "objects") {
                w.meta.objects = rest;
            } else if (head == "values") {
                w.meta.values = rest;
            } else if (head == "mode") {
                if (rest.empty()) throw ParseError(lineno, "missing mode");
                if (rest[0] == "timeline") {
                    mode = EncodingMode::timeline;
                } else if (rest[0] == "history") {
                    mode = EncodingMode::history;
                } else if (rest[0] == "exec") {
                    mode = EncodingMode::exec;
                } else {
                    throw ParseError(lineno, "unknown mode '" + rest[0] + "'");
                }
                for (std::size_t i = 1; i < rest.size(); ++i) {
                    if (rest[i].rfind("k=", 0) != 0) throw ParseError(lineno, "unexpected '" + rest[i] + "'");
                    try {
                        k = std::stoi(rest[i].substr(2));
                    } catch (const std::exception&) {
                        throw ParseError(lineno, "bad transience bound");
                    }
                }
            } else if (head == "lanes") {
                for (const auto& r : rest) {
                    const auto colon = r.find(':');
                    if (colon == std::string::npos) throw ParseError(lineno, "lane spec must be name:width");
                    try {
                        lanes.emplace_back(r.substr(0, colon), std::stoul(r.substr(colon + 1)));
                    } catch (const std::exception&) {
                        throw ParseError(lineno, "bad lane width in '" + r + "'");
                    }
                }
                if (!mode) throw ParseError(lineno, "lanes line before mode line");
                try {
                    w.layout = BitLayout(w.meta, *mode, k);
                } catch (const Error& e) {
                    throw ParseError(lineno, e.what());
                }
                std::vector<std::pair<std::string, std::size_t>> expect;
                for (const auto& g : w.layout.groups()) expect.emplace_back(g.name, g.width);
                if (expect != lanes) throw ParseError(lineno, "lane line does not match the layout implied by the header");
                have_lanes = true;
            } else {
                throw ParseError(lineno, "unknown header '" + head + "'");
            }
            continue;
        }
        std::string row = line;
        std::optional<WordEvent> ev;
        if (auto semi = line.find(';'); semi != std::string::npos) {
            row = line.substr(0, semi);
            auto tail = split_ws(line.substr(semi + 1));
            if (tail.size() != 2 || (tail[1] != "start" && tail[1] != "return")) {
                throw ParseError(lineno, "event annotation must be '<id> start|return'");
            }
            ev = WordEvent{tail[0], tail[1] == "start"};
            any_event = true;
        }
        row.erase(std::remove_if(row.begin(), row.end(), [](char c) { return c == ' ' || c == '\t'; }), row.end());
        Bits letter;
        std::size_t group = 0;
        std::size_t in_group = 0;
        for (char c : row) {
            if (c == '|') {
                if (group >= w.layout.groups().size() || in_group != w.layout.groups()[group].width) {
                    throw ParseError(lineno, "group width mismatch");
                }
                ++group;
                in_group = 0;
            } else if (c == '0' || c == '1') {
                letter.push_back(c == '1' ? 1 : 0);
                ++in_group;
            } else {
                throw ParseError(lineno, std::string("unexpected character '") + c + "' in row");
            }
        }
        if (group + 1 != w.layout.groups().size() || in_group != w.layout.groups().back().width) {
            throw ParseError(lineno, "row does not have the layout's groups");
        }
        w.letters.push_back(std::move(letter));
        w.events.push_back(std::move(ev));
    }
    if (!have_lanes) throw ParseError(lineno, "missing lanes line");
    if (!any_event) w.events.clear();
    return w;
}

}  // namespace cmc
