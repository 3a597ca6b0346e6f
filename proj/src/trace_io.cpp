#include "cmc/trace_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmc/error.hpp"

namespace cmc {

namespace {

using json = nlohmann::json;

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

Value parse_value(std::string_view text, bool allow_undef, std::size_t line) {
    if (text == "_") return Value::empty();
    if (text == "undef") {
        if (!allow_undef) throw ParseError(line, "undef is only allowed as an output value");
        return Value::undef();
    }
    if (text.empty()) throw ParseError(line, "missing value");
    return Value::of(std::string(text));
}

std::string value_text(const Value& v) {
    if (v.is_empty()) return "_";
    if (v.is_undef()) return "undef";
    return v.name;
}

OpType parse_type(std::string_view text, std::size_t line) {
    if (text == "read") return OpType::read;
    if (text == "write") return OpType::write;
    throw ParseError(line, "operation type must be read or write, got '" + std::string(text) + "'");
}

Timestamp parse_time(const std::string& text, std::size_t line) {
    try {
        return Timestamp::parse(text);
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

struct RawRelation {
    bool vis = false;
    std::string a, b;
    std::size_t line = 0;
};

Trace assemble(History h, const std::vector<RawRelation>& rels, bool exec) {
    std::set<std::string> ids;
    for (const auto& op : h.ops) {
        if (!ids.insert(op.id).second) throw ValidationError("duplicate operation id '" + op.id + "'");
    }
    if (!exec && rels.empty()) return h;
    AbstractExecution x;
    x.vis = Relation(h.size());
    x.ar = Relation(h.size());
    for (const auto& r : rels) {
        const auto a = h.find(r.a);
        const auto b = h.find(r.b);
        if (!a || !b) throw ParseError(r.line, "unknown operation id in relation line");
        (r.vis ? x.vis : x.ar).insert(*a, *b);
    }
    x.history = std::move(h);
    return x;
}

void check(const Trace& t) {
    std::vector<Violation> v;
    if (const auto* x = std::get_if<AbstractExecution>(&t)) {
        v = validate_execution(*x, false);
    } else {
        v = validate_history(std::get<History>(t));
    }
    if (v.empty()) return;
    std::string msg = "invalid trace:";
    for (const auto& e : v) msg += "\n  " + e.message();
    throw ValidationError(msg);
}

}  // namespace

Trace parse_trace_unchecked(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return trace_from_json(text);
    History h;
    std::vector<RawRelation> rels;
    bool exec = false;
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        const auto& head = tok[0];
        if (head == "processes") {
            h.meta.processes.assign(tok.begin() + 1, tok.end());
        } else if (head == "objects") {
            h.meta.objects.assign(tok.begin() + 1, tok.end());
        } else if (head == "values") {
            h.meta.values.assign(tok.begin() + 1, tok.end());
        } else if (head == "execution") {
            if (tok.size() != 1) throw ParseError(lineno, "'execution' takes no arguments");
            exec = true;
        } else if (head == "op") {
            if (tok.size() != 9) throw ParseError(lineno, "op line needs 8 fields");
            if (tok[7].rfind("ival=", 0) != 0 || tok[8].rfind("oval=", 0) != 0) {
                throw ParseError(lineno, "expected ival=... oval=...");
            }
            Operation op;
            op.id = tok[1];
            op.proc = tok[2];
            op.stime = parse_time(tok[3], lineno);
            op.rtime = parse_time(tok[4], lineno);
            op.type = parse_type(tok[5], lineno);
            op.obj = tok[6];
            op.ival = parse_value(std::string_view(tok[7]).substr(5), false, lineno);
            op.oval = parse_value(std::string_view(tok[8]).substr(5), true, lineno);
            h.ops.push_back(std::move(op));
        } else if (head == "vis" || head == "ar") {
            if (tok.size() != 3) throw ParseError(lineno, head + " line needs two operation ids");
            rels.push_back({head == "vis", tok[1], tok[2], lineno});
        } else {
            throw ParseError(lineno, "unknown directive '" + head + "'");
        }
    }
    return assemble(std::move(h), rels, exec);
}

Trace parse_trace(std::string_view text) {
    auto t = parse_trace_unchecked(text);
    check(t);
    return t;
}

const History& history_of(const Trace& t) {
    return std::visit([](const auto& v) -> const History& {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, History>) {
            return v;
        } else {
            return v.history;
        }
    }, t);
}

std::string serialize_trace(const History& h) {
    std::string out;
    auto list = [&](const char* head, const std::vector<std::string>& items) {
        out += head;
        for (const auto& s : items) out += " " + s;
        out += "\n";
    };
    list("processes", h.meta.processes);
    list("objects", h.meta.objects);
    list("values", h.meta.values);
    for (const auto& op : h.ops) {
        out += "op " + op.id + " " + op.proc + " " + op.stime.to_string() + " " + op.rtime.to_string() + " " +
               std::string(to_string(op.type)) + " " + op.obj + " ival=" + value_text(op.ival) +
               " oval=" + value_text(op.oval) + "\n";
    }
    return out;
}

std::string serialize_trace(const AbstractExecution& x) {
    const auto& h = x.history;
    std::string out = serialize_trace(h);
    out += "execution\n";
    for (std::size_t a = 0; a < h.size(); ++a) {
        for (std::size_t b = 0; b < h.size(); ++b) {
            if (x.vis.contains(a, b)) out += "vis " + h.ops[a].id + " " + h.ops[b].id + "\n";
        }
    }
    for (std::size_t a = 0; a < h.size(); ++a) {
        for (std::size_t b = 0; b < h.size(); ++b) {
            if (x.ar.contains(a, b)) out += "ar " + h.ops[a].id + " " + h.ops[b].id + "\n";
        }
    }
    return out;
}

std::string serialize_trace(const Trace& t) {
    return std::visit([](const auto& v) { return serialize_trace(v); }, t);
}

std::string trace_to_json(const Trace& t) {
    const auto& h = history_of(t);
    json j;
    j["processes"] = h.meta.processes;
    j["objects"] = h.meta.objects;
    j["values"] = h.meta.values;
    j["ops"] = json::array();
    for (const auto& op : h.ops) {
        j["ops"].push_back({{"id", op.id},
                            {"proc", op.proc},
                            {"stime", op.stime.to_string()},
                            {"rtime", op.rtime.to_string()},
                            {"type", std::string(to_string(op.type))},
                            {"obj", op.obj},
                            {"ival", value_text(op.ival)},
                            {"oval", value_text(op.oval)}});
    }
    if (const auto* x = std::get_if<AbstractExecution>(&t)) {
        auto pairs = [&](const Relation& r) {
            json arr = json::array();
            for (std::size_t a = 0; a < h.size(); ++a) {
                for (std::size_t b = 0; b < h.size(); ++b) {
                    if (r.contains(a, b)) arr.push_back({h.ops[a].id, h.ops[b].id});
                }
            }
            return arr;
        };
        j["execution"] = true;
        j["vis"] = pairs(x->vis);
        j["ar"] = pairs(x->ar);
    }
    return j.dump(2) + "\n";
}

Trace trace_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("bad JSON: ") + e.what());
    }
    try {
        History h;
        h.meta.processes = j.value("processes", std::vector<std::string>{});
        h.meta.objects = j.value("objects", std::vector<std::string>{});
        h.meta.values = j.value("values", std::vector<std::string>{});
        for (const auto& o : j.value("ops", json::array())) {
            Operation op;
            op.id = o.at("id").get<std::string>();
            op.proc = o.at("proc").get<std::string>();
            op.stime = parse_time(o.at("stime").get<std::string>(), 0);
            op.rtime = parse_time(o.at("rtime").get<std::string>(), 0);
            op.type = parse_type(o.at("type").get<std::string>(), 0);
            op.obj = o.at("obj").get<std::string>();
            op.ival = parse_value(o.at("ival").get<std::string>(), false, 0);
            op.oval = parse_value(o.at("oval").get<std::string>(), true, 0);
            h.ops.push_back(std::move(op));
        }
        std::vector<RawRelation> rels;
        for (const char* key : {"vis", "ar"}) {
            for (const auto& p : j.value(key, json::array())) {
                rels.push_back({std::string(key) == "vis", p.at(0).get<std::string>(), p.at(1).get<std::string>(), 0});
            }
        }
        return assemble(std::move(h), rels, j.value("execution", false));
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("bad trace JSON: ") + e.what());
    }
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok.size() != 5) throw ParseError(lineno, "manifest line needs: file model engine k verdict");
        ManifestEntry e;
        e.file = tok[0];
        e.model = tok[1];
        e.engine = tok[2];
        try {
            e.k = std::stoi(tok[3]);
        } catch (const std::exception&) {
            throw ParseError(lineno, "k must be an integer");
        }
        if (tok[4] != "holds" && tok[4] != "violated") throw ParseError(lineno, "verdict must be holds or violated");
        e.holds = tok[4] == "holds";
        out.push_back(std::move(e));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace cmc
