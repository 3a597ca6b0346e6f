#include "cmc/models.hpp"

#include <regex>
#include <sstream>

#include "cmc/error.hpp"
#include "cmc/generators.hpp"
#include "cmc/translator.hpp"
#include "cmc/word.hpp"

namespace cmc {

namespace {

const char* const kW = "a.type = write => a.oval = _";
const char* const kR = "a.type = read => lastwrite(a,a)";

std::string rval_text() { return std::string("forall1 a. (") + kW + ") & (" + kR + ")"; }

const char* const kRealTime = "forall1 a. forall1 b. rb(a,b) => ar(a,b)";
const char* const kSingleOrder =
    "exists2 X. (forall1 x. x in X => x.oval = undef) & "
    "(forall1 a. forall1 b. vis(a,b) <=> ar(a,b) & ~(a in X))";
const char* const kFiniteInconsistency = "exists1 a. a.type = read & finite{b | ~lastwrite(a,b)}";
const char* const kMonotonicReads = "forall1 a. forall1 b. forall1 c. vis(a,b) & sorr(b,c) => vis(a,c)";
const char* const kReadYourWrites =
    "forall1 a. forall1 b. a.type = write & b.type = read => (so(a,b) => vis(a,b))";

ModelDef make(std::string name, const std::string& text, std::string notes) {
    ModelDef d;
    d.name = std::move(name);
    d.formula = parse_formula(text);
    d.requires_exec = uses_exec_relations(d.formula);
    d.notes = std::move(notes);
    return d;
}

// Replaces every @NAME by the parenthesized text of a known model.
std::string substitute(const std::string& body, const std::vector<ModelDef>& known) {
    static const std::regex ref(R"(@([A-Za-z_][A-Za-z0-9_]*))");
    std::string out;
    auto it = std::sregex_iterator(body.begin(), body.end(), ref);
    std::size_t last = 0;
    for (; it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        out += body.substr(last, static_cast<std::size_t>(m.position()) - last);
        out += "(" + to_string(find_model(m[1].str(), known).formula) + ")";
        last = static_cast<std::size_t>(m.position() + m.length());
    }
    out += body.substr(last);
    return out;
}

Verdict direct_verdict(const Model& model, const ModelDef& def, const EvalOptions& eo) {
    Verdict v;
    if (check_model(model, def.formula, eo)) return v;
    v.holds = false;
    v.witness = find_counterexample(model, def.formula, eo);
    if (v.witness) v.witness_text = describe(model, *v.witness);
    return v;
}

Trace decode_trace(const WordModel& w) {
    return std::visit([](auto&& v) -> Trace { return std::move(v); }, decode(w));
}

bool evaluates(const Trace& t, const FormulaPtr& phi, const EvalOptions& eo) {
    return std::visit([&](const auto& v) { return check_model(Model(v), phi, eo); }, t);
}

}  // namespace

const std::vector<ModelDef>& builtin_models() {
    static const std::vector<ModelDef> models = [] {
        std::vector<ModelDef> m;
        m.push_back(make("RVal", rval_text(),
                         "writes output the empty value; reads output the arbitration-last visible write on "
                         "their object (any value when no write is visible)"));
        m.push_back(make("RealTime", kRealTime, "rb is contained in ar"));
        m.push_back(make("SingleOrder", kSingleOrder,
                         "vis is ar minus the pairs leaving a set of operations that never returned"));
        m.push_back(make("Linearizability",
                         std::string("(") + kSingleOrder + ") & (" + kRealTime + ") & (" + rval_text() + ")",
                         "SingleOrder, RealTime and RVal together"));
        m.push_back(make("QuiescentConsistency",
                         std::string("finite{a | a.type = write} => (") + kFiniteInconsistency + ")",
                         "on finite traces the antecedent always holds, so this reduces to "
                         "FiniteInconsistency"));
        m.push_back(make("MonotonicReads", kMonotonicReads, "visibility is inherited along read-read session order"));
        m.push_back(make("ReadYourWrites", kReadYourWrites, "a process sees its own earlier writes"));
        return m;
    }();
    return models;
}

const std::vector<std::pair<std::string, std::string>>& catalog_macros() {
    static const std::vector<std::pair<std::string, std::string>> macros{
        {"W", kW},
        {"R", kR},
        {"ctxt", "ctxt(b,a) := vis(b,a) & b.type = write & b.obj = a.obj"},
        {"lastWrite", "lastwrite(a,v) := forall1 b. ctxt(b,a) & b.ival != v.oval => exists1 c. ctxt(c,a) & ar(b,c)"},
        {"sorr", "sorr(a,b) := a.type = read & b.type = read & so(a,b)"},
        {"FiniteInconsistency", kFiniteInconsistency},
    };
    return macros;
}

std::vector<ModelDef> load_model_file(std::string_view text) {
    std::string clean;
    {
        std::istringstream in{std::string(text)};
        for (std::string line; std::getline(in, line);) {
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            clean += line + "\n";
        }
    }
    std::vector<ModelDef> out;
    std::size_t pos = 0;
    while (true) {
        const auto semi = clean.find(';', pos);
        const auto chunk = clean.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        if (chunk.find_first_not_of(" \t\r\n") == std::string::npos) {
            if (semi == std::string::npos) break;
            pos = semi + 1;
            continue;
        }
        const auto def = chunk.find(":=");
        if (def == std::string::npos) throw FormulaError("model definition needs 'NAME := formula ;'");
        std::istringstream name_in(chunk.substr(0, def));
        std::string name, extra;
        name_in >> name;
        if (name.empty() || (name_in >> extra)) throw FormulaError("bad model name in definition");
        auto m = make(name, substitute(chunk.substr(def + 2), out), "user-supplied");
        if (!free_variables(m.formula).closed()) throw FormulaError("model '" + name + "' is not closed");
        out.push_back(std::move(m));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

const ModelDef& find_model(std::string_view name, const std::vector<ModelDef>& extra) {
    for (const auto& m : extra) {
        if (m.name == name) return m;
    }
    for (const auto& m : builtin_models()) {
        if (m.name == name) return m;
    }
    throw Error("unknown model '" + std::string(name) + "'");
}

Verdict check_trace(const Trace& trace, const ModelDef& model, const CheckOptions& opts) {
    const auto* x = std::get_if<AbstractExecution>(&trace);
    if (model.requires_exec && !x) {
        throw Error("model '" + model.name + "' needs vis/ar, but the trace is a bare history");
    }
    if (opts.engine == Engine::direct) {
        if (x) return direct_verdict(Model(*x), model, opts.eval);
        return direct_verdict(Model(std::get<History>(trace)), model, opts.eval);
    }
    const auto word = x ? encode_exec(*x, opts.k) : encode(std::get<History>(trace));
    Verdict v;
    v.holds = holds_on_word(model.formula, word, opts.compile);
    return v;
}

MetaParams search_universe(const SearchBounds& bounds) {
    GeneratorConfig cfg;
    cfg.num_procs = bounds.processes;
    cfg.num_objects = bounds.objects;
    cfg.num_values = bounds.values;
    cfg.num_ops = 0;
    return gen_history(cfg).meta;
}

SearchResult implication_search(const ModelDef& m1, const ModelDef& m2, const SearchBounds& bounds, Engine engine,
                                const CheckOptions& opts) {
    const bool exec = m1.requires_exec || m2.requires_exec;
    const auto meta = search_universe(bounds);
    const auto goal = f::land(m1.formula, f::lnot(m2.formula));
    SearchResult res;
    if (engine == Engine::automata) {
        if (exec && bounds.k < 0) throw Error("the automata engine needs k >= 0 for execution models");
        const TranslationContext ctx(meta, exec ? EncodingMode::exec : EncodingMode::history, exec ? bounds.k : 0);
        const auto word = find_model_word(goal, ctx, opts.compile);
        if (!word) return res;
        res.counterexample = decode_trace(*word);
        res.confirmed = evaluates(*res.counterexample, goal, opts.eval);
        return res;
    }
    for (std::size_t n = 0; n <= bounds.max_ops && !res.counterexample; ++n) {
        enumerate_histories(meta, n, [&](const History& h) {
            if (!exec) {
                if (++res.explored > bounds.max_candidates) throw CapExceeded("enumeration exceeded its candidate cap");
                if (check_model(Model(h), goal, opts.eval)) res.counterexample = h;
                return !res.counterexample;
            }
            enumerate_executions(h, true, bounds.k, [&](const AbstractExecution& x) {
                if (++res.explored > bounds.max_candidates) throw CapExceeded("enumeration exceeded its candidate cap");
                if (check_model(Model(x), goal, opts.eval)) res.counterexample = x;
                return !res.counterexample;
            });
            return !res.counterexample;
        });
    }
    res.confirmed = res.counterexample.has_value();
    return res;
}

}  // namespace cmc
