// Batch front end. Exit codes: 0 holds/ok, 1 violated/found, 2 error,
// 3 state or enumeration cap exceeded.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmc/error.hpp"
#include "cmc/evaluator.hpp"
#include "cmc/generators.hpp"
#include "cmc/models.hpp"
#include "cmc/rb_graph.hpp"
#include "cmc/trace_io.hpp"
#include "cmc/translator.hpp"
#include "cmc/word.hpp"

namespace {

using json = nlohmann::json;
using namespace cmc;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kError = 2;
constexpr int kCap = 3;

ws1s::CompileOptions compile_options() {
    ws1s::CompileOptions o;
    if (const char* cap = std::getenv("CMC_STATE_CAP")) {
        try {
            o.max_states = std::stoull(cap);
        } catch (const std::exception&) {
            throw Error("CMC_STATE_CAP must be a positive integer");
        }
    }
    return o;
}

// "3" gives generated names, "a,b" gives those names.
std::vector<std::string> universe(const std::string& spec, const std::string& prefix) {
    std::vector<std::string> out;
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
        const auto n = std::stoul(spec);
        for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
        return out;
    }
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

json assignment_json(const Model& model, const Assignment& a) {
    const auto& h = model.history();
    json j = json::object();
    for (const auto& [var, idx] : a.fo) j[var] = h.ops[idx].id;
    for (const auto& [var, mask] : a.so) {
        json set = json::array();
        for (std::size_t i = 0; i < h.size(); ++i) {
            if ((mask >> i) & 1U) set.push_back(h.ops[i].id);
        }
        j[var] = set;
    }
    return j;
}

struct Options {
    bool as_json = false;
    std::string trace, model, models_file, engine = "direct", formula, formula_file, out, m1, m2;
    std::string procs = "2", objects = "1", values = "2";
    int k = 0;
    bool exec = false, exact = false, literal = false, timeline = false, real_time = false, formula_only = false;
    std::size_t max_ops = 4, max_explode = 0;
    std::string cut_csv, dot;
    GeneratorConfig gen;
};

std::vector<ModelDef> extra_models(const Options& o) {
    return o.models_file.empty() ? std::vector<ModelDef>{} : load_model_file(read_file(o.models_file));
}

FormulaPtr formula_arg(const Options& o) {
    if (!o.formula_file.empty()) return parse_formula(read_file(o.formula_file));
    if (o.formula.empty()) throw Error("--formula or --formula-file is required");
    return parse_formula(o.formula);
}

MetaParams meta_arg(const Options& o) {
    MetaParams meta{universe(o.procs, "p"), universe(o.objects, "x"), universe(o.values, "v")};
    if (const auto p = meta.problems(); !p.empty()) throw ValidationError("bad universe: " + p.front());
    return meta;
}

int run_check(const Options& o) {
    const auto trace = parse_trace(read_file(o.trace));
    const auto extra = extra_models(o);
    const auto& model = find_model(o.model, extra);
    CheckOptions co;
    co.engine = o.engine == "automata" ? Engine::automata : Engine::direct;
    co.k = o.k;
    co.compile = compile_options();
    const auto v = check_trace(trace, model, co);
    if (o.as_json) {
        json j{{"command", "check"}, {"model", model.name}, {"engine", o.engine}, {"holds", v.holds}};
        if (co.engine == Engine::automata) j["k"] = o.k;
        if (v.witness) {
            j["witness"] = std::visit([&](const auto& t) { return assignment_json(Model(t), *v.witness); }, trace);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << model.name << ": " << (v.holds ? "holds" : "violated") << "\n";
        if (!v.witness_text.empty()) std::cout << "witness: " << v.witness_text << "\n";
    }
    return v.holds ? kOk : kViolated;
}

int run_sat(const Options& o) {
    const auto phi = formula_arg(o);
    const auto meta = meta_arg(o);
    const bool exec = o.exec || uses_exec_relations(phi);
    const TranslationContext ctx(meta, exec ? EncodingMode::exec : EncodingMode::history, o.k);
    auto copts = compile_options();
    if (o.max_explode) copts.max_states = o.max_explode;
    const auto word = find_model_word(phi, ctx, copts);
    std::optional<std::string> trace;
    if (word) {
        trace = std::visit([](const auto& v) { return serialize_trace(v); }, decode(*word));
        if (!o.out.empty()) write_file(o.out, *trace);
    }
    if (o.as_json) {
        json j{{"command", "sat"}, {"satisfiable", word.has_value()}};
        if (trace) j["witness"] = *trace;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (word ? "sat" : "unsat") << "\n";
        if (trace && o.out.empty()) std::cout << *trace;
    }
    return word ? kOk : kViolated;
}

int run_implies(const Options& o) {
    const auto extra = extra_models(o);
    const auto& a = find_model(o.m1, extra);
    const auto& b = find_model(o.m2, extra);
    SearchBounds bounds;
    bounds.processes = std::stoul(o.procs);
    bounds.objects = std::stoul(o.objects);
    bounds.values = std::stoul(o.values);
    bounds.k = o.k;
    bounds.max_ops = o.max_ops;
    CheckOptions co;
    co.compile = compile_options();
    const auto engine = o.engine == "enum" ? Engine::direct : Engine::automata;
    const auto r = implication_search(a, b, bounds, engine, co);
    std::optional<std::string> trace;
    if (r.counterexample) {
        trace = serialize_trace(*r.counterexample);
        if (!o.out.empty()) write_file(o.out, *trace);
    }
    if (o.as_json) {
        json j{{"command", "implies"}, {"m1", a.name}, {"m2", b.name}, {"counterexample_found", trace.has_value()}};
        if (trace) {
            j["counterexample"] = *trace;
            j["confirmed"] = r.confirmed;
        }
        std::cout << j.dump(2) << "\n";
    } else if (!trace) {
        std::cout << "no counterexample: " << a.name << " => " << b.name << " within the bounds\n";
    } else {
        std::cout << "counterexample (" << (r.confirmed ? "confirmed" : "NOT confirmed") << " by the evaluator): "
                  << a.name << " holds, " << b.name << " fails\n";
        if (o.out.empty()) std::cout << *trace;
    }
    return trace ? kViolated : kOk;
}

int run_graph(const Options& o) {
    const auto trace = parse_trace(read_file(o.trace));
    const auto& h = history_of(trace);
    const auto g = build_generator(h, o.literal ? SuccessorRule::last_only : SuccessorRule::each);
    const auto width = cutwidth_along_ord(g);
    const auto m = g.processes();
    const auto bound = 2 * m * m;
    std::optional<std::size_t> exact;
    if (o.exact) exact = exact_cutwidth(g);
    if (!o.cut_csv.empty()) write_file(o.cut_csv, cut_profile_csv(g));
    if (!o.dot.empty()) write_file(o.dot, to_dot(g));
    const bool ok = width <= bound;
    if (o.as_json) {
        json edges = json::array();
        for (const auto& e : g.edges) edges.push_back({h.ops[e.source].id, h.ops[e.target].id});
        json j{{"command", "graph"}, {"edges", edges}, {"cutwidth_ord", width}, {"bound", bound}, {"within_bound", ok}};
        if (exact) j["cutwidth_exact"] = *exact;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& e : g.edges) std::cout << h.ops[e.source].id << " -> " << h.ops[e.target].id << "\n";
        std::cout << "cutwidth along ord: " << width << " (bound 2m^2 = " << bound << ", "
                  << (ok ? "within" : "EXCEEDED") << ")\n";
        if (exact) std::cout << "exact cutwidth: " << *exact << "\n";
    }
    return ok ? kOk : kViolated;
}

int run_encode(const Options& o) {
    const auto trace = parse_trace(read_file(o.trace));
    WordModel w;
    if (o.exec) {
        const auto* x = std::get_if<AbstractExecution>(&trace);
        if (!x) throw Error("--exec needs a trace with vis/ar relations");
        w = encode_exec(*x, o.k);
    } else if (o.timeline) {
        w = encode_timeline(history_of(trace));
    } else {
        w = encode(history_of(trace));
    }
    emit(serialize(w), o.out);
    return kOk;
}

int run_emit(const Options& o) {
    const auto phi = formula_arg(o);
    const auto meta = meta_arg(o);
    const bool exec = o.exec || uses_exec_relations(phi);
    const TranslationContext ctx(meta, exec ? EncodingMode::exec : EncodingMode::history, o.k);
    auto body = translate(phi, ctx);
    if (!o.formula_only) body = ws1s::w::conj(is_encoding(ctx), body);
    emit(emit_mona(body, ctx, to_string(phi)), o.out);
    return kOk;
}

int run_gen(const Options& o) {
    auto cfg = o.gen;
    cfg.k = o.exec ? o.k : -1;
    const std::string text = o.exec ? serialize_trace(gen_exec(cfg)) : serialize_trace(gen_history(cfg));
    emit(o.as_json ? trace_to_json(parse_trace(text)) : text, o.out);
    return kOk;
}

int run_validate(const Options& o) {
    const auto trace = parse_trace_unchecked(read_file(o.trace));
    const auto* x = std::get_if<AbstractExecution>(&trace);
    const auto v = x ? validate_execution(*x, o.real_time) : validate_history(history_of(trace));
    if (o.as_json) {
        json arr = json::array();
        for (const auto& e : v) arr.push_back({{"invariant", e.invariant}, {"ops", e.ops}});
        std::cout << json{{"command", "validate"}, {"ok", v.empty()}, {"violations", arr}}.dump(2) << "\n";
    } else if (v.empty()) {
        std::cout << "ok: " << history_of(trace).size() << " operations\n";
    } else {
        for (const auto& e : v) std::cout << e.message() << "\n";
    }
    return v.empty() ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consistency-model checking over histories and abstract executions"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--json", o.as_json, "Machine-readable output");

    auto add_universe = [&](CLI::App* c) {
        c->add_option("--procs", o.procs, "Process count or comma-separated names")->capture_default_str();
        c->add_option("--objects", o.objects, "Object count or comma-separated names")->capture_default_str();
        c->add_option("--values", o.values, "Value count or comma-separated names")->capture_default_str();
    };

    auto* check = app.add_subcommand("check", "Check a trace against a model");
    check->add_option("--trace", o.trace)->required();
    check->add_option("--model", o.model)->required();
    check->add_option("--models-file", o.models_file, "Extra model definitions");
    check->add_option("--engine", o.engine)->check(CLI::IsMember({"direct", "automata"}));
    check->add_option("--k", o.k, "Transience bound for the automata engine")->check(CLI::NonNegativeNumber);

    auto* sat = app.add_subcommand("sat", "Find a trace satisfying a formula");
    sat->add_option("--formula", o.formula);
    sat->add_option("--formula-file", o.formula_file);
    add_universe(sat);
    sat->add_flag("--exec", o.exec, "Search abstract executions");
    sat->add_option("--k", o.k)->check(CLI::NonNegativeNumber);
    sat->add_option("--max-explode", o.max_explode, "Automaton state cap");
    sat->add_option("--out", o.out, "Write the witness trace here");

    auto* implies = app.add_subcommand("implies", "Search for a trace separating two models");
    implies->add_option("--m1", o.m1)->required();
    implies->add_option("--m2", o.m2)->required();
    implies->add_option("--models-file", o.models_file);
    implies->add_option("--engine", o.engine, "automata or enum")->check(CLI::IsMember({"automata", "enum", "direct"}));
    add_universe(implies);
    implies->add_option("--k", o.k);
    implies->add_option("--max-ops", o.max_ops, "Enumeration bound");
    implies->add_option("--out", o.out, "Write the counterexample trace here");

    auto* graph = app.add_subcommand("graph", "Build the returns-before generator graph");
    graph->add_option("--trace", o.trace)->required();
    graph->add_option("--cut-profile", o.cut_csv, "CSV of crossing counts per cut");
    graph->add_option("--dot", o.dot, "Graphviz export");
    graph->add_flag("--exact", o.exact, "Also compute the exact cutwidth");
    graph->add_flag("--last-successor-only", o.literal, "Test only the last direct successor at each step");

    auto* enc = app.add_subcommand("encode", "Print the word encoding of a trace");
    enc->add_option("--trace", o.trace)->required();
    enc->add_flag("--exec", o.exec);
    enc->add_flag("--timeline", o.timeline, "Process lanes only");
    enc->add_option("--k", o.k)->check(CLI::NonNegativeNumber);
    enc->add_option("--out", o.out);

    auto* mona = app.add_subcommand("emit-mona", "Write a MONA input file");
    mona->add_option("--formula", o.formula);
    mona->add_option("--formula-file", o.formula_file);
    add_universe(mona);
    mona->add_flag("--exec", o.exec);
    mona->add_option("--k", o.k)->check(CLI::NonNegativeNumber);
    mona->add_flag("--formula-only", o.formula_only, "Omit the well-formedness conjunct");
    mona->add_option("--out", o.out)->required();

    auto* gen = app.add_subcommand("gen", "Generate a random trace");
    gen->add_option("--seed", o.gen.seed);
    gen->add_option("--procs", o.gen.num_procs);
    gen->add_option("--ops", o.gen.num_ops);
    gen->add_option("--objects", o.gen.num_objects);
    gen->add_option("--values", o.gen.num_values);
    gen->add_option("--overlap", o.gen.overlap);
    gen->add_option("--vis-density", o.gen.vis_density);
    gen->add_flag("--exec", o.exec, "Generate a real-time execution");
    gen->add_option("--k", o.k, "Transience bound for --exec")->check(CLI::NonNegativeNumber);
    gen->add_option("--out", o.out);

    auto* val = app.add_subcommand("validate", "Report invariant violations");
    val->add_option("--trace", o.trace)->required();
    val->add_flag("--real-time", o.real_time, "Also require rb within ar");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*check) return run_check(o);
        if (*sat) return run_sat(o);
        if (*implies) return run_implies(o);
        if (*graph) return run_graph(o);
        if (*enc) return run_encode(o);
        if (*mona) return run_emit(o);
        if (*gen) return run_gen(o);
        if (*val) return run_validate(o);
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        if (!e.subformula().empty()) std::cerr << "while building: " << e.subformula() << "\n";
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
