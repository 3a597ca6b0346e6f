// Python view of the library: traces travel as text (the line format or
// JSON), results come back as plain dicts and lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmc/error.hpp"
#include "cmc/evaluator.hpp"
#include "cmc/generators.hpp"
#include "cmc/models.hpp"
#include "cmc/rb_graph.hpp"
#include "cmc/trace_io.hpp"
#include "cmc/translator.hpp"
#include "cmc/word.hpp"

namespace py = pybind11;
using namespace cmc;

namespace {

Engine engine_of(const std::string& name) {
    if (name == "direct") return Engine::direct;
    if (name == "automata") return Engine::automata;
    throw Error("engine must be 'direct' or 'automata'");
}

py::dict assignment_dict(const History& h, const Assignment& a) {
    py::dict d;
    for (const auto& [var, idx] : a.fo) d[py::str(var)] = h.ops[idx].id;
    for (const auto& [var, mask] : a.so) {
        py::list members;
        for (std::size_t i = 0; i < h.size(); ++i) {
            if ((mask >> i) & 1U) members.append(h.ops[i].id);
        }
        d[py::str(var)] = members;
    }
    return d;
}

py::dict check(const std::string& trace_text, const std::string& model, const std::string& engine, int k,
               std::size_t max_states) {
    const auto trace = parse_trace(trace_text);
    CheckOptions o;
    o.engine = engine_of(engine);
    o.k = k;
    o.compile.max_states = max_states;
    const auto v = check_trace(trace, find_model(model), o);
    py::dict out;
    out["holds"] = v.holds;
    out["witness"] = v.witness ? py::object(assignment_dict(history_of(trace), *v.witness)) : py::none();
    return out;
}

bool evaluate(const std::string& trace_text, const std::string& formula) {
    const auto trace = parse_trace(trace_text);
    const auto phi = parse_formula(formula);
    return std::visit([&](const auto& t) { return check_model(Model(t), phi); }, trace);
}

std::vector<std::string> validate(const std::string& trace_text) {
    const auto trace = parse_trace_unchecked(trace_text);
    std::vector<Violation> problems;
    if (const auto* x = std::get_if<AbstractExecution>(&trace)) {
        problems = validate_execution(*x, false);
    } else {
        problems = validate_history(std::get<History>(trace));
    }
    std::vector<std::string> out;
    for (const auto& p : problems) out.push_back(p.message());
    return out;
}

std::vector<std::string> encode_rows(const std::string& trace_text, std::optional<int> k, bool timeline) {
    const auto trace = parse_trace(trace_text);
    WordModel w;
    if (timeline) {
        w = encode_timeline(history_of(trace));
    } else if (const auto* x = std::get_if<AbstractExecution>(&trace)) {
        w = encode_exec(*x, k.value_or(0));
    } else {
        w = encode(std::get<History>(trace));
    }
    std::vector<std::string> rows;
    for (const auto& letter : w.letters) {
        std::string row;
        for (auto b : letter) row += b ? '1' : '0';
        rows.push_back(row);
    }
    return rows;
}

py::dict graph(const std::string& trace_text, bool exact, bool last_successor_only) {
    const auto g = build_generator(history_of(parse_trace(trace_text)),
                                   last_successor_only ? SuccessorRule::last_only : SuccessorRule::each);
    py::list edges;
    for (const auto& e : g.edges) edges.append(py::make_tuple(g.history.ops[e.source].id, g.history.ops[e.target].id));
    py::dict out;
    out["edges"] = edges;
    out["cut_profile"] = cut_profile(g);
    out["cutwidth_ord"] = cutwidth_along_ord(g);
    out["bound"] = 2 * g.processes() * g.processes();
    out["cutwidth_exact"] = exact ? py::object(py::int_(exact_cutwidth(g))) : py::none();
    return out;
}

MetaParams universe(std::size_t procs, std::size_t objects, std::size_t values) {
    return search_universe(SearchBounds{procs, objects, values});
}

std::optional<std::string> sat(const std::string& formula, std::size_t procs, std::size_t objects,
                               std::size_t values, bool exec, int k, std::size_t max_states) {
    const auto phi = parse_formula(formula);
    const bool as_exec = exec || uses_exec_relations(phi);
    const TranslationContext ctx(universe(procs, objects, values), as_exec ? EncodingMode::exec : EncodingMode::history,
                                 k);
    ws1s::CompileOptions o;
    o.max_states = max_states;
    const auto word = find_model_word(phi, ctx, o);
    if (!word) return std::nullopt;
    return std::visit([](const auto& t) { return serialize_trace(t); }, decode(*word));
}

py::dict implies(const std::string& m1, const std::string& m2, std::size_t procs, std::size_t objects,
                 std::size_t values, int k, const std::string& engine, std::size_t max_ops) {
    SearchBounds b{procs, objects, values, k, max_ops};
    const auto r = implication_search(find_model(m1), find_model(m2), b, engine == "enum" ? Engine::direct : engine_of(engine));
    py::dict out;
    out["counterexample"] = r.counterexample ? py::object(py::str(serialize_trace(*r.counterexample))) : py::none();
    out["confirmed"] = r.confirmed;
    out["explored"] = r.explored;
    return out;
}

std::string generate(std::uint64_t seed, std::size_t procs, std::size_t ops, std::size_t objects, std::size_t values,
                     bool exec, int k) {
    GeneratorConfig c;
    c.seed = seed;
    c.num_procs = procs;
    c.num_ops = ops;
    c.num_objects = objects;
    c.num_values = values;
    c.k = k;
    return exec ? serialize_trace(gen_exec(c)) : serialize_trace(gen_history(c));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Consistency model checking over histories and abstract executions";

    auto base = py::register_exception<Error>(m, "CmcError");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ValidationError>(m, "ValidationError", base);
    py::register_exception<FormulaError>(m, "FormulaError", base);
    py::register_exception<EvaluationError>(m, "EvaluationError", base);
    py::register_exception<EncodingError>(m, "EncodingError", base);
    py::register_exception<CapExceeded>(m, "CapExceeded", base);

    constexpr std::size_t cap = 1'000'000;
    m.def("models", [] {
        std::vector<std::string> names;
        for (const auto& d : builtin_models()) names.push_back(d.name);
        return names;
    });
    m.def("model_formula", [](const std::string& name) { return to_string(find_model(name).formula); });
    m.def("check", &check, py::arg("trace"), py::arg("model"), py::arg("engine") = "direct", py::arg("k") = 0,
          py::arg("max_states") = cap);
    m.def("evaluate", &evaluate, py::arg("trace"), py::arg("formula"));
    m.def("validate", &validate, py::arg("trace"));
    m.def("encode", &encode_rows, py::arg("trace"), py::arg("k") = py::none(), py::arg("timeline") = false);
    m.def("graph", &graph, py::arg("trace"), py::arg("exact") = false, py::arg("last_successor_only") = false);
    m.def("sat", &sat, py::arg("formula"), py::arg("processes") = 2, py::arg("objects") = 1, py::arg("values") = 2,
          py::arg("exec") = false, py::arg("k") = 0, py::arg("max_states") = cap);
    m.def("implies", &implies, py::arg("m1"), py::arg("m2"), py::arg("processes") = 2, py::arg("objects") = 1,
          py::arg("values") = 1, py::arg("k") = 0, py::arg("engine") = "automata", py::arg("max_ops") = 4);
    m.def("generate", &generate, py::arg("seed"), py::arg("processes") = 2, py::arg("ops") = 4, py::arg("objects") = 1,
          py::arg("values") = 2, py::arg("exec") = false, py::arg("k") = -1);
    m.def("to_json", [](const std::string& t) { return trace_to_json(parse_trace(t)); }, py::arg("trace"));
}
