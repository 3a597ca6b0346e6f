#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmc/history.hpp"

namespace cmc {

using Trace = std::variant<History, AbstractExecution>;

// Line format:
//   processes p1 p2 ...
//   objects x ...
//   values v1 v2 ...
//   execution                      (optional; forces an abstract execution)
//   op <id> <proc> <stime> <rtime> <read|write> <obj> ival=<v|_> oval=<v|_|undef>
//   vis <id> <id>
//   ar <id> <id>
// '#' starts a comment. Any relation line, or the execution marker, makes
// the trace an abstract execution. Text starting with '{' is read as JSON.
//
// parse_trace validates the result and throws ValidationError listing every
// violation; parse_trace_unchecked only checks syntax and references.
Trace parse_trace(std::string_view text);
Trace parse_trace_unchecked(std::string_view text);

std::string serialize_trace(const History& h);
std::string serialize_trace(const AbstractExecution& x);
std::string serialize_trace(const Trace& t);

std::string trace_to_json(const Trace& t);
Trace trace_from_json(std::string_view text);

const History& history_of(const Trace& t);

// fixtures/<name>.trace files are listed in a manifest, one expectation per
// line: "<file> <model> <engine> <k> <holds|violated>". Engine is direct or
// automata; k is ignored by the direct engine.
struct ManifestEntry {
    std::string file;
    std::string model;
    std::string engine;
    int k = 0;
    bool holds = true;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace cmc
