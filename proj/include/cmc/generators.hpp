#pragma once

#include <cstdint>
#include <functional>

#include "cmc/history.hpp"

namespace cmc {

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t num_procs = 2;
    std::size_t num_ops = 4;
    std::size_t num_objects = 1;
    std::size_t num_values = 2;
    // Chance of starting another operation while some process is busy,
    // rather than completing a pending one.
    double overlap = 0.5;
    double read_fraction = 0.5;
    // Chance that a value slot holds UNDEF (reads and writes) or, for reads,
    // EMPTY.
    double undef_prob = 0.1;
    double empty_read_prob = 0.1;
    // Executions only.
    bool real_time = true;
    double vis_density = 0.5;
    // Enforce k-transient visibility when >= 0 (needs real_time).
    int k = -1;
};

// Throws ValidationError for an unusable configuration.
void check_config(const GeneratorConfig& cfg);

// Deterministic in the config. Processes are p1.., objects x1.., values v1..,
// operation ids o1.. in start order.
History gen_history(const GeneratorConfig& cfg);
AbstractExecution gen_exec(const GeneratorConfig& cfg);

// Every history with exactly n operations over meta, up to timestamp
// renaming (positions 1..2n), with every attribute combination. Write
// outputs are EMPTY or UNDEF; read outputs are any value, EMPTY or UNDEF.
// The callback returns false to stop. Returns the number visited.
std::size_t enumerate_histories(const MetaParams& meta, std::size_t n,
                                const std::function<bool(const History&)>& visit);

// All executions over h: every strict total order ar (containing rb when
// real_time) and every acyclic vis with rb(a,b) ⇒ ¬vis(b,a); when k >= 0
// only k-transient ones. Stops when visit returns false.
std::size_t enumerate_executions(const History& h, bool real_time, int k,
                                 const std::function<bool(const AbstractExecution&)>& visit);

}  // namespace cmc
