#pragma once

#include <string>
#include <vector>

#include "cmc/history.hpp"

namespace cmc {

struct GenEdge {
    std::size_t source = 0;
    std::size_t target = 0;
    std::size_t target_proc = 0;

    friend bool operator==(const GenEdge&, const GenEdge&) = default;
};

// How the construction walks the sorted direct successors b1..bs of each
// operation. `each` tests and links every bj in turn; `last_only` repeats
// the test against bs at every step, which can only ever add the edge to
// the last successor.
enum class SuccessorRule { each, last_only };

// Sparse graph whose reachability is returns-before. Vertices are indices
// into history.ops.
struct GenGraph {
    History history;
    std::vector<std::size_t> ord;       // operation indices by start time
    std::vector<std::size_t> position;  // inverse of ord
    std::vector<GenEdge> edges;

    bool has_edge(std::size_t a, std::size_t b) const;
    bool has_path(std::size_t a, std::size_t b) const;  // at least one edge
    std::size_t out_degree(std::size_t a) const;
    std::size_t in_degree(std::size_t a) const;
    std::size_t processes() const { return history.meta.processes.size(); }
};

// Walks ord backwards from the second to last operation; for each
// operation a and each direct successor b (in ord order), adds a -> b
// unless b is already reachable from a. Throws ValidationError for an
// invalid history.
GenGraph build_generator(const History& h, SuccessorRule rule = SuccessorRule::each);

Relation transitive_closure(const GenGraph& g);

struct CutReport {
    std::size_t ell = 0;
    std::vector<std::size_t> left;    // first ell operations of ord
    std::vector<std::size_t> right;
    std::vector<std::size_t> gamma;   // last-started operation of each process in left
    std::vector<std::size_t> lambda;  // first-started operation of each process in right
    std::size_t crossing = 0;         // edges with one end on each side
    std::size_t right_to_left = 0;    // crossing edges whose source lies right
    // Crossing edges with source in left \ gamma and target in right \ lambda.
    std::size_t interior_crossing = 0;
};

// 1 <= ell <= number of operations; throws std::out_of_range otherwise.
CutReport cut(const GenGraph& g, std::size_t ell);

// Crossing count of every cut along ord, ell = 1..n.
std::vector<std::size_t> cut_profile(const GenGraph& g);
std::size_t cutwidth_along_ord(const GenGraph& g);

// Minimum over all vertex layouts of the largest cut, edges counted once
// regardless of direction. Branch and bound over prefixes; throws
// CapExceeded beyond max_ops operations.
std::size_t exact_cutwidth(const GenGraph& g, std::size_t max_ops = 10);

std::string to_dot(const GenGraph& g);
std::string cut_profile_csv(const GenGraph& g);

}  // namespace cmc
