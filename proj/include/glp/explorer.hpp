#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glp/semantics.hpp"

namespace glp {

struct Bounds {
  size_t depth = 40;
  /// Copies per replication; negative leaves replications unbounded.
  int budget = 4;
  size_t node_cap = 200000;
  /// When false, a state's term is dropped once it has been expanded; only
  /// keys, depths and edges survive.
  bool keep_terms = true;
};

struct LtsEdge {
  size_t from = 0;
  size_t to = 0;
  TransitionLabel label;
};

/// Reachable states of a closed system: only silent moves and closed or
/// faulty resource actions are followed.
struct LtsGraph {
  std::vector<Process> nodes;
  std::vector<std::string> keys;
  std::vector<size_t> depth;
  /// BFS tree: edge index that discovered each node (root: npos).
  std::vector<size_t> parent;
  std::vector<LtsEdge> edges;
  size_t root = 0;
  bool truncated = false;
  Bounds bounds;

  /// Labels along the discovery path from the root to `node`.
  std::vector<size_t> path_to(size_t node) const;
};

/// Labels `p`, applies the replication budget and normalizes.
Process prepare(const Process& p, const Bounds& bounds);

/// Breadth-first exploration with deduplication on canonical keys. When a
/// script is given, states are also told apart by the step count until the
/// last scripted event. `jobs` worker threads expand each BFS level; the
/// result does not depend on their number.
LtsGraph explore(const Process& p, const PolicyTable& policies, const Script& script, const Bounds& bounds,
                 unsigned jobs = 1);

enum class VerdictStatus : uint8_t { Complies, Violates, Inconclusive };

std::string to_string(VerdictStatus s);

struct WitnessStep {
  TransitionLabel label;
  std::string key;  // canonical key of the state reached
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Complies;
  /// For violations: a shortest path ending with the faulty action.
  std::vector<WitnessStep> witness;
  size_t nodes = 0;
  size_t edges = 0;
  bool truncated = false;
};

/// Whether no reachable transition is a forced release of `r`. Throws
/// InputError when `r` does not occur in `p` or the script.
Verdict complies_with(const Process& p, const Name& r, const PolicyTable& policies, const Script& script,
                      const Bounds& bounds, unsigned jobs = 1);
Verdict complies_with(const LtsGraph& graph, const Name& r);

/// Re-executes a witness from the prepared root; true when every step is
/// an available move.
bool replay(const Process& p, const PolicyTable& policies, const Script& script, const Bounds& bounds,
            const std::vector<WitnessStep>& witness);

struct RandomRun {
  std::vector<TransitionLabel> labels;
  Process final;
};

/// Picks one internal successor per step, uniformly under `seed`.
RandomRun run_random(const Process& p, const PolicyTable& policies, const Script& script, uint64_t seed,
                     size_t max_steps, int budget = 4);

}  // namespace glp
