#include "glp/explorer.hpp"

#include <algorithm>
#include <random>
#include <thread>
#include <unordered_map>

namespace glp {

std::vector<size_t> LtsGraph::path_to(size_t node) const {
  std::vector<size_t> out;
  while (node != root && parent[node] != static_cast<size_t>(-1)) {
    out.push_back(parent[node]);
    node = edges[parent[node]].from;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Process prepare(const Process& p, const Bounds& bounds) {
  Process q = label_boundaries(p);
  if (bounds.budget >= 0) q = replication_unfold(q, bounds.budget);
  return normalize(q).term;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Complies:
      return "complies";
    case VerdictStatus::Violates:
      return "violates";
    case VerdictStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

size_t last_scripted_step(const Script& script) {
  size_t last = 0;
  for (const auto& ev : script) last = std::max(last, ev.at_step + 1);
  return last;
}

std::vector<Successor> internal_moves(const Process& p, const PolicyTable& policies, const Script& script,
                                      size_t index) {
  auto all = step(p, policies, script, index);
  std::vector<Successor> out;
  for (auto& s : all) {
    if (s.label.is_internal()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

LtsGraph explore(const Process& p, const PolicyTable& policies, const Script& script, const Bounds& bounds,
                 unsigned jobs) {
  LtsGraph g;
  g.bounds = bounds;
  const size_t horizon = last_scripted_step(script);
  auto state_id = [&](const std::string& key, size_t depth) {
    if (horizon == 0) return key;
    return key + "@" + std::to_string(std::min(depth, horizon));
  };

  auto root = normalize(prepare(p, bounds));
  std::unordered_map<std::string, size_t> index;
  g.nodes.push_back(root.term);
  g.keys.push_back(root.key);
  g.depth.push_back(0);
  g.parent.push_back(static_cast<size_t>(-1));
  index.emplace(state_id(root.key, 0), 0);

  std::vector<size_t> frontier{0};
  jobs = std::max(1u, jobs);
  // Frontier nodes are expanded in fixed-size batches so that only one
  // batch of successors is alive at a time; merging in frontier order keeps
  // the result independent of `jobs`.
  const size_t batch = 256 * static_cast<size_t>(jobs);
  for (size_t level = 0; !frontier.empty(); ++level) {
    std::vector<size_t> next;
    for (size_t lo = 0; lo < frontier.size(); lo += batch) {
      const size_t hi = std::min(frontier.size(), lo + batch);
      std::vector<std::vector<Successor>> results(hi - lo);
      auto work = [&](size_t worker) {
        for (size_t i = lo + worker; i < hi; i += jobs) {
          results[i - lo] = internal_moves(g.nodes[frontier[i]], policies, script, level);
        }
      };
      if (jobs == 1 || hi - lo < 2) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
      }

      if (level >= bounds.depth) {
        for (const auto& r : results) g.truncated = g.truncated || !r.empty();
        continue;
      }
      for (size_t i = lo; i < hi; ++i) {
        for (auto& s : results[i - lo]) {
          std::string id = state_id(s.key, level + 1);
          auto it = index.find(id);
          size_t to;
          if (it != index.end()) {
            to = it->second;
          } else {
            if (g.nodes.size() >= bounds.node_cap) {
              g.truncated = true;
              continue;
            }
            to = g.nodes.size();
            g.nodes.push_back(s.target);
            g.keys.push_back(s.key);
            g.depth.push_back(level + 1);
            g.parent.push_back(g.edges.size());
            index.emplace(std::move(id), to);
            next.push_back(to);
          }
          g.edges.push_back({frontier[i], to, s.label});
        }
        if (!bounds.keep_terms && frontier[i] != g.root) g.nodes[frontier[i]] = nullptr;
      }
    }
    if (level >= bounds.depth) break;
    frontier = std::move(next);
  }
  return g;
}

Verdict complies_with(const LtsGraph& g, const Name& r) {
  Verdict v;
  v.nodes = g.nodes.size();
  v.edges = g.edges.size();
  v.truncated = g.truncated;
  // Edges are stored in BFS order, so the first faulty edge has a shortest
  // witness.
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (edge.label.kind != LabelKind::FaultyAccess || !(edge.label.resource == r)) continue;
    v.status = VerdictStatus::Violates;
    for (size_t i : g.path_to(edge.from)) v.witness.push_back({g.edges[i].label, g.keys[g.edges[i].to]});
    v.witness.push_back({edge.label, g.keys[edge.to]});
    return v;
  }
  v.status = g.truncated ? VerdictStatus::Inconclusive : VerdictStatus::Complies;
  return v;
}

Verdict complies_with(const Process& p, const Name& r, const PolicyTable& policies, const Script& script,
                      const Bounds& bounds, unsigned jobs) {
  bool declared = all_names(p).count(r) > 0;
  for (const auto& ev : script) declared = declared || ev.resource == r;
  if (!declared) throw InputError("resource " + r.display() + " does not occur in the process");
  Bounds lean = bounds;
  lean.keep_terms = false;
  return complies_with(explore(p, policies, script, lean, jobs), r);
}

bool replay(const Process& p, const PolicyTable& policies, const Script& script, const Bounds& bounds,
            const std::vector<WitnessStep>& witness) {
  Process cur = prepare(p, bounds);
  for (size_t i = 0; i < witness.size(); ++i) {
    auto moves = internal_moves(cur, policies, script, i);
    auto it = std::find_if(moves.begin(), moves.end(), [&](const Successor& s) {
      return s.label == witness[i].label && s.key == witness[i].key;
    });
    if (it == moves.end()) return false;
    cur = it->target;
  }
  return true;
}

RandomRun run_random(const Process& p, const PolicyTable& policies, const Script& script, uint64_t seed,
                     size_t max_steps, int budget) {
  Bounds b;
  b.budget = budget;
  RandomRun run;
  run.final = prepare(p, b);
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < max_steps; ++i) {
    auto moves = internal_moves(run.final, policies, script, i);
    if (moves.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, moves.size() - 1);
    auto& s = moves[pick(rng)];
    run.labels.push_back(s.label);
    run.final = s.target;
  }
  return run;
}

}  // namespace glp
