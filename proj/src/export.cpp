#include "glp/export.hpp"

#include <map>
#include <sstream>

#include "glp/pretty.hpp"

namespace glp {

namespace {

using json = nlohmann::ordered_json;

// Prints names by display text unless two distinct names would collide.
class Namer {
 public:
  void add(const Name& n) { seen_[n.display()].insert(n); }

  std::string operator()(const Name& n) const {
    auto it = seen_.find(n.display());
    if (it != seen_.end() && it->second.size() > 1) return n.key();
    return n.display();
  }

 private:
  std::map<std::string, std::set<Name>> seen_;
};

json frame_json(const Frame& f, const Namer& name) {
  return {{"resource", name(f.resource)},
          {"policy", f.policy},
          {"trace", to_string(f.trace)},
          {"labels", to_string(f.labels)}};
}

template <typename M>
json name_map(const M& m, const Namer& name) {
  // Sorted by printed key for stable output.
  std::map<std::string, std::set<std::string>> sorted;
  for (const auto& [k, vs] : m) {
    if (vs.empty()) continue;
    auto& out = sorted[name(k)];
    for (const auto& v : vs) out.insert(name(v));
  }
  json j = json::object();
  for (const auto& [k, vs] : sorted) j[k] = std::vector<std::string>(vs.begin(), vs.end());
  return j;
}

}  // namespace

json estimate_to_json(const Estimate& e) {
  Namer name;
  for (const auto* m : {&e.rho, &e.kappa}) {
    for (const auto& [k, vs] : *m) {
      name.add(k);
      for (const auto& v : vs) name.add(v);
    }
  }
  for (const auto& [r, _] : e.gamma) name.add(r);
  for (const auto& d : e.psi) {
    for (const auto& f : d) name.add(f.resource);
  }

  json gamma = json::object();
  std::map<std::string, std::vector<std::tuple<std::string, std::string, std::string>>> entries;
  for (const auto& [r, gs] : e.gamma) {
    if (gs.empty()) continue;
    auto& out = entries[name(r)];
    for (const auto& g : gs) out.emplace_back(g.policy, to_string(g.trace), to_string(g.labels));
  }
  for (auto& [r, list] : entries) {
    std::sort(list.begin(), list.end());
    json arr = json::array();
    for (const auto& [policy, trace, labels] : list) {
      arr.push_back({{"policy", policy}, {"trace", trace}, {"labels", labels}});
    }
    gamma[r] = std::move(arr);
  }

  json psi = json::array();
  for (const auto& d : e.psi) {
    json frames = json::array();
    for (const auto& f : d) frames.push_back(frame_json(f, name));
    psi.push_back(std::move(frames));
  }

  return {{"rho", name_map(e.rho, name)}, {"kappa", name_map(e.kappa, name)}, {"gamma", gamma}, {"psi", psi}};
}

std::string lts_to_edge_list(const LtsGraph& g) {
  std::ostringstream out;
  out << "# nodes " << g.nodes.size() << " edges " << g.edges.size() << " root " << g.root
      << (g.truncated ? " truncated" : "") << "\n";
  for (const auto& e : g.edges) out << e.from << " -" << to_string(e.label) << "-> " << e.to << "\n";
  return out.str();
}

json lts_to_json(const LtsGraph& g) {
  json nodes = json::array();
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    nodes.push_back({{"id", i}, {"depth", g.depth[i]}, {"term", pretty(g.nodes[i])}});
  }
  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"label", to_string(e.label)}});
  }
  return {{"version", kVersion},
          {"root", g.root},
          {"truncated", g.truncated},
          {"bounds", {{"depth", g.bounds.depth}, {"budget", g.bounds.budget}, {"cap", g.bounds.node_cap}}},
          {"nodes", nodes},
          {"edges", edges}};
}

json verdict_to_json(const Verdict& v) {
  json witness = json::array();
  for (const auto& w : v.witness) witness.push_back(to_string(w.label));
  return {{"status", to_string(v.status)},
          {"nodes", v.nodes},
          {"edges", v.edges},
          {"truncated", v.truncated},
          {"witness", witness}};
}

}  // namespace glp
