#include "glp/policy.hpp"

#include "glp/process.hpp"

namespace glp {

namespace {
uint64_t edge_key(PolicyAutomaton::State s, Symbol a) { return (static_cast<uint64_t>(s) << 32) | a.id(); }
}  // namespace

PolicyAutomaton::PolicyAutomaton(std::string name, std::string initial, MissingRule missing)
    : name_(std::move(name)), missing_(missing) {
  initial_ = add_state(initial);
}

PolicyAutomaton::State PolicyAutomaton::add_state(const std::string& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  auto id = static_cast<State>(states_.size());
  states_.push_back(s);
  violating_.push_back(false);
  index_.emplace(s, id);
  return id;
}

void PolicyAutomaton::set_violating(const std::string& s, bool v) { violating_[add_state(s)] = v; }

void PolicyAutomaton::add_transition(const std::string& from, Symbol action, const std::string& to) {
  State f = add_state(from), t = add_state(to);
  auto [it, inserted] = delta_.emplace(edge_key(f, action), t);
  if (!inserted) {
    if (it->second == t) return;
    throw InputError("policy " + name_ + ": nondeterministic transitions from " + from + " on " + action.str());
  }
  edges_.emplace_back(f, action, t);
}

std::vector<std::string> PolicyAutomaton::violating_states() const {
  std::vector<std::string> out;
  for (State s = 0; s < states_.size(); ++s) {
    if (violating_[s]) out.push_back(states_[s]);
  }
  return out;
}

std::vector<std::tuple<std::string, std::string, std::string>> PolicyAutomaton::transitions() const {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& [f, a, t] : edges_) out.emplace_back(states_[f], a.str(), states_[t]);
  return out;
}

std::optional<PolicyAutomaton::State> PolicyAutomaton::step(State s, const Event& e) const {
  if (e.kind != EventKind::Action) return s;
  auto it = delta_.find(edge_key(s, e.symbol));
  if (it == delta_.end()) {
    if (missing_ == MissingRule::Violate) return std::nullopt;
    return s;
  }
  if (violating_[it->second]) return std::nullopt;
  return it->second;
}

std::optional<PolicyAutomaton::State> PolicyAutomaton::run(const Trace& trace) const {
  if (violating_.at(initial_)) return std::nullopt;
  State s = initial_;
  for (const auto& e : trace) {
    auto next = step(s, e);
    if (!next) return std::nullopt;
    s = *next;
  }
  return s;
}

bool PolicyAutomaton::admits_extended(const Trace& trace, const Event& a) const {
  auto s = run(trace);
  return s && step(*s, a).has_value();
}

const PolicyAutomaton& resolve_policy(const PolicyTable& table, const std::string& name) {
  auto it = table.find(name);
  if (it == table.end() || !it->second) throw InputError("unresolved policy " + name);
  return *it->second;
}

}  // namespace glp
