#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/trace.hpp"

namespace glp {

/// What happens on an action with no outgoing transition.
enum class MissingRule : uint8_t { Violate, Stay };

/// Deterministic automaton over action names. Entering a violating state is a
/// policy violation and is absorbing. `rel` and the analysis-only events
/// never move the automaton.
class PolicyAutomaton {
 public:
  using State = uint32_t;

  PolicyAutomaton() = default;
  PolicyAutomaton(std::string name, std::string initial, MissingRule missing = MissingRule::Violate);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(State s) const { return states_.at(s); }
  State initial() const { return initial_; }
  MissingRule missing_rule() const { return missing_; }
  bool is_violating(State s) const { return violating_.at(s); }
  std::vector<std::string> violating_states() const;
  /// (from, action, to) in insertion order.
  std::vector<std::tuple<std::string, std::string, std::string>> transitions() const;

  State add_state(const std::string& s);
  void set_violating(const std::string& s, bool v = true);
  void set_missing_rule(MissingRule m) { missing_ = m; }
  /// Throws InputError when (from, action) already has a different target.
  void add_transition(const std::string& from, Symbol action, const std::string& to);

  /// Next state, or nullopt when the event leads to a violation.
  std::optional<State> step(State s, const Event& e) const;
  /// Folds the trace from the initial state; nullopt once a violating state
  /// is entered (or the initial state itself is violating).
  std::optional<State> run(const Trace& trace) const;
  bool admits(const Trace& trace) const { return run(trace).has_value(); }
  /// admits(trace . a) without copying the trace.
  bool admits_extended(const Trace& trace, const Event& a) const;

 private:
  std::string name_;
  std::vector<std::string> states_;
  std::vector<bool> violating_;
  std::unordered_map<std::string, State> index_;
  std::unordered_map<uint64_t, State> delta_;
  std::vector<std::tuple<State, Symbol, State>> edges_;
  State initial_ = 0;
  MissingRule missing_ = MissingRule::Violate;
};

using PolicyTable = std::map<std::string, std::shared_ptr<const PolicyAutomaton>>;

/// Looks up a policy or throws InputError.
const PolicyAutomaton& resolve_policy(const PolicyTable& table, const std::string& name);

}  // namespace glp
