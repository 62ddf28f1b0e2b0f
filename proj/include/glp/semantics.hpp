#pragma once

#include <string>
#include <vector>

#include "glp/document.hpp"
#include "glp/policy.hpp"
#include "glp/process.hpp"

namespace glp {

enum class LabelKind : uint8_t {
  Silent,
  FreeInput,
  FreeOutput,
  BoundOutput,
  OpenAccess,
  OpenRelease,
  ClosedAccess,
  ClosedRelease,
  FaultyAccess,
};

/// A transition label. `channel`/`object` are used by the communication
/// kinds, `action`/`resource` by the resource kinds. `boundary` is the label
/// of the boundary that closed a resource action.
struct TransitionLabel {
  LabelKind kind = LabelKind::Silent;
  Name channel;
  Name object;
  Symbol action;
  Name resource;
  std::optional<Symbol> boundary;

  static TransitionLabel silent() { return {}; }

  /// Closed or faulty actions on a resource, as seen from outside the system.
  bool is_resource_action() const {
    return kind == LabelKind::ClosedAccess || kind == LabelKind::ClosedRelease || kind == LabelKind::FaultyAccess;
  }
  /// Labels a closed system can perform on its own.
  bool is_internal() const { return kind == LabelKind::Silent || is_resource_action(); }

  friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
};

/// `tau`, `x(y)`, `x<w>`, `x<new w>`, `a?(#r)`, `rel?(#r)`, `a(#r)`,
/// `rel(#r)` and `a!(#r)` for a faulty access.
std::string to_string(const TransitionLabel& l);

/// Congruence normal form together with its canonical key. Two terms with
/// the same key are structurally congruent.
struct Normalized {
  Process term;
  std::string key;
};

/// Rewrites `p` into normal form: `|` and `+` flattened with units dropped
/// and children sorted, restrictions dropped when vacuous and pushed inward
/// through boundaries and requests, parallel components not mentioning a
/// restricted name moved out of its scope, available resources floated out
/// of enclosing boundaries and restrictions, exhausted replications removed
/// and bound instances renumbered.
Normalized normalize(const Process& p);
Process congruence_normalize(const Process& p);
std::string canonical_key(const Process& p);

/// Gives every unbounded replication the given number of copies.
Process replication_unfold(const Process& p, int budget);

struct Successor {
  TransitionLabel label;
  Process target;   // normalized
  std::string key;  // canonical key of target
};

/// All one-step successors of `p`, ordered by label then target key.
/// Scripted reconfiguration events scheduled at `step_index` take effect
/// instead of ordinary moves. Throws InputError when `p` has an unlabeled
/// boundary or request or names an unknown policy.
std::vector<Successor> step(const Process& p, const PolicyTable& policies, const Script& script = {},
                            size_t step_index = 0);

}  // namespace glp
