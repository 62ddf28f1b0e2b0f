#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "glp/name.hpp"
#include "glp/symbol.hpp"
#include "glp/trace.hpp"

namespace glp {

/// Raised when a term or estimate falls outside an operation's domain.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PrefixKind : uint8_t { Tau, Input, Output, Access, Release };

/// An action prefix. `subject` is the channel (input/output) or the resource
/// (access/release); `object` is the input binder or the output payload.
struct Prefix {
  PrefixKind kind = PrefixKind::Tau;
  Name subject;
  Name object;
  Symbol action;

  static Prefix tau() { return {}; }
  static Prefix input(Name channel, Name binder) {
    return {PrefixKind::Input, std::move(channel), std::move(binder), {}};
  }
  static Prefix output(Name channel, Name payload) {
    return {PrefixKind::Output, std::move(channel), std::move(payload), {}};
  }
  static Prefix access(Symbol action, Name resource) {
    return {PrefixKind::Access, std::move(resource), {}, action};
  }
  static Prefix release(Name resource) { return {PrefixKind::Release, std::move(resource), {}, {}}; }

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

enum class NodeKind : uint8_t { Nil, Prefix, Restrict, Choice, Par, Boundary, Request, Replicate };

class Node;
using Process = std::shared_ptr<const Node>;

/// Immutable process term node. Choice and Par are stored n-ary; a binary
/// node is the two-child case.
class Node {
 public:
  NodeKind kind = NodeKind::Nil;
  Prefix prefix;                 // Prefix
  Name name;                     // Restrict binder, Boundary/Request resource
  std::string policy;            // Boundary: symbolic policy reference
  Trace state;                   // Boundary: resource history (may hold special events)
  LabelSeq holders;              // Boundary: labels of the processes that entered it
  std::optional<Symbol> label;   // Boundary/Request
  int budget = -1;               // Replicate: remaining copies, -1 = unbounded
  std::vector<Process> children;

  const Process& body() const { return children.front(); }
  bool is_nil() const { return kind == NodeKind::Nil; }
  /// An available resource: a boundary around the empty process.
  bool is_available() const { return kind == NodeKind::Boundary && body()->is_nil(); }

  static Process nil();
  static Process make_prefix(Prefix p, Process cont);
  static Process restrict(Name binder, Process body);
  static Process choice(std::vector<Process> branches);
  static Process par(std::vector<Process> parts);
  static Process boundary(Name resource, std::string policy, Trace state, Process body,
                          std::optional<Symbol> label = std::nullopt, LabelSeq holders = {});
  static Process request(Name resource, Process body, std::optional<Symbol> label = std::nullopt);
  static Process replicate(Process body, int budget = -1);

  /// Copy with different children.
  Process with_children(std::vector<Process> kids) const;
};

Process par_of(Process a, Process b);

std::set<Name> free_names(const Process& p);
/// Names occurring in any position, bound or free.
std::set<Name> all_names(const Process& p);
bool occurs_free(const Process& p, const Name& n);

/// Capture-avoiding substitution of `to` for the free occurrences of `from`.
/// A binder that would capture `to` is renamed to a fresh instance of its own
/// canonical class. Throws InputError on a channel/resource kind mismatch.
Process substitute(const Process& p, const Name& from, const Name& to);

/// Renames every occurrence of the binder identity `from` (free in `p`) to `to`
/// without kind checks; used for alpha-conversion.
Process rename_free(const Process& p, const Name& from, const Name& to);

/// Highest `inst` used by any name of the canonical class of `n` in `p`.
uint32_t max_instance(const Process& p, const Name& n);
uint32_t max_instance(const Process& p);

/// Gives every unlabeled Boundary and Request a fresh label `chiN` and fills
/// in the holder sequence of entered boundaries. Existing labels are kept;
/// duplicated pre-existing labels raise InputError.
Process label_boundaries(const Process& p);
/// Removes all labels and holder sequences.
Process erase_labels(const Process& p);
bool fully_labeled(const Process& p);
std::vector<Symbol> labels_of(const Process& p);

/// Whether every Boundary/Request body belongs to the sequential fragment.
bool is_sequential(const Process& p);
/// Whether `q` itself belongs to the sequential fragment.
bool is_sequential_body(const Process& q);

/// Structural equality up to renaming of bound names, with the renaming
/// required to map canonical classes bijectively.
bool alpha_equivalent(const Process& p, const Process& q);

/// Number of nodes.
size_t term_size(const Process& p);

}  // namespace glp
