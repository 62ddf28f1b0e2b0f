#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glp/symbol.hpp"

namespace glp {

/// One event of a resource history. `Action` carries the action name and the
/// three special kinds carry a boundary label. `Release` is the `rel` event.
enum class EventKind : uint8_t { Action, Release, In, Out, ErrOut };

struct Event {
  EventKind kind = EventKind::Action;
  Symbol symbol;

  static Event action(Symbol a) { return {EventKind::Action, a}; }
  static Event release() { return {EventKind::Release, Symbol()}; }
  static Event in(Symbol l) { return {EventKind::In, l}; }
  static Event out(Symbol l) { return {EventKind::Out, l}; }
  static Event err_out(Symbol l) { return {EventKind::ErrOut, l}; }

  bool is_special() const {
    return kind == EventKind::In || kind == EventKind::Out || kind == EventKind::ErrOut;
  }

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;
using LabelSeq = std::vector<Symbol>;

/// Drops in/out/err_out, leaving the runtime trace over actions and `rel`.
Trace dynamic_projection(const Trace& trace);
/// True when the trace records a forced release.
bool is_faulty(const Trace& trace);
bool is_prefix(const Trace& prefix, const Trace& trace);

Trace append(Trace trace, Event e);

std::string to_string(const Event& e);
/// `eps` for the empty trace, events joined by `.` otherwise.
std::string to_string(const Trace& trace);
std::string to_string(const LabelSeq& labels);

size_t hash_trace(const Trace& trace);
size_t hash_labels(const LabelSeq& labels);

}  // namespace glp
