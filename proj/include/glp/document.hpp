#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glp/policy.hpp"
#include "glp/process.hpp"

namespace glp {

/// A scripted resource-manager action (Appear or Disappear) firing at a
/// given step of a run.
struct ReconfigEvent {
  enum class Kind : uint8_t { Appear, Disappear };
  Kind kind = Kind::Appear;
  Name resource;
  std::string policy;              // Appear only
  Trace state;                     // Appear only
  std::optional<Symbol> label;     // Appear only; defaults to a fresh label
  size_t at_step = 0;
};

using Script = std::vector<ReconfigEvent>;

struct SourceDocument {
  PolicyTable policies;
  /// `use` targets and inline policy names, in source order.
  std::vector<std::string> uses;
  std::vector<std::string> inline_policies;
  /// Named definitions, each fully expanded, in definition order.
  std::vector<std::pair<std::string, Process>> processes;
  std::string entry;
  Process main;
  Script script;

  const Process* find(const std::string& name) const;
};

}  // namespace glp
