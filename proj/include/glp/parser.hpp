#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glp/document.hpp"
#include "glp/lexer.hpp"
#include "glp/policy.hpp"

namespace glp {

/// A file could not be read.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  /// Policies available before the text is read.
  PolicyTable policies;
  /// Returns the contents of a `use "path";` target. When unset, `use`
  /// directives are rejected.
  std::function<std::string(const std::string&)> read_use;
  /// Reject boundaries whose policy is not defined.
  bool resolve_policies = true;
};

/// Parses a `.glp` document. A text that does not start with a top-level
/// keyword is read as a single process term and becomes the entry point.
SourceDocument parse(std::string_view text, const ParseOptions& options = {});

/// Parses one process term. Policy references are left unresolved.
Process parse_process(std::string_view text);

/// Parses a `.pol` text holding exactly one policy.
PolicyAutomaton parse_policy(std::string_view text);
std::vector<PolicyAutomaton> parse_policies(std::string_view text);

/// Reads a `.glp` file. `use` paths are looked up next to the file, then in
/// each directory of the GLP_POLICY_PATH environment variable.
SourceDocument load_document(const std::filesystem::path& path);

/// Reads a `.pol` file.
PolicyTable load_policies(const std::filesystem::path& path);

}  // namespace glp
