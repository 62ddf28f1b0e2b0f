#pragma once

#include <string>

#include "glp/document.hpp"
#include "glp/policy.hpp"
#include "glp/process.hpp"

namespace glp {

/// Renders a term in the concrete syntax accepted by `parse`. Binders whose
/// printed form would capture a different free name get a fresh `'n` suffix.
std::string pretty(const Process& p);

std::string pretty(const Prefix& pi);

std::string pretty_policy(const PolicyAutomaton& a);

/// Renders a whole document. Subterms that are the expansion of an earlier
/// definition are printed as a reference to it. Policies loaded through `use`
/// are not inlined.
std::string pretty_document(const SourceDocument& doc);

}  // namespace glp
