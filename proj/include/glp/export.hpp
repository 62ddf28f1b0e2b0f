#pragma once

#include "json.hpp"
#include <string>

#include "glp/cfa.hpp"
#include "glp/explorer.hpp"

namespace glp {

inline constexpr const char* kVersion = "0.1.0";

/// rho/kappa as name -> sorted names, gamma as resource -> entries, psi as
/// a list of frame lists. Names that print alike are written with their
/// binding site.
nlohmann::ordered_json estimate_to_json(const Estimate& e);

/// One `from -label-> to` line per edge, preceded by a header line.
std::string lts_to_edge_list(const LtsGraph& g);

nlohmann::ordered_json lts_to_json(const LtsGraph& g);

nlohmann::ordered_json verdict_to_json(const Verdict& v);

}  // namespace glp
