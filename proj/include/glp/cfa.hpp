#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "glp/policy.hpp"
#include "glp/process.hpp"

namespace glp {

/// One element of Γ(r): a policy, a history over r that may include the
/// analysis events in/out/err_out, and the labels of the processes that
/// entered r along that history.
struct GammaEntry {
  std::string policy;
  Trace trace;
  LabelSeq labels;

  friend bool operator==(const GammaEntry&, const GammaEntry&) = default;
  friend auto operator<=>(const GammaEntry&, const GammaEntry&) = default;
};

/// [(r, φ, η), S]
struct Frame {
  Name resource;
  std::string policy;
  Trace trace;
  LabelSeq labels;

  friend bool operator==(const Frame&, const Frame&) = default;
  friend auto operator<=>(const Frame&, const Frame&) = default;
};

using Delta = std::vector<Frame>;

/// (ρ, κ, Γ, Ψ). Names are stored by canonical class.
struct Estimate {
  std::map<Name, std::set<Name>> rho;
  std::map<Name, std::set<Name>> kappa;
  std::map<Name, std::set<GammaEntry>> gamma;
  std::set<Delta> psi;

  const std::set<Name>& rho_of(const Name& n) const;
  const std::set<Name>& kappa_of(const Name& n) const;
  const std::set<GammaEntry>& gamma_of(const Name& r) const;

  /// Pointwise inclusion.
  bool subset_of(const Estimate& other) const;
  friend bool operator==(const Estimate&, const Estimate&) = default;
};

Estimate intersect(const Estimate& a, const Estimate& b);

/// Checks every analysis clause for `p` under the context `delta`. Free
/// constants must be mapped to themselves by ρ. Throws InputError when `p`
/// is unlabeled, has a non-sequential boundary or request body, or names an
/// unknown policy.
bool validate(const Estimate& e, const Delta& delta, const Process& p, const PolicyTable& policies);

struct SolverStats {
  size_t tasks = 0;
  size_t request_firings = 0;
  size_t input_firings = 0;
  size_t flow_rounds = 0;
};

/// The least estimate validating `p` under the empty context.
Estimate least_estimate(const Process& p, const PolicyTable& policies, SolverStats* stats = nullptr);

/// The least valid estimate containing `initial`.
Estimate saturate(const Process& p, const PolicyTable& policies, Estimate initial, SolverStats* stats = nullptr);

struct FaultyTrace {
  std::string policy;
  Trace trace;
  LabelSeq labels;
};

/// Entries of Γ(r) that record a forced release.
std::vector<FaultyTrace> faulty_traces(const Estimate& e, const Name& r);

bool respects(const Process& p, const Name& r, const PolicyTable& policies);

/// One line per (resource, context) pair of Ψ: a resource that may be left
/// held when a process acts on a resource it does not hold.
std::vector<std::pair<Name, Delta>> unreleased_report(const Estimate& e);

std::string to_string(const Frame& f);
std::string to_string(const Delta& d);

}  // namespace glp
