#include "glp/cfa.hpp"

#include <algorithm>
#include <deque>

namespace glp {

namespace {

const std::set<Name> kNoNames;
const std::set<GammaEntry> kNoEntries;

using Env = std::vector<std::pair<Name, Name>>;  // resource variable -> resource

Name resolve(const Name& n, const Env& env) {
  Name c = n.canonical();
  for (const auto& [var, val] : env) {
    if (var == c) return val;
  }
  return c;
}

Env bind_var(Env env, const Name& var, const Name& val) {
  env.emplace_back(var.canonical(), val);
  std::sort(env.begin(), env.end());
  return env;
}

// Innermost frame holding r.
std::optional<size_t> find_frame(const Delta& d, const Name& r) {
  for (size_t i = d.size(); i-- > 0;) {
    if (d[i].resource == r) return i;
  }
  return std::nullopt;
}

Delta without(const Delta& d, size_t i) {
  Delta out = d;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

Symbol last_label(const Frame& f) { return f.labels.back(); }

LabelSeq boundary_labels(const Node& b) {
  if (!b.holders.empty() || !b.label) return b.holders;
  return {*b.label};
}

void check_domain(const Process& p, const PolicyTable& policies) {
  if (!fully_labeled(p)) throw InputError("the analysis needs a labeled term; run label_boundaries first");
  if (!is_sequential(p)) throw InputError("a boundary or request body is outside the sequential fragment");
  std::function<void(const Process&)> walk = [&](const Process& q) {
    if (q->kind == NodeKind::Boundary) resolve_policy(policies, q->policy);
    for (const auto& c : q->children) walk(c);
  };
  walk(p);
}

std::set<Name> constants_of(const Process& p) {
  std::set<Name> out;
  for (const auto& n : all_names(p)) {
    if (n.is_constant()) out.insert(n.canonical());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

class Checker {
 public:
  Checker(const Estimate& e, const PolicyTable& policies) : e_(e), policies_(policies) {}

  bool check(const Process& p, const Delta& d, const Env& env) {
    switch (p->kind) {
      case NodeKind::Nil:
        for (const auto& f : d) {
          if (!has(f.resource, {f.policy, f.trace, f.labels})) return false;
        }
        return true;
      case NodeKind::Prefix:
        return prefix(p, d, env);
      case NodeKind::Restrict: {
        Name x = p->name.canonical();
        return e_.rho_of(x).count(x) && check(p->body(), d, env);
      }
      case NodeKind::Choice:
      case NodeKind::Par:
      case NodeKind::Replicate:
        return std::all_of(p->children.begin(), p->children.end(),
                           [&](const Process& c) { return check(c, d, env); });
      case NodeKind::Boundary: {
        Name r = resolve(p->name, env);
        if (p->body()->is_nil()) return has(r, {p->policy, p->state, p->holders});
        Delta inner = d;
        inner.push_back({r, p->policy, p->state, boundary_labels(*p)});
        return check(p->body(), inner, env);
      }
      case NodeKind::Request: {
        Name r = resolve(p->name, env);
        Symbol chi = *p->label;
        for (const auto& g : e_.gamma_of(r)) {
          if (std::find(g.labels.begin(), g.labels.end(), chi) != g.labels.end()) continue;
          Delta inner = d;
          LabelSeq labels = g.labels;
          labels.push_back(chi);
          inner.push_back({r, g.policy, append(g.trace, Event::in(chi)), std::move(labels)});
          if (!check(p->body(), inner, env)) return false;
        }
        return true;
      }
    }
    return false;
  }

 private:
  const Estimate& e_;
  const PolicyTable& policies_;

  bool has(const Name& r, const GammaEntry& g) const { return e_.gamma_of(r).count(g) > 0; }

  bool prefix(const Process& p, const Delta& d, const Env& env) {
    const Prefix& pi = p->prefix;
    switch (pi.kind) {
      case PrefixKind::Tau:
        return check(p->body(), d, env);
      case PrefixKind::Output: {
        const auto& values = e_.rho_of(resolve(pi.object, env));
        for (const auto& a : e_.rho_of(resolve(pi.subject, env))) {
          const auto& k = e_.kappa_of(a);
          if (!std::includes(k.begin(), k.end(), values.begin(), values.end())) return false;
        }
        return check(p->body(), d, env);
      }
      case PrefixKind::Input: {
        Name y = pi.object.canonical();
        const auto& bound = e_.rho_of(y);
        bool res = pi.object.is_resource();
        for (const auto& a : e_.rho_of(resolve(pi.subject, env))) {
          for (const auto& v : e_.kappa_of(a)) {
            if (v.is_resource() == res && !bound.count(v)) return false;
          }
        }
        if (!res) return check(p->body(), d, env);
        for (const auto& r : bound) {
          if (!check(p->body(), d, bind_var(env, y, r))) return false;
        }
        return true;
      }
      case PrefixKind::Access:
      case PrefixKind::Release: {
        Name r = resolve(pi.subject, env);
        auto idx = find_frame(d, r);
        if (!idx) return e_.psi.count(d) > 0;
        const Frame& f = d[*idx];
        if (pi.kind == PrefixKind::Release) {
          Trace t = append(append(f.trace, Event::release()), Event::out(last_label(f)));
          return has(r, {f.policy, t, f.labels}) && check(p->body(), without(d, *idx), env);
        }
        Event a = Event::action(pi.action);
        if (resolve_policy(policies_, f.policy).admits_extended(f.trace, a)) {
          Delta next = d;
          next[*idx].trace.push_back(a);
          return check(p->body(), next, env);
        }
        return has(r, {f.policy, append(f.trace, Event::err_out(last_label(f))), f.labels}) &&
               check(p->body(), without(d, *idx), env);
      }
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Least estimate

class Solver {
 public:
  Solver(const PolicyTable& policies, Estimate initial, SolverStats* stats)
      : policies_(policies), e_(std::move(initial)), stats_(stats ? stats : &own_stats_) {}

  Estimate run(const Process& p) {
    for (const auto& n : constants_of(p)) add_rho(n, n);
    visit(p, {}, {});
    // Constraints collected so far may already hold facts from the initial
    // estimate.
    while (true) {
      while (!queue_.empty()) {
        Task t = std::move(queue_.front());
        queue_.pop_front();
        ++stats_->tasks;
        run_task(t);
      }
      if (!propagate_flows()) break;
    }
    return std::move(e_);
  }

 private:
  struct RequestSite {
    Process node;
    Delta delta;
    Env env;
    Name resource;
  };
  struct InputSite {
    Process node;
    Delta delta;
    Env env;
    Name var;
  };
  struct Task {
    enum Kind { Request, Input } kind;
    size_t site;
    const GammaEntry* entry = nullptr;
    Name value;
  };
  struct Flow {
    bool output;  // output: rho(object) ⊆ kappa(a); input: kappa(a) ⊆ rho(object)
    Name channel;
    Name object;
    friend auto operator<=>(const Flow&, const Flow&) = default;
  };

  const PolicyTable& policies_;
  Estimate e_;
  SolverStats own_stats_;
  SolverStats* stats_;
  std::deque<Task> queue_;
  std::vector<RequestSite> requests_;
  std::vector<InputSite> inputs_;
  std::map<Name, std::vector<size_t>> requests_on_;
  std::map<Name, std::vector<size_t>> inputs_on_;
  std::set<std::tuple<const Node*, Delta, Env>> registered_;
  std::set<Flow> flows_;

  void add_gamma(const Name& r, GammaEntry g) {
    auto [it, fresh] = e_.gamma[r].insert(std::move(g));
    if (!fresh) return;
    auto sites = requests_on_.find(r);
    if (sites == requests_on_.end()) return;
    for (size_t s : sites->second) queue_.push_back({Task::Request, s, &*it, {}});
  }

  bool add_rho(const Name& n, const Name& v) {
    if (!e_.rho[n].insert(v).second) return false;
    auto sites = inputs_on_.find(n);
    if (sites != inputs_on_.end()) {
      for (size_t s : sites->second) queue_.push_back({Task::Input, s, nullptr, v});
    }
    return true;
  }

  void add_psi(const Delta& d) { e_.psi.insert(d); }

  bool first_time(const Process& p, const Delta& d, const Env& env) {
    return registered_.emplace(p.get(), d, env).second;
  }

  void run_task(const Task& t) {
    if (t.kind == Task::Request) {
      const RequestSite& s = requests_[t.site];
      enter(s, *t.entry);
    } else {
      const InputSite& s = inputs_[t.site];
      ++stats_->input_firings;
      visit(s.node->body(), s.delta, bind_var(s.env, s.var, t.value));
    }
  }

  void enter(const RequestSite& s, const GammaEntry& g) {
    Symbol chi = *s.node->label;
    if (std::find(g.labels.begin(), g.labels.end(), chi) != g.labels.end()) return;
    ++stats_->request_firings;
    Delta inner = s.delta;
    LabelSeq labels = g.labels;
    labels.push_back(chi);
    inner.push_back({s.resource, g.policy, append(g.trace, Event::in(chi)), std::move(labels)});
    visit(s.node->body(), inner, s.env);
  }

  // Evaluates the channel constraints until nothing changes. Returns whether
  // new work was queued.
  bool propagate_flows() {
    bool changed = true;
    while (changed) {
      changed = false;
      ++stats_->flow_rounds;
      for (const auto& f : flows_) {
        std::vector<Name> channels(e_.rho_of(f.channel).begin(), e_.rho_of(f.channel).end());
        for (const auto& a : channels) {
          if (f.output) {
            std::vector<Name> values(e_.rho_of(f.object).begin(), e_.rho_of(f.object).end());
            for (const auto& v : values) changed = e_.kappa[a].insert(v).second || changed;
          } else {
            std::vector<Name> values(e_.kappa_of(a).begin(), e_.kappa_of(a).end());
            for (const auto& v : values) {
              if (v.is_resource() == f.object.is_resource()) changed = add_rho(f.object, v) || changed;
            }
          }
        }
      }
    }
    return !queue_.empty();
  }

  void visit(const Process& p, const Delta& d, const Env& env) {
    switch (p->kind) {
      case NodeKind::Nil:
        for (const auto& f : d) add_gamma(f.resource, {f.policy, f.trace, f.labels});
        return;
      case NodeKind::Prefix:
        prefix(p, d, env);
        return;
      case NodeKind::Restrict: {
        Name x = p->name.canonical();
        add_rho(x, x);
        visit(p->body(), d, env);
        return;
      }
      case NodeKind::Choice:
      case NodeKind::Par:
      case NodeKind::Replicate:
        for (const auto& c : p->children) visit(c, d, env);
        return;
      case NodeKind::Boundary: {
        Name r = resolve(p->name, env);
        if (p->body()->is_nil()) {
          add_gamma(r, {p->policy, p->state, p->holders});
          return;
        }
        Delta inner = d;
        inner.push_back({r, p->policy, p->state, boundary_labels(*p)});
        visit(p->body(), inner, env);
        return;
      }
      case NodeKind::Request: {
        if (!first_time(p, d, env)) return;
        Name r = resolve(p->name, env);
        size_t id = requests_.size();
        requests_.push_back({p, d, env, r});
        requests_on_[r].push_back(id);
        for (const auto& g : e_.gamma_of(r)) queue_.push_back({Task::Request, id, &g, {}});
        return;
      }
    }
  }

  void prefix(const Process& p, const Delta& d, const Env& env) {
    const Prefix& pi = p->prefix;
    switch (pi.kind) {
      case PrefixKind::Tau:
        visit(p->body(), d, env);
        return;
      case PrefixKind::Output:
        flows_.insert({true, resolve(pi.subject, env), resolve(pi.object, env)});
        visit(p->body(), d, env);
        return;
      case PrefixKind::Input: {
        Name y = pi.object.canonical();
        flows_.insert({false, resolve(pi.subject, env), y});
        if (!pi.object.is_resource()) {
          visit(p->body(), d, env);
          return;
        }
        if (!first_time(p, d, env)) return;
        size_t id = inputs_.size();
        inputs_.push_back({p, d, env, y});
        inputs_on_[y].push_back(id);
        for (const auto& r : e_.rho_of(y)) queue_.push_back({Task::Input, id, nullptr, r});
        return;
      }
      case PrefixKind::Access:
      case PrefixKind::Release: {
        Name r = resolve(pi.subject, env);
        auto idx = find_frame(d, r);
        if (!idx) {
          add_psi(d);
          return;
        }
        const Frame& f = d[*idx];
        if (pi.kind == PrefixKind::Release) {
          add_gamma(r, {f.policy, append(append(f.trace, Event::release()), Event::out(last_label(f))), f.labels});
          visit(p->body(), without(d, *idx), env);
          return;
        }
        Event a = Event::action(pi.action);
        if (resolve_policy(policies_, f.policy).admits_extended(f.trace, a)) {
          Delta next = d;
          next[*idx].trace.push_back(a);
          visit(p->body(), next, env);
          return;
        }
        add_gamma(r, {f.policy, append(f.trace, Event::err_out(last_label(f))), f.labels});
        visit(p->body(), without(d, *idx), env);
        return;
      }
    }
  }
};

}  // namespace

const std::set<Name>& Estimate::rho_of(const Name& n) const {
  auto it = rho.find(n);
  return it == rho.end() ? kNoNames : it->second;
}

const std::set<Name>& Estimate::kappa_of(const Name& n) const {
  auto it = kappa.find(n);
  return it == kappa.end() ? kNoNames : it->second;
}

const std::set<GammaEntry>& Estimate::gamma_of(const Name& r) const {
  auto it = gamma.find(r);
  return it == gamma.end() ? kNoEntries : it->second;
}

namespace {

template <typename M>
bool map_subset(const M& a, const M& b) {
  for (const auto& [k, vs] : a) {
    if (vs.empty()) continue;
    auto it = b.find(k);
    if (it == b.end() || !std::includes(it->second.begin(), it->second.end(), vs.begin(), vs.end())) return false;
  }
  return true;
}

template <typename M>
M map_intersect(const M& a, const M& b) {
  M out;
  for (const auto& [k, vs] : a) {
    auto it = b.find(k);
    if (it == b.end()) continue;
    typename M::mapped_type both;
    std::set_intersection(vs.begin(), vs.end(), it->second.begin(), it->second.end(),
                          std::inserter(both, both.end()));
    if (!both.empty()) out.emplace(k, std::move(both));
  }
  return out;
}

}  // namespace

bool Estimate::subset_of(const Estimate& o) const {
  return map_subset(rho, o.rho) && map_subset(kappa, o.kappa) && map_subset(gamma, o.gamma) &&
         std::includes(o.psi.begin(), o.psi.end(), psi.begin(), psi.end());
}

Estimate intersect(const Estimate& a, const Estimate& b) {
  Estimate out;
  out.rho = map_intersect(a.rho, b.rho);
  out.kappa = map_intersect(a.kappa, b.kappa);
  out.gamma = map_intersect(a.gamma, b.gamma);
  std::set_intersection(a.psi.begin(), a.psi.end(), b.psi.begin(), b.psi.end(), std::inserter(out.psi, out.psi.end()));
  return out;
}

bool validate(const Estimate& e, const Delta& delta, const Process& p, const PolicyTable& policies) {
  check_domain(p, policies);
  for (const auto& n : constants_of(p)) {
    if (!e.rho_of(n).count(n)) return false;
  }
  Checker c(e, policies);
  return c.check(p, delta, {});
}

Estimate saturate(const Process& p, const PolicyTable& policies, Estimate initial, SolverStats* stats) {
  check_domain(p, policies);
  Solver s(policies, std::move(initial), stats);
  return s.run(p);
}

Estimate least_estimate(const Process& p, const PolicyTable& policies, SolverStats* stats) {
  return saturate(p, policies, {}, stats);
}

std::vector<FaultyTrace> faulty_traces(const Estimate& e, const Name& r) {
  std::vector<FaultyTrace> out;
  for (const auto& g : e.gamma_of(r.canonical())) {
    if (is_faulty(g.trace)) out.push_back({g.policy, g.trace, g.labels});
  }
  return out;
}

bool respects(const Process& p, const Name& r, const PolicyTable& policies) {
  return faulty_traces(least_estimate(p, policies), r).empty();
}

std::vector<std::pair<Name, Delta>> unreleased_report(const Estimate& e) {
  std::vector<std::pair<Name, Delta>> out;
  for (const auto& d : e.psi) {
    for (const auto& f : d) out.emplace_back(f.resource, d);
  }
  return out;
}

std::string to_string(const Frame& f) {
  return "[(" + f.resource.display() + "," + f.policy + "," + to_string(f.trace) + ")," + to_string(f.labels) + "]";
}

std::string to_string(const Delta& d) {
  if (d.empty()) return "[eps,eps]";
  std::string out;
  for (const auto& f : d) out += to_string(f);
  return out;
}

}  // namespace glp
