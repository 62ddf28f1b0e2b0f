#include "glp/process.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace glp {

namespace {

Process make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const Process& shared_nil() {
  static const Process nil = make(Node{});
  return nil;
}

}  // namespace

Process Node::nil() { return shared_nil(); }

Process Node::make_prefix(Prefix p, Process cont) {
  Node n;
  n.kind = NodeKind::Prefix;
  n.prefix = std::move(p);
  n.children = {std::move(cont)};
  return make(std::move(n));
}

Process Node::restrict(Name binder, Process body) {
  if (binder.is_resource()) throw InputError("restriction is not applied to resource names: " + binder.display());
  Node n;
  n.kind = NodeKind::Restrict;
  n.name = std::move(binder);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Process Node::choice(std::vector<Process> branches) {
  if (branches.empty()) return nil();
  if (branches.size() == 1) return branches.front();
  Node n;
  n.kind = NodeKind::Choice;
  n.children = std::move(branches);
  return make(std::move(n));
}

Process Node::par(std::vector<Process> parts) {
  if (parts.empty()) return nil();
  if (parts.size() == 1) return parts.front();
  Node n;
  n.kind = NodeKind::Par;
  n.children = std::move(parts);
  return make(std::move(n));
}

Process Node::boundary(Name resource, std::string policy, Trace state, Process body,
                       std::optional<Symbol> label, LabelSeq holders) {
  if (!resource.is_resource()) throw InputError("resource boundary over a channel name: " + resource.display());
  Node n;
  n.kind = NodeKind::Boundary;
  n.name = std::move(resource);
  n.policy = std::move(policy);
  n.state = std::move(state);
  n.label = label;
  n.holders = std::move(holders);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Process Node::request(Name resource, Process body, std::optional<Symbol> label) {
  if (!resource.is_resource()) throw InputError("request over a channel name: " + resource.display());
  Node n;
  n.kind = NodeKind::Request;
  n.name = std::move(resource);
  n.label = label;
  n.children = {std::move(body)};
  return make(std::move(n));
}

Process Node::replicate(Process body, int budget) {
  Node n;
  n.kind = NodeKind::Replicate;
  n.budget = budget;
  n.children = {std::move(body)};
  return make(std::move(n));
}

Process Node::with_children(std::vector<Process> kids) const {
  Node n = *this;
  n.children = std::move(kids);
  return make(std::move(n));
}

Process par_of(Process a, Process b) {
  if (a->is_nil()) return b;
  if (b->is_nil()) return a;
  return Node::par({std::move(a), std::move(b)});
}

// ---------------------------------------------------------------------------
// Names

namespace {

void collect_free(const Process& p, std::vector<Name>& bound, std::set<Name>& out) {
  auto note = [&](const Name& n) {
    if (std::find(bound.begin(), bound.end(), n) == bound.end()) out.insert(n);
  };
  switch (p->kind) {
    case NodeKind::Nil:
      return;
    case NodeKind::Prefix: {
      const auto& pre = p->prefix;
      if (pre.kind == PrefixKind::Input) {
        note(pre.subject);
        bound.push_back(pre.object);
        collect_free(p->body(), bound, out);
        bound.pop_back();
        return;
      }
      if (pre.kind != PrefixKind::Tau) note(pre.subject);
      if (pre.kind == PrefixKind::Output) note(pre.object);
      collect_free(p->body(), bound, out);
      return;
    }
    case NodeKind::Restrict:
      bound.push_back(p->name);
      collect_free(p->body(), bound, out);
      bound.pop_back();
      return;
    case NodeKind::Boundary:
    case NodeKind::Request:
      note(p->name);
      collect_free(p->body(), bound, out);
      return;
    case NodeKind::Choice:
    case NodeKind::Par:
    case NodeKind::Replicate:
      for (const auto& c : p->children) collect_free(c, bound, out);
      return;
  }
}

void collect_all(const Process& p, std::set<Name>& out) {
  if (p->kind == NodeKind::Prefix) {
    if (p->prefix.kind != PrefixKind::Tau) out.insert(p->prefix.subject);
    if (p->prefix.kind == PrefixKind::Input || p->prefix.kind == PrefixKind::Output) out.insert(p->prefix.object);
  } else if (p->kind == NodeKind::Restrict || p->kind == NodeKind::Boundary || p->kind == NodeKind::Request) {
    out.insert(p->name);
  }
  for (const auto& c : p->children) collect_all(c, out);
}

bool same_class(const Name& a, const Name& b) { return a.site == b.site && a.base == b.base && a.kind == b.kind; }

}  // namespace

std::set<Name> free_names(const Process& p) {
  std::vector<Name> bound;
  std::set<Name> out;
  collect_free(p, bound, out);
  return out;
}

std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  collect_all(p, out);
  return out;
}

bool occurs_free(const Process& p, const Name& n) { return free_names(p).count(n) > 0; }

uint32_t max_instance(const Process& p, const Name& n) {
  uint32_t m = 0;
  for (const auto& x : all_names(p)) {
    if (same_class(x, n)) m = std::max(m, x.inst);
  }
  return m;
}

uint32_t max_instance(const Process& p) {
  uint32_t m = 0;
  for (const auto& x : all_names(p)) m = std::max(m, x.inst);
  return m;
}

namespace {

Name swap_name(const Name& n, const Name& from, const Name& to) { return n == from ? to : n; }

// Plain replacement of free occurrences; callers guarantee no capture.
Process replace(const Process& p, const Name& from, const Name& to) {
  switch (p->kind) {
    case NodeKind::Nil:
      return p;
    case NodeKind::Prefix: {
      Prefix pre = p->prefix;
      if (pre.kind != PrefixKind::Tau) pre.subject = swap_name(pre.subject, from, to);
      if (pre.kind == PrefixKind::Output) pre.object = swap_name(pre.object, from, to);
      if (pre.kind == PrefixKind::Input && pre.object == from) return Node::make_prefix(pre, p->body());
      return Node::make_prefix(pre, replace(p->body(), from, to));
    }
    case NodeKind::Restrict:
      if (p->name == from) return p;
      return p->with_children({replace(p->body(), from, to)});
    case NodeKind::Boundary:
    case NodeKind::Request: {
      Node n = *p;
      n.name = swap_name(n.name, from, to);
      n.children = {replace(p->body(), from, to)};
      return std::make_shared<const Node>(std::move(n));
    }
    case NodeKind::Choice:
    case NodeKind::Par:
    case NodeKind::Replicate: {
      std::vector<Process> kids;
      kids.reserve(p->children.size());
      for (const auto& c : p->children) kids.push_back(replace(c, from, to));
      return p->with_children(std::move(kids));
    }
  }
  return p;
}

Process subst(const Process& p, const Name& from, const Name& to);

// Handles a binder on the way down: shadowing stops the substitution and a
// binder equal to `to` is renamed away first.
template <typename Rebuild>
Process under_binder(const Name& binder, const Process& body, const Name& from, const Name& to,
                     Rebuild rebuild) {
  if (binder == from) return rebuild(binder, body);
  if (binder == to && occurs_free(body, from)) {
    Name fresh = binder;
    fresh.inst = std::max(max_instance(body, binder), to.inst) + 1;
    Process renamed = replace(body, binder, fresh);
    return rebuild(fresh, subst(renamed, from, to));
  }
  return rebuild(binder, subst(body, from, to));
}

Process subst(const Process& p, const Name& from, const Name& to) {
  switch (p->kind) {
    case NodeKind::Nil:
      return p;
    case NodeKind::Prefix: {
      Prefix pre = p->prefix;
      if (pre.kind != PrefixKind::Tau) pre.subject = swap_name(pre.subject, from, to);
      if (pre.kind == PrefixKind::Output) pre.object = swap_name(pre.object, from, to);
      if (pre.kind == PrefixKind::Input) {
        return under_binder(pre.object, p->body(), from, to, [&](const Name& b, Process body) {
          Prefix q = pre;
          q.object = b;
          return Node::make_prefix(q, std::move(body));
        });
      }
      return Node::make_prefix(pre, subst(p->body(), from, to));
    }
    case NodeKind::Restrict:
      return under_binder(p->name, p->body(), from, to,
                          [](const Name& b, Process body) { return Node::restrict(b, std::move(body)); });
    case NodeKind::Boundary:
    case NodeKind::Request: {
      Node n = *p;
      n.name = swap_name(n.name, from, to);
      n.children = {subst(p->body(), from, to)};
      return std::make_shared<const Node>(std::move(n));
    }
    case NodeKind::Choice:
    case NodeKind::Par:
    case NodeKind::Replicate: {
      std::vector<Process> kids;
      kids.reserve(p->children.size());
      for (const auto& c : p->children) kids.push_back(subst(c, from, to));
      return p->with_children(std::move(kids));
    }
  }
  return p;
}

}  // namespace

Process substitute(const Process& p, const Name& from, const Name& to) {
  if (!substitutable(from.kind, to.kind)) {
    throw InputError("cannot substitute " + to.display() + " for " + from.display() + ": kind mismatch");
  }
  if (from == to) return p;
  return subst(p, from, to);
}

Process rename_free(const Process& p, const Name& from, const Name& to) { return replace(p, from, to); }

// ---------------------------------------------------------------------------
// Labels

namespace {

void gather_labels(const Process& p, std::vector<Symbol>& out) {
  if ((p->kind == NodeKind::Boundary || p->kind == NodeKind::Request) && p->label) out.push_back(*p->label);
  for (const auto& c : p->children) gather_labels(c, out);
}

Process assign_labels(const Process& p, std::unordered_set<Symbol>& used, int& counter) {
  std::vector<Process> kids;
  kids.reserve(p->children.size());
  bool changed = false;
  // Preorder numbering: the node takes its label before its children.
  std::optional<Symbol> label = p->label;
  if ((p->kind == NodeKind::Boundary || p->kind == NodeKind::Request) && !label) {
    Symbol fresh;
    do {
      fresh = Symbol("chi" + std::to_string(++counter));
    } while (used.count(fresh));
    used.insert(fresh);
    label = fresh;
    changed = true;
  }
  for (const auto& c : p->children) {
    kids.push_back(assign_labels(c, used, counter));
    changed = changed || kids.back() != c;
  }
  LabelSeq holders = p->holders;
  if (p->kind == NodeKind::Boundary && holders.empty() && !kids.front()->is_nil()) {
    holders = {*label};
    changed = true;
  }
  if (!changed) return p;
  Node n = *p;
  n.label = label;
  n.holders = std::move(holders);
  n.children = std::move(kids);
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace

std::vector<Symbol> labels_of(const Process& p) {
  std::vector<Symbol> out;
  gather_labels(p, out);
  return out;
}

Process label_boundaries(const Process& p) {
  auto existing = labels_of(p);
  std::unordered_set<Symbol> used;
  for (auto l : existing) {
    if (!used.insert(l).second) throw InputError("duplicate boundary label @" + l.str());
  }
  int counter = 0;
  return assign_labels(p, used, counter);
}

Process erase_labels(const Process& p) {
  std::vector<Process> kids;
  for (const auto& c : p->children) kids.push_back(erase_labels(c));
  Node n = *p;
  n.label.reset();
  n.holders.clear();
  n.children = std::move(kids);
  return std::make_shared<const Node>(std::move(n));
}

bool fully_labeled(const Process& p) {
  if ((p->kind == NodeKind::Boundary || p->kind == NodeKind::Request) && !p->label) return false;
  return std::all_of(p->children.begin(), p->children.end(), [](const Process& c) { return fully_labeled(c); });
}

// ---------------------------------------------------------------------------
// Sequential fragment

bool is_sequential_body(const Process& q) {
  switch (q->kind) {
    case NodeKind::Nil:
      return true;
    case NodeKind::Restrict:
    case NodeKind::Prefix:
    case NodeKind::Boundary:
    case NodeKind::Request:
      return is_sequential_body(q->body());
    case NodeKind::Choice:
      return std::all_of(q->children.begin(), q->children.end(),
                         [](const Process& c) { return is_sequential_body(c); });
    case NodeKind::Par: {
      // Only available resources may run beside the single thread.
      int threads = 0;
      for (const auto& c : q->children) {
        if (c->is_available()) continue;
        if (++threads > 1 || !is_sequential_body(c)) return false;
      }
      return true;
    }
    case NodeKind::Replicate:
      return false;
  }
  return false;
}

bool is_sequential(const Process& p) {
  if (p->kind == NodeKind::Boundary || p->kind == NodeKind::Request) return is_sequential_body(p->body());
  return std::all_of(p->children.begin(), p->children.end(), [](const Process& c) { return is_sequential(c); });
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

struct AlphaEnv {
  std::vector<std::pair<Name, Name>> bound;  // innermost last
  std::map<std::pair<std::string, uint32_t>, std::pair<std::string, uint32_t>> fwd, bwd;

  bool same(const Name& a, const Name& b) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      bool la = it->first == a, lb = it->second == b;
      if (la || lb) return la && lb;
    }
    return a == b;
  }

  bool bind_classes(const Name& a, const Name& b) {
    if (a.kind != b.kind) return false;
    auto ka = std::make_pair(a.base, a.site);
    auto kb = std::make_pair(b.base, b.site);
    auto f = fwd.find(ka);
    auto r = bwd.find(kb);
    if (f != fwd.end() && f->second != kb) return false;
    if (r != bwd.end() && r->second != ka) return false;
    fwd[ka] = kb;
    bwd[kb] = ka;
    return true;
  }
};

bool alpha(const Process& p, const Process& q, AlphaEnv& env) {
  if (p->kind != q->kind || p->children.size() != q->children.size()) return false;
  auto binder = [&](const Name& a, const Name& b, const Process& bp, const Process& bq) {
    if (!env.bind_classes(a, b)) return false;
    env.bound.emplace_back(a, b);
    bool ok = alpha(bp, bq, env);
    env.bound.pop_back();
    return ok;
  };
  switch (p->kind) {
    case NodeKind::Nil:
      return true;
    case NodeKind::Prefix: {
      const auto &a = p->prefix, &b = q->prefix;
      if (a.kind != b.kind || a.action != b.action) return false;
      if (a.kind != PrefixKind::Tau && !env.same(a.subject, b.subject)) return false;
      if (a.kind == PrefixKind::Output && !env.same(a.object, b.object)) return false;
      if (a.kind == PrefixKind::Input) return binder(a.object, b.object, p->body(), q->body());
      return alpha(p->body(), q->body(), env);
    }
    case NodeKind::Restrict:
      return binder(p->name, q->name, p->body(), q->body());
    case NodeKind::Boundary:
      if (p->policy != q->policy || p->state != q->state || p->holders != q->holders) return false;
      [[fallthrough]];
    case NodeKind::Request:
      if (p->label != q->label || !env.same(p->name, q->name)) return false;
      return alpha(p->body(), q->body(), env);
    case NodeKind::Replicate:
      if (p->budget != q->budget) return false;
      [[fallthrough]];
    case NodeKind::Choice:
    case NodeKind::Par:
      for (size_t i = 0; i < p->children.size(); ++i) {
        if (!alpha(p->children[i], q->children[i], env)) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

bool alpha_equivalent(const Process& p, const Process& q) {
  AlphaEnv env;
  return alpha(p, q, env);
}

size_t term_size(const Process& p) {
  size_t n = 1;
  for (const auto& c : p->children) n += term_size(c);
  return n;
}

}  // namespace glp
