#include <algorithm>
#include <map>

#include "glp/semantics.hpp"

namespace glp {

namespace {

void flatten_into(NodeKind kind, const Process& c, std::vector<Process>& out) {
  if (c->is_nil()) return;
  if (c->kind == kind) {
    out.insert(out.end(), c->children.begin(), c->children.end());
  } else {
    out.push_back(c);
  }
}

Process restrict_norm(const Name& z, const Process& p);

Process norm(const Process& p) {
  switch (p->kind) {
    case NodeKind::Nil:
      return p;
    case NodeKind::Prefix: {
      Process c = norm(p->body());
      return c == p->body() ? p : Node::make_prefix(p->prefix, c);
    }
    case NodeKind::Choice:
    case NodeKind::Par: {
      std::vector<Process> kids;
      for (const auto& c : p->children) flatten_into(p->kind, norm(c), kids);
      return p->kind == NodeKind::Par ? Node::par(std::move(kids)) : Node::choice(std::move(kids));
    }
    case NodeKind::Replicate: {
      if (p->budget == 0) return Node::nil();
      Process b = norm(p->body());
      if (b->is_nil()) return b;
      return b == p->body() ? p : Node::replicate(b, p->budget);
    }
    case NodeKind::Restrict:
      return restrict_norm(p->name, norm(p->body()));
    case NodeKind::Boundary: {
      Process b = norm(p->body());
      std::vector<Process> parts, rest;
      if (b->kind == NodeKind::Par) {
        for (const auto& c : b->children) (c->is_available() ? parts : rest).push_back(c);
      } else if (b->is_available()) {
        parts.push_back(b);
      } else {
        rest.push_back(b);
      }
      Process inner = Node::par(std::move(rest));
      parts.push_back(inner == p->body() ? p : p->with_children({inner}));
      return Node::par(std::move(parts));
    }
    case NodeKind::Request: {
      Process b = norm(p->body());
      return b == p->body() ? p : p->with_children({b});
    }
  }
  return p;
}

// `p` is already normalized.
Process restrict_norm(const Name& z, const Process& p) {
  if (!occurs_free(p, z)) return p;
  switch (p->kind) {
    case NodeKind::Par: {
      std::vector<Process> with, without;
      for (const auto& c : p->children) (occurs_free(c, z) ? with : without).push_back(c);
      if (without.empty()) return Node::restrict(z, p);
      without.push_back(restrict_norm(z, Node::par(std::move(with))));
      return Node::par(std::move(without));
    }
    case NodeKind::Boundary:
    case NodeKind::Request:
      return p->with_children({restrict_norm(z, p->body())});
    default:
      return Node::restrict(z, p);
  }
}

using ClassKey = std::tuple<std::string, uint32_t, NameKind>;

ClassKey class_of(const Name& n) { return {n.base, n.site, n.kind}; }

class Canon {
 public:
  explicit Canon(const Process& root) {
    for (const auto& n : free_names(root)) free_insts_[class_of(n)].push_back(n.inst);
  }

  std::pair<Process, std::string> run(const Process& p) {
    switch (p->kind) {
      case NodeKind::Nil:
        return {p, "0"};
      case NodeKind::Prefix: {
        Prefix pi = p->prefix;
        std::string k;
        switch (pi.kind) {
          case PrefixKind::Tau:
            k = "t";
            break;
          case PrefixKind::Output:
            pi.subject = lookup(pi.subject);
            pi.object = lookup(pi.object);
            k = "o(" + pi.subject.key() + "," + pi.object.key() + ")";
            break;
          case PrefixKind::Access:
            pi.subject = lookup(pi.subject);
            k = "a(" + pi.action.str() + "," + pi.subject.key() + ")";
            break;
          case PrefixKind::Release:
            pi.subject = lookup(pi.subject);
            k = "r(" + pi.subject.key() + ")";
            break;
          case PrefixKind::Input: {
            pi.subject = lookup(pi.subject);
            Name b = open_binder(pi.object);
            k = "i(" + pi.subject.key() + "," + b.key() + ")";
            auto [c, ck] = run(p->body());
            close_binder();
            pi.object = b;
            return {Node::make_prefix(pi, c), k + "." + ck};
          }
        }
        auto [c, ck] = run(p->body());
        return {Node::make_prefix(pi, c), k + "." + ck};
      }
      case NodeKind::Restrict: {
        Name b = open_binder(p->name);
        auto [c, ck] = run(p->body());
        close_binder();
        return {Node::restrict(b, c), "n(" + b.key() + ")" + ck};
      }
      case NodeKind::Choice:
      case NodeKind::Par: {
        std::vector<std::pair<std::string, Process>> kids;
        kids.reserve(p->children.size());
        for (const auto& c : p->children) {
          auto [cp, ck] = run(c);
          kids.emplace_back(std::move(ck), std::move(cp));
        }
        std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string k = p->kind == NodeKind::Par ? "|[" : "+[";
        std::vector<Process> procs;
        for (size_t i = 0; i < kids.size(); ++i) {
          if (i) k += ",";
          k += kids[i].first;
          procs.push_back(std::move(kids[i].second));
        }
        return {p->with_children(std::move(procs)), k + "]"};
      }
      case NodeKind::Replicate: {
        auto [c, ck] = run(p->body());
        return {p->with_children({c}), "!" + std::to_string(p->budget) + "{" + ck + "}"};
      }
      case NodeKind::Boundary:
      case NodeKind::Request: {
        Node n = *p;
        n.name = lookup(p->name);
        auto [c, ck] = run(p->body());
        n.children = {c};
        std::string k;
        if (p->kind == NodeKind::Boundary) {
          k = "B(" + n.name.key() + "," + n.policy + "," + to_string(n.state) + "," + to_string(n.holders);
        } else {
          k = "Q(" + n.name.key();
        }
        k += "," + (n.label ? n.label->str() : std::string("-")) + "){" + ck + "}";
        return {std::make_shared<const Node>(std::move(n)), k};
      }
    }
    return {p, "?"};
  }

 private:
  std::vector<std::pair<Name, Name>> scope_;
  std::map<ClassKey, std::vector<uint32_t>> free_insts_;

  Name lookup(const Name& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == n) return it->second;
    }
    return n;
  }

  // Instance = nesting depth among enclosing binders of the same class,
  // skipping instances taken by free names of that class.
  Name open_binder(const Name& b) {
    Name fresh = b;
    uint32_t inst = 0;
    ClassKey cls = class_of(b);
    auto taken = [&](uint32_t i) {
      auto f = free_insts_.find(cls);
      if (f != free_insts_.end() && std::count(f->second.begin(), f->second.end(), i)) return true;
      for (const auto& [old, now] : scope_) {
        if (class_of(now) == cls && now.inst == i) return true;
      }
      return false;
    };
    while (taken(inst)) ++inst;
    fresh.inst = inst;
    scope_.emplace_back(b, fresh);
    return fresh;
  }
  void close_binder() { scope_.pop_back(); }
};

}  // namespace

Normalized normalize(const Process& p) {
  Process n = norm(p);
  Canon canon(n);
  auto [term, key] = canon.run(n);
  return {term, key};
}

Process congruence_normalize(const Process& p) { return normalize(p).term; }

std::string canonical_key(const Process& p) { return normalize(p).key; }

Process replication_unfold(const Process& p, int budget) {
  std::vector<Process> kids;
  bool changed = false;
  for (const auto& c : p->children) {
    kids.push_back(replication_unfold(c, budget));
    changed = changed || kids.back() != c;
  }
  if (p->kind == NodeKind::Replicate && p->budget < 0) {
    Node n = *p;
    n.budget = budget;
    n.children = std::move(kids);
    return std::make_shared<const Node>(std::move(n));
  }
  return changed ? p->with_children(std::move(kids)) : p;
}

}  // namespace glp
