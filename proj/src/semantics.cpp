#include "glp/semantics.hpp"

#include <algorithm>
#include <functional>

namespace glp {

std::string to_string(const TransitionLabel& l) {
  switch (l.kind) {
    case LabelKind::Silent:
      return "tau";
    case LabelKind::FreeInput:
      return l.channel.display() + "(" + l.object.display() + ")";
    case LabelKind::FreeOutput:
      return l.channel.display() + "<" + l.object.display() + ">";
    case LabelKind::BoundOutput:
      return l.channel.display() + "<new " + l.object.display() + ">";
    case LabelKind::OpenAccess:
      return l.action.str() + "?(" + l.resource.display() + ")";
    case LabelKind::OpenRelease:
      return "rel?(" + l.resource.display() + ")";
    case LabelKind::ClosedAccess:
      return l.action.str() + "(" + l.resource.display() + ")";
    case LabelKind::ClosedRelease:
      return "rel(" + l.resource.display() + ")";
    case LabelKind::FaultyAccess:
      return l.action.str() + "!(" + l.resource.display() + ")";
  }
  return "?";
}

namespace {

// Ordering key that also tells apart names differing only by binding site.
std::string label_key(const TransitionLabel& l) {
  std::string k = to_string(l);
  k += "|" + l.channel.key() + "|" + l.object.key() + "|" + l.resource.key();
  if (l.boundary) k += "|" + l.boundary->str();
  return k;
}

bool mentions(const TransitionLabel& l, const Name& n) {
  switch (l.kind) {
    case LabelKind::Silent:
      return false;
    case LabelKind::FreeInput:
    case LabelKind::FreeOutput:
    case LabelKind::BoundOutput:
      return l.channel == n || l.object == n;
    default:
      return l.resource == n;
  }
}

struct Raw {
  TransitionLabel label;
  Process target;
};

class Engine {
 public:
  Engine(const PolicyTable& policies, uint32_t fresh) : policies_(policies), fresh_(fresh) {}

  std::vector<Raw> trans(const Process& p) {
    std::vector<Raw> out;
    switch (p->kind) {
      case NodeKind::Nil:
        break;
      case NodeKind::Prefix:
        out.push_back({prefix_label(p->prefix), p->body()});
        break;
      case NodeKind::Choice:
        for (const auto& c : p->children) {
          auto t = trans(c);
          out.insert(out.end(), t.begin(), t.end());
        }
        break;
      case NodeKind::Par:
        par(p->children, out);
        break;
      case NodeKind::Replicate:
        replicate(p, out);
        break;
      case NodeKind::Restrict:
        restrict(p, out);
        break;
      case NodeKind::Boundary:
        boundary(p, out);
        break;
      case NodeKind::Request:
        for (auto& t : trans(p->body())) {
          if (!mentions(t.label, p->name)) out.push_back({t.label, p->with_children({t.target})});
        }
        break;
    }
    return out;
  }

  // Requests that can enter one of the available resources `avails`; each
  // result is the rewritten component and the index of the consumed resource.
  void acquire_sites(const Process& c, const std::vector<Process>& avails, std::vector<std::pair<Process, size_t>>& out) {
    switch (c->kind) {
      case NodeKind::Request:
        for (size_t k = 0; k < avails.size(); ++k) {
          const Node& a = *avails[k];
          if (!(a.name == c->name)) continue;
          LabelSeq holders = a.holders;
          holders.push_back(*c->label);
          out.emplace_back(Node::boundary(a.name, a.policy, append(a.state, Event::in(*c->label)), c->body(), a.label,
                                          std::move(holders)),
                           k);
        }
        break;
      case NodeKind::Par:
        for (size_t i = 0; i < c->children.size(); ++i) {
          std::vector<std::pair<Process, size_t>> inner;
          acquire_sites(c->children[i], avails, inner);
          for (auto& [rep, k] : inner) {
            auto kids = c->children;
            kids[i] = rep;
            out.emplace_back(Node::par(std::move(kids)), k);
          }
        }
        break;
      case NodeKind::Boundary:
      case NodeKind::Restrict: {
        std::vector<std::pair<Process, size_t>> inner;
        acquire_sites(c->body(), avails, inner);
        for (auto& [rep, k] : inner) out.emplace_back(c->with_children({rep}), k);
        break;
      }
      case NodeKind::Replicate: {
        if (c->budget == 0) break;
        std::vector<std::pair<Process, size_t>> inner;
        acquire_sites(c->body(), avails, inner);
        for (auto& [rep, k] : inner) out.emplace_back(par_of(rep, Node::replicate(c->body(), less(c->budget, 1))), k);
        break;
      }
      default:
        break;
    }
  }

 private:
  const PolicyTable& policies_;
  uint32_t fresh_;

  static int less(int budget, int n) { return budget < 0 ? budget : budget - n; }

  static TransitionLabel prefix_label(const Prefix& pi) {
    TransitionLabel l;
    switch (pi.kind) {
      case PrefixKind::Tau:
        break;
      case PrefixKind::Input:
        l.kind = LabelKind::FreeInput;
        l.channel = pi.subject;
        l.object = pi.object;
        break;
      case PrefixKind::Output:
        l.kind = LabelKind::FreeOutput;
        l.channel = pi.subject;
        l.object = pi.object;
        break;
      case PrefixKind::Access:
        l.kind = LabelKind::OpenAccess;
        l.action = pi.action;
        l.resource = pi.subject;
        break;
      case PrefixKind::Release:
        l.kind = LabelKind::OpenRelease;
        l.resource = pi.subject;
        break;
    }
    return l;
  }

  static bool is_output(const TransitionLabel& l) {
    return l.kind == LabelKind::FreeOutput || l.kind == LabelKind::BoundOutput;
  }

  // Synchronizes an input with an output on the same channel. The result
  // replaces the two components; nullopt when the payload has the wrong kind.
  static std::optional<Process> communicate(const Raw& in, const Raw& out) {
    if (in.label.kind != LabelKind::FreeInput || !is_output(out.label)) return std::nullopt;
    if (!(in.label.channel == out.label.channel)) return std::nullopt;
    const Name& binder = in.label.object;
    const Name& payload = out.label.object;
    if (!substitutable(binder.kind, payload.kind)) return std::nullopt;
    Process received = substitute(in.target, binder, payload);
    Process pair = Node::par({received, out.target});
    if (out.label.kind == LabelKind::BoundOutput) return Node::restrict(payload, pair);
    return pair;
  }

  void par(const std::vector<Process>& kids, std::vector<Raw>& out) {
    std::vector<std::vector<Raw>> moves;
    moves.reserve(kids.size());
    for (const auto& c : kids) moves.push_back(trans(c));
    for (size_t i = 0; i < kids.size(); ++i) {
      for (const auto& t : moves[i]) {
        auto next = kids;
        next[i] = t.target;
        out.push_back({t.label, Node::par(std::move(next))});
      }
    }
    for (size_t i = 0; i < kids.size(); ++i) {
      for (size_t j = 0; j < kids.size(); ++j) {
        if (i == j) continue;
        for (const auto& a : moves[i]) {
          if (a.label.kind != LabelKind::FreeInput) continue;
          for (const auto& b : moves[j]) {
            auto joined = communicate(a, b);
            if (!joined) continue;
            std::vector<Process> next;
            for (size_t k = 0; k < kids.size(); ++k) {
              if (k == i) {
                next.push_back(*joined);
              } else if (k != j) {
                next.push_back(kids[k]);
              }
            }
            out.push_back({TransitionLabel::silent(), Node::par(std::move(next))});
          }
        }
      }
    }
  }

  void replicate(const Process& p, std::vector<Raw>& out) {
    if (p->budget == 0) return;
    auto moves = trans(p->body());
    Process rest = Node::replicate(p->body(), less(p->budget, 1));
    for (const auto& t : moves) out.push_back({t.label, par_of(t.target, rest)});
    if (p->budget >= 0 && p->budget < 2) return;
    // Two fresh copies talking to each other.
    Process rest2 = Node::replicate(p->body(), less(p->budget, 2));
    for (const auto& a : moves) {
      if (a.label.kind != LabelKind::FreeInput) continue;
      for (const auto& b : moves) {
        auto joined = communicate(a, b);
        if (joined) out.push_back({TransitionLabel::silent(), par_of(*joined, rest2)});
      }
    }
  }

  void restrict(const Process& p, std::vector<Raw>& out) {
    const Name& z = p->name;
    for (auto& t : trans(p->body())) {
      if (!mentions(t.label, z)) {
        out.push_back({t.label, Node::restrict(z, t.target)});
      } else if (t.label.kind == LabelKind::FreeOutput && t.label.object == z && !(t.label.channel == z)) {
        Name extruded = z;
        extruded.inst = fresh_;
        TransitionLabel l = t.label;
        l.kind = LabelKind::BoundOutput;
        l.object = extruded;
        out.push_back({l, substitute(t.target, z, extruded)});
      }
    }
  }

  void boundary(const Process& p, std::vector<Raw>& out) {
    const Node& b = *p;
    const PolicyAutomaton& phi = resolve_policy(policies_, b.policy);
    Symbol holder = b.holders.empty() ? *b.label : b.holders.back();
    for (auto& t : trans(b.body())) {
      const TransitionLabel& l = t.label;
      if (l.kind == LabelKind::OpenAccess && l.resource == b.name) {
        TransitionLabel closed = l;
        closed.boundary = b.label;
        Event a = Event::action(l.action);
        if (phi.admits_extended(b.state, a)) {
          closed.kind = LabelKind::ClosedAccess;
          out.push_back({closed, Node::boundary(b.name, b.policy, append(b.state, a), t.target, b.label, b.holders)});
        } else {
          // Forced release: the resource is reclaimed with its history
          // unchanged and the continuation leaves the boundary.
          closed.kind = LabelKind::FaultyAccess;
          Process avail = Node::boundary(b.name, b.policy, append(b.state, Event::err_out(holder)), Node::nil(),
                                         b.label, b.holders);
          out.push_back({closed, par_of(avail, t.target)});
        }
      } else if (l.kind == LabelKind::OpenRelease && l.resource == b.name) {
        TransitionLabel closed = l;
        closed.kind = LabelKind::ClosedRelease;
        closed.boundary = b.label;
        Trace state = append(append(b.state, Event::release()), Event::out(holder));
        Process avail = Node::boundary(b.name, b.policy, std::move(state), Node::nil(), b.label, b.holders);
        out.push_back({closed, par_of(avail, t.target)});
      } else if (!mentions(l, b.name)) {
        out.push_back({l, p->with_children({t.target})});
      }
    }
  }
};

std::vector<Process> soup(const Process& p) {
  if (p->kind == NodeKind::Par) return p->children;
  if (p->is_nil()) return {};
  return {p};
}

void check_policies(const Process& p, const PolicyTable& policies) {
  if (p->kind == NodeKind::Boundary) resolve_policy(policies, p->policy);
  for (const auto& c : p->children) check_policies(c, policies);
}

// Removes one boundary on `r` reachable through parallel composition and
// restriction; one result per choice.
void disappear_sites(const Process& p, const Name& r, std::vector<Process>& out) {
  switch (p->kind) {
    case NodeKind::Boundary:
      if (p->name == r) out.push_back(Node::nil());
      break;
    case NodeKind::Restrict: {
      std::vector<Process> inner;
      disappear_sites(p->body(), r, inner);
      for (auto& q : inner) out.push_back(Node::restrict(p->name, q));
      break;
    }
    case NodeKind::Par:
      for (size_t i = 0; i < p->children.size(); ++i) {
        std::vector<Process> inner;
        disappear_sites(p->children[i], r, inner);
        for (auto& q : inner) {
          auto kids = p->children;
          kids[i] = q;
          out.push_back(Node::par(std::move(kids)));
        }
      }
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<Successor> step(const Process& input, const PolicyTable& policies, const Script& script,
                            size_t step_index) {
  if (!fully_labeled(input)) throw InputError("step needs a labeled term; run label_boundaries first");
  check_policies(input, policies);
  Process p = normalize(input).term;
  std::vector<Raw> raw;

  for (const auto& ev : script) {
    if (ev.at_step != step_index) continue;
    if (ev.kind == ReconfigEvent::Kind::Appear) {
      resolve_policy(policies, ev.policy);
      Symbol label = ev.label ? *ev.label : Symbol("appear" + std::to_string(ev.at_step));
      raw.push_back({TransitionLabel::silent(),
                     par_of(p, Node::boundary(ev.resource, ev.policy, ev.state, Node::nil(), label))});
    } else {
      std::vector<Process> gone;
      disappear_sites(p, ev.resource, gone);
      for (auto& q : gone) raw.push_back({TransitionLabel::silent(), q});
    }
  }

  if (raw.empty()) {
    Engine engine(policies, max_instance(p) + 1);
    raw = engine.trans(p);
    auto parts = soup(p);
    std::vector<Process> avails;
    std::vector<size_t> avail_pos;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (parts[i]->is_available()) {
        avails.push_back(parts[i]);
        avail_pos.push_back(i);
      }
    }
    if (!avails.empty()) {
      for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i]->is_available()) continue;
        std::vector<std::pair<Process, size_t>> sites;
        engine.acquire_sites(parts[i], avails, sites);
        for (auto& [rep, k] : sites) {
          std::vector<Process> next;
          for (size_t j = 0; j < parts.size(); ++j) {
            if (j == avail_pos[k]) continue;
            next.push_back(j == i ? rep : parts[j]);
          }
          raw.push_back({TransitionLabel::silent(), Node::par(std::move(next))});
        }
      }
    }
  }

  std::vector<std::pair<std::string, Successor>> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    auto n = normalize(r.target);
    out.push_back({label_key(r.label), Successor{r.label, std::move(n.term), std::move(n.key)}});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.key < b.second.key;
  });
  std::vector<Successor> result;
  for (size_t i = 0; i < out.size(); ++i) {
    if (i > 0 && out[i].first == out[i - 1].first && out[i].second.key == out[i - 1].second.key) continue;
    result.push_back(std::move(out[i].second));
  }
  return result;
}

}  // namespace glp
