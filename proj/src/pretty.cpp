#include "glp/pretty.hpp"

#include <map>
#include <set>
#include <sstream>

namespace glp {

namespace {

class Printer {
 public:
  std::map<const Node*, std::string> folds;
  std::set<std::string> channels;
  bool collecting = false;

  std::string term(const Process& p) { return par(p, nullptr); }

 private:
  std::vector<std::pair<Name, std::string>> scope_;

  std::string text(const Name& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == n) return it->second;
    }
    return n.display();
  }

  // Picks the printed form of a binder so that it does not capture any other
  // free name of its body.
  std::string binder_text(const Name& b, const Process& body) {
    std::set<std::string> taken;
    for (const auto& n : free_names(body)) {
      if (!(n == b)) taken.insert(text(n));
    }
    Name probe = b;
    std::string t = probe.display();
    while (taken.count(t)) {
      ++probe.inst;
      t = probe.display();
    }
    return t;
  }

  std::string folded(const Process& p, const Node* self) {
    if (p.get() == self) return {};
    auto it = folds.find(p.get());
    return it == folds.end() ? std::string{} : it->second;
  }

 public:
  std::string par(const Process& p, const Node* self) {
    if (auto f = folded(p, self); !f.empty()) return f;
    if (p->kind != NodeKind::Par) return sum(p, self);
    std::string out;
    for (size_t i = 0; i < p->children.size(); ++i) {
      if (i) out += " | ";
      out += sum(p->children[i], nullptr);
    }
    return out;
  }

  std::string sum(const Process& p, const Node* self) {
    if (auto f = folded(p, self); !f.empty()) return f;
    if (p->kind != NodeKind::Choice) return unary(p, self);
    std::string out;
    for (size_t i = 0; i < p->children.size(); ++i) {
      if (i) out += " + ";
      out += unary(p->children[i], nullptr);
    }
    return out;
  }

  std::string unary(const Process& p, const Node* self) {
    if (auto f = folded(p, self); !f.empty()) return f;
    const Node& n = *p;
    switch (n.kind) {
      case NodeKind::Nil:
        return "0";
      case NodeKind::Par:
      case NodeKind::Choice:
        return "(" + par(p, self) + ")";
      case NodeKind::Prefix:
        return prefix(n);
      case NodeKind::Restrict: {
        std::string b = binder_text(n.name, n.body());
        if (collecting) channels.insert(b);
        scope_.emplace_back(n.name, b);
        std::string out = "new " + b + ". " + unary(n.body(), nullptr);
        scope_.pop_back();
        return out;
      }
      case NodeKind::Replicate: {
        std::string head = n.budget < 0 ? "!" : "![" + std::to_string(n.budget) + "] ";
        return head + unary(n.body(), nullptr);
      }
      case NodeKind::Boundary: {
        std::ostringstream out;
        out << "res " << text(n.name) << ", " << n.policy << ", " << to_string(n.state);
        LabelSeq implied;
        if (n.label && !n.body()->is_nil()) implied = {*n.label};
        if (n.holders != implied) out << " ^ " << to_string(n.holders);
        out << " { " << par(n.body(), nullptr) << " }";
        if (n.label) out << " @" << n.label->str();
        return out.str();
      }
      case NodeKind::Request: {
        std::string out = "req " + text(n.name) + " { " + par(n.body(), nullptr) + " }";
        if (n.label) out += " @" + n.label->str();
        return out;
      }
    }
    return "0";
  }

  std::string prefix(const Node& n) {
    const Prefix& pi = n.prefix;
    const Process& cont = n.body();
    std::string head;
    bool binds = false;
    std::string bound;
    switch (pi.kind) {
      case PrefixKind::Tau:
        head = "tau";
        break;
      case PrefixKind::Output: {
        std::string ch = text(pi.subject);
        std::string payload = text(pi.object);
        if (collecting) {
          channels.insert(ch);
          if (!pi.object.is_resource()) channels.insert(payload);
        }
        head = ch + "<" + payload + ">";
        break;
      }
      case PrefixKind::Input: {
        std::string ch = text(pi.subject);
        bound = binder_text(pi.object, cont);
        binds = true;
        if (pi.object.is_resource()) {
          head = ch + (channels.count(ch) ? "(" : "?(") + bound + ")";
        } else {
          if (collecting) {
            channels.insert(ch);
            channels.insert(bound);
          }
          head = ch + "(" + bound + ")";
        }
        break;
      }
      case PrefixKind::Access:
        head = pi.action.str() + "(" + text(pi.subject) + ")";
        break;
      case PrefixKind::Release:
        head = "rel(" + text(pi.subject) + ")";
        break;
    }
    if (binds) scope_.emplace_back(pi.object, bound);
    std::string out = cont->is_nil() ? head : head + "." + unary(cont, nullptr);
    if (binds) scope_.pop_back();
    return out;
  }
};

std::string render(Printer& pr, const Process& p, const Node* self) {
  pr.collecting = true;
  pr.par(p, self);
  pr.collecting = false;
  return pr.par(p, self);
}

}  // namespace

std::string pretty(const Process& p) {
  Printer pr;
  return render(pr, p, nullptr);
}

std::string pretty(const Prefix& pi) {
  Printer pr;
  return pr.term(Node::make_prefix(pi, Node::nil()));
}

std::string pretty_policy(const PolicyAutomaton& a) {
  std::ostringstream out;
  out << "policy " << a.name() << " {\n";
  out << "  initial " << a.state_name(a.initial()) << ";\n";
  out << "  states ";
  for (size_t i = 0; i < a.states().size(); ++i) out << (i ? ", " : "") << a.states()[i];
  out << ";\n";
  auto bad = a.violating_states();
  if (!bad.empty()) {
    out << "  violating ";
    for (size_t i = 0; i < bad.size(); ++i) out << (i ? ", " : "") << bad[i];
    out << ";\n";
  }
  out << "  missing: " << (a.missing_rule() == MissingRule::Stay ? "stay" : "violate") << ";\n";
  for (const auto& [from, action, to] : a.transitions()) out << "  " << from << " -" << action << "-> " << to << ";\n";
  out << "}\n";
  return out.str();
}

std::string pretty_document(const SourceDocument& doc) {
  bool bare = doc.processes.size() == 1 && doc.processes.front().first == "main" && doc.uses.empty() &&
              doc.inline_policies.empty() && doc.script.empty();
  if (bare) return pretty(doc.processes.front().second) + "\n";

  std::ostringstream out;
  for (const auto& u : doc.uses) out << "use \"" << u << "\";\n";
  if (!doc.uses.empty()) out << "\n";
  for (const auto& name : doc.inline_policies) {
    out << pretty_policy(resolve_policy(doc.policies, name)) << "\n";
  }
  Printer pr;
  for (const auto& [name, p] : doc.processes) {
    out << "proc " << name << " = " << render(pr, p, p.get()) << ";\n";
    if (!p->is_nil()) pr.folds.emplace(p.get(), name);
  }
  out << "main " << doc.entry << ";\n";
  if (!doc.script.empty()) {
    out << "\nscript {\n";
    for (const auto& ev : doc.script) {
      if (ev.kind == ReconfigEvent::Kind::Appear) {
        out << "  appear " << ev.resource.display() << " " << ev.policy << " " << to_string(ev.state);
      } else {
        out << "  disappear " << ev.resource.display();
      }
      out << " @" << ev.at_step << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace glp
