#include "glp/parser.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace glp {

const Process* SourceDocument::find(const std::string& name) const {
  for (const auto& [n, p] : processes) {
    if (n == name) return &p;
  }
  return nullptr;
}

namespace {

const std::unordered_set<std::string> kReserved = {"tau", "rel", "new", "res", "req", "eps"};
const std::unordered_set<std::string> kItemWords = {"policy", "use", "chan", "proc", "main", "script"};

// Splits `s'3` into ("s", 3).
std::pair<std::string, uint32_t> split_instance(const std::string& text) {
  auto q = text.find('\'');
  if (q == std::string::npos) return {text, 0};
  return {text.substr(0, q), static_cast<uint32_t>(std::stoul(text.substr(q + 1)))};
}

// Bounded decimal literal; out-of-range values are reported at the token.
unsigned long number_value(const Token& t, unsigned long max) {
  unsigned long v = 0;
  for (char c : t.text) {
    v = v * 10 + static_cast<unsigned long>(c - '0');
    if (v > max) throw ParseError("number too large", t.line, t.column);
  }
  return v;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) { scan_channels(); }

  // --- token helpers -------------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }

  const Token& expect(std::string_view punct) {
    if (!peek().is(punct)) fail("expected '" + std::string(punct) + "' but found " + describe(peek()));
    return next();
  }
  const Token& expect_kind(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what + " but found " + describe(peek()));
    return next();
  }
  const Token& expect_word(std::string_view w) {
    if (!peek().is_word(w)) fail("expected '" + std::string(w) + "' but found " + describe(peek()));
    return next();
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End:
        return "end of input";
      case Tok::RName:
        return "'#" + t.text + "'";
      case Tok::String:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }
  bool accept(std::string_view punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  // --- channel evidence ----------------------------------------------------

  // Identifiers that occur in an unambiguous channel position anywhere in the
  // text. `a(#r)` is read as an input exactly when `a` is one of them (or a
  // channel bound in scope), and as an access action otherwise.
  void scan_channels() {
    for (size_t i = 0; i + 1 < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Tok::Ident && toks_[i + 1].is("<") && !kReserved.count(t.text)) channels_.insert(t.text);
      if (t.kind == Tok::Ident && toks_[i + 1].is("?")) channels_.insert(t.text);
      if (t.is("<") && toks_[i + 1].kind == Tok::Ident) channels_.insert(toks_[i + 1].text);
      if ((t.is_word("new") || t.is_word("chan")) && toks_[i + 1].kind == Tok::Ident) channels_.insert(toks_[i + 1].text);
      if (t.kind == Tok::Ident && !kReserved.count(t.text) && i + 3 < toks_.size() && toks_[i + 1].is("(") &&
          toks_[i + 2].kind == Tok::Ident && toks_[i + 3].is(")")) {
        channels_.insert(t.text);
        channels_.insert(toks_[i + 2].text);
      }
    }
    // `chan a, b, c;`
    for (size_t i = 0; i < toks_.size(); ++i) {
      if (!toks_[i].is_word("chan")) continue;
      for (size_t j = i + 1; j < toks_.size() && !toks_[j].is(";"); ++j) {
        if (toks_[j].kind == Tok::Ident) channels_.insert(toks_[j].text);
      }
    }
  }

  // --- names ---------------------------------------------------------------

  Name lookup(const std::string& text, bool resource) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == text && it->second.is_resource() == resource) return it->second;
    }
    auto [base, inst] = split_instance(text);
    return {base, 0, inst, resource ? NameKind::Resource : NameKind::Channel};
  }

  Name fresh_binder(const std::string& text, NameKind kind) {
    auto [base, inst] = split_instance(text);
    return {base, ++site_counter_, inst, kind};
  }

  bool is_channel(const std::string& text) const {
    if (channels_.count(text)) return true;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == text) return !it->second.is_resource();
    }
    return false;
  }

  std::string channel_ident(const char* role) {
    const Token& t = peek();
    if (t.kind == Tok::RName) fail(std::string("resource name #") + t.text + " used as " + role);
    if (t.kind != Tok::Ident || kReserved.count(t.text)) fail(std::string("expected ") + role + " but found " + describe(t));
    return next().text;
  }

  // --- traces --------------------------------------------------------------

  Event parse_event() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected trace event but found " + describe(t));
    if (t.text == "rel") {
      next();
      return Event::release();
    }
    if ((t.text == "in" || t.text == "out" || t.text == "err_out") && peek(1).is("(")) {
      std::string kind = next().text;
      expect("(");
      Symbol l(expect_kind(Tok::Ident, "label").text);
      expect(")");
      if (kind == "in") return Event::in(l);
      if (kind == "out") return Event::out(l);
      return Event::err_out(l);
    }
    if (kReserved.count(t.text)) fail("expected trace event but found " + describe(t));
    return Event::action(Symbol(next().text));
  }

  Trace parse_trace() {
    if (peek().is_word("eps")) {
      next();
      return {};
    }
    Trace tr{parse_event()};
    while (peek().is(".") && peek(1).kind == Tok::Ident) {
      next();
      tr.push_back(parse_event());
    }
    return tr;
  }

  LabelSeq parse_labels() {
    if (peek().is_word("eps")) {
      next();
      return {};
    }
    LabelSeq s{Symbol(expect_kind(Tok::Ident, "label").text)};
    while (accept(".")) s.emplace_back(expect_kind(Tok::Ident, "label").text);
    return s;
  }

  std::optional<Symbol> parse_label_suffix() {
    if (!accept("@")) return std::nullopt;
    return Symbol(expect_kind(Tok::Ident, "boundary label").text);
  }

  // --- processes -----------------------------------------------------------

  Process parse_par() {
    std::vector<Process> parts{parse_sum()};
    while (accept("|")) parts.push_back(parse_sum());
    return Node::par(std::move(parts));
  }

  Process parse_sum() {
    std::vector<Process> parts{parse_unary()};
    while (accept("+")) parts.push_back(parse_unary());
    return Node::choice(std::move(parts));
  }

  Process continuation() {
    if (accept(".")) return parse_unary();
    return Node::nil();
  }

  Process parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      if (t.text != "0") fail("expected process but found " + describe(t));
      next();
      return Node::nil();
    }
    if (accept("(")) {
      Process p = parse_par();
      expect(")");
      return p;
    }
    if (accept("!")) {
      int budget = -1;
      if (accept("[")) {
        budget = static_cast<int>(number_value(expect_kind(Tok::Number, "replication budget"), 1000000));
        expect("]");
      }
      return Node::replicate(parse_unary(), budget);
    }
    if (t.kind != Tok::Ident) fail("expected process but found " + describe(t));

    if (t.text == "new") {
      next();
      if (peek().kind == Tok::RName) fail("restriction is not applied to resource names (#" + peek().text + ")");
      std::string text = channel_ident("restricted channel");
      Name binder = fresh_binder(text, NameKind::Channel);
      expect(".");
      scope_.emplace_back(text, binder);
      Process body = parse_unary();
      scope_.pop_back();
      return Node::restrict(binder, std::move(body));
    }
    if (t.text == "res") {
      next();
      Name r = lookup(expect_kind(Tok::RName, "resource name").text, true);
      expect(",");
      const Token& pol = expect_kind(Tok::Ident, "policy name");
      policy_refs_.emplace_back(pol.text, pol);
      expect(",");
      Trace state = parse_trace();
      std::optional<LabelSeq> holders;
      if (accept("^")) holders = parse_labels();
      expect("{");
      Process body = parse_par();
      expect("}");
      auto label = parse_label_suffix();
      LabelSeq hs = holders ? *holders : LabelSeq{};
      if (!holders && label && !body->is_nil()) hs = {*label};
      return Node::boundary(r, pol.text, std::move(state), std::move(body), label, std::move(hs));
    }
    if (t.text == "req") {
      next();
      Name r = lookup(expect_kind(Tok::RName, "resource name").text, true);
      expect("{");
      Process body = parse_par();
      expect("}");
      return Node::request(r, std::move(body), parse_label_suffix());
    }
    if (t.text == "tau") {
      next();
      return Node::make_prefix(Prefix::tau(), continuation());
    }
    if (t.text == "rel") {
      next();
      expect("(");
      Name r = lookup(expect_kind(Tok::RName, "resource name").text, true);
      expect(")");
      return Node::make_prefix(Prefix::release(r), continuation());
    }
    if (kReserved.count(t.text)) fail("unexpected " + describe(t));

    const Token& head = next();
    // x<w>
    if (accept("<")) {
      Name ch = lookup(head.text, false);
      Name payload;
      if (peek().kind == Tok::RName) {
        payload = lookup(next().text, true);
      } else {
        payload = lookup(channel_ident("output payload"), false);
      }
      expect(">");
      return Node::make_prefix(Prefix::output(ch, payload), continuation());
    }
    bool explicit_input = accept("?");
    if (peek().is("(")) {
      next();
      if (peek().kind == Tok::Ident) {
        std::string text = channel_ident("input binder");
        expect(")");
        Name binder = fresh_binder(text, NameKind::ChannelVar);
        return input(head, binder, text);
      }
      const Token& rt = expect_kind(Tok::RName, "name");
      expect(")");
      if (explicit_input || is_channel(head.text)) {
        return input(head, fresh_binder(rt.text, NameKind::ResourceVar), rt.text);
      }
      Name r = lookup(rt.text, true);
      return Node::make_prefix(Prefix::access(Symbol(head.text), r), continuation());
    }
    if (explicit_input) fail("expected '(' after '?'");
    return reference(head);
  }

  Process input(const Token& head, const Name& binder, const std::string& text) {
    Name ch = lookup(head.text, false);
    scope_.emplace_back(text, binder);
    Process cont = continuation();
    scope_.pop_back();
    return Node::make_prefix(Prefix::input(ch, binder), std::move(cont));
  }

  // --- definitions ---------------------------------------------------------

  struct Definition {
    size_t begin = 0, end = 0;
    Token at;
    std::optional<Process> expanded;
  };

  Process reference(const Token& head) {
    auto it = defs_.find(head.text);
    if (it == defs_.end()) fail("unknown process " + head.text, head);
    return expand(head.text, head);
  }

  Process expand(const std::string& name, const Token& at) {
    auto& def = defs_.at(name);
    if (def.expanded) return *def.expanded;
    if (expanding_.count(name)) fail("recursive process definition " + name, at);
    expanding_.insert(name);
    size_t saved = pos_;
    auto saved_scope = std::move(scope_);
    scope_.clear();
    pos_ = def.begin;
    Process p = parse_par();
    if (pos_ != def.end) fail("unexpected " + describe(peek()) + " in definition of " + name);
    pos_ = saved;
    scope_ = std::move(saved_scope);
    expanding_.erase(name);
    def.expanded = p;
    return p;
  }

  // --- policies ------------------------------------------------------------

  PolicyAutomaton parse_policy_block() {
    expect_word("policy");
    const Token& name_tok = expect_kind(Tok::Ident, "policy name");
    expect("{");
    std::optional<std::string> initial;
    std::vector<std::string> states, violating;
    std::vector<std::tuple<std::string, Symbol, std::string, Token>> edges;
    MissingRule missing = MissingRule::Violate;
    auto ident_list = [&](std::vector<std::string>& into) {
      into.push_back(expect_kind(Tok::Ident, "state").text);
      while (accept(",")) into.push_back(expect_kind(Tok::Ident, "state").text);
    };
    while (!peek().is("}")) {
      const Token& t = peek();
      if (t.is_word("initial")) {
        next();
        initial = expect_kind(Tok::Ident, "state").text;
      } else if (t.is_word("states")) {
        next();
        ident_list(states);
      } else if (t.is_word("violating")) {
        next();
        ident_list(violating);
      } else if (t.is_word("missing")) {
        next();
        expect(":");
        const Token& rule = expect_kind(Tok::Ident, "violate or stay");
        if (rule.text == "violate") {
          missing = MissingRule::Violate;
        } else if (rule.text == "stay") {
          missing = MissingRule::Stay;
        } else {
          fail("unknown default clause '" + rule.text + "' (expected violate or stay)", rule);
        }
      } else if (t.kind == Tok::Ident) {
        std::string from = next().text;
        expect("-");
        Token at = peek();
        Symbol action(expect_kind(Tok::Ident, "action").text);
        expect("->");
        std::string to = expect_kind(Tok::Ident, "state").text;
        edges.emplace_back(from, action, to, at);
      } else {
        fail("unexpected " + describe(t) + " in policy");
      }
      expect(";");
    }
    expect("}");
    if (!initial) fail("policy " + name_tok.text + " has no initial state", name_tok);
    PolicyAutomaton a(name_tok.text, *initial, missing);
    for (const auto& s : states) a.add_state(s);
    for (const auto& [from, action, to, at] : edges) {
      try {
        a.add_transition(from, action, to);
      } catch (const InputError& e) {
        fail(e.what(), at);
      }
    }
    for (const auto& s : violating) a.set_violating(s);
    return a;
  }

  // --- documents -----------------------------------------------------------

  SourceDocument parse_document(const ParseOptions& opts) {
    SourceDocument doc;
    doc.policies = opts.policies;
    std::vector<std::string> def_order;
    std::optional<std::pair<std::string, Token>> main;
    std::vector<std::tuple<Token, std::vector<Token>>> script_items;

    if (!at_end() && !(peek().kind == Tok::Ident && kItemWords.count(peek().text))) {
      // Bare process term.
      Process p = parse_par();
      if (!at_end()) fail("unexpected " + describe(peek()) + " after process");
      doc.entry = "main";
      doc.main = p;
      doc.processes.emplace_back("main", p);
      check_policies(doc, opts);
      return doc;
    }

    while (!at_end()) {
      const Token& t = peek();
      if (t.is_word("policy")) {
        auto a = parse_policy_block();
        if (doc.policies.count(a.name()) && std::find(doc.inline_policies.begin(), doc.inline_policies.end(),
                                                      a.name()) != doc.inline_policies.end()) {
          fail("duplicate policy " + a.name(), t);
        }
        auto name = a.name();
        doc.inline_policies.push_back(name);
        doc.policies[name] = std::make_shared<const PolicyAutomaton>(std::move(a));
      } else if (t.is_word("use")) {
        next();
        const Token& path = expect_kind(Tok::String, "policy file path");
        expect(";");
        if (!opts.read_use) fail("cannot resolve use \"" + path.text + "\" here", path);
        std::string text;
        try {
          text = opts.read_use(path.text);
        } catch (const ParseError&) {
          throw;
        } catch (const std::exception& e) {
          fail(e.what(), path);
        }
        for (auto& a : parse_policies(text)) {
          auto name = a.name();
          doc.policies[name] = std::make_shared<const PolicyAutomaton>(std::move(a));
        }
        doc.uses.push_back(path.text);
      } else if (t.is_word("chan")) {
        next();
        expect_kind(Tok::Ident, "channel");
        while (accept(",")) expect_kind(Tok::Ident, "channel");
        expect(";");
      } else if (t.is_word("proc")) {
        next();
        const Token& name = expect_kind(Tok::Ident, "process name");
        if (defs_.count(name.text)) fail("duplicate process name " + name.text, name);
        if (kReserved.count(name.text)) fail("reserved word used as process name", name);
        expect("=");
        Definition d;
        d.begin = pos_;
        d.at = name;
        int depth = 0;
        while (!at_end() && !(depth == 0 && peek().is(";"))) {
          if (peek().is("{") || peek().is("(")) ++depth;
          if (peek().is("}") || peek().is(")")) --depth;
          next();
        }
        d.end = pos_;
        expect(";");
        defs_.emplace(name.text, d);
        def_order.push_back(name.text);
      } else if (t.is_word("main")) {
        next();
        const Token& name = expect_kind(Tok::Ident, "process name");
        expect(";");
        main.emplace(name.text, name);
      } else if (t.is_word("script")) {
        next();
        expect("{");
        parse_script(doc);
        expect("}");
      } else {
        fail("expected policy, use, chan, proc, main or script but found " + describe(t));
      }
    }

    for (const auto& name : def_order) doc.processes.emplace_back(name, expand(name, defs_.at(name).at));
    if (main) {
      if (!defs_.count(main->first)) fail("entry point " + main->first + " is not defined", main->second);
      doc.entry = main->first;
    } else if (!def_order.empty()) {
      doc.entry = def_order.back();
    } else {
      doc.entry = "main";
      doc.processes.emplace_back("main", Node::nil());
    }
    doc.main = *doc.find(doc.entry);
    check_policies(doc, opts);
    return doc;
  }

  void parse_script(SourceDocument& doc) {
    size_t last = 0;
    bool first = true;
    while (!peek().is("}")) {
      const Token& t = peek();
      ReconfigEvent ev;
      if (t.is_word("appear")) {
        next();
        ev.kind = ReconfigEvent::Kind::Appear;
        ev.resource = lookup(expect_kind(Tok::RName, "resource name").text, true);
        const Token& pol = expect_kind(Tok::Ident, "policy name");
        ev.policy = pol.text;
        policy_refs_.emplace_back(pol.text, pol);
        ev.state = parse_trace();
      } else if (t.is_word("disappear")) {
        next();
        ev.kind = ReconfigEvent::Kind::Disappear;
        ev.resource = lookup(expect_kind(Tok::RName, "resource name").text, true);
      } else {
        fail("expected appear or disappear but found " + describe(t));
      }
      expect("@");
      const Token& step = expect_kind(Tok::Number, "step index");
      ev.at_step = number_value(step, 1UL << 40);
      if (!first && ev.at_step <= last) fail("script steps must be strictly increasing", step);
      if (ev.kind == ReconfigEvent::Kind::Appear) {
        ev.label = Symbol("appear" + std::to_string(ev.at_step));
      }
      first = false;
      last = ev.at_step;
      accept(";");
      doc.script.push_back(std::move(ev));
    }
  }

  void check_policies(const SourceDocument& doc, const ParseOptions& opts) const {
    if (!opts.resolve_policies) return;
    for (const auto& [name, at] : policy_refs_) {
      if (!doc.policies.count(name)) fail("unresolved policy " + name, at);
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::set<std::string> channels_;
  std::vector<std::pair<std::string, Name>> scope_;
  uint32_t site_counter_ = 0;
  std::map<std::string, Definition> defs_;
  std::set<std::string> expanding_;
  std::vector<std::pair<std::string, Token>> policy_refs_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SourceDocument parse(std::string_view text, const ParseOptions& options) {
  Parser p(tokenize(text));
  return p.parse_document(options);
}

Process parse_process(std::string_view text) {
  ParseOptions opts;
  opts.resolve_policies = false;
  Parser p(tokenize(text));
  auto doc = p.parse_document(opts);
  return doc.main;
}

std::vector<PolicyAutomaton> parse_policies(std::string_view text) {
  Parser p(tokenize(text));
  std::vector<PolicyAutomaton> out;
  while (!p.at_end()) out.push_back(p.parse_policy_block());
  return out;
}

PolicyAutomaton parse_policy(std::string_view text) {
  auto all = parse_policies(text);
  if (all.size() != 1) throw ParseError("expected exactly one policy, found " + std::to_string(all.size()), 1, 1);
  return std::move(all.front());
}

SourceDocument load_document(const std::filesystem::path& path) {
  std::string text = read_file(path);
  ParseOptions opts;
  auto dir = path.parent_path();
  opts.read_use = [dir](const std::string& target) {
    std::vector<std::filesystem::path> candidates{dir / target};
    if (const char* env = std::getenv("GLP_POLICY_PATH")) {
      std::string_view rest(env);
      while (!rest.empty()) {
        auto colon = rest.find(':');
        auto entry = rest.substr(0, colon);
        if (!entry.empty()) candidates.push_back(std::filesystem::path(std::string(entry)) / target);
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
      }
    }
    for (const auto& c : candidates) {
      if (std::filesystem::exists(c)) return read_file(c);
    }
    throw IoError("policy file not found: " + target);
  };
  return parse(text, opts);
}

PolicyTable load_policies(const std::filesystem::path& path) {
  PolicyTable table;
  for (auto& a : parse_policies(read_file(path))) {
    auto name = a.name();
    table[name] = std::make_shared<const PolicyAutomaton>(std::move(a));
  }
  return table;
}

}  // namespace glp
