#include <gtest/gtest.h>

#include <random>

#include "glp/parser.hpp"
#include "glp/pretty.hpp"

using namespace glp;

TEST(Parser, RequestWithAccess) {
  auto p = parse_process("req #hammer { hard_hit(#hammer).0 }");
  ASSERT_EQ(p->kind, NodeKind::Request);
  EXPECT_EQ(p->name, Name::resource("hammer"));
  const Node& body = *p->body();
  ASSERT_EQ(body.kind, NodeKind::Prefix);
  EXPECT_EQ(body.prefix.kind, PrefixKind::Access);
  EXPECT_EQ(body.prefix.action.str(), "hard_hit");
  EXPECT_EQ(body.prefix.subject, Name::resource("hammer"));
}

TEST(Parser, Nil) { EXPECT_TRUE(parse_process("0")->is_nil()); }

TEST(Parser, RestrictionOverBoundary) {
  auto p = parse_process("new x. res #r, phi, eps { 0 }");
  ASSERT_EQ(p->kind, NodeKind::Restrict);
  EXPECT_EQ(p->body()->kind, NodeKind::Boundary);
  EXPECT_EQ(p->body()->policy, "phi");
}

TEST(Parser, Precedence) {
  auto p = parse_process("tau.a(#r) + tau | b(#r)");
  ASSERT_EQ(p->kind, NodeKind::Par);
  ASSERT_EQ(p->children.size(), 2u);
  EXPECT_EQ(p->children[0]->kind, NodeKind::Choice);
}

TEST(Parser, InputVersusAccess) {
  // x is a channel (it carries an output), so x(#s) binds; a(#s) is an access.
  auto p = parse_process("x(#s).a(#s) | x<#r>");
  const Node& in = *p->children[0];
  EXPECT_EQ(in.prefix.kind, PrefixKind::Input);
  EXPECT_EQ(in.prefix.object.kind, NameKind::ResourceVar);
  EXPECT_EQ(in.body()->prefix.kind, PrefixKind::Access);
  EXPECT_EQ(in.body()->prefix.subject, in.prefix.object);
  auto q = parse_process("y?(#s).0");
  EXPECT_EQ(q->prefix.kind, PrefixKind::Input);
}

TEST(Parser, TracesAndHolders) {
  auto p = parse_process("res #r, phi, E.S.rel.in(c).err_out(c) ^ c.d { a(#r) } @c");
  EXPECT_EQ(to_string(p->state), "E.S.rel.in(c).err_out(c)");
  EXPECT_EQ(to_string(p->holders), "c.d");
  EXPECT_EQ(p->label->str(), "c");
  auto q = parse_process("res #r, phi, eps { a(#r) } @c");
  EXPECT_EQ(to_string(q->holders), "c");
}

TEST(Parser, ReplicationBudget) {
  auto p = parse_process("![3] tau");
  ASSERT_EQ(p->kind, NodeKind::Replicate);
  EXPECT_EQ(p->budget, 3);
  EXPECT_EQ(parse_process("!tau")->budget, -1);
}

TEST(Parser, ErrorsCarryPositions) {
  try {
    parse_process("tau.\n  res #r, phi { 0 }");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 15);
  }
}

TEST(Parser, RestrictionOverResourceRejected) {
  EXPECT_THROW(parse_process("new #r. 0"), ParseError);
}

TEST(Parser, UnresolvedPolicyRejected) {
  EXPECT_THROW(parse("res #r, nope, eps { 0 }"), ParseError);
}

TEST(Parser, DuplicateProcessRejected) {
  EXPECT_THROW(parse("proc A = 0; proc A = tau;"), ParseError);
}

TEST(Parser, RecursiveDefinitionRejected) {
  EXPECT_THROW(parse("proc A = tau.B; proc B = tau.A;"), ParseError);
}

TEST(Parser, DocumentItems) {
  auto doc = parse(R"(
    policy phi { initial s; s -a-> s; missing: stay; }
    chan c;
    proc A = c(#s).a(#s);
    proc B = A | res #r, phi, eps { 0 };
    main B;
    script { appear #q phi a.a @3; disappear #r @5; }
  )");
  EXPECT_EQ(doc.entry, "B");
  EXPECT_EQ(doc.processes.size(), 2u);
  EXPECT_EQ(doc.main->children.front()->prefix.kind, PrefixKind::Input);
  ASSERT_EQ(doc.script.size(), 2u);
  EXPECT_EQ(doc.script[0].at_step, 3u);
  EXPECT_EQ(to_string(doc.script[0].state), "a.a");
  EXPECT_EQ(doc.script[1].kind, ReconfigEvent::Kind::Disappear);
  EXPECT_THROW(parse("script { disappear #r @5; disappear #r @5; }"), ParseError);
}

TEST(Parser, PolicyFormat) {
  auto phi_m = parse_policy("policy phi_m { initial m; m -soft_hit-> m; missing: violate; }");
  EXPECT_TRUE(phi_m.admits({Event::action(Symbol("soft_hit"))}));
  EXPECT_FALSE(phi_m.admits({Event::action(Symbol("hard_hit"))}));
  auto open = parse_policy("policy any { initial s; missing: stay; }");
  EXPECT_TRUE(open.admits({Event::action(Symbol("x")), Event::action(Symbol("y"))}));
  EXPECT_THROW(parse_policy("policy p { initial s; s -a-> s; s -a-> t; }"), ParseError);
  EXPECT_THROW(parse_policy("policy p { initial s; missing: maybe; }"), ParseError);
}

TEST(Parser, RobotPolicyTwo) {
  auto table = load_policies(GLP_FIXTURES "/robot.pol");
  const auto& phi2 = *table.at("phi2");
  std::set<std::string> states(phi2.states().begin(), phi2.states().end());
  EXPECT_EQ(states, (std::set<std::string>{"p3", "p4", "p5", "p6", "p7", "p8"}));
  EXPECT_EQ(phi2.violating_states(), std::vector<std::string>{"p5"});
}

TEST(Pretty, Nil) { EXPECT_EQ(pretty(Node::nil()), "0"); }

TEST(Pretty, LabelSuffix) {
  auto p = parse_process("res #r, phi, eps { 0 } @chi7");
  EXPECT_EQ(pretty(p), "res #r, phi, eps { 0 } @chi7");
}

TEST(Pretty, FixturesRoundTrip) {
  for (const char* name : {"workshop.glp", "robot.glp"}) {
    auto doc = load_document(std::string(GLP_FIXTURES "/") + name);
    ParseOptions opts;
    opts.policies = doc.policies;
    opts.read_use = [](const std::string&) { return std::string(); };
    auto text = pretty_document(doc);
    auto again = parse(text, opts);
    EXPECT_TRUE(alpha_equivalent(doc.main, again.main)) << name;
    EXPECT_EQ(pretty_document(again), text) << name;
  }
}

TEST(Pretty, RenamesCapturingBinder) {
  // After substitution the binder and a free name share a display form.
  auto p = parse_process("new w. y<w>");
  auto q = substitute(p, Name::channel("y"), Name::channel("w"));
  auto again = parse_process(pretty(q));
  EXPECT_TRUE(alpha_equivalent(q, again)) << pretty(q);
}

TEST(Parser, FuzzedInputNeverCrashes) {
  const std::string alphabet = "0.|+!(){}<>#,@^;:=?[]-abxyrs eptaunwlqcrhi\n";
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<size_t> len(0, 40), pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    for (size_t n = len(rng); n > 0; --n) text += alphabet[pick(rng)];
    try {
      parse(text);
    } catch (const ParseError& e) {
      EXPECT_GE(e.line(), 1);
    } catch (const InputError&) {
    }
  }
}
