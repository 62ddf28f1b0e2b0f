#include <gtest/gtest.h>

#include <chrono>

#include "glp/explorer.hpp"
#include "glp/parser.hpp"
#include "glp/pretty.hpp"

using namespace glp;

namespace {

const SourceDocument& workshop() {
  static const SourceDocument d = load_document(GLP_FIXTURES "/workshop.glp");
  return d;
}

Bounds workshop_bounds() {
  Bounds b;
  b.budget = 4;
  b.depth = 40;
  return b;
}

}  // namespace

TEST(Explore, NilHasOneNode) {
  auto g = explore(Node::nil(), {}, {}, Bounds{});
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_FALSE(g.truncated);
}

TEST(Explore, WorkshopHasFaultyMalletEdge) {
  auto g = explore(workshop().main, workshop().policies, {}, workshop_bounds());
  EXPECT_FALSE(g.truncated);
  bool faulty = false;
  for (const auto& e : g.edges) {
    faulty = faulty || (e.label.kind == LabelKind::FaultyAccess && e.label.action.str() == "hard_hit" &&
                        e.label.resource == Name::resource("mallet"));
  }
  EXPECT_TRUE(faulty);
}

TEST(Explore, WorkshopMalletViolatesWithReplayableWitness) {
  const auto& d = workshop();
  auto v = complies_with(d.main, Name::resource("mallet"), d.policies, {}, workshop_bounds());
  ASSERT_EQ(v.status, VerdictStatus::Violates);
  ASSERT_FALSE(v.witness.empty());
  EXPECT_EQ(v.witness.back().label.kind, LabelKind::FaultyAccess);
  EXPECT_TRUE(replay(d.main, d.policies, {}, workshop_bounds(), v.witness));
  // The faulty worker received the mallet on the hard-job channel, which
  // happens with the third job.
  int outputs_consumed = 0;
  for (const auto& w : v.witness) outputs_consumed += w.label.kind == LabelKind::Silent;
  EXPECT_GE(outputs_consumed, 3);
}

TEST(Explore, WorkshopHammerComplies) {
  const auto& d = workshop();
  auto v = complies_with(d.main, Name::resource("hammer"), d.policies, {}, workshop_bounds());
  EXPECT_EQ(v.status, VerdictStatus::Complies);
}

TEST(Explore, UndeclaredResourceRejected) {
  EXPECT_THROW(complies_with(workshop().main, Name::resource("anvil"), workshop().policies, {}, Bounds{}),
               InputError);
}

TEST(Explore, NodeCapTruncates) {
  Bounds b = workshop_bounds();
  b.node_cap = 5;
  auto g = explore(workshop().main, workshop().policies, {}, b);
  EXPECT_TRUE(g.truncated);
  EXPECT_EQ(g.nodes.size(), 5u);
  auto v = complies_with(g, Name::resource("hammer"));
  EXPECT_EQ(v.status, VerdictStatus::Inconclusive);
}

TEST(Explore, NodeCountMonotoneInBounds) {
  const auto& d = workshop();
  size_t prev = 0;
  for (size_t depth = 0; depth < 12; ++depth) {
    Bounds b = workshop_bounds();
    b.depth = depth;
    auto n = explore(d.main, d.policies, {}, b).nodes.size();
    EXPECT_GE(n, prev);
    prev = n;
  }
  prev = 0;
  for (int budget = 0; budget <= 4; ++budget) {
    Bounds b = workshop_bounds();
    b.budget = budget;
    auto n = explore(d.main, d.policies, {}, b).nodes.size();
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Explore, ParallelWorkersGiveTheSameGraph) {
  const auto& d = workshop();
  auto a = explore(d.main, d.policies, {}, workshop_bounds(), 1);
  auto b = explore(d.main, d.policies, {}, workshop_bounds(), 4);
  EXPECT_EQ(a.keys, b.keys);
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) {
    EXPECT_EQ(a.edges[i].from, b.edges[i].from);
    EXPECT_EQ(a.edges[i].to, b.edges[i].to);
  }
}

TEST(Explore, BudgetTwoSpawnsTwoWorkersPerInput) {
  // Count distinct acquisitions per request label along all paths.
  const auto& d = workshop();
  Bounds b = workshop_bounds();
  b.budget = 2;
  auto g = explore(d.main, d.policies, {}, b);
  size_t max_hard = 0;
  for (const auto& node : g.nodes) {
    std::string text = pretty(node);
    size_t hard = 0;
    for (size_t pos = text.find("in(chi_h)"); pos != std::string::npos; pos = text.find("in(chi_h)", pos + 1)) ++hard;
    max_hard = std::max(max_hard, hard);
  }
  EXPECT_EQ(max_hard, 2u);
}

TEST(RandomRun, NilGivesEmptyTrace) {
  EXPECT_TRUE(run_random(Node::nil(), {}, {}, 7, 100).labels.empty());
}

TEST(RandomRun, SameSeedSameTrace) {
  const auto& d = workshop();
  auto a = run_random(d.main, d.policies, {}, 42, 60);
  auto b = run_random(d.main, d.policies, {}, 42, 60);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(RandomRun, SomeSeedReachesTheFaultyJob) {
  const auto& d = workshop();
  bool found = false;
  for (uint64_t seed = 0; seed < 200 && !found; ++seed) {
    for (const auto& l : run_random(d.main, d.policies, {}, seed, 60).labels) {
      found = found || l.kind == LabelKind::FaultyAccess;
    }
  }
  EXPECT_TRUE(found);
}
