#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "chemdelt/delt/trajectory.h"
#include "chemdelt/kg/vocabulary.h"
#include "oracles/delt_oracle.h"
#include "support/random_dag.h"

namespace chemdelt::delt {
namespace {

namespace v = kg::vocab;
using kg::Iri;
using kg::Literal;
using kg::Triple;

struct Builder {
  kg::GraphStore s;

  Builder& concept_(const std::string& id, std::vector<std::string> req = {}) {
    s.insert(Triple{v::concept_iri(id), v::type(), v::concept_class()});
    for (auto& r : req) s.insert(Triple{v::concept_iri(id), v::requires_(), v::concept_iri(r)});
    return *this;
  }
  Builder& unit(const std::string& id, std::vector<std::string> teaches, std::optional<int> minutes = 10,
                std::optional<int> difficulty = std::nullopt) {
    Iri u = v::unit(id);
    s.insert(Triple{u, v::type(), v::learning_unit_class()});
    if (minutes) s.insert(Triple{u, v::study_time(), Literal::integer(*minutes)});
    if (difficulty) s.insert(Triple{u, v::difficulty(), Literal::integer(*difficulty)});
    for (auto& c : teaches) s.insert(Triple{u, v::teaches(), v::concept_iri(c)});
    return *this;
  }
  Builder& chain(const std::string& chapter, std::vector<std::string> units) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      s.insert(Triple{v::unit(units[i]), v::part_of(), v::chapter(chapter)});
      if (i + 1 < units.size()) s.insert(Triple{v::unit(units[i]), v::next(), v::unit(units[i + 1])});
    }
    return *this;
  }
};

std::vector<Iri> concepts(std::initializer_list<const char*> ids) {
  std::vector<Iri> out;
  for (auto id : ids) out.push_back(v::concept_iri(id));
  return out;
}

std::vector<Iri> units(std::initializer_list<const char*> ids) {
  std::vector<Iri> out;
  for (auto id : ids) out.push_back(v::unit(id));
  return out;
}

learner::UserProfile mastered(std::initializer_list<const char*> ids, double m = 1.0) {
  learner::UserProfile p;
  for (auto id : ids) p.mastery[v::concept_iri(id)] = m;
  return p;
}

TrajectoryRequest request(Iri goal, learner::UserProfile profile = {}) {
  return TrajectoryRequest{std::move(goal), std::move(profile), kDefaultLevel, learner::kTheta, std::nullopt};
}

TEST(RequiredConcepts, Chain) {
  Builder b;
  b.concept_("a").concept_("b", {"a"}).concept_("c", {"b"});
  EXPECT_EQ(required_concepts(b.s, v::concept_iri("c"), {}), concepts({"a", "b", "c"}));
  EXPECT_EQ(required_concepts(b.s, v::concept_iri("c"), mastered({"b"})), concepts({"c"}));
  EXPECT_EQ(required_concepts(b.s, v::concept_iri("c"), mastered({"a"})), concepts({"b", "c"}));
  EXPECT_TRUE(required_concepts(b.s, v::concept_iri("c"), mastered({"c"})).empty());
}

TEST(RequiredConcepts, DiamondIsSmallestTopologicalOrder) {
  Builder b;
  b.concept_("a").concept_("b2", {"a"}).concept_("b1", {"a"}).concept_("c", {"b1", "b2"});
  auto got = required_concepts(b.s, v::concept_iri("c"), {});
  EXPECT_EQ(got, concepts({"a", "b1", "b2", "c"}));

  auto orders = oracle::all_topological_orders(std::set<Iri>(got.begin(), got.end()), oracle::requires_edges(b.s));
  EXPECT_EQ(orders.size(), 2u);
  EXPECT_EQ(got, *std::min_element(orders.begin(), orders.end()));
}

TEST(RequiredConcepts, MatchesLexicographicallySmallestOrderOnSmallDags) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    auto rc = testing::random_curriculum(rng, 7, 0);
    Iri goal = rc.concepts[rng() % rc.concepts.size()];
    auto got = required_concepts(rc.store, goal, {});
    auto want = oracle::naive_required(rc.store, goal, {});
    ASSERT_EQ(std::set<Iri>(got.begin(), got.end()), want);
    auto orders = oracle::all_topological_orders(want, oracle::requires_edges(rc.store));
    ASSERT_FALSE(orders.empty());
    EXPECT_EQ(got, *std::min_element(orders.begin(), orders.end()));
  }
}

TEST(RequiredConcepts, Errors) {
  Builder b;
  b.concept_("a", {"b"}).concept_("b", {"a"}).concept_("c", {"a"}).concept_("d");
  EXPECT_THROW(required_concepts(b.s, v::concept_iri("zzz"), {}), UnknownConceptError);
  try {
    required_concepts(b.s, v::concept_iri("c"), {});
    FAIL() << "expected a cycle error";
  } catch (const CyclicPrerequisitesError& e) {
    std::set<Iri> names(e.cycle().begin(), e.cycle().end());
    EXPECT_EQ(names, (std::set<Iri>{v::concept_iri("a"), v::concept_iri("b")}));
  }
  // Mastering one cycle member cuts the expansion.
  EXPECT_EQ(required_concepts(b.s, v::concept_iri("c"), mastered({"a"})), concepts({"c"}));
  EXPECT_EQ(required_concepts(b.s, v::concept_iri("d"), {}), concepts({"d"}));
}

TEST(SelectUnits, CostPicksCheaperUnit) {
  Builder b;
  b.concept_("x").unit("cheap", {"x"}, 10, 3).unit("hard", {"x"}, 8, 5);
  EXPECT_DOUBLE_EQ(unit_cost(b.s, v::unit("cheap"), 3), 10.0);
  EXPECT_DOUBLE_EQ(unit_cost(b.s, v::unit("hard"), 3), 12.0);
  auto t = select_units(b.s, concepts({"x"}), 3);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].unit, v::unit("cheap"));
  // At level 5 the harder unit has no mismatch: 8 < 10 * 1.5.
  EXPECT_EQ(select_units(b.s, concepts({"x"}), 5).steps[0].unit, v::unit("hard"));
}

TEST(SelectUnits, TiesBreakBySmallestIri) {
  Builder b;
  b.concept_("x").unit("zeta", {"x"}, 10, 3).unit("alpha", {"x"}, 10, 3);
  EXPECT_EQ(select_units(b.s, concepts({"x"}), 3).steps[0].unit, v::unit("alpha"));
}

TEST(SelectUnits, DefaultsWhenMetadataMissing) {
  Builder b;
  b.concept_("x").unit("bare", {"x"}, std::nullopt);
  EXPECT_EQ(unit_study_time(b.s, v::unit("bare")), 10);
  EXPECT_EQ(unit_difficulty(b.s, v::unit("bare")), 3);
  EXPECT_EQ(select_units(b.s, concepts({"x"}), 3).total_minutes, 10);
}

TEST(SelectUnits, AbsorptionOfDependentConcept) {
  Builder b;
  b.concept_("x").concept_("y", {"x"}).unit("U", {"x", "y"});
  auto t = select_units(b.s, concepts({"x", "y"}), 3);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].contributes, (std::set<Iri>{v::concept_iri("x"), v::concept_iri("y")}));
  EXPECT_EQ(t.total_minutes, 10);
}

TEST(SelectUnits, NoAbsorptionBeforePrerequisite) {
  // U anchors on a and also teaches c, but c needs b which nothing covers yet.
  Builder b;
  b.concept_("a").concept_("b").concept_("c", {"b"}).unit("U", {"a", "c"}, 5).unit("V", {"b"}, 5).unit("W", {"c"}, 5);
  auto t = select_units(b.s, concepts({"a", "b", "c"}), 3);
  ASSERT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.steps[0].contributes, (std::set<Iri>{v::concept_iri("a")}));
  EXPECT_EQ(t.steps[2].unit, v::unit("W"));
}

TEST(SelectUnits, GapsContinue) {
  Builder b;
  b.concept_("a").concept_("b", {"a"}).concept_("c", {"b"}).unit("ua", {"a"}).unit("uc", {"c"});
  auto t = select_units(b.s, concepts({"a", "b", "c"}), 3);
  EXPECT_EQ(t.gaps, (std::set<Iri>{v::concept_iri("b")}));
  ASSERT_EQ(t.steps.size(), 2u);
  EXPECT_EQ(t.steps[1].unit, v::unit("uc"));
}

TEST(SelectUnits, IgnoresUntypedTeachers) {
  Builder b;
  b.concept_("a");
  b.s.insert(Triple{v::unit("ghost"), v::teaches(), v::concept_iri("a")});
  auto t = select_units(b.s, concepts({"a"}), 3);
  EXPECT_TRUE(t.steps.empty());
  EXPECT_EQ(t.gaps.size(), 1u);
}

Builder chain_fixture() {
  Builder b;
  b.concept_("a").concept_("b", {"a"}).concept_("c", {"b"});
  b.unit("u1", {"a"}, 10).unit("u2", {"b"}, 20).unit("u3", {"c"}, 15);
  b.chain("ch", {"u1", "u2", "u3"});
  return b;
}

TEST(GenerateTrajectory, ChainAndMastery) {
  auto b = chain_fixture();
  auto r = request(v::concept_iri("c"));
  auto t = generate_trajectory(b.s, r);
  ASSERT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.total_minutes, 45);
  EXPECT_FALSE(t.truncated);
  EXPECT_EQ(oracle::check_trajectory(b.s, r, t), std::nullopt);

  r.profile = mastered({"a", "b", "c"});
  auto empty = generate_trajectory(b.s, r);
  EXPECT_TRUE(empty.steps.empty());
  EXPECT_TRUE(empty.gaps.empty());
  EXPECT_EQ(empty.total_minutes, 0);

  r.profile = mastered({"a"}, 0.84);
  auto t2 = generate_trajectory(b.s, r);
  ASSERT_EQ(t2.steps.size(), 2u);
  EXPECT_EQ(t2.steps[0].unit, v::unit("u2"));
  r.profile = mastered({"a"}, 0.6);
  EXPECT_EQ(generate_trajectory(b.s, r).steps.size(), 3u);
}

TEST(GenerateTrajectory, BudgetTruncation) {
  auto b = chain_fixture();
  auto r = request(v::concept_iri("c"));
  r.max_minutes = 0;
  auto zero = generate_trajectory(b.s, r);
  EXPECT_TRUE(zero.steps.empty());
  EXPECT_TRUE(zero.truncated);
  EXPECT_EQ(zero.gaps.size(), 3u);

  r.max_minutes = 30;
  auto t = generate_trajectory(b.s, r);
  ASSERT_EQ(t.steps.size(), 2u);
  EXPECT_EQ(t.total_minutes, 30);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.gaps, (std::set<Iri>{v::concept_iri("c")}));
  EXPECT_EQ(oracle::check_trajectory(b.s, r, t), std::nullopt);

  r.max_minutes = 45;
  EXPECT_FALSE(generate_trajectory(b.s, r).truncated);

  r.max_minutes = 0;
  r.profile = mastered({"a", "b", "c"});
  EXPECT_FALSE(generate_trajectory(b.s, r).truncated);
}

TEST(GenerateTrajectory, RequestValidation) {
  auto b = chain_fixture();
  auto r = request(v::concept_iri("c"));
  r.level = 0;
  EXPECT_THROW(generate_trajectory(b.s, r), RequestError);
  r.level = 6;
  EXPECT_THROW(generate_trajectory(b.s, r), RequestError);
  r.level = 3;
  r.theta = 0;
  EXPECT_THROW(generate_trajectory(b.s, r), RequestError);
  r.theta = 0.7;
  r.max_minutes = -1;
  EXPECT_THROW(generate_trajectory(b.s, r), RequestError);
  r.max_minutes.reset();
  r.goal = v::concept_iri("nope");
  EXPECT_THROW(generate_trajectory(b.s, r), UnknownConceptError);
}

TEST(CompareWithStatic, Examples) {
  auto b = chain_fixture();
  auto full = generate_trajectory(b.s, request(v::concept_iri("c")));
  auto c1 = compare_with_static(b.s, full, v::chapter("ch"));
  EXPECT_EQ(c1.static_units, units({"u1", "u2", "u3"}));
  EXPECT_EQ(c1.dynamic_units, c1.static_units);
  EXPECT_TRUE(c1.skipped.empty());
  EXPECT_TRUE(c1.added.empty());
  EXPECT_EQ(c1.order_inversions, 0u);

  auto minus = generate_trajectory(b.s, request(v::concept_iri("c"), mastered({"a"})));
  auto c2 = compare_with_static(b.s, minus, v::chapter("ch"));
  EXPECT_EQ(c2.skipped, (std::set<Iri>{v::unit("u1")}));
  EXPECT_EQ(c2.order_inversions, 0u);

  Trajectory manual;
  manual.steps = {Step{v::unit("u3"), {}, 15}, Step{v::unit("u1"), {}, 10}};
  auto c3 = compare_with_static(b.s, manual, v::chapter("ch"));
  EXPECT_EQ(c3.shared, (std::set<Iri>{v::unit("u1"), v::unit("u3")}));
  EXPECT_EQ(c3.skipped, (std::set<Iri>{v::unit("u2")}));
  EXPECT_TRUE(c3.added.empty());
  EXPECT_EQ(c3.order_inversions, 1u);

  manual.steps.push_back(Step{v::unit("elsewhere"), {}, 1});
  EXPECT_EQ(compare_with_static(b.s, manual, v::chapter("ch")).added, (std::set<Iri>{v::unit("elsewhere")}));
}

TEST(CompareWithStatic, BrokenChains) {
  Builder b;
  b.unit("p", {}).unit("q", {}).unit("r", {});
  for (auto u : {"p", "q", "r"}) b.s.insert(Triple{v::unit(u), v::part_of(), v::chapter("branch")});
  b.s.insert(Triple{v::unit("p"), v::next(), v::unit("q")});
  b.s.insert(Triple{v::unit("p"), v::next(), v::unit("r")});
  EXPECT_THROW(static_path(b.s, v::chapter("branch")), StaticPathError);

  Builder two;
  two.unit("p", {}).unit("q", {});
  for (auto u : {"p", "q"}) two.s.insert(Triple{v::unit(u), v::part_of(), v::chapter("roots")});
  EXPECT_THROW(static_path(two.s, v::chapter("roots")), StaticPathError);

  Builder loop;
  loop.unit("p", {}).unit("q", {}).unit("r", {}).chain("loop", {"p", "q", "r"});
  loop.s.insert(Triple{v::unit("r"), v::next(), v::unit("q")});
  EXPECT_THROW(static_path(loop.s, v::chapter("loop")), StaticPathError);

  EXPECT_THROW(static_path(b.s, v::chapter("missing")), StaticPathError);

  Builder single;
  single.unit("only", {}).chain("one", {"only"});
  EXPECT_EQ(static_path(single.s, v::chapter("one")), units({"only"}));
}

TEST(Properties, RandomDagsSatisfyValidator) {
  std::mt19937_64 rng(20261016);
  for (int round = 0; round < 200; ++round) {
    auto rc = testing::random_curriculum(rng);
    auto r = request(rc.concepts[rng() % rc.concepts.size()], testing::random_profile(rng, rc.concepts));
    r.level = 1 + static_cast<int>(rng() % 5);
    if (rng() % 3 == 0) r.max_minutes = static_cast<long long>(rng() % 200);
    auto t = generate_trajectory(rc.store, r);
    auto problem = oracle::check_trajectory(rc.store, r, t);
    ASSERT_EQ(problem, std::nullopt) << "round " << round << ": " << *problem;
    EXPECT_EQ(generate_trajectory(rc.store, r), t);

    auto dominating = testing::dominate(rng, r.profile, rc.concepts);
    auto weak = required_concepts(rc.store, r.goal, r.profile);
    auto strong = required_concepts(rc.store, r.goal, dominating);
    std::set<Iri> weak_set(weak.begin(), weak.end());
    for (const auto& c : strong) ASSERT_TRUE(weak_set.count(c)) << c.str();
  }
}

TEST(Properties, EmptyProfileReproducesStaticChain) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 50; ++round) {
    int n = 1 + static_cast<int>(rng() % 30);
    Builder b;
    std::vector<std::string> ids(n);
    for (int i = 0; i < n; ++i) {
      ids[i] = "s" + std::to_string(rng() % 100000) + "_" + std::to_string(i);
      b.concept_(ids[i], i ? std::vector<std::string>{ids[i - 1]} : std::vector<std::string>{});
      b.unit("v" + ids[i], {ids[i]}, static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 5));
    }
    std::vector<std::string> chain;
    for (auto& id : ids) chain.push_back("v" + id);
    b.chain("c", chain);
    auto t = generate_trajectory(b.s, request(v::concept_iri(ids.back())));
    auto cmp = compare_with_static(b.s, t, v::chapter("c"));
    EXPECT_EQ(cmp.dynamic_units, cmp.static_units);
    EXPECT_EQ(cmp.order_inversions, 0u);
  }
}

}  // namespace
}  // namespace chemdelt::delt
