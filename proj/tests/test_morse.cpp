#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cellsheaf;
namespace ts = testing_support;

namespace {

using P = Parametrization<Rationals>;

P interval_param() {
  Rationals q;
  std::vector<P::CoverMap> covers;
  covers.push_back({"u", "e", Matrix<Rationals>::from_ints(q, {{1}})});
  covers.push_back({"v", "e", Matrix<Rationals>::from_ints(q, {{-1}})});
  return P::build(q, {{"u", 0, 1}, {"v", 0, 1}, {"e", 1, 1}}, std::move(covers));
}

P circle_param() { return compile(constant_sheaf(ts::load_complex("circle.json"), 1, Rationals{})); }

template <Field F>
void expect_legal(const MorseData<F>& data) {
  for (const auto& pass : data.passes) {
    EXPECT_TRUE(check_matching_axioms(pass.pairs, pass.input).ok);
    auto acyclic = verify_acyclic(pass.pairs, pass.input);
    EXPECT_TRUE(acyclic.ok) << acyclic.message;
    EXPECT_TRUE(is_removal_monotone(pass.pairs, pass.input, pass.top_down));
  }
}

}  // namespace

TEST(ReducePair, Interval) {
  auto p = interval_param();
  reduce_pair(p, "v", "e");
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.id(p.alive_indices()[0]), "u");
  EXPECT_EQ(p.cover_count(), 0u);
  EXPECT_EQ(ts::profile_betti(p), (std::vector<std::size_t>{1, 0}));
}

TEST(ReducePair, CircleLeavesZeroCoboundary) {
  auto p = circle_param();
  reduce_pair(p, "b", "e");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_TRUE(p.find("a") && p.find("f"));
  // the new F_af cancels exactly and is pruned
  EXPECT_EQ(p.cover_count(), 0u);
  EXPECT_TRUE(assemble(p).coboundary(0).is_zero());
  EXPECT_EQ(ts::profile_betti(p), (std::vector<std::size_t>{1, 1}));
}

TEST(ReducePair, PureDeletionAndErrors) {
  Rationals q;
  std::vector<P::CoverMap> covers;
  covers.push_back({"x", "y", Matrix<Rationals>::from_ints(q, {{3}})});
  auto p = P::build(q, {{"x", 0, 1}, {"y", 1, 1}, {"z", 0, 1}}, std::move(covers));
  auto before = p.stored_entries();
  reduce_pair(p, "x", "y");
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.stored_entries(), before - 1);

  auto circle = circle_param();
  EXPECT_THROW(reduce_pair(circle, "a", "b"), NotACover);
  std::vector<P::CoverMap> zero;
  zero.push_back({"x", "y", Matrix<Rationals>::from_ints(q, {{0}})});
  auto z = P::build(q, {{"x", 0, 1}, {"y", 1, 1}}, std::move(zero));
  EXPECT_THROW(reduce_pair(z, "x", "y"), NotInvertible);
}

TEST(Scythe, Circle) {
  auto data = scythe(circle_param());
  EXPECT_EQ(data.m_k, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(data.m_tilde, 2u);
  EXPECT_TRUE(assemble(data.reduced).coboundary(0).is_zero());
  expect_legal(data);
  EXPECT_EQ(data.critical_poset.size(), 2u);
}

TEST(Scythe, SkyscraperIsUntouched) {
  Rationals q;
  auto tri = ts::load_complex("triangle.json");
  for (Index i = 0; i < tri.size(); ++i) {
    auto input = compile(skyscraper_sheaf(tri, tri.poset().id(i), q));
    auto data = scythe(input);
    EXPECT_TRUE(data.matching.pairs.empty());
    EXPECT_EQ(data.reduced, input);
    EXPECT_EQ(data.matching.critical.size(), tri.size());
  }
}

TEST(Scythe, TriangleKeepsBetti) {
  auto p = compile(constant_sheaf(ts::load_complex("triangle.json"), 1, Rationals{}));
  for (auto data : {scythe(p), coscythe(p), iterate_scythe(p)}) {
    EXPECT_EQ(ts::profile_betti(data.reduced), (std::vector<std::size_t>{1, 0, 0}));
    expect_legal(data);
  }
  EXPECT_EQ(iterate_scythe(p).reduced.size(), 1u);
}

TEST(Scythe, FixturesKeepBettiAllVariants) {
  for (const auto& fx : ts::standard_fixtures()) {
    auto p = compile(constant_sheaf(ts::load_complex(fx.file), 1, PrimeField(7)));
    for (auto data : {scythe(p), coscythe(p), iterate_scythe(p)}) {
      EXPECT_EQ(ts::profile_betti(data.reduced), fx.betti) << fx.file;
      EXPECT_TRUE(verify_d_squared(assemble(data.reduced)).ok);
      expect_legal(data);
    }
  }
}

TEST(Scythe, SelfCheckRuns) {
  ScytheOptions opts;
  opts.self_check = true;
  ts::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = ts::random_parametrization(rng, PrimeField(5));
    EXPECT_NO_THROW(scythe(p, opts));
    EXPECT_NO_THROW(coscythe(p, opts));
    EXPECT_NO_THROW(iterate_scythe(p, opts));
  }
}

TEST(Scythe, DeterministicAcrossRuns) {
  auto p = compile(constant_sheaf(ts::load_complex("torus.json"), 1, Rationals{}));
  auto a = scythe(p), b = scythe(p);
  EXPECT_EQ(a.matching.pairs, b.matching.pairs);
  EXPECT_EQ(a.reduced, b.reduced);
}

TEST(CoScythe, CircleAndZeroSheaf) {
  auto data = coscythe(circle_param());
  EXPECT_EQ(data.m_k, (std::vector<std::size_t>{1, 1}));
  expect_legal(data);
  auto zero = compile(constant_sheaf(ts::load_complex("triangle.json"), 0, Rationals{}));
  auto z = coscythe(zero);
  EXPECT_TRUE(z.matching.pairs.empty());
  EXPECT_EQ(ts::profile_betti(z.reduced), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(IterateScythe, Examples) {
  auto big = compile(constant_sheaf(subdivided_interval(200), 1, Rationals{}));
  auto data = iterate_scythe(big);
  EXPECT_EQ(data.reduced.size(), 1u);
  EXPECT_EQ(data.m_tilde, 1u);

  auto sky = compile(skyscraper_sheaf(ts::load_complex("circle.json"), "a", Rationals{}));
  EXPECT_EQ(iterate_scythe(sky).passes.size(), 1u);

  auto circle = iterate_scythe(circle_param());
  EXPECT_EQ(circle.reduced.size(), 2u);
  EXPECT_LE(circle.passes.size(), 2u);
}

TEST(MatchPolicy, UniqueInvertiblePreservesBetti) {
  ScytheOptions opts;
  opts.policy = MatchPolicy::unique_invertible;
  ts::Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = ts::random_parametrization(rng, Rationals{});
    const auto expected = ts::oracle_betti(p);
    EXPECT_EQ(ts::profile_betti(scythe(p, opts).reduced), expected);
    EXPECT_EQ(ts::profile_betti(coscythe(p, opts).reduced), expected);
  }
}

TEST(VerifyAcyclic, EmptyAndTheta) {
  auto circle = circle_param().poset();
  EXPECT_TRUE(verify_acyclic({}, circle).ok);
  // (a,e) and (b,f): a < f and b < e, so each pair precedes the other
  auto report = verify_acyclic({{"a", "e"}, {"b", "f"}}, circle);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.cycle.size(), 2u);

  EXPECT_FALSE(check_matching_axioms({{"a", "e"}, {"a", "f"}}, circle).ok);
  EXPECT_FALSE(check_matching_axioms({{"a", "b"}}, circle).ok);
}

TEST(Oracle, EmptyMatchingReturnsCovers) {
  auto p = circle_param();
  EXPECT_EQ(morse_coboundary_oracle(p, {}), cover_blocks(p));
}

TEST(Oracle, CircleSinglePair) {
  auto p = circle_param();
  auto oracle = morse_coboundary_oracle(p, {{"b", "e"}});
  reduce_pair(p, "b", "e");
  EXPECT_EQ(oracle, cover_blocks(p));
}

TEST(Oracle, CyclicMatchingRejected) {
  auto p = circle_param();
  EXPECT_THROW(morse_coboundary_oracle(p, {{"a", "e"}, {"b", "f"}}), CyclicMatching);
}

TEST(Oracle, MatchesReplayOnRandomInstances) {
  ts::Rng rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = ts::random_parametrization(rng, PrimeField(5), 12);
    auto pairs = ts::random_acyclic_matching(rng, p);
    auto oracle = morse_coboundary_oracle(p, pairs);
    auto replay = p;
    for (const auto& mp : pairs) reduce_pair(replay, mp.lower, mp.upper);
    EXPECT_EQ(oracle, cover_blocks(replay)) << "trial " << trial;
  }
}

TEST(Scythe, RandomInstancesPreserveBetti) {
  ts::Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = ts::random_parametrization(rng, Rationals{});
    const auto expected = ts::oracle_betti(p);
    EXPECT_EQ(ts::profile_betti(scythe(p).reduced), expected);
    EXPECT_EQ(ts::profile_betti(coscythe(p).reduced), expected);
    EXPECT_EQ(ts::profile_betti(iterate_scythe(p).reduced), expected);
  }
}

TEST(Scythe, ReportsPeakAndCounts) {
  auto p = compile(constant_sheaf(ts::load_complex("torus.json"), 1, Rationals{}));
  auto data = scythe(p);
  EXPECT_GE(data.peak_map_entries, p.stored_entries());
  std::size_t total = 0;
  for (auto m : data.m_k) total += m;
  EXPECT_EQ(total, data.reduced.size());
  EXPECT_EQ(data.matching.critical.size(), data.reduced.size());
  EXPECT_EQ(data.matching.pairs.size() * 2 + data.reduced.size(), p.size());
}
