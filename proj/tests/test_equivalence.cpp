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

ScytheOptions tracked(Tracking t = Tracking::dense) {
  ScytheOptions o;
  o.tracking = t;
  return o;
}

/// Cochain-map laws, retraction and homotopy identity.
template <Field F>
::testing::AssertionResult laws_hold(const CochainComplex<F>& big, const CochainComplex<F>& small,
                                     const Equivalence<F>& eq) {
  const F& f = big.field();
  for (int n = 0; n <= big.top_degree(); ++n) {
    const auto k = static_cast<std::size_t>(n);
    const auto& psi = eq.project[k];
    const auto& phi = eq.lift[k];
    if (mat_mul(psi, phi) != Matrix<F>::identity(f, small.dimension(n))) {
      return ::testing::AssertionFailure() << "psi phi != id in degree " << n;
    }
    if (n < big.top_degree()) {
      if (mat_mul(eq.project[k + 1], big.coboundary(n)) != mat_mul(small.coboundary(n), psi)) {
        return ::testing::AssertionFailure() << "psi is not a cochain map in degree " << n;
      }
      if (mat_mul(eq.lift[k + 1], small.coboundary(n)) != mat_mul(big.coboundary(n), phi)) {
        return ::testing::AssertionFailure() << "phi is not a cochain map in degree " << n;
      }
    }
    Matrix<F> lhs = Matrix<F>::identity(f, big.dimension(n)) - mat_mul(phi, psi);
    Matrix<F> rhs(f, big.dimension(n), big.dimension(n));
    if (n < big.top_degree()) rhs += mat_mul(eq.homotopy[k + 1], big.coboundary(n));
    if (n > 0) rhs += mat_mul(big.coboundary(n - 1), eq.homotopy[k]);
    if (lhs != rhs) return ::testing::AssertionFailure() << "homotopy identity fails in degree " << n;
  }
  return ::testing::AssertionSuccess();
}

}  // namespace

TEST(StepMaps, Interval) {
  Rationals q;
  auto p = interval_param();
  auto step = step_maps(p, "v", "e");
  EXPECT_EQ(step.project[0], Matrix<Rationals>::from_ints(q, {{1, 0}}));
  // the lift of u must be a cocycle of the interval, so it carries v along
  EXPECT_EQ(step.lift[0], Matrix<Rationals>::from_ints(q, {{1}, {1}}));
  EXPECT_EQ(step.homotopy[1], Matrix<Rationals>::from_ints(q, {{0}, {-1}}));
  EXPECT_EQ(step.project[1].rows(), 0u);
  EXPECT_EQ(step.project[1].cols(), 1u);
}

TEST(StepMaps, IsolatedPairHasNoCorrections) {
  Rationals q;
  std::vector<P::CoverMap> covers;
  covers.push_back({"x", "y", Matrix<Rationals>::from_ints(q, {{2}})});
  auto p = P::build(q, {{"w", 0, 1}, {"x", 0, 1}, {"y", 1, 1}}, std::move(covers));
  auto step = step_maps(p, "x", "y");
  EXPECT_EQ(step.project[0], Matrix<Rationals>::from_ints(q, {{1, 0}}));
  EXPECT_EQ(step.lift[0], Matrix<Rationals>::from_ints(q, {{1}, {0}}));
  EXPECT_THROW(step_maps(p, "w", "y"), NotACover);
}

TEST(StepMaps, RetractionOnRandomPairs) {
  ts::Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = ts::random_parametrization(rng, PrimeField(5));
    auto pairs = ts::random_acyclic_matching(rng, p);
    if (pairs.empty()) continue;
    auto step = step_maps(p, pairs[0].lower, pairs[0].upper);
    for (std::size_t n = 0; n < step.project.size(); ++n) {
      EXPECT_EQ(mat_mul(step.project[n], step.lift[n]),
                Matrix<PrimeField>::identity(p.field(), step.project[n].rows()));
    }
  }
}

TEST(Compose, IdentityStepLeavesEquivalence) {
  auto p = interval_param();
  auto cx = assemble(p);
  auto step = step_maps(p, "v", "e");
  auto once = compose(Equivalence<Rationals>::identity(cx), step);
  EXPECT_EQ(once.project, step.project);
  EXPECT_EQ(once.lift, step.lift);
  EXPECT_EQ(once.homotopy, step.homotopy);

  // and the other way round: composing with a do-nothing step
  StepMaps<Rationals> noop;
  noop.before_bases = step.after_bases;
  noop.after_bases = step.after_bases;
  for (std::size_t n = 0; n < step.project.size(); ++n) {
    const std::size_t dim = step.project[n].rows();
    noop.project.push_back(Matrix<Rationals>::identity(p.field(), dim));
    noop.lift.push_back(Matrix<Rationals>::identity(p.field(), dim));
    noop.homotopy.emplace_back(p.field(), n ? step.project[n - 1].rows() : 0, dim);
  }
  auto twice = compose(once, noop);
  EXPECT_EQ(twice.project, once.project);
  EXPECT_EQ(twice.lift, once.lift);
  EXPECT_EQ(twice.homotopy, once.homotopy);
}

TEST(Compose, TwoStepInterval) {
  auto p = compile(constant_sheaf(subdivided_interval(3), 1, Rationals{}));
  auto data = scythe(p, tracked());
  ASSERT_EQ(data.matching.pairs.size(), 2u);
  auto eq = *data.equivalence;
  EXPECT_EQ(eq.project[0].rows(), 1u);
  EXPECT_EQ(eq.project[0].cols(), 3u);
  EXPECT_EQ(mat_mul(eq.project[0], eq.lift[0]), Matrix<Rationals>::identity(p.field(), 1));
  EXPECT_TRUE(laws_hold(assemble(p), assemble(data.reduced), eq));
}

TEST(Equivalence, LawsOnFixtures) {
  for (const auto& fx : ts::standard_fixtures()) {
    if (fx.file == "genus2.json") continue;  // dense 600x600 products; covered by the acceptance run
    auto p = compile(constant_sheaf(ts::load_complex(fx.file), 1, Rationals{}));
    for (auto data : {scythe(p, tracked()), coscythe(p, tracked()), iterate_scythe(p, tracked())}) {
      EXPECT_TRUE(laws_hold(assemble(p), assemble(data.reduced), *data.equivalence)) << fx.file;
    }
  }
}

TEST(Equivalence, StepListMatchesDenseTracking) {
  ts::Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    auto p = ts::random_parametrization(rng, Rationals{});
    auto dense = iterate_scythe(p, tracked(Tracking::dense));
    auto lazy = iterate_scythe(p, tracked(Tracking::steps));
    EXPECT_FALSE(lazy.equivalence);
    auto eq = lazy.materialize_equivalence();
    EXPECT_EQ(eq.project, dense.equivalence->project);
    EXPECT_EQ(eq.lift, dense.equivalence->lift);
    EXPECT_EQ(eq.homotopy, dense.equivalence->homotopy);
    EXPECT_TRUE(laws_hold(assemble(p), assemble(dense.reduced), eq));
  }
}

TEST(Equivalence, RandomInstancesBothFields) {
  ts::Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    auto pq = ts::random_parametrization(rng, Rationals{});
    auto dq = scythe(pq, tracked());
    EXPECT_TRUE(laws_hold(assemble(pq), assemble(dq.reduced), *dq.equivalence));
    auto pf = ts::random_parametrization(rng, PrimeField(5));
    auto df = coscythe(pf, tracked());
    EXPECT_TRUE(laws_hold(assemble(pf), assemble(df.reduced), *df.equivalence));
  }
}

TEST(Transport, CircleGeneratorLiftsToConstant) {
  auto p = compile(constant_sheaf(ts::load_complex("circle.json"), 1, Rationals{}));
  auto data = scythe(p, tracked());
  auto small = assemble(data.reduced);
  auto gens = betti(small, true);
  auto lifted = lift_cocycle(*data.equivalence, small, (*gens.generators)[0], 0);
  ASSERT_EQ(lifted.rows(), 2u);
  EXPECT_EQ(lifted(0, 0), lifted(1, 0));
  EXPECT_NE(lifted(0, 0), 0);
  EXPECT_TRUE(mat_mul(assemble(p).coboundary(0), lifted).is_zero());
}

TEST(Transport, ZeroAndSkyscraper) {
  Rationals q;
  auto p = compile(constant_sheaf(ts::load_complex("torus.json"), 1, q));
  auto data = scythe(p, tracked());
  auto small = assemble(data.reduced);
  Matrix<Rationals> zero(q, small.dimension(1), 1);
  EXPECT_TRUE(lift_cocycle(*data.equivalence, small, zero, 1).is_zero());

  auto sky = compile(skyscraper_sheaf(ts::load_complex("triangle.json"), "a,b", q));
  auto sd = scythe(sky, tracked());
  auto scx = assemble(sd.reduced);
  auto g = (*betti(scx, true).generators)[1];
  EXPECT_EQ(lift_cocycle(*sd.equivalence, scx, g, 1), g);
  EXPECT_EQ(project_cocycle(*sd.equivalence, assemble(sky), g, 1), g);
}

TEST(Transport, LiftedGeneratorsFormABasis) {
  for (const auto* file : {"torus.json", "hexagon.json", "triangle.json"}) {
    auto p = compile(constant_sheaf(ts::load_complex(file), 1, Rationals{}));
    auto data = scythe(p, tracked());
    auto big = assemble(p);
    auto small = assemble(data.reduced);
    auto gens = *betti(small, true).generators;
    for (int n = 0; n <= big.top_degree(); ++n) {
      auto lifted = lift_cocycle(*data.equivalence, small, gens[static_cast<std::size_t>(n)], n);
      EXPECT_TRUE(mat_mul(big.coboundary(n), lifted).is_zero());
      auto im = big.coboundary(n - 1);
      EXPECT_EQ(rank(hstack(im, lifted)), rank(im) + lifted.cols()) << file << " " << n;
      // projecting back recovers the reduced generators
      EXPECT_EQ(project_cocycle(*data.equivalence, big, lifted, n), gens[static_cast<std::size_t>(n)]);
    }
  }
}

TEST(Transport, RejectsNonCocycles) {
  Rationals q;
  auto p = compile(constant_sheaf(ts::load_complex("triangle.json"), 1, q));
  auto data = scythe(p, tracked());
  auto big = assemble(p);
  Matrix<Rationals> bump(q, big.dimension(0), 1);
  bump(0, 0) = 1;
  EXPECT_THROW(project_cocycle(*data.equivalence, big, bump, 0), NotACocycle);
}
