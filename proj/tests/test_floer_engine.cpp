#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tightcert/floer_engine.hpp"

using namespace tightcert;

namespace {

struct Brute {
  long long x, y, z;  // ranks of f: A->B, g: B->C, h: C->A
};

std::vector<Brute> brute_solutions(long long a, long long b, long long c) {
  std::vector<Brute> out;
  for (long long x = 0; x <= 16; ++x)
    for (long long y = 0; y <= 16; ++y)
      for (long long z = 0; z <= 16; ++z)
        if (x + z == a && x + y == b && y + z == c) out.push_back({x, y, z});
  return out;
}

std::vector<TriangleInstance> vk_propagating(long long K) {
  std::vector<TriangleInstance> out;
  for (const auto& t : vk_triangles(K))
    if (!t.informational) out.push_back(t);
  return out;
}

}  // namespace

TEST(RankFact, NormalizationAndIntersection) {
  EXPECT_EQ(RankFact::between(1, 6, 0).to_string(), "[2,6] even");
  EXPECT_EQ(RankFact::between(-3, std::nullopt).to_string(), "[0,inf)");
  EXPECT_TRUE(RankFact::between(4, 4).is_exact());
  EXPECT_FALSE(RankFact::between(3, 3, 0).normalized().has_value());
  auto both = RankFact::between(2, 10, 1).intersect(RankFact::between(5, std::nullopt));
  ASSERT_TRUE(both);
  EXPECT_EQ(both->to_string(), "[5,9] odd");
  EXPECT_FALSE(RankFact::exactly(2).intersect(RankFact::exactly(3)));
  EXPECT_FALSE(RankFact::between(0, 9, 1).intersect(RankFact::between(0, 9, 0)));
  EXPECT_TRUE(RankFact::between(0, std::nullopt, 1).contains(7));
  EXPECT_FALSE(RankFact::between(0, std::nullopt, 1).contains(8));
}

TEST(BaseFacts, Examples) {
  RankDb db = base_facts();
  EXPECT_EQ(db.get(ManifoldId::s3()), RankFact::exactly(1));
  EXPECT_EQ(db.get(ManifoldId::s1xs2()), RankFact::exactly(2));
  EXPECT_EQ(db.get(ManifoldId::lens(12, 7)), RankFact::exactly(12));
  EXPECT_EQ(db.get(ManifoldId::poincare_sphere()), RankFact::exactly(1));
  EXPECT_EQ(db.get(ManifoldId::minus_vk(1)), RankFact::exactly(1));
  EXPECT_FALSE(db.find(ManifoldId::minus_vk(2)));
  EXPECT_THROW(db.declare(ManifoldId::s3(), RankFact::exactly(3)), DomainError);
}

TEST(TriangleSolve, Examples) {
  auto s = triangle_solve(1, 2, 1);
  EXPECT_EQ(s.rank_f, 1);
  EXPECT_TRUE(s.f_injective);
  auto z = triangle_solve(0, 5, 5);
  EXPECT_EQ(z.rank_f, 0);
  EXPECT_TRUE(z.g_injective);
  EXPECT_TRUE(z.g_surjective);
  EXPECT_THROW(triangle_solve(1, 1, 1), NoExactTriangleError);
  EXPECT_THROW(triangle_solve(1, 5, 2), NoExactTriangleError);
  EXPECT_THROW(triangle_solve(-1, 1, 0), NoExactTriangleError);
}

TEST(TriangleSolve, InjectiveAlongTheVkChain) {
  for (long long k = 1; k <= 100; ++k) EXPECT_TRUE(triangle_solve(k, k + 1, 1).f_injective) << k;
}

TEST(TriangleSolve, AgreesWithBruteForce) {
  for (long long a = 0; a <= 8; ++a)
    for (long long b = 0; b <= 8; ++b)
      for (long long c = 0; c <= 8; ++c) {
        auto sols = brute_solutions(a, b, c);
        ASSERT_LE(sols.size(), 1u);
        if (sols.empty()) {
          EXPECT_THROW(triangle_solve(a, b, c), NoExactTriangleError) << a << b << c;
          continue;
        }
        auto s = triangle_solve(a, b, c);
        const Brute& e = sols.front();
        EXPECT_EQ(s.rank_f, e.x);
        EXPECT_EQ(s.rank_g, e.y);
        EXPECT_EQ(s.rank_h, e.z);
        EXPECT_EQ(s.rank_f + s.rank_h, a);
        EXPECT_EQ(s.rank_g + s.rank_f, b);
        EXPECT_EQ(s.rank_h + s.rank_g, c);
        // A map is injective when its rank is the source dimension and
        // surjective when it is the target dimension.
        EXPECT_EQ(s.f_injective, e.x == a);
        EXPECT_EQ(s.f_surjective, e.x == b);
        EXPECT_EQ(s.g_injective, e.y == b);
        EXPECT_EQ(s.g_surjective, e.y == c);
        EXPECT_EQ(s.h_injective, e.z == c);
        EXPECT_EQ(s.h_surjective, e.z == a);
      }
}

TEST(RankBounds, Examples) {
  for (long long d = 1; d <= 30; ++d) {
    RankFact f = rank_bounds(d, 1);
    EXPECT_EQ(f.lo, d - 1);
    EXPECT_EQ(f.hi, d + 1);
    EXPECT_TRUE(f.contains(d - 1));
    EXPECT_TRUE(f.contains(d + 1));
    EXPECT_FALSE(f.contains(d));
  }
  for (long long k = 2; k <= 50; ++k) EXPECT_EQ(rank_bounds(7 * k - 9, 8 * k - 9).lo, k);
  for (long long n = 0; n <= 10; ++n) EXPECT_EQ(rank_bounds(0, n), RankFact::exactly(n));
}

TEST(RankBounds, IntervalsCoverEveryTriangle) {
  // Every c admitting an exact triangle with a and b lies in rank_bounds(a, b).
  for (long long a = 0; a <= 8; ++a)
    for (long long b = 0; b <= 8; ++b) {
      RankFact f = rank_bounds(a, b);
      for (long long c = 0; c <= 20; ++c) EXPECT_EQ(f.contains(c), !brute_solutions(a, b, c).empty());
    }
}

TEST(Propagate, RanksOfMinusVk) {
  auto result = propagate(base_facts(), vk_triangles(100));
  ASSERT_TRUE(result.ok());
  for (long long k = 1; k <= 100; ++k) EXPECT_EQ(result.db.get(ManifoldId::minus_vk(k)), RankFact::exactly(k));
}

TEST(Propagate, NoTrianglesLeavesTheDatabase) {
  RankDb db = base_facts();
  auto result = propagate(db, {});
  EXPECT_TRUE(result.ok());
  EXPECT_EQ(result.db, db);
}

TEST(Propagate, ReportsContradictions) {
  RankDb db;
  db.declare(ManifoldId::s3(), RankFact::exactly(1));
  std::vector<TriangleInstance> t{{ManifoldId::s3(), ManifoldId::s3(), ManifoldId::s3(), "three spheres", false}};
  auto result = propagate(db, t);
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.contradiction->provenance, "three spheres");
  EXPECT_EQ(result.contradiction->triangle_index, 0u);
}

TEST(Propagate, SkipsInformationalTriangles) {
  RankDb db;
  db.declare(ManifoldId::s3(), RankFact::exactly(1));
  std::vector<TriangleInstance> t{{ManifoldId::s3(), ManifoldId::s3(), ManifoldId::s3(), "odd", true}};
  EXPECT_TRUE(propagate(db, t).ok());
}

TEST(Propagate, OrderIndependent) {
  auto triangles = vk_propagating(30);
  auto reference = propagate(base_facts(), triangles);
  ASSERT_TRUE(reference.ok());
  oracle::Gen gen(42);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(triangles.begin(), triangles.end(), gen.engine());
    auto shuffled = propagate(base_facts(), triangles);
    ASSERT_TRUE(shuffled.ok());
    EXPECT_EQ(shuffled.db, reference.db);
  }
}

TEST(Propagate, OnlyNarrows) {
  oracle::Gen gen(9);
  for (int round = 0; round < 50; ++round) {
    long long K = gen.range(1, 20);
    auto triangles = vk_propagating(K);
    std::shuffle(triangles.begin(), triangles.end(), gen.engine());
    triangles.resize(static_cast<std::size_t>(gen.range(0, static_cast<long long>(triangles.size()))));
    RankDb start = base_facts();
    auto result = propagate(start, triangles);
    ASSERT_TRUE(result.ok());
    for (const auto& [id, before] : start.facts()) {
      RankFact after = result.db.get(id);
      auto meet = before.intersect(after);
      ASSERT_TRUE(meet);
      EXPECT_EQ(*meet, after) << id.to_string();
    }
    for (long long k = 1; k <= K + 1; ++k) {
      RankFact f = result.db.get(ManifoldId::minus_vk(k));
      if (f.hi) {
        EXPECT_LE(f.lo, *f.hi);
      }
      EXPECT_TRUE(f.contains(k)) << k;
    }
  }
}

TEST(VkTriangles, Examples) {
  auto one = vk_triangles(1);
  std::vector<TriangleInstance> steps;
  for (const auto& t : one)
    if (!t.informational) steps.push_back(t);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].a, ManifoldId::minus_vk(1));
  EXPECT_EQ(steps[0].b, ManifoldId::minus_vk(2));
  EXPECT_EQ(steps[0].c, ManifoldId::poincare_sphere());
  EXPECT_FALSE(steps[0].provenance.empty());

  auto three = vk_triangles(3);
  bool found = std::any_of(three.begin(), three.end(), [](const TriangleInstance& t) {
    return t.a == ManifoldId::lens(12, 7) && t.b == ManifoldId::lens(15, 8) && t.c == ManifoldId::minus_vk(3) &&
           !t.informational;
  });
  EXPECT_TRUE(found);
  EXPECT_THROW(vk_triangles(0), DomainError);
}

TEST(VkTriangles, LensInstancesPassTheDeterminantCheck) {
  for (const auto& t : vk_triangles(100)) {
    if (t.informational || t.a.kind() != ManifoldId::Kind::Lens) continue;
    EXPECT_TRUE(triangle_det_check(*t.a.h1_order(), *t.b.h1_order(), *t.c.h1_order())) << t.provenance;
  }
}
