#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "tightcert/rationals.hpp"

using namespace tightcert;

namespace {

Coefficient q(long long n, long long d = 1) { return Coefficient(Integer(n), Integer(d)); }

std::vector<long long> as_ll(const NegContinuedFraction& cf) {
  std::vector<long long> out;
  for (const auto& a : cf.coefficients) out.push_back(static_cast<long long>(a));
  return out;
}

}  // namespace

TEST(Coefficient, ReducesAndNormalizesSign) {
  Coefficient c = q(6, -8);
  EXPECT_EQ(c.numerator(), -3);
  EXPECT_EQ(c.denominator(), 4);
  EXPECT_EQ(c.to_string(), "-3/4");
  EXPECT_EQ(q(10, 5).to_string(), "2");
}

TEST(Coefficient, InfinityIsCanonical) {
  Coefficient inf = q(-7, 0);
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_EQ(inf.numerator(), 1);
  EXPECT_EQ(inf, Coefficient::infinity());
  EXPECT_EQ(inf.to_string(), "inf");
  EXPECT_THROW(q(0, 0), DomainError);
  EXPECT_THROW((void)inf.sign(), DomainError);
}

TEST(Coefficient, ParseRoundTrip) {
  for (const char* s : {"0", "-3", "5/7", "-12/5", "inf"}) EXPECT_EQ(Coefficient::parse(s).to_string(), s);
  EXPECT_EQ(Coefficient::parse("+4/6"), q(2, 3));
  EXPECT_THROW(Coefficient::parse("1/0"), ArgumentError);
  EXPECT_THROW(Coefficient::parse("x"), ArgumentError);
  EXPECT_THROW(Coefficient::parse("1/"), ArgumentError);
  EXPECT_THROW(Coefficient::parse(""), ArgumentError);
}

TEST(Coefficient, ArithmeticIsExact) {
  EXPECT_EQ(q(1, 3) + q(1, 6), q(1, 2));
  EXPECT_EQ(q(1, 3) - q(1, 2), q(-1, 6));
  EXPECT_EQ(q(2, 3) * q(9, 4), q(3, 2));
  EXPECT_EQ(q(2, 3) / q(4, 9), q(3, 2));
  EXPECT_THROW(q(1) / q(0), DomainError);
  EXPECT_LT(q(-5, 3), q(-3, 2));
  Integer big = Integer(1) << 200;
  EXPECT_EQ(Coefficient(big) / Coefficient(big), q(1));
}

TEST(NegCf, Examples) {
  EXPECT_EQ(as_ll(neg_cf(q(-2))), (std::vector<long long>{-2}));
  EXPECT_EQ(as_ll(neg_cf(q(-5, 3))), (std::vector<long long>{-2, -3}));
  EXPECT_EQ(as_ll(neg_cf(q(-7, 2))), (std::vector<long long>{-4, -2}));
  EXPECT_EQ(as_ll(neg_cf(q(-1))), (std::vector<long long>{-1}));
  EXPECT_EQ(as_ll(neg_cf(q(-1, 2))), (std::vector<long long>{-1, -2}));
}

TEST(NegCf, RejectsNonNegative) {
  EXPECT_THROW(neg_cf(q(0)), DomainError);
  EXPECT_THROW(neg_cf(q(1, 2)), DomainError);
  EXPECT_THROW(neg_cf(Coefficient::infinity()), DomainError);
}

TEST(EvalCf, Examples) {
  EXPECT_EQ(eval_cf({{-2}}), q(-2));
  EXPECT_EQ(eval_cf({{-2, -3}}), q(-5, 3));
  EXPECT_EQ(eval_cf({{-3, -2}}), q(-5, 2));
  EXPECT_THROW(eval_cf({}), ArgumentError);
}

// Enumerate every admissible sequence with small entries and check that each
// value is hit at most once and that neg_cf returns that sequence.
TEST(NegCf, UniqueExpansionAgainstEnumeration) {
  std::map<std::pair<long long, long long>, std::vector<std::vector<long long>>> by_value;
  std::vector<long long> seq;
  auto walk = [&](auto&& self, std::size_t depth) -> void {
    if (!seq.empty()) {
      oracle::Frac v;
      if (oracle::eval_chain(seq, v))
        by_value[{static_cast<long long>(v.n), static_cast<long long>(v.d)}].push_back(seq);
    }
    if (depth == 5) return;
    for (long long a = seq.empty() ? -1 : -2; a >= -7; --a) {
      seq.push_back(a);
      self(self, depth + 1);
      seq.pop_back();
    }
  };
  walk(walk, 0);
  ASSERT_GT(by_value.size(), 1000u);
  for (const auto& [value, seqs] : by_value) {
    ASSERT_EQ(seqs.size(), 1u) << value.first << "/" << value.second;
    EXPECT_EQ(as_ll(neg_cf(q(value.first, value.second))), seqs.front());
  }
}

TEST(NegCf, RoundTripAndShapeProperty) {
  oracle::Gen gen(20240601);
  for (int i = 0; i < 2000; ++i) {
    auto [p, d] = gen.negative_fraction(5000, 5000);
    Coefficient r = q(p, d);
    auto cf = neg_cf(r);
    EXPECT_EQ(eval_cf(cf), r);
    EXPECT_LE(Integer(cf.coefficients.size()), detail::abs(r.numerator()) + r.denominator());
    EXPECT_LE(cf.coefficients[0], -1);
    for (std::size_t j = 1; j < cf.coefficients.size(); ++j) EXPECT_LE(cf.coefficients[j], -2);
    // Independent evaluation with machine fractions.
    oracle::Frac v;
    ASSERT_TRUE(oracle::eval_chain(as_ll(cf), v));
    EXPECT_EQ(static_cast<long long>(v.n), static_cast<long long>(r.numerator()));
    EXPECT_EQ(static_cast<long long>(v.d), static_cast<long long>(r.denominator()));
  }
}

TEST(SlopeMaps, Examples) {
  EXPECT_EQ(r_from_rprime(q(1, 2)), q(2));
  EXPECT_EQ(r_from_rprime(q(1)), Coefficient::infinity());
  EXPECT_EQ(r_from_rprime(Coefficient::infinity()), q(0));
  EXPECT_EQ(rprime_from_r(q(2)), q(1, 2));
  EXPECT_EQ(rprime_from_r(q(3)), q(2, 3));
  EXPECT_EQ(rprime_from_r(q(-1)), q(2));
  EXPECT_EQ(rprime_from_r(q(0)), Coefficient::infinity());
  EXPECT_EQ(rprime_from_r(Coefficient::infinity()), q(1));
  EXPECT_THROW(rprime_from_r(q(1)), ExcludedSlopeError);
}

TEST(SlopeMaps, MutuallyInverse) {
  oracle::Gen gen(7);
  for (int i = 0; i < 1000; ++i) {
    auto [p, d] = gen.fraction(300, 300);
    Coefficient r = q(p, d);
    if (r == q(1)) continue;
    EXPECT_EQ(r_from_rprime(rprime_from_r(r)), r);
    Coefficient rp = r;
    if (rp.is_zero()) continue;
    EXPECT_EQ(rprime_from_r(r_from_rprime(rp)), rp);
  }
  EXPECT_EQ(r_from_rprime(rprime_from_r(Coefficient::infinity())), Coefficient::infinity());
}

TEST(Prop7, Examples) {
  EXPECT_EQ(prop7_transform(q(1, 2), 3), q(-1));
  EXPECT_EQ(prop7_transform(q(2, 3), 2), q(-2));
  for (long long k = 1; k <= 30; ++k) EXPECT_TRUE(prop7_transform(q(1, k), k).is_infinite());
  EXPECT_THROW(prop7_transform(q(0), 1), DomainError);
  EXPECT_THROW(prop7_transform(q(-1, 2), 1), DomainError);
  EXPECT_THROW(prop7_transform(Coefficient::infinity(), 1), DomainError);
  EXPECT_THROW(prop7_transform(q(1, 2), 0), DomainError);
}

TEST(MinK, Examples) {
  EXPECT_EQ(min_k_negative(q(10, 7)), 1);
  EXPECT_EQ(min_k_negative(q(1, 2)), 3);
  EXPECT_EQ(min_k_negative(q(2, 3)), 2);
  EXPECT_THROW(min_k_negative(q(0)), DomainError);
  EXPECT_THROW(min_k_negative(q(-3)), DomainError);
}

TEST(MinK, IsTheSmallestNegativeChoice) {
  oracle::Gen gen(99);
  for (int i = 0; i < 500; ++i) {
    long long p = gen.range(1, 60);
    long long d = gen.range(1, 60);
    if (std::gcd(p, d) != 1) continue;
    Coefficient rp = q(p, d);
    long long k = min_k_negative(rp);
    Coefficient at_k = prop7_transform(rp, k);
    ASSERT_TRUE(at_k.is_finite());
    EXPECT_LT(at_k, q(0));
    for (long long j = 1; j < k; ++j) {
      Coefficient before = prop7_transform(rp, j);
      EXPECT_TRUE(before.is_infinite() || before > q(0)) << rp << " k=" << j;
    }
    if (p == 1) {
      EXPECT_EQ(k, d + 1);
      EXPECT_TRUE(prop7_transform(rp, d).is_infinite());
    }
  }
}
