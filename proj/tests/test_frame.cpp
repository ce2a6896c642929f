#include "nullcalc/frame.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

using namespace nullcalc;

namespace {

FrameIndex F(int v) { return FrameIndex(v); }

RTensor vec(std::array<Rational, 4> v) {
  RTensor t(1);
  for (int i = 0; i < 4; ++i) t.at({i}) = v[i];
  return t;
}

}  // namespace

TEST(Metric, Examples) {
  EXPECT_EQ(metric_component(F(3), F(4)), -2);
  EXPECT_EQ(metric_component(F(1), F(1)), 1);
  EXPECT_EQ(inverse_metric_component(F(3), F(4)), Rational(-1, 2));
  EXPECT_EQ(metric_component(F(3), F(3)), 0);
  EXPECT_EQ(metric_component(F(1), F(3)), 0);
}

TEST(Metric, SymmetricAndInverse) {
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      EXPECT_EQ(metric_component(F(i), F(j)), metric_component(F(j), F(i)));
      Rational s = 0;
      for (int k = 1; k <= 4; ++k) s += metric_component(F(i), F(k)) * inverse_metric_component(F(k), F(j));
      EXPECT_EQ(s, i == j ? 1 : 0) << i << j;
    }
}

TEST(FrameIndexType, RangeAndHorizontal) {
  EXPECT_TRUE(F(1).horizontal());
  EXPECT_TRUE(F(2).horizontal());
  EXPECT_FALSE(F(3).horizontal());
  EXPECT_FALSE(F(4).horizontal());
  EXPECT_THROW(F(0), std::exception);
  EXPECT_THROW(F(5), std::exception);
}

TEST(Epsilon4, Examples) {
  EXPECT_EQ(epsilon4(F(1), F(2), F(3), F(4)), 2);
  EXPECT_EQ(epsilon4(F(2), F(1), F(3), F(4)), -2);
  EXPECT_EQ(epsilon4(F(1), F(1), F(3), F(4)), 0);
}

TEST(Epsilon4, TranspositionFlipsSign) {
  std::array<int, 4> p = {1, 2, 3, 4};
  do {
    Rational e = epsilon4(F(p[0]), F(p[1]), F(p[2]), F(p[3]));
    EXPECT_NE(e, 0);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        auto q = p;
        std::swap(q[a], q[b]);
        EXPECT_EQ(epsilon4(F(q[0]), F(q[1]), F(q[2]), F(q[3])), -e);
      }
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST(Epsilon4, VanishesIffRepeated) {
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l) {
          bool rep = i == j || i == k || i == l || j == k || j == l || k == l;
          EXPECT_EQ(epsilon4(F(i), F(j), F(k), F(l)) == 0, rep);
        }
}

TEST(Epsilon2, ExamplesAndDomain) {
  EXPECT_EQ(epsilon2(F(1), F(2)), 1);
  EXPECT_EQ(epsilon2(F(2), F(1)), -1);
  EXPECT_EQ(epsilon2(F(1), F(1)), 0);
  EXPECT_THROW(epsilon2(F(3), F(1)), DomainError);
  EXPECT_THROW(epsilon2(F(1), F(4)), DomainError);
}

// Both slots are raised, so the trace of the identity is g_{ab} g^{ab} = contract(g, g).
TEST(Contract, TraceOfIdentity) {
  RTensor s = contract(metric_tensor(), metric_tensor(), {{0, 0}, {1, 1}});
  ASSERT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.flat_at(0), 4);
  // g^{-1} raised twice more: sum of squares of g^{ab}
  EXPECT_EQ(contract(metric_tensor(), inverse_metric_tensor(), {{0, 0}, {1, 1}}).flat_at(0), Rational(5, 2));
}

TEST(Contract, NullVector) {
  RTensor e3 = vec({0, 0, 1, 0});
  EXPECT_EQ(contract(e3, e3, {{0, 0}}).flat_at(0), 0);
  RTensor e4 = vec({0, 0, 0, 1});
  EXPECT_EQ(contract(e3, e4, {{0, 0}}).flat_at(0), Rational(-1, 2));
}

// Frozen regression: brute force with eps_1234 = +2, g^34 = -1/2.
TEST(Contract, EpsilonSquared) {
  RTensor e = epsilon4_tensor();
  RTensor s = contract(e, e, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  EXPECT_EQ(s.flat_at(0), -24);
}

TEST(Contract, FreeSlotOrder) {
  // slot 1 of g against slot 0 of g^{-1}; free slots t1 then t2
  RTensor d = contract(metric_tensor(), inverse_metric_tensor(), {{1, 0}});
  ASSERT_EQ(d.rank(), 2u);
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c) {
      // contraction raises with g^{-1} once more, so this is g^{ac}
      EXPECT_EQ(d.at({a, c}), inverse_metric_component(F(a + 1), F(c + 1)));
    }
}

TEST(Contract, Errors) {
  RTensor v = vec({1, 0, 0, 0});
  EXPECT_THROW(contract(v, v, {{1, 0}}), std::out_of_range);
  RTensor g = metric_tensor();
  EXPECT_THROW(contract(g, g, {{0, 0}, {0, 1}}), std::invalid_argument);
}

TEST(Contract, Bilinear) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> d(-9, 9);
  auto rnd = [&] {
    RTensor t(2);
    for (std::size_t k = 0; k < t.size(); ++k) t.flat_at(k) = Rational(d(rng), 1 + std::abs(d(rng)));
    return t;
  };
  for (int trial = 0; trial < 20; ++trial) {
    RTensor a = rnd(), b = rnd(), c = rnd();
    Rational s(d(rng), 7);
    std::vector<std::pair<int, int>> pairs = {{1, 0}};
    RTensor lhs = contract(a + s * b, c, pairs);
    RTensor rhs = contract(a, c, pairs) + s * contract(b, c, pairs);
    EXPECT_EQ(lhs.data(), rhs.data());
    RTensor lhs2 = contract(c, a + s * b, pairs);
    RTensor rhs2 = contract(c, a, pairs) + s * contract(c, b, pairs);
    EXPECT_EQ(lhs2.data(), rhs2.data());
  }
}

TEST(TensorType, EntryCount) {
  for (std::size_t r = 0; r <= 4; ++r) {
    RTensor t(r);
    EXPECT_EQ(t.size(), std::size_t(1) << (2 * r));
  }
  RTensor t(3);
  EXPECT_THROW(t.at({0, 0}), std::out_of_range);
  EXPECT_THROW(t.at({0, 0, 4}), std::out_of_range);
}

TEST(RationalType, Reduced) {
  Rational r = Rational(6, 4) * -1;
  EXPECT_EQ(numerator(r), -3);
  EXPECT_EQ(denominator(r), 2);
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}
