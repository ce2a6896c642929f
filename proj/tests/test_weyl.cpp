#include "nullcalc/weyl.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace nullcalc;

namespace {

double max_diff(const DTensor& a, const DTensor& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.flat_at(k) - b.flat_at(k)));
  return m;
}

double max_abs(const DTensor& a) {
  double m = 0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

// Brute-force alpha from the defining formula, slots e1 e2 e3 e4 = 0..3.
Eigen::Matrix2d alpha_of(const DTensor& w) {
  Eigen::Matrix2d a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = w(i, 3, j, 3);
  return a;
}

std::array<std::array<int, 4>, 27> tabulated_families() {
  // one representative per ordering class the closed forms cover
  return {{{4, 4, 4, 4}, {3, 3, 3, 3}, {4, 4, 4, 3}, {3, 3, 3, 4}, {4, 4, 3, 3}, {1, 4, 4, 4}, {2, 4, 4, 4},
           {1, 3, 3, 3}, {2, 3, 3, 3}, {1, 3, 4, 4}, {2, 4, 3, 4}, {1, 4, 3, 3}, {3, 2, 4, 3}, {1, 1, 4, 4},
           {1, 2, 4, 4}, {2, 2, 4, 4}, {1, 1, 3, 3}, {2, 1, 3, 3}, {2, 2, 3, 3}, {1, 1, 3, 4}, {1, 2, 3, 4},
           {2, 1, 4, 3}, {2, 2, 3, 4}, {4, 3, 4, 4}, {3, 4, 3, 3}, {4, 3, 3, 4}, {3, 3, 1, 3}}};
}

}  // namespace

TEST(Reconstruct, ZeroComponents) {
  DTensor w = reconstruct(WeylComponents{});
  EXPECT_EQ(max_abs(w), 0.0);
  WeylComponents c = decompose(DTensor(4));
  EXPECT_EQ(c.max_abs_diff(WeylComponents{}), 0.0);
}

TEST(Reconstruct, RhoOnlyRoundTrip) {
  WeylComponents c;
  c.rho = 1;
  DTensor w = reconstruct(c);
  EXPECT_LT(decompose(w).max_abs_diff(c), 1e-12);
  // rho = 1/4 W(e4,e3,e4,e3)
  EXPECT_NEAR(w(3, 2, 3, 2), 4.0, 1e-12);
  EXPECT_NEAR(w(2, 3, 2, 3), 4.0, 1e-12);
}

TEST(Reconstruct, RejectsInvalidInput) {
  WeylComponents c;
  c.alpha << 1, 0, 0, 1;  // not traceless
  EXPECT_THROW(reconstruct(c), ValidationError);
  WeylComponents d;
  d.alphab << 0, 1, 2, 0;  // not symmetric
  EXPECT_THROW(reconstruct(d), ValidationError);
}

TEST(Reconstruct, AuditAndRoundTrip) {
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    WeylComponents c = random_components(rng);
    DTensor w = reconstruct(c);
    WeylAudit a = audit_weyl(w);
    EXPECT_LT(a.pair_antisymmetry, 1e-12);
    EXPECT_LT(a.pair_exchange, 1e-12);
    EXPECT_LT(a.first_bianchi, 1e-12);
    EXPECT_LT(a.traceless, 1e-12);
    EXPECT_LT(decompose(w).max_abs_diff(c), 1e-10);
  }
}

TEST(Decompose, ReconstructOfRandomWeyl) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    DTensor w = random_weyl(rng);
    ASSERT_LT(audit_weyl(w).worst(), 1e-10);
    EXPECT_LT(max_diff(reconstruct(decompose(w)), w), 1e-10);
  }
}

TEST(Decompose, AlphaFromDiagonal) {
  // W_1414 = 1 = -W_2424 plus completions: built by reconstructing alpha = diag(1,-1)
  // and checking the defining formula directly.
  WeylComponents c;
  c.alpha << 1, 0, 0, -1;
  DTensor w = reconstruct(c);
  EXPECT_NEAR(w(0, 3, 0, 3), 1.0, 1e-12);
  EXPECT_NEAR(w(1, 3, 1, 3), -1.0, 1e-12);
  WeylComponents d = decompose(w);
  EXPECT_LT((d.alpha - c.alpha).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(d.beta.norm() + std::abs(d.rho) + std::abs(d.sigma) + d.betab.norm() + d.alphab.norm(), 1e-12);
}

TEST(Decompose, AlphaMatchesDefinition) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    DTensor w = random_weyl(rng);
    EXPECT_LT((decompose(w).alpha - alpha_of(w)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(HodgeDual, DoubleDual) {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    DTensor w = random_weyl(rng);
    EXPECT_LT(max_diff(hodge_dual(hodge_dual(w)), w * -1.0), 1e-10);
  }
}

TEST(HodgeDual, SigmaIsRhoOfDual) {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    DTensor w = random_weyl(rng);
    EXPECT_NEAR(decompose(w).sigma, decompose(hodge_dual(w)).rho, 1e-10);
  }
}

// The printed relation alpha(*W) = *alpha(W) contradicts the component table of Q
// under either orientation; with eps_1234 = +2 the tensor satisfies the opposite sign.
TEST(HodgeDual, AlphaOfDualSign) {
  Rng rng(42);
  double with_minus = 0, with_plus = 0;
  for (int i = 0; i < 50; ++i) {
    DTensor w = random_weyl(rng);
    Eigen::Matrix2d a = decompose(w).alpha, ad = decompose(hodge_dual(w)).alpha;
    with_minus = std::max(with_minus, (ad + left_star(a)).cwiseAbs().maxCoeff());
    with_plus = std::max(with_plus, (ad - left_star(a)).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(with_minus, 1e-10);
  EXPECT_GT(with_plus, 1e-3);
}

TEST(HodgeDual, RejectsWrongRank) {
  EXPECT_THROW(hodge_dual(DTensor(2)), std::exception);
  EXPECT_THROW(decompose(DTensor(3)), std::exception);
}

TEST(BelRobinson, ZeroField) {
  auto q = bel_robinson(DTensor(4));
  EXPECT_EQ(q.max_abs(), 0.0);
}

TEST(BelRobinson, SymmetricTraceless) {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    auto q = bel_robinson(random_weyl(rng));
    double s = std::max(1.0, q.max_abs());
    EXPECT_LT(q.symmetry_defect() / s, 1e-10);
    EXPECT_LT(q.trace_defect() / s, 1e-9);
  }
}

TEST(BelRobinson, Q4444) {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    WeylComponents c = random_components(rng);
    auto q = bel_robinson(reconstruct(c));
    double expect = 2 * c.alpha.squaredNorm();
    EXPECT_NEAR(q.components(3, 3, 3, 3), expect, 1e-10 * std::max(1.0, expect));
  }
}

TEST(BelRobinson, AuditFailure) {
  DTensor w(4);
  w(0, 1, 2, 3) = 1;  // no antisymmetric partner
  EXPECT_THROW(bel_robinson(w), ValidationError);
}

TEST(ClosedForm, BetaOnly) {
  WeylComponents c;
  c.beta << 1, 0;
  EXPECT_DOUBLE_EQ(bel_robinson_closed_form(c, {4, 4, 4, 3}), 4.0);
}

TEST(ClosedForm, ZeroComponents) {
  for (auto idx : tabulated_families()) {
    ASSERT_TRUE(is_tabulated(idx));
    EXPECT_EQ(bel_robinson_closed_form(WeylComponents{}, idx), 0.0);
  }
}

TEST(ClosedForm, UnsupportedIndex) {
  EXPECT_FALSE(is_tabulated({1, 1, 1, 4}));
  EXPECT_THROW(bel_robinson_closed_form(WeylComponents{}, {1, 1, 1, 4}), UnsupportedIndex);
  EXPECT_THROW(bel_robinson_closed_form(WeylComponents{}, {1, 2, 1, 2}), UnsupportedIndex);
}

TEST(ClosedForm, MatchesBruteForce) {
  Rng rng(42);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    WeylComponents c = random_components(rng);
    auto q = bel_robinson(reconstruct(c));
    double s = std::max(1.0, q.max_abs());
    for (int a = 1; a <= 4; ++a)
      for (int b = 1; b <= 4; ++b)
        for (int d = 1; d <= 4; ++d)
          for (int e = 1; e <= 4; ++e) {
            std::array<int, 4> idx = {a, b, d, e};
            if (!is_tabulated(idx)) continue;
            ++checked;
            double cf = bel_robinson_closed_form(c, idx);
            ASSERT_LT(std::abs(cf - q.components(a - 1, b - 1, d - 1, e - 1)) / s, 1e-9)
                << a << b << d << e << " draw " << i;
          }
  }
  EXPECT_GT(checked, 200 * 100);
}

TEST(ClosedForm, DominantEnergyFamilies) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    WeylComponents c = random_components(rng);
    auto q = bel_robinson(reconstruct(c));
    double s = std::max(1.0, q.max_abs());
    EXPECT_NEAR(q.components(3, 3, 3, 3), 2 * c.alpha.squaredNorm(), 1e-10 * s);
    EXPECT_NEAR(q.components(2, 2, 2, 2), 2 * c.alphab.squaredNorm(), 1e-10 * s);
    EXPECT_NEAR(q.components(3, 3, 3, 2), 4 * c.beta.squaredNorm(), 1e-10 * s);
    EXPECT_NEAR(q.components(2, 2, 2, 3), 4 * c.betab.squaredNorm(), 1e-10 * s);
    EXPECT_NEAR(q.components(3, 3, 2, 2), 4 * (c.rho * c.rho + c.sigma * c.sigma), 1e-10 * s);
  }
}

TEST(Duals2D, Identities) {
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    WeylComponents c = random_components(rng);
    EXPECT_LT((star(star(c.beta)) + c.beta).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((left_star(c.alpha) + right_star(c.alpha)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((right_star(c.alphab) + left_star(c.alphab)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Duals2D, ExactOnRationals) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Rational a = random_small_rational(rng), b = random_small_rational(rng);
    RMat2 m = {{{a, b}, {b, Rational(-a)}}};
    auto l = left_star(m), r = right_star(m);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) EXPECT_EQ(l[x][y] + r[x][y], 0);
  }
}

TEST(J222, ExactZeroSum) {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    Rational a = random_small_rational(rng), b = random_small_rational(rng);
    RMat2 ab = {{{a, b}, {b, Rational(-a)}}};
    std::array<RVec2, 2> bs;
    for (auto& v : bs)
      for (auto& x : v) x = random_small_rational(rng);
    auto [t, ts] = j222_cancellation(ab, bs);
    EXPECT_EQ(t + ts, 0);
  }
}

TEST(J222, ZeroInputs) {
  RMat2 ab = {{{0, 0}, {0, 0}}};
  std::array<RVec2, 2> bs = {{{0, 0}, {0, 0}}};
  auto [t, ts] = j222_cancellation(ab, bs);
  EXPECT_EQ(t, 0);
  EXPECT_EQ(ts, 0);
}

TEST(J222, RejectsNonTraceless) {
  RMat2 ab = {{{1, 0}, {0, 1}}};
  std::array<RVec2, 2> bs = {{{1, 0}, {0, 1}}};
  EXPECT_THROW(j222_cancellation(ab, bs), ValidationError);
}

TEST(J222, FloatAndTensorWitness) {
  Rng rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    double a = u(rng), b = u(rng);
    Mat2<double> ab = {{{a, b}, {b, -a}}};
    std::array<Vec2<double>, 2> bs = {{{u(rng), u(rng)}, {u(rng), u(rng)}}};
    auto [t, ts] = j222_cancellation(ab, bs);
    EXPECT_LT(std::abs(t + ts), 1e-12);
    DTensor w3 = random_weyl(rng);
    std::array<DTensor, 2> wc = {random_weyl(rng), random_weyl(rng)};
    auto [x, xs] = j222_tensor_witness(w3, wc);
    EXPECT_LT(std::abs(x + xs), 1e-10);
  }
}
