#pragma once

#include "nullcalc/frame.hpp"

#include <Eigen/Dense>

#include <array>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace nullcalc {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WeylComponents {
  Eigen::Matrix2d alpha = Eigen::Matrix2d::Zero();
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  double rho = 0.0;
  double sigma = 0.0;
  Eigen::Vector2d betab = Eigen::Vector2d::Zero();
  Eigen::Matrix2d alphab = Eigen::Matrix2d::Zero();

  // Throws ValidationError unless alpha, alphab are symmetric traceless (1e-12).
  void validate() const;

  // [a11, a12, b1, b2, rho, sigma, bb1, bb2, ab11, ab12]
  Eigen::Matrix<double, 10, 1> to_vector() const;
  static WeylComponents from_vector(const Eigen::Matrix<double, 10, 1>& v);

  double max_abs_diff(const WeylComponents& o) const;
};

using Rng = std::mt19937_64;

WeylComponents random_components(Rng& rng);

// Projection onto tensors with the algebraic Weyl symmetries.
DTensor weyl_project(const DTensor& t);
DTensor random_weyl(Rng& rng);

struct WeylAudit {
  double pair_antisymmetry = 0.0;
  double pair_exchange = 0.0;
  double first_bianchi = 0.0;
  double traceless = 0.0;
  double worst() const;
};
WeylAudit audit_weyl(const DTensor& w);

WeylComponents decompose(const DTensor& w);
DTensor reconstruct(const WeylComponents& c);
DTensor hodge_dual(const DTensor& w);

struct BelRobinsonEval {
  DTensor components{4};
  double max_abs() const;
  double symmetry_defect() const;  // max over permutations of |Q_perm - Q|
  double trace_defect() const;     // max over slot pairs of |g^{ab} Q_ab..|
};

struct UnsupportedIndex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Throws ValidationError when the audit of `w` exceeds `audit_tol`.
BelRobinsonEval bel_robinson(const DTensor& w, double audit_tol = 1e-9);

// Frame indices are 1-based (FrameIndex values).  Any ordering of a tabulated family.
bool is_tabulated(const std::array<int, 4>& idx);
double bel_robinson_closed_form(const WeylComponents& c, const std::array<int, 4>& idx);

// 2D horizontal algebra.  *v_a = eps_ab v_b ; *A_ab = eps_ac A_cb ; A^*_ab = A_ac eps_cb.
template <typename T>
using Vec2 = std::array<T, 2>;
template <typename T>
using Mat2 = std::array<std::array<T, 2>, 2>;

template <typename T>
T eps2(int a, int b) {
  if (a == b) return T(0);
  return a == 0 ? T(1) : T(-1);
}

template <typename T>
Vec2<T> star(const Vec2<T>& v) {
  Vec2<T> out{T(0), T(0)};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out[a] += eps2<T>(a, b) * v[b];
  return out;
}

template <typename T>
Mat2<T> left_star(const Mat2<T>& m) {
  Mat2<T> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      out[a][b] = T(0);
      for (int c = 0; c < 2; ++c) out[a][b] += eps2<T>(a, c) * m[c][b];
    }
  return out;
}

template <typename T>
Mat2<T> right_star(const Mat2<T>& m) {
  Mat2<T> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      out[a][b] = T(0);
      for (int c = 0; c < 2; ++c) out[a][b] += m[a][c] * eps2<T>(c, b);
    }
  return out;
}

Eigen::Matrix2d left_star(const Eigen::Matrix2d& m);
Eigen::Matrix2d right_star(const Eigen::Matrix2d& m);
Eigen::Vector2d star(const Eigen::Vector2d& v);

// T = sum alphab_ab eps_ca (*B_c)_b with B_c = beta(D_c R), (*B_c)_b = eps_bd B_cd.
// T* is built from alphab(D3 *R) = -alphab^* and beta(D_c *R) = -*beta(D_c R).
template <typename T>
std::pair<T, T> j222_pair(const Mat2<T>& alphab, const std::array<Vec2<T>, 2>& betas) {
  if (alphab[0][1] != alphab[1][0] || alphab[0][0] + alphab[1][1] != T(0))
    throw ValidationError("j222: alphab must be symmetric traceless");
  auto contract_t = [](const Mat2<T>& ab, const std::array<Vec2<T>, 2>& bs) {
    T acc(0);
    for (int c = 0; c < 2; ++c) {
      auto sb = star(bs[c]);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) acc += ab[a][b] * eps2<T>(c, a) * sb[b];
    }
    return acc;
  };
  Mat2<T> ab_dual = right_star(alphab);
  for (auto& row : ab_dual)
    for (auto& x : row) x = -x;
  std::array<Vec2<T>, 2> b_dual;
  for (int c = 0; c < 2; ++c) {
    b_dual[c] = star(betas[c]);
    b_dual[c][0] = -b_dual[c][0];
    b_dual[c][1] = -b_dual[c][1];
  }
  return {contract_t(alphab, betas), contract_t(ab_dual, b_dual)};
}

using RMat2 = Mat2<Rational>;
using RVec2 = Vec2<Rational>;
std::pair<Rational, Rational> j222_cancellation(const RMat2& alphab_d3, const std::array<RVec2, 2>& betastar_dc);
std::pair<double, double> j222_cancellation(const Mat2<double>& alphab_d3,
                                            const std::array<Vec2<double>, 2>& betastar_dc);

// Full-tensor form: sum_{a,b,c} W3_{3a3b} Wc[c]_{ca4b}, and the same with duals.
std::pair<double, double> j222_tensor_witness(const DTensor& w3, const std::array<DTensor, 2>& wc);

Rational random_small_rational(Rng& rng);

}  // namespace nullcalc
