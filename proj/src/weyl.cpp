#include "nullcalc/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

namespace nullcalc {

namespace {

constexpr int E3 = 2;
constexpr int E4 = 3;

// g^{mu nu} is sparse: each mu pairs with exactly one nu.
constexpr int kPartner[4] = {0, 1, 3, 2};
constexpr double kPartnerWeight[4] = {1.0, 1.0, -0.5, -0.5};

double sym_traceless_defect(const Eigen::Matrix2d& m) {
  return std::max(std::abs(m(0, 1) - m(1, 0)), std::abs(m(0, 0) + m(1, 1)));
}

}  // namespace

void WeylComponents::validate() const {
  if (sym_traceless_defect(alpha) > 1e-12) throw ValidationError("alpha is not symmetric traceless");
  if (sym_traceless_defect(alphab) > 1e-12) throw ValidationError("alphab is not symmetric traceless");
}

Eigen::Matrix<double, 10, 1> WeylComponents::to_vector() const {
  Eigen::Matrix<double, 10, 1> v;
  v << alpha(0, 0), alpha(0, 1), beta(0), beta(1), rho, sigma, betab(0), betab(1), alphab(0, 0), alphab(0, 1);
  return v;
}

WeylComponents WeylComponents::from_vector(const Eigen::Matrix<double, 10, 1>& v) {
  WeylComponents c;
  c.alpha << v(0), v(1), v(1), -v(0);
  c.beta << v(2), v(3);
  c.rho = v(4);
  c.sigma = v(5);
  c.betab << v(6), v(7);
  c.alphab << v(8), v(9), v(9), -v(8);
  return c;
}

double WeylComponents::max_abs_diff(const WeylComponents& o) const {
  double d = (alpha - o.alpha).cwiseAbs().maxCoeff();
  d = std::max(d, (beta - o.beta).cwiseAbs().maxCoeff());
  d = std::max(d, std::abs(rho - o.rho));
  d = std::max(d, std::abs(sigma - o.sigma));
  d = std::max(d, (betab - o.betab).cwiseAbs().maxCoeff());
  d = std::max(d, (alphab - o.alphab).cwiseAbs().maxCoeff());
  return d;
}

WeylComponents random_components(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix<double, 10, 1> v;
  for (int i = 0; i < 10; ++i) v(i) = n(rng);
  return WeylComponents::from_vector(v);
}

// ---------------------------------------------------------------------------
// Weyl projection
// ---------------------------------------------------------------------------

namespace {

DTensor kulkarni_nomizu(const DTensor& h, const DTensor& k) {
  DTensor out(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          out(a, b, c, d) = h.at({a, c}) * k.at({b, d}) + h.at({b, d}) * k.at({a, c}) -
                            h.at({a, d}) * k.at({b, c}) - h.at({b, c}) * k.at({a, d});
  return out;
}

DTensor metric_d_tensor() {
  DTensor g(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.at({i, j}) = metric_d(i, j);
  return g;
}

}  // namespace

DTensor weyl_project(const DTensor& t) {
  if (t.rank() != 4) throw std::invalid_argument("weyl_project: rank 4 required");
  DTensor r = (t - t.permuted({1, 0, 2, 3})) * 0.5;
  r = (r - r.permuted({0, 1, 3, 2})) * 0.5;
  r = (r + r.permuted({2, 3, 0, 1})) * 0.5;

  // Remove the totally antisymmetric part (first Bianchi).
  DTensor anti(4);
  std::vector<int> perm = {0, 1, 2, 3};
  do {
    int s = epsilon4_sign(perm[0], perm[1], perm[2], perm[3]);
    anti += r.permuted(perm) * static_cast<double>(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  r -= anti * (1.0 / 24.0);

  // Ric_bd = g^{ac} R_abcd
  DTensor ric(2);
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) acc += kPartnerWeight[a] * r(a, b, kPartner[a], d);
      ric.at({b, d}) = acc;
    }
  double scal = 0.0;
  for (int b = 0; b < 4; ++b) scal += kPartnerWeight[b] * ric.at({b, kPartner[b]});

  const double n = 4.0;
  DTensor g = metric_d_tensor();
  DTensor traceless_ric = ric - g * (scal / n);
  DTensor out = r - kulkarni_nomizu(traceless_ric, g) * (1.0 / (n - 2.0)) -
                kulkarni_nomizu(g, g) * (scal / (2.0 * n * (n - 1.0)));
  return out;
}

DTensor random_weyl(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  DTensor t(4);
  for (std::size_t k = 0; k < t.size(); ++k) t.flat_at(k) = n(rng);
  return weyl_project(t);
}

double WeylAudit::worst() const {
  return std::max({pair_antisymmetry, pair_exchange, first_bianchi, traceless});
}

WeylAudit audit_weyl(const DTensor& w) {
  WeylAudit a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double x = w(i, j, k, l);
          a.pair_antisymmetry = std::max({a.pair_antisymmetry, std::abs(x + w(j, i, k, l)), std::abs(x + w(i, j, l, k))});
          a.pair_exchange = std::max(a.pair_exchange, std::abs(x - w(k, l, i, j)));
          a.first_bianchi = std::max(a.first_bianchi, std::abs(x + w(i, k, l, j) + w(i, l, j, k)));
        }
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) acc += kPartnerWeight[a] * w(a, b, kPartner[a], d);
      a.traceless = std::max(a.traceless, std::abs(acc));
    }
  return a;
}

// ---------------------------------------------------------------------------
// Dual, decomposition, reconstruction
// ---------------------------------------------------------------------------

DTensor hodge_dual(const DTensor& w) {
  if (w.rank() != 4) throw std::invalid_argument("hodge_dual: rank 4 required");
  DTensor out(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double acc = 0.0;
          for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) {
              int e = epsilon4_sign(a, b, r, s);
              if (!e) continue;
              // eps_{ab}^{mu nu} = eps_{ab r s} g^{r mu} g^{s nu}
              acc += 2.0 * e * kPartnerWeight[r] * kPartnerWeight[s] * w(kPartner[r], kPartner[s], c, d);
            }
          out(a, b, c, d) = 0.5 * acc;
        }
  return out;
}

WeylComponents decompose(const DTensor& w) {
  if (w.rank() != 4) throw std::invalid_argument("decompose: rank 4 required");
  WeylComponents c;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      c.alpha(a, b) = w(a, E4, b, E4);
      c.alphab(a, b) = w(a, E3, b, E3);
    }
    c.beta(a) = 0.5 * w(a, E4, E3, E4);
    c.betab(a) = 0.5 * w(a, E3, E3, E4);
  }
  c.rho = 0.25 * w(E4, E3, E4, E3);
  c.sigma = 0.25 * hodge_dual(w)(E4, E3, E4, E3);
  return c;
}

namespace {

struct ReconstructBasis {
  std::array<DTensor, 10> tensors;
  Eigen::Matrix<double, 10, 10> inverse;
};

// Weyl projections of elementary tensors, chosen greedily until the decompose
// images span R^10; reconstruct(c) = sum_j (M^{-1} c)_j P(E_j).
const ReconstructBasis& basis() {
  static const ReconstructBasis b = [] {
    ReconstructBasis out;
    Eigen::Matrix<double, 10, Eigen::Dynamic> cols(10, 0);
    int found = 0;
    for (std::size_t k = 0; k < 256 && found < 10; ++k) {
      DTensor e(4);
      e.flat_at(k) = 1.0;
      DTensor p = weyl_project(e);
      Eigen::Matrix<double, 10, 1> v = decompose(p).to_vector();
      Eigen::Matrix<double, 10, Eigen::Dynamic> trial(10, found + 1);
      if (found) trial.leftCols(found) = cols;
      trial.col(found) = v;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
      lu.setThreshold(1e-9);
      if (lu.rank() == found + 1) {
        cols = trial;
        out.tensors[found] = p;
        ++found;
      }
    }
    if (found != 10) throw std::logic_error("Weyl basis construction failed");
    Eigen::Matrix<double, 10, 10> m = cols;
    out.inverse = Eigen::FullPivLU<Eigen::Matrix<double, 10, 10>>(m).inverse();
    return out;
  }();
  return b;
}

}  // namespace

DTensor reconstruct(const WeylComponents& c) {
  c.validate();
  const auto& b = basis();
  Eigen::Matrix<double, 10, 1> coef = b.inverse * c.to_vector();
  DTensor out(4);
  for (int j = 0; j < 10; ++j) out += b.tensors[j] * coef(j);
  return out;
}

// ---------------------------------------------------------------------------
// Bel-Robinson
// ---------------------------------------------------------------------------

namespace {

void accumulate_q(const DTensor& w, DTensor& q) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double acc = 0.0;
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
              acc += kPartnerWeight[m] * kPartnerWeight[n] * w(a, m, c, n) * w(b, kPartner[m], d, kPartner[n]);
          q(a, b, c, d) += acc;
        }
}

}  // namespace

BelRobinsonEval bel_robinson(const DTensor& w, double audit_tol) {
  if (w.rank() != 4) throw std::invalid_argument("bel_robinson: rank 4 required");
  auto audit = audit_weyl(w);
  double scale = 1.0;
  for (double x : w.data()) scale = std::max(scale, std::abs(x));
  if (audit.worst() > audit_tol * scale) throw ValidationError("bel_robinson: input fails the Weyl symmetry audit");
  BelRobinsonEval q;
  accumulate_q(w, q.components);
  accumulate_q(hodge_dual(w), q.components);
  return q;
}

double BelRobinsonEval::max_abs() const {
  double m = 0.0;
  for (double x : components.data()) m = std::max(m, std::abs(x));
  return m;
}

double BelRobinsonEval::symmetry_defect() const {
  double worst = 0.0;
  std::vector<int> perm = {0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    DTensor p = components.permuted(perm);
    for (std::size_t k = 0; k < p.size(); ++k)
      worst = std::max(worst, std::abs(p.flat_at(k) - components.flat_at(k)));
  }
  return worst;
}

double BelRobinsonEval::trace_defect() const {
  double worst = 0.0;
  for (int s1 = 0; s1 < 4; ++s1)
    for (int s2 = s1 + 1; s2 < 4; ++s2) {
      std::vector<std::pair<int, int>> unused;
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          double acc = 0.0;
          for (int m = 0; m < 4; ++m) {
            std::vector<int> idx(4);
            int free_pos = 0;
            for (int s = 0; s < 4; ++s) {
              if (s == s1) idx[s] = m;
              else if (s == s2) idx[s] = kPartner[m];
              else idx[s] = free_pos++ == 0 ? x : y;
            }
            acc += kPartnerWeight[m] * components.at(idx);
          }
          worst = std::max(worst, std::abs(acc));
        }
    }
  return worst;
}

namespace {

struct IndexShape {
  int n3 = 0, n4 = 0;
  std::vector<int> horiz;  // 0-based
};

IndexShape shape_of(const std::array<int, 4>& idx) {
  IndexShape s;
  for (int v : idx) {
    FrameIndex f(v);
    if (f.horizontal()) s.horiz.push_back(f.slot());
    else if (v == 3) ++s.n3;
    else ++s.n4;
  }
  return s;
}

}  // namespace

bool is_tabulated(const std::array<int, 4>& idx) { return shape_of(idx).horiz.size() <= 2; }

double bel_robinson_closed_form(const WeylComponents& c, const std::array<int, 4>& idx) {
  c.validate();
  IndexShape s = shape_of(idx);
  const double rs2 = c.rho * c.rho + c.sigma * c.sigma;
  const Eigen::Vector2d sb = star(c.beta);
  const Eigen::Vector2d sbb = star(c.betab);
  if (s.horiz.empty()) {
    if (s.n4 == 4) return 2.0 * c.alpha.squaredNorm();
    if (s.n3 == 4) return 2.0 * c.alphab.squaredNorm();
    if (s.n4 == 3) return 4.0 * c.beta.squaredNorm();
    if (s.n3 == 3) return 4.0 * c.betab.squaredNorm();
    return 4.0 * rs2;
  }
  if (s.horiz.size() == 1) {
    const int a = s.horiz[0];
    if (s.n4 == 3) return 4.0 * (c.alpha.row(a).dot(c.beta));
    if (s.n3 == 3) return -4.0 * (c.alphab.row(a).dot(c.betab));
    if (s.n4 == 2) return 4.0 * c.rho * c.beta(a) - 4.0 * c.sigma * sb(a);
    return -4.0 * c.rho * c.betab(a) - 4.0 * c.sigma * sbb(a);
  }
  if (s.horiz.size() == 2) {
    const int a = s.horiz[0], b = s.horiz[1];
    const double delta = a == b ? 1.0 : 0.0;
    if (s.n4 == 2)
      return 2.0 * c.beta.squaredNorm() * delta + 2.0 * c.rho * c.alpha(a, b) - 2.0 * c.sigma * left_star(c.alpha)(a, b);
    if (s.n3 == 2)
      return 2.0 * c.betab.squaredNorm() * delta + 2.0 * c.rho * c.alphab(a, b) + 2.0 * c.sigma * left_star(c.alphab)(a, b);
    double hat = c.beta(a) * c.betab(b) + c.beta(b) * c.betab(a) - delta * c.beta.dot(c.betab);
    return -2.0 * hat + 2.0 * rs2 * delta;
  }
  throw UnsupportedIndex("bel_robinson_closed_form: index has more than two horizontal slots");
}

// ---------------------------------------------------------------------------
// 2D duals and J222
// ---------------------------------------------------------------------------

Eigen::Matrix2d left_star(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d e;
  e << 0, 1, -1, 0;
  return e * m;
}

Eigen::Matrix2d right_star(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d e;
  e << 0, 1, -1, 0;
  return m * e;
}

Eigen::Vector2d star(const Eigen::Vector2d& v) { return Eigen::Vector2d(v(1), -v(0)); }

std::pair<Rational, Rational> j222_cancellation(const RMat2& alphab_d3, const std::array<RVec2, 2>& betastar_dc) {
  return j222_pair<Rational>(alphab_d3, betastar_dc);
}

std::pair<double, double> j222_cancellation(const Mat2<double>& alphab_d3,
                                            const std::array<Vec2<double>, 2>& betastar_dc) {
  if (std::abs(alphab_d3[0][1] - alphab_d3[1][0]) > 1e-12 || std::abs(alphab_d3[0][0] + alphab_d3[1][1]) > 1e-12)
    throw ValidationError("j222: alphab must be symmetric traceless");
  Mat2<double> a = alphab_d3;
  a[1][0] = a[0][1];
  a[1][1] = -a[0][0];
  return j222_pair<double>(a, betastar_dc);
}

std::pair<double, double> j222_tensor_witness(const DTensor& w3, const std::array<DTensor, 2>& wc) {
  auto term = [](const DTensor& a3, const std::array<DTensor, 2>& c) {
    double acc = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 2; ++k) acc += a3(E3, a, E3, b) * c[k](k, a, E4, b);
    return acc;
  };
  std::array<DTensor, 2> dual_c = {hodge_dual(wc[0]), hodge_dual(wc[1])};
  return {term(w3, wc), term(hodge_dual(w3), dual_c)};
}

Rational random_small_rational(Rng& rng) {
  std::uniform_int_distribution<int> num(-50, 50);
  std::uniform_int_distribution<int> den(1, 17);
  return Rational(num(rng), den(rng));
}

}  // namespace nullcalc
