#pragma once

// Null frame component algebra: e1, e2 horizontal, e3 = Lbar-direction, e4 = L-direction.

#include "nullcalc/rational.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nullcalc {

class FrameIndex {
 public:
  constexpr FrameIndex() = default;
  explicit FrameIndex(int v);
  constexpr int value() const { return v_; }
  constexpr int slot() const { return v_ - 1; }
  constexpr bool horizontal() const { return v_ == 1 || v_ == 2; }
  friend constexpr bool operator==(FrameIndex a, FrameIndex b) { return a.v_ == b.v_; }

 private:
  int v_ = 1;
};

inline constexpr int kDim = 4;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

Rational metric_component(FrameIndex i, FrameIndex j);
Rational inverse_metric_component(FrameIndex i, FrameIndex j);
Rational epsilon4(FrameIndex i, FrameIndex j, FrameIndex k, FrameIndex l);
Rational epsilon2(FrameIndex a, FrameIndex b);

// 0-based conveniences used by the numeric layers.
int epsilon4_sign(int i, int j, int k, int l);  // permutation sign, 0 on repeats
double metric_d(int i, int j);
double inverse_metric_d(int i, int j);
double epsilon2_d(int a, int b);  // a, b in {0, 1}

template <typename T>
class Tensor4 {
 public:
  Tensor4() : Tensor4(0) {}
  explicit Tensor4(std::size_t rank) : rank_(rank), data_(pow4(rank), T(0)) {}

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  // Slots are 0-based (FrameIndex::slot()).
  T& at(const std::vector<int>& idx) { return data_[flat(idx)]; }
  const T& at(const std::vector<int>& idx) const { return data_[flat(idx)]; }
  T& operator()(int a, int b, int c, int d) { return data_[((a * 4 + b) * 4 + c) * 4 + d]; }
  const T& operator()(int a, int b, int c, int d) const { return data_[((a * 4 + b) * 4 + c) * 4 + d]; }
  T& flat_at(std::size_t k) { return data_[k]; }
  const T& flat_at(std::size_t k) const { return data_[k]; }

  // Decode flat offset into slots.
  std::vector<int> unflatten(std::size_t k) const {
    std::vector<int> idx(rank_);
    for (std::size_t s = rank_; s-- > 0;) {
      idx[s] = static_cast<int>(k % 4);
      k /= 4;
    }
    return idx;
  }

  Tensor4& operator+=(const Tensor4& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Tensor4& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(Tensor4 a, const T& s) { return a *= s; }
  friend Tensor4 operator*(const T& s, Tensor4 a) { return a *= s; }

  // Reorder slots: result(idx) = this(idx permuted), result slot k = this slot perm[k].
  Tensor4 permuted(const std::vector<int>& perm) const {
    if (perm.size() != rank_) throw std::invalid_argument("permutation rank mismatch");
    Tensor4 out(rank_);
    std::vector<int> src(rank_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
      auto idx = out.unflatten(k);
      for (std::size_t s = 0; s < rank_; ++s) src[perm[s]] = idx[s];
      out.data_[k] = data_[flat(src)];
    }
    return out;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  static std::size_t pow4(std::size_t r) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < r; ++i) n *= 4;
    return n;
  }
  std::size_t flat(const std::vector<int>& idx) const {
    if (idx.size() != rank_) throw std::out_of_range("index tuple rank mismatch");
    std::size_t k = 0;
    for (int i : idx) {
      if (i < 0 || i > 3) throw std::out_of_range("frame slot out of range");
      k = k * 4 + static_cast<std::size_t>(i);
    }
    return k;
  }
  void check_same(const Tensor4& o) const {
    if (o.rank_ != rank_) throw std::invalid_argument("rank mismatch");
  }

  std::size_t rank_;
  std::vector<T> data_;
};

using RTensor = Tensor4<Rational>;
using DTensor = Tensor4<double>;

RTensor metric_tensor();
RTensor inverse_metric_tensor();
RTensor epsilon4_tensor();

template <typename T>
T inverse_metric_as(int i, int j);

template <>
inline double inverse_metric_as<double>(int i, int j) { return inverse_metric_d(i, j); }
template <>
inline Rational inverse_metric_as<Rational>(int i, int j) {
  return inverse_metric_component(FrameIndex(i + 1), FrameIndex(j + 1));
}

// Metric-raised contraction.  For every pair (p, q) the slot p of t1 and slot q of t2
// are summed against g^{mu nu}.  Free slots: t1's in order, then t2's.
template <typename T>
Tensor4<T> contract(const Tensor4<T>& t1, const Tensor4<T>& t2,
                    const std::vector<std::pair<int, int>>& pairs) {
  const int r1 = static_cast<int>(t1.rank());
  const int r2 = static_cast<int>(t2.rank());
  std::vector<int> used1(r1, 0), used2(r2, 0);
  for (auto [p, q] : pairs) {
    if (p < 0 || p >= r1 || q < 0 || q >= r2) throw std::out_of_range("contract: slot out of range");
    if (used1[p]++ || used2[q]++) throw std::invalid_argument("contract: overlapping pairs");
  }
  std::vector<int> free1, free2;
  for (int s = 0; s < r1; ++s)
    if (!used1[s]) free1.push_back(s);
  for (int s = 0; s < r2; ++s)
    if (!used2[s]) free2.push_back(s);

  const std::size_t np = pairs.size();
  Tensor4<T> out(free1.size() + free2.size());
  std::vector<int> i1(r1), i2(r2);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < 2 * np; ++k) combos *= 4;

  for (std::size_t k = 0; k < out.size(); ++k) {
    auto o = out.unflatten(k);
    for (std::size_t s = 0; s < free1.size(); ++s) i1[free1[s]] = o[s];
    for (std::size_t s = 0; s < free2.size(); ++s) i2[free2[s]] = o[free1.size() + s];
    T acc(0);
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      T weight(1);
      bool zero = false;
      for (std::size_t p = 0; p < np; ++p) {
        int mu = static_cast<int>(rest % 4);
        rest /= 4;
        int nu = static_cast<int>(rest % 4);
        rest /= 4;
        T gi = inverse_metric_as<T>(mu, nu);
        if (gi == T(0)) {
          zero = true;
          break;
        }
        weight *= gi;
        i1[pairs[p].first] = mu;
        i2[pairs[p].second] = nu;
      }
      if (zero) continue;
      acc += weight * t1.at(i1) * t2.at(i2);
    }
    out.flat_at(k) = acc;
  }
  return out;
}

}  // namespace nullcalc
