#pragma once

#include "nullcalc/rational.hpp"

#include <compare>
#include <stdexcept>
#include <string>

namespace nullcalc {

// Exact half-integer stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int whole) : doubled_(2 * whole) {}
  static constexpr HalfInt from_doubled(int d) {
    HalfInt h;
    h.doubled_ = d;
    return h;
  }
  static constexpr HalfInt half() { return from_doubled(1); }

  constexpr int doubled() const { return doubled_; }
  Rational to_rational() const { return Rational(doubled_, 2); }
  double to_double() const { return doubled_ / 2.0; }

  constexpr HalfInt operator-() const { return from_doubled(-doubled_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    doubled_ += o.doubled_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    doubled_ -= o.doubled_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
  friend constexpr auto operator<=>(HalfInt a, HalfInt b) { return a.doubled_ <=> b.doubled_; }

  // "3/2", "-1/2", "2"
  std::string str() const;
  // Accepts "n" or "n/2" (also "-n/2").  Throws std::invalid_argument.
  static HalfInt parse(const std::string& text);
  // Throws std::invalid_argument unless 2r is an integer.
  static HalfInt from_rational(const Rational& r);

 private:
  int doubled_ = 0;
};

}  // namespace nullcalc
