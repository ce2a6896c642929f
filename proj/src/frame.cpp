#include "nullcalc/frame.hpp"

#include <stdexcept>
#include <string>

namespace nullcalc {

std::string to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
    boost::multiprecision::cpp_int n(text.substr(0, slash));
    boost::multiprecision::cpp_int d(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: " + text);
  }
}

FrameIndex::FrameIndex(int v) : v_(v) {
  if (v < 1 || v > 4) throw DomainError("frame index must be 1..4, got " + std::to_string(v));
}

Rational metric_component(FrameIndex i, FrameIndex j) {
  if (i.horizontal() && j.horizontal()) return i == j ? Rational(1) : Rational(0);
  if ((i.value() == 3 && j.value() == 4) || (i.value() == 4 && j.value() == 3)) return Rational(-2);
  return Rational(0);
}

Rational inverse_metric_component(FrameIndex i, FrameIndex j) {
  if (i.horizontal() && j.horizontal()) return i == j ? Rational(1) : Rational(0);
  if ((i.value() == 3 && j.value() == 4) || (i.value() == 4 && j.value() == 3)) return Rational(-1, 2);
  return Rational(0);
}

int epsilon4_sign(int i, int j, int k, int l) {
  int p[4] = {i, j, k, l};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] == p[b]) return 0;
  int s = 1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) s = -s;
  return s;
}

// eps_{1234} = +2 = sqrt|det g|, det g = -4.
Rational epsilon4(FrameIndex i, FrameIndex j, FrameIndex k, FrameIndex l) {
  return Rational(2 * epsilon4_sign(i.slot(), j.slot(), k.slot(), l.slot()));
}

Rational epsilon2(FrameIndex a, FrameIndex b) {
  if (!a.horizontal() || !b.horizontal()) throw DomainError("epsilon2 needs horizontal indices");
  if (a == b) return Rational(0);
  return a.value() == 1 ? Rational(1) : Rational(-1);
}

double metric_d(int i, int j) {
  return to_double(metric_component(FrameIndex(i + 1), FrameIndex(j + 1)));
}

double inverse_metric_d(int i, int j) {
  if (i < 2 && j < 2) return i == j ? 1.0 : 0.0;
  if ((i == 2 && j == 3) || (i == 3 && j == 2)) return -0.5;
  return 0.0;
}

double epsilon2_d(int a, int b) {
  if (a == b) return 0.0;
  return a == 0 ? 1.0 : -1.0;
}

RTensor metric_tensor() {
  RTensor g(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.at({i, j}) = metric_component(FrameIndex(i + 1), FrameIndex(j + 1));
  return g;
}

RTensor inverse_metric_tensor() {
  RTensor g(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g.at({i, j}) = inverse_metric_component(FrameIndex(i + 1), FrameIndex(j + 1));
  return g;
}

RTensor epsilon4_tensor() {
  RTensor e(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) e(a, b, c, d) = Rational(2 * epsilon4_sign(a, b, c, d));
  return e;
}

}  // namespace nullcalc
