#include "nullcalc/schematic.hpp"

#include "nullcalc/sig_scale.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace nullcalc {

namespace {

std::string build_what(std::size_t offset, const std::string& message, const std::vector<std::string>& expected) {
  std::string s = message + " at offset " + std::to_string(offset);
  if (!expected.empty()) {
    s += " (expected:";
    for (const auto& e : expected) s += " " + e;
    s += ")";
  }
  return s;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::string message, std::vector<std::string> expected)
    : std::runtime_error(build_what(offset, message, expected)),
      offset_(offset),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

std::string ParseError::diagnostic_line() const {
  std::string s = std::to_string(offset_) + ":{";
  for (std::size_t i = 0; i < expected_.size(); ++i) s += (i ? "," : "") + expected_[i];
  return s + "}";
}

namespace {

const std::vector<std::string> kFactorStart = {"derivative", "component", "wildcard"};

std::optional<Deriv> deriv_from(std::string_view s) {
  for (Deriv d : {Deriv::nab4, Deriv::nab3, Deriv::nab, Deriv::D4, Deriv::D3, Deriv::Dc})
    if (s == deriv_name(d)) return d;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  SchematicTerm term() {
    SchematicTerm t;
    t.factors.push_back(factor());
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      t.factors.push_back(factor());
    }
    return t;
  }

  NormExpr norm() {
    skip_ws();
    expect_literal("||");
    NormExpr n;
    n.term = term();
    skip_ws();
    expect_literal("||_{");
    skip_ws();
    expect_literal("L");
    std::size_t at = pos_;
    if (match("inf")) n.spec.p = NormP::inf;
    else if (match("2")) n.spec.p = NormP::p2;
    else if (match("4")) n.spec.p = NormP::p4;
    else {
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError(at, "unsupported norm exponent p", {"2", "4", "inf"});
      throw ParseError(at, "expected norm exponent", {"2", "4", "inf"});
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError(at, "unsupported norm exponent p", {"2", "4", "inf"});
    n.spec.scale_invariant = match("sc");
    skip_ws();
    expect_literal("(");
    skip_ws();
    at = pos_;
    std::string dom = ident();
    if (dom == "S") n.spec.domain = Domain::S;
    else if (dom == "H") n.spec.domain = Domain::H;
    else if (dom == "Hb") n.spec.domain = Domain::Hb;
    else throw ParseError(at, "unknown norm domain", {"S", "H", "Hb"});
    skip_ws();
    expect_literal(")");
    skip_ws();
    expect_literal("}");
    return n;
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected trailing input", {"*", "end of input"});
  }

 private:
  Factor factor() {
    Factor f;
    std::vector<std::pair<Deriv, std::size_t>> prefix;
    std::size_t name_at = 0;
    std::string word;
    while (true) {
      skip_ws();
      name_at = pos_;
      word = ident();
      if (word.empty()) {
        if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input", kFactorStart);
        throw ParseError(pos_, "unexpected character", kFactorStart);
      }
      auto d = deriv_from(word);
      if (!d) break;
      prefix.push_back({*d, name_at});
    }
    if (auto k = kind_from_name(word)) f.name = *k;
    else if (auto w = wildcard_from_name(word)) f.name = *w;
    else throw ParseError(name_at, "unknown component", {"component", "wildcard"});

    for (auto [d, at] : prefix) {
      if (is_curvature_deriv(d)) {
        if (!f.is_curvature()) throw ParseError(at, "curvature derivative on a non-curvature component", {"nab4", "nab3", "nab"});
        f.curv_derivs.push_back(d);
      } else {
        f.derivs.push_back(d);
      }
    }

    skip_ws();
    if (peek() == '(') {
      std::size_t open_at = pos_;
      if (!f.is_curvature()) throw ParseError(open_at, "curvature derivative on a non-curvature component", {"*", "^{(", "end of input"});
      ++pos_;
      while (true) {
        skip_ws();
        std::size_t at = pos_;
        std::string w = ident();
        if (w == "R") break;
        auto d = deriv_from(w);
        if (!d || !is_curvature_deriv(*d)) throw ParseError(at, w.empty() ? "expected D-derivative or R" : "invalid token inside (... R)", {"D4", "D3", "Dc", "R"});
        f.curv_derivs.push_back(*d);
      }
      skip_ws();
      expect_literal(")");
    }

    skip_ws();
    if (peek() == '^') {
      std::size_t ann_at = pos_;
      expect_literal("^{(");
      skip_ws();
      f.annotation = halfint();
      skip_ws();
      expect_literal(")}");
      f.normalize();
      auto allowed = admissible_signatures(f);
      if (std::find(allowed.begin(), allowed.end(), *f.annotation) == allowed.end()) {
        std::vector<std::string> exp;
        for (auto h : allowed) exp.push_back(h.str());
        throw ParseError(ann_at, "inconsistent signature annotation", exp);
      }
    }
    f.normalize();
    return f;
  }

  HalfInt halfint() {
    std::size_t at = pos_;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t digits_at = pos_;
    long long n = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (pos_ - digits_at >= 6) throw ParseError(at, "half-integer out of range", {"half-integer"});
      n = n * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == digits_at) throw ParseError(pos_, "expected half-integer", {"digit", "-"});
    int doubled = static_cast<int>(2 * n);
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      if (peek() != '2') throw ParseError(pos_, "half-integer denominator must be 2", {"2"});
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError(pos_ - 1, "half-integer denominator must be 2", {"2"});
      doubled = static_cast<int>(n);
    }
    return HalfInt::from_doubled(neg ? -doubled : doubled);
  }

  std::string ident() {
    std::size_t start = pos_;
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  bool match(std::string_view lit) {
    if (s_.substr(pos_, lit.size()) == lit) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }

  void expect_literal(std::string_view lit) {
    if (!match(lit)) throw ParseError(pos_, pos_ >= s_.size() ? "unexpected end of input" : "unexpected token", {"\"" + std::string(lit) + "\""});
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

SchematicTerm parse_term(std::string_view src) {
  Parser p(src);
  SchematicTerm t = p.term();
  p.finish();
  return t;
}

NormExpr parse_norm(std::string_view src) {
  Parser p(src);
  NormExpr n = p.norm();
  p.finish();
  return n;
}

}  // namespace nullcalc
