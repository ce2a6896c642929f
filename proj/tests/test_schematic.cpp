#include "nullcalc/schematic.hpp"
#include "nullcalc/sig_scale.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nullcalc;

namespace {

// Random valid term; wildcards always annotated with an admissible signature.
SchematicTerm random_term(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nf(1, 4), coin(0, 3), nd(0, 2);
  std::uniform_int_distribution<std::size_t> pk(0, all_kinds().size() - 1);
  const Wildcard wilds[] = {Wildcard::psi, Wildcard::psi_g, Wildcard::Psi, Wildcard::Psi_g};
  const Deriv nabs[] = {Deriv::nab4, Deriv::nab3, Deriv::nab};
  const Deriv curv[] = {Deriv::D4, Deriv::D3, Deriv::Dc};
  SchematicTerm t;
  int n = nf(rng);
  for (int i = 0; i < n; ++i) {
    Factor f;
    bool wild = coin(rng) == 0;
    if (wild)
      f.name = wilds[coin(rng)];
    else
      f.name = all_kinds()[pk(rng)];
    for (int j = nd(rng); j > 0; --j) f.derivs.push_back(nabs[nd(rng)]);
    bool curv_ok = wild ? wildcard_is_curvature(f.wildcard()) : kind_class(f.kind()) == KindClass::curvature;
    if (curv_ok && coin(rng) == 0) f.curv_derivs.push_back(curv[nd(rng)]);
    f.normalize();
    if (wild) {
      auto sigs = admissible_signatures(f);
      f.annotation = sigs[std::uniform_int_distribution<std::size_t>(0, sigs.size() - 1)(rng)];
    } else if (coin(rng) == 0) {
      f.annotation = signature_of_factor(f);
    }
    t.factors.push_back(f);
  }
  return t;
}

}  // namespace

TEST(ParseTerm, WildcardExample) {
  SchematicTerm t = parse_term("psi_g * Psi(D4 R)");
  ASSERT_EQ(t.factors.size(), 2u);
  EXPECT_TRUE(t.factors[0].is_wildcard());
  EXPECT_EQ(t.factors[0].wildcard(), Wildcard::psi_g);
  EXPECT_EQ(t.factors[1].wildcard(), Wildcard::Psi);
  EXPECT_EQ(t.factors[1].curv_derivs, std::vector<Deriv>{Deriv::D4});
  EXPECT_TRUE(t.factors[1].derivs.empty());
}

TEST(ParseTerm, DerivativeExample) {
  SchematicTerm t = parse_term("nab4 alpha * alphab");
  ASSERT_EQ(t.factors.size(), 2u);
  EXPECT_EQ(t.factors[0].kind(), Kind::alpha);
  EXPECT_EQ(t.factors[0].derivs, std::vector<Deriv>{Deriv::nab4});
  EXPECT_EQ(t.factors[1].kind(), Kind::alphab);
  EXPECT_EQ(signature_of_term(t), HalfInt(3));
}

TEST(ParseTerm, AnnotatedBackground) {
  SchematicTerm t = parse_term("trchib0 * alpha^{(2)}");
  ASSERT_EQ(t.factors.size(), 2u);
  EXPECT_TRUE(t.factors[0].is_background());
  EXPECT_EQ(t.factors[1].annotation, HalfInt(2));
  EXPECT_EQ(signature_of_term(t), HalfInt(2));
}

TEST(ParseTerm, WhitespaceInsensitive) {
  EXPECT_EQ(parse_term("  nab4   alpha*alphab "), parse_term("nab4 alpha * alphab"));
}

TEST(ParseTerm, PrefixCurvatureDerivIsInner) {
  EXPECT_EQ(parse_term("D4 alpha"), parse_term("alpha(D4 R)"));
}

TEST(ParseTerm, Errors) {
  try {
    parse_term("qqq");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_EQ(e.message(), "unknown component");
    EXPECT_FALSE(e.expected().empty());
    EXPECT_EQ(e.diagnostic_line().substr(0, 2), "0:");
  }
  try {
    parse_term("alpha * ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
  EXPECT_THROW(parse_term("alpha^{(3)}"), ParseError);   // inconsistent annotation
  EXPECT_THROW(parse_term("psi^{(5)}"), ParseError);     // no psi has signature 5
  EXPECT_THROW(parse_term(""), ParseError);
  EXPECT_THROW(parse_term("alpha beta"), ParseError);
  EXPECT_THROW(parse_term("alpha(D4 X)"), ParseError);
  EXPECT_THROW(parse_term("alpha^{(1/3)}"), ParseError);
}

TEST(ParseNorm, Examples) {
  NormExpr a = parse_norm("||alpha||_{L4sc(S)}");
  EXPECT_EQ(a.term, parse_term("alpha"));
  EXPECT_EQ(a.spec, (NormSpec{NormP::p4, Domain::S, true}));

  NormExpr b = parse_norm("||nab3 alphab||_{L2sc(Hb)}");
  EXPECT_EQ(b.spec, (NormSpec{NormP::p2, Domain::Hb, true}));
  EXPECT_EQ(anomaly_class(b.term.factors[0], b.spec).delta_loss, Rational(-1, 2));

  NormExpr c = parse_norm("||nab alpha||_{L2sc(H)}");
  EXPECT_EQ(c.spec, (NormSpec{NormP::p2, Domain::H, true}));
  EXPECT_EQ(c.term.factors[0].derivs, std::vector<Deriv>{Deriv::nab});

  NormExpr d = parse_norm("||omega||_{Linf(S)}");
  EXPECT_EQ(d.spec, (NormSpec{NormP::inf, Domain::S, false}));

  EXPECT_THROW(parse_norm("||alpha||_{L3sc(S)}"), ParseError);
  EXPECT_THROW(parse_norm("||alpha||_{L2sc(X)}"), ParseError);
  EXPECT_THROW(parse_norm("||alpha|_{L2sc(S)}"), ParseError);
}

TEST(RoundTrip, RandomCorpus) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    SchematicTerm t = random_term(rng);
    std::string s = to_ascii(t);
    SchematicTerm back;
    ASSERT_NO_THROW(back = parse_term(s)) << s;
    EXPECT_EQ(back, t) << s;
    EXPECT_EQ(to_ascii(back), s);
    NormExpr n{t, {NormP::p2, Domain::H, true}};
    EXPECT_EQ(parse_norm(to_ascii(n)), n);
  }
}

TEST(RoundTrip, AnnotationsMatchSignature) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    SchematicTerm t = parse_term(to_ascii(random_term(rng)));
    for (const auto& f : t.factors)
      if (f.annotation) EXPECT_EQ(signature_of_factor(f), *f.annotation);
  }
}

TEST(Fuzz, NeverCrashes) {
  std::mt19937_64 rng(42);
  const std::string alphabet = "abcdeghilmnoprstxzDR0123456789_*()^{}|/ -LSHbcinfsc";
  const std::vector<std::string> tokens = {"alpha", "nab4", "nab", "Dc", "Psi", "psi_g", "(", ")", "*", " ",
                                           "^{(", ")}", "R", "||", "_{L2sc(", "H", ")}", "1/2", "trchib0"};
  int ok = 0, diag = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    int len = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int j = 0; j < len; ++j) {
      if (rng() % 2)
        s += tokens[rng() % tokens.size()];
      else
        s += alphabet[rng() % alphabet.size()];
    }
    try {
      if (rng() % 2)
        (void)parse_term(s);
      else
        (void)parse_norm(s);
      ++ok;
    } catch (const ParseError& e) {
      EXPECT_LE(e.offset(), s.size());
      ++diag;
    }
  }
  EXPECT_EQ(ok + diag, 10000);
}

TEST(Printer, Unicode) {
  EXPECT_EQ(to_unicode(parse_term("trchib0 * alpha")), "trχ̄₀·α");
}
