#include "nullcalc/engine.hpp"
#include "nullcalc/schematic.hpp"
#include "nullcalc/sig_scale.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <thread>

using namespace nullcalc;

namespace {

Rational Q(long long p, long long q = 1) { return Rational(p, q); }

BoundReport auto_bound(const char* cid, const char* term) {
  return bound_term(parse_term(term), campaign(cid), Strategy::auto_search());
}

std::map<std::string, BoundReport> by_label(const ReplayResult& r) {
  std::map<std::string, BoundReport> m;
  for (const auto& b : r.reports) m.emplace(b.term_label, b);
  return m;
}

const ReplayResult& scripted(const std::string& id) {
  static std::map<std::string, ReplayResult> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, replay(campaign(id), true)).first;
  return it->second;
}

void expect_label(const std::string& cid, const std::string& label, Rational e, const std::string& tag) {
  auto m = by_label(scripted(cid));
  ASSERT_TRUE(m.count(label)) << cid << " " << label;
  const BoundReport& b = m.at(label);
  ASSERT_EQ(b.status, Status::bounded) << cid << " " << label;
  EXPECT_EQ(*b.delta_exponent, e) << cid << " " << label;
  EXPECT_EQ(b.factor_tag, tag) << cid << " " << label;
}

}  // namespace

TEST(Campaigns, SignatureRanges) {
  EXPECT_EQ(campaign_ids().size(), 4u);
  EXPECT_EQ(campaign("nab4_alpha").sig_lo, HalfInt(6));
  EXPECT_EQ(campaign("nab4_alpha").sig_hi, HalfInt(6));
  EXPECT_EQ(campaign("nab3_alphab").sig_lo, HalfInt(1));
  EXPECT_EQ(campaign("nab3_alphab").sig_hi, HalfInt(1));
  EXPECT_EQ(campaign("outgoing").sig_lo, HalfInt(3));
  EXPECT_EQ(campaign("outgoing").sig_hi, HalfInt(5));
  EXPECT_EQ(campaign("incoming").sig_lo, HalfInt(2));
  EXPECT_EQ(campaign("incoming").sig_hi, HalfInt(3));
  EXPECT_EQ(campaign("outgoing").commuted_direction, "L");
  EXPECT_EQ(campaign("incoming").commuted_direction, "Lb");
  EXPECT_THROW(campaign("bogus"), std::out_of_range);
}

TEST(Anomalies, Counting) {
  EXPECT_TRUE(counts_as_anomaly(parse_term("alpha").factors[0]));
  EXPECT_TRUE(counts_as_anomaly(parse_term("alpha(D4 R)").factors[0]));
  EXPECT_TRUE(counts_as_anomaly(parse_term("alphab(D3 R)").factors[0]));
  EXPECT_TRUE(counts_as_anomaly(parse_term("beta(Dc R)").factors[0]));
  EXPECT_FALSE(counts_as_anomaly(parse_term("beta").factors[0]));
  EXPECT_FALSE(counts_as_anomaly(parse_term("chih").factors[0]));
  EXPECT_FALSE(counts_as_anomaly(parse_term("rho").factors[0]));
  EXPECT_EQ(anomaly_count(parse_term("alpha(D4 R) * alpha * rho")), 2);
}

TEST(Enumerate, OutgoingVanishingFamiliesEmpty) {
  const Campaign& o = campaign("outgoing");
  EXPECT_TRUE(enumerate_integrands(o, Family::I, 3).empty());
  EXPECT_TRUE(enumerate_integrands(o, Family::K, 2).empty());
  EXPECT_FALSE(enumerate_integrands(o, Family::I, 0).empty());
}

TEST(Enumerate, Nab4AlphaNoTripleAnomaly) {
  const Campaign& c = campaign("nab4_alpha");
  auto all = enumerate_integrands(c, Family::I);
  EXPECT_TRUE(enumerate_integrands(c, Family::I, 3).empty());
  bool has_alpha_pair = false;
  for (const auto& t : all) {
    EXPECT_EQ(signature_of_term(t), HalfInt(6));
    EXPECT_LT(anomaly_count(t), 3);
    const auto& f = t.factors;
    if (!f[0].is_wildcard() && f[0].kind() == Kind::alpha && f[0].curv_derivs == std::vector<Deriv>{Deriv::D4} &&
        !f[1].is_wildcard() && f[1].kind() == Kind::alpha)
      has_alpha_pair = true;
  }
  EXPECT_TRUE(has_alpha_pair);
}

TEST(Enumerate, PartitionAndRange) {
  for (const auto& id : campaign_ids()) {
    const Campaign& c = campaign(id);
    for (Family f : {Family::I, Family::J, Family::K}) {
      std::size_t sum = 0;
      for (int k = 0; k <= 3; ++k) {
        auto part = enumerate_integrands(c, f, k);
        sum += part.size();
        for (const auto& t : part) {
          EXPECT_EQ(anomaly_count(t), k);
          EXPECT_TRUE(c.in_range(signature_of_term(t))) << id << " " << to_ascii(t);
        }
      }
      EXPECT_EQ(sum, enumerate_integrands(c, f).size()) << id << family_name(f);
    }
  }
}

// The +-1/2 widening of the spec does not populate these sets; the minimal widenings are 2 and 1.
TEST(Enumerate, ExhaustionWidening) {
  const Campaign& o = campaign("outgoing");
  EXPECT_EQ(minimal_widening(o, Family::I, 3, HalfInt(5)), HalfInt(2));
  EXPECT_EQ(minimal_widening(o, Family::K, 2, HalfInt(5)), HalfInt(1));
  HalfInt h = HalfInt::half();
  EXPECT_TRUE(enumerate_integrands(o, Family::I, 3, o.sig_lo - h, o.sig_hi + h).empty());
  EXPECT_TRUE(enumerate_integrands(o, Family::K, 2, o.sig_lo - h, o.sig_hi + h).empty());
  EXPECT_FALSE(enumerate_integrands(o, Family::I, 3, o.sig_lo, o.sig_hi + HalfInt(2)).empty());
  EXPECT_FALSE(enumerate_integrands(o, Family::K, 2, o.sig_lo, o.sig_hi + HalfInt(1)).empty());
}

TEST(BoundTerm, SpecExamples) {
  BoundReport i0 = auto_bound("outgoing", "Psi_g(D4 R) * Psi_g * Psi_g");
  ASSERT_EQ(i0.status, Status::bounded);
  EXPECT_EQ(*i0.delta_exponent, Q(1, 2));

  BoundReport i11 = auto_bound("outgoing", "Psi_g(D4 R) * alpha * Psi_g");
  EXPECT_EQ(*i11.delta_exponent, Q(1, 4));

  BoundReport k = auto_bound("nab4_alpha", "psi * alpha(D4 R) * alpha(D4 R)");
  EXPECT_EQ(*k.delta_exponent, Q(-1, 2));
}

TEST(BoundTerm, ReportInvariants) {
  for (const auto& id : campaign_ids()) {
    const Campaign& c = campaign(id);
    for (Family f : {Family::I, Family::J, Family::K})
      for (const auto& t : enumerate_integrands(c, f)) {
        BoundReport b = bound_term(t, c, Strategy::auto_search());
        EXPECT_EQ(b.delta_exponent.has_value(), b.status == Status::bounded);
        if (b.status == Status::unbounded) EXPECT_FALSE(b.diagnostic.empty());
        for (const auto& m : b.moves) EXPECT_FALSE(m.cites.empty() && m.detail.empty());
      }
  }
}

TEST(BoundTerm, Deterministic) {
  const Campaign& c = campaign("outgoing");
  for (const auto& t : enumerate_integrands(c, Family::K, 1)) {
    BoundReport a = bound_term(t, c, Strategy::auto_search());
    BoundReport b = bound_term(t, c, Strategy::auto_search());
    ASSERT_EQ(a.moves.size(), b.moves.size());
    for (std::size_t i = 0; i < a.moves.size(); ++i) {
      EXPECT_EQ(a.moves[i].kind, b.moves[i].kind);
      EXPECT_EQ(a.moves[i].detail, b.moves[i].detail);
    }
    EXPECT_EQ(a.delta_exponent, b.delta_exponent);
  }
}

// Widening a factor to its wildcard class admits every anomalous member; the bound cannot improve.
TEST(BoundTerm, MonotoneUnderAddedAnomalies) {
  const Campaign& c = campaign("outgoing");
  int compared = 0;
  for (const auto& t : enumerate_integrands(c, Family::I, 0)) {
    BoundReport base = bound_term(t, c, Strategy::auto_search());
    if (base.status != Status::bounded) continue;
    for (std::size_t i = 1; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      if (f.is_wildcard() || !f.is_curvature() || !f.derivs.empty() || !f.curv_derivs.empty()) continue;
      SchematicTerm w = t;
      w.factors[i].name = Wildcard::Psi;
      BoundReport wb = bound_term(w, c, Strategy::auto_search());
      if (wb.status != Status::bounded) continue;
      EXPECT_LE(*wb.delta_exponent, *base.delta_exponent) << to_ascii(t);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(Vanishing, Labels) {
  EXPECT_EQ(vanishing_labels(campaign("outgoing")), (std::vector<std::string>{"I3", "I21", "K2", "K12.omega", "J2"}));
  EXPECT_EQ(vanishing_labels(campaign("incoming")), (std::vector<std::string>{"I3", "K2", "J222"}));
  EXPECT_THROW(vanishing_certificate(campaign("outgoing"), "I0"), std::out_of_range);
}

TEST(Vanishing, OutgoingJ2) {
  BoundReport r = vanishing_certificate(campaign("outgoing"), "J2");
  EXPECT_EQ(r.status, Status::vanishes);
  EXPECT_FALSE(r.delta_exponent.has_value());
  ASSERT_GE(r.reason_chain.size(), 2u);
  std::string all;
  for (const auto& s : r.reason_chain) all += s + "\n";
  EXPECT_NE(all.find("beta(Dc R)"), std::string::npos) << all;
}

TEST(Vanishing, IncomingK2) {
  BoundReport r = vanishing_certificate(campaign("incoming"), "K2");
  EXPECT_EQ(r.status, Status::vanishes);
  EXPECT_LT(q_cross_term_residual(50, 42), 1e-12);
}

TEST(Vanishing, IncomingJ222Cancels) {
  BoundReport r = vanishing_certificate(campaign("incoming"), "J222");
  EXPECT_EQ(r.status, Status::cancels);
  EXPECT_FALSE(r.delta_exponent.has_value());
  EXPECT_FALSE(r.reason_chain.empty());
}

TEST(Vanishing, AllCertificatesRecheck) {
  for (const auto& id : campaign_ids()) {
    const Campaign& c = campaign(id);
    for (const auto& l : vanishing_labels(c)) {
      BoundReport r = vanishing_certificate(c, l);
      EXPECT_TRUE(r.status == Status::vanishes || r.status == Status::cancels) << id << " " << l;
      std::string why;
      EXPECT_TRUE(recheck(r, c, &why)) << id << " " << l << ": " << why;
    }
  }
}

TEST(Replay, Nab4Alpha) {
  const ReplayResult& r = scripted("nab4_alpha");
  EXPECT_TRUE(r.pass) << r.first_mismatch;
  expect_label("nab4_alpha", "I", Q(-1, 4), "const");
  expect_label("nab4_alpha", "K", Q(-1, 2), "const");
  expect_label("nab4_alpha", "J", Q(-1, 2), "const");
  expect_label("nab4_alpha", "final", Q(-1, 2), "const");
  EXPECT_EQ(*by_label(r).at("final").correction, Q(1, 4));
}

TEST(Replay, Nab3Alphab) {
  const ReplayResult& r = scripted("nab3_alphab");
  EXPECT_TRUE(r.pass) << r.first_mismatch;
  expect_label("nab3_alphab", "I", 0, "const");
  expect_label("nab3_alphab", "K", Q(-1, 2), "const");
  expect_label("nab3_alphab", "final", Q(-1, 2), "const");
}

TEST(Replay, Outgoing) {
  const ReplayResult& r = scripted("outgoing");
  EXPECT_TRUE(r.pass) << r.first_mismatch;
  expect_label("outgoing", "I0", Q(1, 2), "const");
  expect_label("outgoing", "I11", Q(1, 4), "const");
  expect_label("outgoing", "I122", Q(1, 2), "const");
  expect_label("outgoing", "I22.boundary", Q(1, 8), "R^{3/2}");
  expect_label("outgoing", "K1", Q(1, 4), "R^{3/2}");
  expect_label("outgoing", "K1113", Q(5, 16), "R^{3/2}");
  expect_label("outgoing", "J", Q(1, 4), "R^{3/2}");
  expect_label("outgoing", "final", Q(1, 8), "R^{3/2}");
  auto m = by_label(r);
  for (const char* l : {"I21", "I3", "K2", "K12.omega", "J2"}) EXPECT_EQ(m.at(l).status, Status::vanishes) << l;
  EXPECT_EQ(m.at("K1113").verdict, "improves");
  EXPECT_EQ(m.at("I0").verdict, "exact");
}

TEST(Replay, Incoming) {
  const ReplayResult& r = scripted("incoming");
  EXPECT_TRUE(r.pass) << r.first_mismatch;
  expect_label("incoming", "I", Q(1, 4), "const");
  expect_label("incoming", "J212", Q(1, 4), "R^{7/4}");
  expect_label("incoming", "J2212", Q(1, 8), "R^{7/4}");
  expect_label("incoming", "final", Q(1, 16), "R^{7/8}");
  auto m = by_label(r);
  EXPECT_EQ(m.at("J222").status, Status::cancels);
  EXPECT_EQ(m.at("K2").status, Status::vanishes);
  EXPECT_EQ(m.at("final").expected->exponent, Q(1, 32));
  EXPECT_EQ(m.at("final").verdict, "improves");
}

TEST(Replay, RecheckAll) {
  for (const auto& id : campaign_ids()) {
    std::string why;
    EXPECT_TRUE(recheck(scripted(id), &why)) << id << ": " << why;
    for (const auto& b : scripted(id).reports)
      if (b.status == Status::bounded) EXPECT_TRUE(b.delta_exponent.has_value());
  }
}

TEST(Replay, RecheckDetectsTampering) {
  ReplayResult r = scripted("outgoing");
  for (auto& b : r.reports)
    if (b.term_label == "I0") b.delta_exponent = Q(1);
  EXPECT_FALSE(recheck(r));
}

TEST(Replay, AutoIsInformational) {
  for (const auto& id : campaign_ids()) {
    ReplayResult a = replay(campaign(id), false);
    EXPECT_TRUE(a.pass) << id;
    for (const auto& b : a.reports) EXPECT_EQ(b.verdict, "info");
    ReplayResult again = replay(campaign(id), false);
    ASSERT_EQ(a.reports.size(), again.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) EXPECT_EQ(a.reports[i].delta_exponent, again.reports[i].delta_exponent);
  }
}

TEST(Replay, ConcurrentCampaigns) {
  std::vector<ReplayResult> out(campaign_ids().size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < out.size(); ++i)
    threads.emplace_back([&, i] { out[i] = replay(campaign(campaign_ids()[i]), true); });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const ReplayResult& serial = scripted(campaign_ids()[i]);
    ASSERT_EQ(out[i].reports.size(), serial.reports.size());
    for (std::size_t j = 0; j < serial.reports.size(); ++j) {
      EXPECT_EQ(out[i].reports[j].term_label, serial.reports[j].term_label);
      EXPECT_EQ(out[i].reports[j].delta_exponent, serial.reports[j].delta_exponent);
      EXPECT_EQ(out[i].reports[j].factor_tag, serial.reports[j].factor_tag);
    }
  }
}

TEST(Format, Exponents) {
  EXPECT_EQ(exponent_str(Q(1, 8)), "1/8");
  EXPECT_EQ(r_tag(0), "const");
  EXPECT_EQ(r_tag(Q(3, 2)), "R^{3/2}");
}
