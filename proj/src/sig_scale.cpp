#include "nullcalc/sig_scale.hpp"

#include <algorithm>

namespace nullcalc {

HalfInt signature_of(Kind k) {
  switch (k) {
    case Kind::chih:
    case Kind::trchi:
    case Kind::omega: return HalfInt(1);
    case Kind::eta:
    case Kind::etab:
    case Kind::zeta: return HalfInt::half();
    case Kind::chibh:
    case Kind::trchib_tilde:
    case Kind::trchib0:
    case Kind::omegab: return HalfInt(0);
    case Kind::alpha: return HalfInt(2);
    case Kind::beta: return HalfInt::from_doubled(3);
    case Kind::rho:
    case Kind::sigma: return HalfInt(1);
    // The table prints -1/2; sc = -sgn + 1/2 with sc = 0 forces +1/2.
    case Kind::betab: return HalfInt::half();
    case Kind::alphab: return HalfInt(0);
  }
  return HalfInt(0);
}

HalfInt scale_of(Kind k) { return HalfInt::half() - signature_of(k); }

namespace {

HalfInt deriv_sum(const Factor& f) {
  HalfInt s;
  for (Deriv d : f.derivs) s += deriv_increment(d);
  for (Deriv d : f.curv_derivs) s += deriv_increment(d);
  return s;
}

}  // namespace

std::vector<HalfInt> admissible_signatures(const Factor& f) {
  if (!f.is_wildcard()) return {signature_of(f.kind()) + deriv_sum(f)};
  std::vector<HalfInt> out;
  for (Kind k : wildcard_members(f.wildcard())) {
    HalfInt s = signature_of(k) + deriv_sum(f);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

HalfInt signature_of_factor(const Factor& f) {
  if (f.is_wildcard()) {
    if (!f.annotation) throw SignatureError(std::string("unresolved signature for wildcard ") + wildcard_name(f.wildcard()));
    return *f.annotation;
  }
  HalfInt s = signature_of(f.kind()) + deriv_sum(f);
  if (f.annotation && *f.annotation != s)
    throw SignatureError("annotation " + f.annotation->str() + " disagrees with signature " + s.str() + " of " +
                         factor_key(f));
  return s;
}

HalfInt signature_of_term(const SchematicTerm& t) {
  if (t.factors.empty()) throw SignatureError("empty term");
  HalfInt s;
  for (const auto& f : t.factors) s += signature_of_factor(f);
  return s;
}

HalfInt scale_of_term(const SchematicTerm& t) { return HalfInt::half() - signature_of_term(t); }

Rational norm_exponent(HalfInt scale, const NormSpec& n) {
  if (!n.scale_invariant) throw std::invalid_argument("norm_exponent: scale-invariant norm required");
  Rational sc = scale.to_rational();
  switch (n.domain) {
    case Domain::S:
      if (n.p == NormP::p2) return -sc - Rational(1, 2);
      if (n.p == NormP::p4) return -sc - Rational(1, 4);
      return -sc;
    case Domain::H:
      if (n.p == NormP::p2) return -sc - 1;
      break;
    case Domain::Hb:
      if (n.p == NormP::p2) return -sc - Rational(1, 2);
      break;
  }
  throw std::invalid_argument("norm_exponent: unsupported norm " + to_ascii(n));
}

Rational norm_exponent(Kind k, const NormSpec& n) { return norm_exponent(scale_of(k), n); }

Rational norm_exponent(const SchematicTerm& t, const NormSpec& n) { return norm_exponent(scale_of_term(t), n); }

Rational holder_gain(const SchematicTerm& t) {
  int n = 0;
  for (const auto& f : t.factors)
    if (!f.is_background()) ++n;
  return n > 1 ? Rational(n - 1, 2) : Rational(0);
}

// ---------------------------------------------------------------------------
// Anomaly registry
// ---------------------------------------------------------------------------

namespace {

NormSpec ns(NormP p, Domain d) { return NormSpec{p, d, true}; }

const NormSpec L2S = ns(NormP::p2, Domain::S);
const NormSpec L2H = ns(NormP::p2, Domain::H);
const NormSpec L2Hb = ns(NormP::p2, Domain::Hb);
const NormSpec L4S = ns(NormP::p4, Domain::S);
const NormSpec L4H = ns(NormP::p4, Domain::H);
const NormSpec L4Hb = ns(NormP::p4, Domain::Hb);
const NormSpec LinfS = ns(NormP::inf, Domain::S);

}  // namespace

const std::vector<AnomalyRow>& anomaly_registry() {
  static const Rational half(-1, 2), quarter(-1, 4);
  static const std::vector<AnomalyRow> rows = {
      {"chih", {L2S, L2H, L2Hb}, half, false, "O_{0,2}: delta^{1/2}||chih||; Prop. 3.1 chih in L2(H)"},
      {"chibh", {L2S, L2H, L2Hb}, half, false, "O_{0,2}: delta^{1/2}||chibh||"},
      {"chih", {L4S, L4H, L4Hb}, quarter, false, "O_{0,4}: delta^{1/4}||chih||; Prop. 3.6"},
      {"chibh", {L4S, L4H, L4Hb}, quarter, false, "O_{0,4}: delta^{1/4}||chibh||; Prop. 3.6"},
      {"alpha", {L4S, L4H, L4Hb}, quarter, false, "Prop. 3.2: delta^{1/4}||alpha||_{L4sc(S)}"},
      {"alpha", {L2H}, half, false, "R_0: delta^{1/2}||alpha||_{L2sc(H)}"},
      {"nab4 alpha", {L2H}, half, false, "R_1: delta^{1/2}||nab4 alpha||_{L2sc(H)}"},
      {"nab3 alphab", {L2Hb}, half, false, "Rb_1: delta^{1/2}||nab3 alphab||_{L2sc(Hb)}"},
      {"beta", {L2Hb}, half, false, "Rb_0: delta^{1/2}||beta||_{L2sc(Hb)}"},
      {"alpha(D4 R)", {L2H}, half, false, "Mild Anomalies: alpha(D4R) anomalous in first order"},
      {"alphab(D3 R)", {L2Hb}, half, false, "Mild Anomalies: alphab(D3R) anomalous in first order"},
      {"nab3 alpha", {}, half, true, "Lemma 3.5 / Mild Anomalies: nab3 alpha is also a mild anomaly"},
      {"alpha(D3 R)", {}, half, true, "Mild Anomalies: alpha(D3R) comes from trchib0 * alpha"},
      {"beta(Dc R)", {}, half, true, "Mild Anomalies: beta(DcR) comes from trchib0 * alpha"},
  };
  return rows;
}

AnomalyClass anomaly_class(const Factor& f, const NormSpec& n) {
  if (f.is_wildcard()) {
    AnomalyClass worst;
    for (Kind k : wildcard_members(f.wildcard())) {
      Factor c = f;
      c.name = k;
      c.annotation.reset();
      AnomalyClass a = anomaly_class(c, n);
      if (a.delta_loss < worst.delta_loss) worst = a;
    }
    return worst;
  }
  const std::string key = factor_key(f);
  for (const auto& row : anomaly_registry()) {
    if (row.factor != key) continue;
    if (!row.norms.empty() && std::find(row.norms.begin(), row.norms.end(), n) == row.norms.end()) continue;
    return AnomalyClass{row.loss, row.mild, row.factor + " : " + row.source};
  }
  // Connection coefficients in Linf, and everything not listed, are scale invariant.
  return AnomalyClass{};
}

AnomalyClass anomaly_class(Kind k, const NormSpec& n) { return anomaly_class(make_factor(k), n); }

const std::vector<NormDefinitionEntry>& norm_definitions() {
  static const std::vector<NormDefinitionEntry> defs = [] {
    std::vector<NormDefinitionEntry> out;
    auto add = [&](const char* norm, Factor f, NormSpec s, Rational w) { out.push_back({norm, std::move(f), s, w}); };
    const std::vector<Kind> good = {Kind::trchi, Kind::omega, Kind::eta, Kind::etab, Kind::trchib_tilde, Kind::omegab};
    const std::vector<Kind> all_psi = {Kind::chih, Kind::trchi, Kind::omega,        Kind::eta,
                                       Kind::etab, Kind::chibh, Kind::trchib_tilde, Kind::omegab};
    struct P {
      const char* name;
      NormSpec spec;
      Rational w;
    };
    for (P p : {P{"O_{0,inf}", LinfS, 0}, P{"O_{0,2}", L2S, Rational(1, 2)}, P{"O_{0,4}", L4S, Rational(1, 4)}}) {
      add(p.name, make_factor(Kind::chih), p.spec, p.w);
      add(p.name, make_factor(Kind::chibh), p.spec, p.w);
      for (Kind k : good) add(p.name, make_factor(k), p.spec, 0);
    }
    for (auto [name, spec] : {std::pair{"O_{1,2}", L2S}, std::pair{"O_{1,4}", L4S}})
      for (Kind k : all_psi) add(name, make_factor(k, {Deriv::nab}), spec, 0);
    for (auto [name, spec] : {std::pair{"(H)O", L2H}, std::pair{"(Hb)O", L2Hb}})
      for (Kind k : all_psi) add(name, make_factor(k, {Deriv::nab, Deriv::nab}), spec, 0);

    add("R_0", make_factor(Kind::alpha), L2H, Rational(1, 2));
    for (Kind k : {Kind::beta, Kind::rho, Kind::sigma, Kind::betab}) add("R_0", make_factor(k), L2H, 0);
    add("Rb_0", make_factor(Kind::beta), L2Hb, Rational(1, 2));
    for (Kind k : {Kind::rho, Kind::sigma, Kind::betab, Kind::alphab}) add("Rb_0", make_factor(k), L2Hb, 0);
    add("R_1", make_factor(Kind::alpha, {Deriv::nab4}), L2H, Rational(1, 2));
    for (Kind k : {Kind::alpha, Kind::beta, Kind::rho, Kind::sigma, Kind::betab})
      add("R_1", make_factor(k, {Deriv::nab}), L2H, 0);
    add("Rb_1", make_factor(Kind::alphab, {Deriv::nab3}), L2Hb, Rational(1, 2));
    for (Kind k : {Kind::beta, Kind::rho, Kind::sigma, Kind::betab, Kind::alphab})
      add("Rb_1", make_factor(k, {Deriv::nab}), L2Hb, 0);
    return out;
  }();
  return defs;
}

bool AnomalyConsistencyReport::ok() const {
  if (!mismatches.empty()) return false;
  return std::all_of(conflicts.begin(), conflicts.end(), [](const RegistryConflict& c) { return c.recorded; });
}

AnomalyConsistencyReport check_anomaly_registry() {
  AnomalyConsistencyReport r;
  for (const auto& d : norm_definitions()) {
    ++r.entries_checked;
    Rational expected = -d.weight;
    Rational got = anomaly_class(d.factor, d.spec).delta_loss;
    if (got == expected) ++r.matches;
    else
      r.mismatches.push_back(d.norm + " " + factor_key(d.factor) + " " + to_ascii(d.spec) + ": definition " +
                             to_string(expected) + ", registry " + to_string(got));
  }

  // Printed table row for betab: signature -1/2, scale 0.
  const Rational printed_sgn(-1, 2), printed_sc(0);
  if (printed_sc != Rational(1, 2) - printed_sgn)
    r.conflicts.push_back({"signature table cell for betab violates sc = -sgn + 1/2; registry uses sgn(betab) = " +
                               signature_of(Kind::betab).str(),
                           "β̄ : −½ : 0", true});

  // The prose sentence claims beta on Hb is scale invariant; Rb_0 puts delta^{1/2} in front.
  NormSpec l2hb{NormP::p2, Domain::Hb, true};
  if (anomaly_class(Kind::beta, l2hb).delta_loss != 0)
    r.conflicts.push_back(
        {"beta on incoming hypersurfaces: registry follows the Rb_0 weight (loss -1/2), contradicting the sentence",
         "Notice also $\\beta$ on incoming hypersurfaces $\\underline{H}_{\\underline{u}}$ is scale invariant.", true});
  return r;
}

std::string to_string(KindClass c) {
  switch (c) {
    case KindClass::connection: return "connection";
    case KindClass::curvature: return "curvature";
    case KindClass::background: return "background-constant";
  }
  return "?";
}

}  // namespace nullcalc
