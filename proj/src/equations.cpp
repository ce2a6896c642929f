#include "nullcalc/equations.hpp"

#include "nullcalc/schematic.hpp"
#include "nullcalc/sig_scale.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace nullcalc {

namespace {

// Composite symbols that appear in the equations but are not single components.
const std::map<std::string, std::vector<std::string>>& composites() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"chi", {"chih", "trchi"}},
      {"chib", {"chibh", "trchib_tilde", "trchib0"}},
      {"trchib", {"trchib_tilde", "trchib0"}},
      {"eta_pm", {"eta", "etab"}},
  };
  return m;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    } else {
      out.push_back(std::string(1, s[i]));
      ++i;
    }
  }
  return out;
}

std::vector<SchematicTerm> expand(const std::string& src) {
  std::vector<std::string> acc = {""};
  for (const auto& w : split_words(src)) {
    auto it = composites().find(w);
    std::vector<std::string> next;
    if (it == composites().end()) {
      for (auto& a : acc) next.push_back(a + w);
    } else {
      for (auto& a : acc)
        for (const auto& alt : it->second) next.push_back(a + alt);
    }
    acc = std::move(next);
  }
  std::vector<SchematicTerm> out;
  for (const auto& s : acc) out.push_back(parse_term(s));
  return out;
}

struct Src {
  Rational c;
  const char* src;
  const char* ops;
};

EquationPart part(const char* lhs, std::initializer_list<Src> rhs) {
  EquationPart p;
  p.lhs_source = lhs;
  p.lhs = expand(lhs).front();
  for (const auto& r : rhs) p.rhs.push_back(RhsTerm{r.c, r.src, r.ops, expand(r.src)});
  return p;
}

Rational q(int n, int d = 1) { return Rational(n, d); }

std::vector<EquationPart> eliminate_zeta(const std::vector<EquationPart>& parts) {
  std::vector<EquationPart> out;
  bool any = false;
  for (const auto& p : parts) {
    EquationPart np;
    np.lhs = p.lhs;
    np.lhs_source = p.lhs_source;
    for (const auto& r : p.rhs) {
      auto words = split_words(r.source);
      if (std::find(words.begin(), words.end(), "zeta") == words.end()) {
        np.rhs.push_back(r);
        continue;
      }
      any = true;
      for (auto [name, sign] : {std::pair{"eta", 1}, std::pair{"etab", -1}}) {
        std::string s;
        for (const auto& w : words) s += (w == "zeta") ? std::string(name) : w;
        np.rhs.push_back(RhsTerm{r.coeff * Rational(sign, 2), s, r.ops, expand(s)});
      }
    }
    out.push_back(std::move(np));
  }
  if (!any) out.clear();
  return out;
}

EquationEntry entry(const char* id, const char* family, const char* citation, std::vector<EquationPart> parts) {
  EquationEntry e{id, family, citation, std::move(parts), {}};
  e.zeta_free = eliminate_zeta(e.parts);
  return e;
}

std::vector<EquationEntry> build_registry() {
  std::vector<EquationEntry> r;
  r.push_back(entry("NSE_L_chi", "NSE", "(2.1) nab4 trchi + 1/2 (trchi)^2 = -|chih|^2 - 2 omega trchi",
                    {part("nab4 trchi", {{q(-1), "chih * chih", "norm2"},
                                         {q(-2), "omega * trchi", ""},
                                         {q(-1, 2), "trchi * trchi", ""}}),
                     part("nab4 chih", {{q(-2), "omega * chih", ""},
                                        {q(-1), "alpha", ""},
                                        {q(-1), "trchi * chih", ""}})}));
  r.push_back(entry("NSE_Lb_chib", "NSE", "(2.2) nab3 trchib + 1/2 (trchib)^2 = -|chibh|^2 - 2 omegab trchib",
                    {part("nab3 trchib_tilde", {{q(-1), "chibh * chibh", "norm2"},
                                                {q(-2), "omegab * trchib", ""},
                                                {q(-1, 2), "trchib * trchib", ""}}),
                     part("nab3 chibh", {{q(-2), "omegab * chibh", ""},
                                         {q(-1), "alphab", ""},
                                         {q(-1), "trchib * chibh", ""}})}));
  r.push_back(entry("NSE_L_eta", "NSE", "(2.3) nab4 eta = -chi.(eta - etab) - beta ; nab3 etab = -chib.(etab - eta) + betab",
                    {part("nab4 eta", {{q(-1), "chi * eta", "dot"}, {q(1), "chi * etab", "dot"}, {q(-1), "beta", ""}}),
                     part("nab3 etab",
                          {{q(-1), "chib * etab", "dot"}, {q(1), "chib * eta", "dot"}, {q(1), "betab", ""}})}));
  r.push_back(entry("NSE_L_omegab", "NSE", "(2.4) nab4 omegab = 2 omega omegab + ... + 1/2 rho",
                    {part("nab4 omegab", {{q(2), "omega * omegab", ""},
                                          {q(3, 4), "eta_pm * eta_pm", "|eta-etab|^2"},
                                          {q(-1, 4), "eta_pm * eta_pm", "(eta-etab).(eta+etab)"},
                                          {q(-1, 8), "eta_pm * eta_pm", "|eta+etab|^2"},
                                          {q(1, 2), "rho", ""}})}));
  r.push_back(entry("NSE_Lb_omega", "NSE", "(2.5) nab3 omega = 2 omegab omega + ... + 1/2 rho",
                    {part("nab3 omega", {{q(2), "omegab * omega", ""},
                                         {q(3, 4), "eta_pm * eta_pm", "|eta-etab|^2"},
                                         {q(1, 4), "eta_pm * eta_pm", "(eta-etab).(eta+etab)"},
                                         {q(-1, 8), "eta_pm * eta_pm", "|eta+etab|^2"},
                                         {q(1, 2), "rho", ""}})}));
  r.push_back(entry("NSE_L_chib", "NSE", "(2.6) nab4 trchib + 1/2 trchi trchib = 2 omega trchib + 2 div etab + 2|etab|^2 + 2 rho - chih.chibh",
                    {part("nab4 trchib_tilde", {{q(2), "omega * trchib", ""},
                                                {q(2), "nab etab", "div"},
                                                {q(2), "etab * etab", "norm2"},
                                                {q(2), "rho", ""},
                                                {q(-1), "chih * chibh", "dot"},
                                                {q(-1, 2), "trchi * trchib", ""}})}));
  r.push_back(entry("NSE_Lb_tr_chi", "NSE", "(2.7) nab3 trchi + 1/2 trchib trchi = 2 omegab trchi + 2 div eta + 2|eta|^2 + 2 rho - chih.chibh",
                    {part("nab3 trchi", {{q(2), "omegab * trchi", ""},
                                         {q(2), "nab eta", "div"},
                                         {q(2), "eta * eta", "norm2"},
                                         {q(2), "rho", ""},
                                         {q(-1), "chih * chibh", "dot"},
                                         {q(-1, 2), "trchib * trchi", ""}})}));
  r.push_back(entry("NSE_L_chibh", "NSE", "(2.8) nab4 chibh + 1/2 trchi chibh = nab (x) etab + 2 omega chibh - 1/2 trchib chih + etab (x) etab",
                    {part("nab4 chibh", {{q(1), "nab etab", "hat"},
                                         {q(2), "omega * chibh", ""},
                                         {q(-1, 2), "trchib * chih", ""},
                                         {q(1), "etab * etab", "hat"},
                                         {q(-1, 2), "trchi * chibh", ""}})}));
  r.push_back(entry("NSE_Lb_chih", "NSE", "(2.9) nab3 chih + 1/2 trchib chih = nab (x) eta + 2 omegab chih - 1/2 trchi chibh + eta (x) eta",
                    {part("nab3 chih", {{q(1), "nab eta", "hat"},
                                        {q(2), "omegab * chih", ""},
                                        {q(-1, 2), "trchi * chibh", ""},
                                        {q(1), "eta * eta", "hat"},
                                        {q(-1, 2), "trchib * chih", ""}})}));

  r.push_back(entry("NBE_Lb_alpha", "NBE", "(2.10) nab3 alpha + 1/2 trchib alpha = nab (x) beta + 4 omegab alpha - 3(chih rho + *chih sigma) + (zeta + 4 eta) (x) beta",
                    {part("nab3 alpha", {{q(1), "nab beta", "hat"},
                                         {q(4), "omegab * alpha", ""},
                                         {q(-3), "chih * rho", ""},
                                         {q(-3), "chih * sigma", "star"},
                                         {q(1), "zeta * beta", "hat"},
                                         {q(4), "eta * beta", "hat"},
                                         {q(-1, 2), "trchib * alpha", ""}})}));
  r.push_back(entry("NBE_L_beta", "NBE", "(2.11) nab4 beta + 2 trchi beta = div alpha - 2 omega beta + eta.alpha",
                    {part("nab4 beta", {{q(1), "nab alpha", "div"},
                                        {q(-2), "omega * beta", ""},
                                        {q(1), "eta * alpha", "dot"},
                                        {q(-2), "trchi * beta", ""}})}));
  r.push_back(entry("NBE_Lb_beta", "NBE", "(2.12) nab3 beta + trchib beta = nab rho + *nab sigma + 2 omegab beta + 2 chih.betab + 3(eta rho + *eta sigma)",
                    {part("nab3 beta", {{q(1), "nab rho", ""},
                                        {q(1), "nab sigma", "star"},
                                        {q(2), "omegab * beta", ""},
                                        {q(2), "chih * betab", "dot"},
                                        {q(3), "eta * rho", ""},
                                        {q(3), "eta * sigma", "star"},
                                        {q(-1), "trchib * beta", ""}})}));
  r.push_back(entry("NBE_L_sigma", "NBE", "(2.13) nab4 sigma + 3/2 trchi sigma = -div *beta + 1/2 chibh.*alpha - zeta.*beta - 2 etab.*beta",
                    {part("nab4 sigma", {{q(-1), "nab beta", "div star"},
                                         {q(1, 2), "chibh * alpha", "dot star"},
                                         {q(-1), "zeta * beta", "dot star"},
                                         {q(-2), "etab * beta", "dot star"},
                                         {q(-3, 2), "trchi * sigma", ""}})}));
  r.push_back(entry("NBE_Lb_sigma", "NBE", "(2.14) nab3 sigma + 3/2 trchib sigma = -div *betab + 1/2 chih.*alphab - zeta.*betab - 2 eta.*betab",
                    {part("nab3 sigma", {{q(-1), "nab betab", "div star"},
                                         {q(1, 2), "chih * alphab", "dot star"},
                                         {q(-1), "zeta * betab", "dot star"},
                                         {q(-2), "eta * betab", "dot star"},
                                         {q(-3, 2), "trchib * sigma", ""}})}));
  r.push_back(entry("NBE_L_rho", "NBE", "(2.15) nab4 rho + 3/2 trchi rho = div beta - 1/2 chibh.alpha + zeta.beta + 2 etab.beta",
                    {part("nab4 rho", {{q(1), "nab beta", "div"},
                                       {q(-1, 2), "chibh * alpha", "dot"},
                                       {q(1), "zeta * beta", "dot"},
                                       {q(2), "etab * beta", "dot"},
                                       {q(-3, 2), "trchi * rho", ""}})}));
  r.push_back(entry("NBE_Lb_rho", "NBE", "(2.16) nab3 rho + 3/2 trchib rho = -div betab - 1/2 chih.alphab + zeta.betab - 2 eta.betab",
                    {part("nab3 rho", {{q(-1), "nab betab", "div"},
                                       {q(-1, 2), "chih * alphab", "dot"},
                                       {q(1), "zeta * betab", "dot"},
                                       {q(-2), "eta * betab", "dot"},
                                       {q(-3, 2), "trchib * rho", ""}})}));
  r.push_back(entry("NBE_L_betab", "NBE", "(2.17) nab4 betab + trchi betab = -nab rho + *nab sigma + 2 omega betab + 2 chibh.beta - 3(etab rho - *etab sigma)",
                    {part("nab4 betab", {{q(-1), "nab rho", ""},
                                         {q(1), "nab sigma", "star"},
                                         {q(2), "omega * betab", ""},
                                         {q(2), "chibh * beta", "dot"},
                                         {q(-3), "etab * rho", ""},
                                         {q(3), "etab * sigma", "star"},
                                         {q(-1), "trchi * betab", ""}})}));
  r.push_back(entry("NBE_Lb_betab", "NBE", "(2.18) nab3 betab + 2 trchib betab = -div alphab - 2 omegab betab + etab.alphab",
                    {part("nab3 betab", {{q(-1), "nab alphab", "div"},
                                         {q(-2), "omegab * betab", ""},
                                         {q(1), "etab * alphab", "dot"},
                                         {q(-2), "trchib * betab", ""}})}));
  r.push_back(entry("NBE_L_alphab", "NBE", "(2.19) nab4 alphab + 1/2 trchi alphab = -nab (x) betab + 4 omega alphab - 3(chibh rho - *chibh sigma) + (zeta - 4 etab) (x) betab",
                    {part("nab4 alphab", {{q(-1), "nab betab", "hat"},
                                          {q(4), "omega * alphab", ""},
                                          {q(-3), "chibh * rho", ""},
                                          {q(3), "chibh * sigma", "star"},
                                          {q(1), "zeta * betab", "hat"},
                                          {q(-4), "etab * betab", "hat"},
                                          {q(-1, 2), "trchi * alphab", ""}})}));

  r.push_back(entry("COMM_4_beta", "COMM", "Sec. 5: [nab4, nab] beta = -chi.nab beta + *beta.beta + 1/2 (eta + etab) nab4 beta + etab.beta.chi",
                    {part("nab4 nab beta", {{q(-1), "chi * nab beta", "dot"},
                                            {q(1), "beta * beta", "star"},
                                            {q(1, 2), "eta_pm * nab4 beta", ""},
                                            {q(1), "etab * beta * chi", ""}})}));
  r.push_back(entry("COMM_3_betab", "COMM", "Sec. 6: [nab3, nab] betab = -chib.nab betab + *betab.betab + 1/2 (eta + etab) nab3 betab + chib.eta.betab",
                    {part("nab3 nab betab", {{q(-1), "chib * nab betab", "dot"},
                                             {q(1), "betab * betab", "star"},
                                             {q(1, 2), "eta_pm * nab3 betab", ""},
                                             {q(1), "chib * eta * betab", ""}})}));
  return r;
}

}  // namespace

bool EquationEntry::mentions(Kind k) const {
  auto in = [k](const SchematicTerm& t) {
    return std::any_of(t.factors.begin(), t.factors.end(),
                       [k](const Factor& f) { return !f.is_wildcard() && f.kind() == k; });
  };
  for (const auto& p : parts) {
    if (in(p.lhs)) return true;
    for (const auto& r : p.rhs)
      for (const auto& e : r.expansions)
        if (in(e)) return true;
  }
  return false;
}

const std::vector<EquationEntry>& registry() {
  static const std::vector<EquationEntry> r = build_registry();
  return r;
}

const EquationEntry* find_equation(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

void check_parts(const std::vector<EquationPart>& parts, const std::string& tag, ConsistencyReport& rep) {
  for (const auto& p : parts) {
    HalfInt want = signature_of_term(p.lhs);
    if (tag.empty()) rep.lhs_signatures.push_back(want);
    for (const auto& r : p.rhs)
      for (const auto& e : r.expansions) {
        HalfInt got = signature_of_term(e);
        if (tag.empty()) rep.terms.push_back({to_ascii(e), got});
        if (got != want)
          rep.failures.push_back(tag + to_ascii(p.lhs) + " (" + want.str() + ") vs " + to_ascii(e) + " (" + got.str() + ")");
      }
  }
}

}  // namespace

ConsistencyReport check_signature_consistency(const EquationEntry& e) {
  ConsistencyReport rep;
  rep.id = e.id;
  try {
    check_parts(e.parts, "", rep);
    check_parts(e.zeta_free, "zeta-free: ", rep);
  } catch (const SignatureError& err) {
    throw std::invalid_argument(e.id + ": " + err.what());
  }
  return rep;
}

EquationEntry make_equation(const std::string& id, const std::string& lhs,
                            const std::vector<std::pair<Rational, std::string>>& rhs) {
  EquationPart p;
  p.lhs_source = lhs;
  p.lhs = expand(lhs).front();
  for (const auto& [c, s] : rhs) p.rhs.push_back(RhsTerm{c, s, "", expand(s)});
  EquationEntry e{id, "USER", "user-supplied", {std::move(p)}, {}};
  e.zeta_free = eliminate_zeta(e.parts);
  return e;
}

// ---------------------------------------------------------------------------
// Schematic collapse
// ---------------------------------------------------------------------------

namespace {

bool anomalous_connection(Kind k) { return k == Kind::chih || k == Kind::chibh; }

int rank_of(const Factor& f) {
  if (f.is_background()) return 0;
  return f.is_curvature() ? 2 : 1;
}

SchematicTerm classify(const SchematicTerm& t) {
  SchematicTerm out;
  if (t.factors.size() == 1) {
    out = t;
    out.factors[0].annotation.reset();
    return out;
  }
  bool has_curv = std::any_of(t.factors.begin(), t.factors.end(), [](const Factor& f) { return f.is_curvature(); });
  bool has_bg = std::any_of(t.factors.begin(), t.factors.end(), [](const Factor& f) { return f.is_background(); });
  for (Factor f : t.factors) {
    f.annotation.reset();
    if (f.is_wildcard() || f.is_background() || (has_bg && t.factors.size() == 2)) {
      out.factors.push_back(f);
      continue;
    }
    if (f.is_curvature()) {
      if (f.kind() != Kind::alpha) f.name = Wildcard::Psi_g;
    } else if (anomalous_connection(f.kind())) {
      if (has_curv) f.name = Wildcard::psi;
    } else {
      f.name = Wildcard::psi_g;
    }
    out.factors.push_back(f);
  }
  std::stable_sort(out.factors.begin(), out.factors.end(),
                   [](const Factor& a, const Factor& b) { return rank_of(a) < rank_of(b); });
  return out;
}

bool wider(const Factor& big, const Factor& small) {
  if (big == small) return true;
  if (!big.is_wildcard() || !small.is_wildcard()) return false;
  if (big.derivs != small.derivs || big.curv_derivs != small.curv_derivs) return false;
  return (big.wildcard() == Wildcard::psi && small.wildcard() == Wildcard::psi_g) ||
         (big.wildcard() == Wildcard::Psi && small.wildcard() == Wildcard::Psi_g);
}

bool dominates(const SchematicTerm& big, const SchematicTerm& small) {
  if (big == small || big.factors.size() != small.factors.size()) return false;
  for (std::size_t i = 0; i < big.factors.size(); ++i)
    if (!wider(big.factors[i], small.factors[i])) return false;
  return true;
}

}  // namespace

std::vector<SchematicTerm> schematic_form(const std::string& id) {
  const EquationEntry* e = find_equation(id);
  if (!e) throw std::out_of_range("unknown equation id: " + id);
  std::vector<SchematicTerm> out;
  auto push = [&out](const SchematicTerm& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  if (e->family == "COMM") {
    for (const auto& r : e->rhs()) push(r.exact());
    return out;
  }
  for (const auto& p : e->parts)
    for (const auto& r : p.rhs)
      for (const auto& x : r.expansions) push(classify(x));
  std::vector<SchematicTerm> kept;
  for (const auto& t : out)
    if (std::none_of(out.begin(), out.end(), [&t](const SchematicTerm& o) { return dominates(o, t); }))
      kept.push_back(t);
  return kept;
}

const std::vector<ComparisonIdentity>& comparison_identities() {
  static const std::vector<ComparisonIdentity> ids = {
      {"CMP_DN",
       "Psi(D_N R) - nab_N Psi",
       {parse_term("psi_g * Psi")},
       "Sec. 3.2: Psi(D_N R) - nab_N Psi = psi_g . Psi"},
      {"CMP_Dc_beta",
       "beta(Dc R)",
       {parse_term("trchib0 * alpha"), parse_term("nab beta"), parse_term("psi_g * Psi"),
        parse_term("trchib0 * Psi_g")},
       "Sec. 3.2: beta(D_c R)_a = nab_c beta_a - 1/2 chib_cb alpha_ba + ..."},
      {"CMP_nab3_alpha",
       "nab3 alpha",
       {parse_term("trchib0 * alpha"), parse_term("nab beta"), parse_term("psi_g * alpha"),
        parse_term("psi * Psi_g")},
       "Lemma 3.5: nab3 alpha = trchib0 . alpha + nab beta + psi_g . alpha + psi . Psi_g"},
  };
  return ids;
}

const std::vector<DeformationEntry>& deformation_list() {
  static const std::vector<DeformationEntry> d = {
      {"L", "pi", '3', '3', Rational(-8), Kind::omegab, false, true},
      {"L", "pi", '3', 'a', Rational(2), Kind::eta, false, true},
      {"L", "pi", 'a', 'b', Rational(1), Kind::chih, true, true},
      // The paper prints (Lb)pi_33; the mirror of the L list is pi_44.
      {"Lb", "pi", '4', '4', Rational(-8), Kind::omega, false, true},
      {"Lb", "pi", '4', 'a', Rational(2), Kind::etab, false, true},
      {"Lb", "pi", 'a', 'b', Rational(1), Kind::chibh, true, true},
      {"L", "D", '4', '4', Rational(2), Kind::omegab, false, false},
      {"L", "D", '4', 'a', Rational(-1), Kind::eta, false, true},
      {"L", "D", 'a', '4', Rational(-1), Kind::eta, false, true},
      {"L", "D", 'a', 'b', Rational(1), Kind::chih, true, true},
      {"Lb", "D", '3', '3', Rational(2), Kind::omega, false, false},
      {"Lb", "D", '3', 'a', Rational(-1), Kind::etab, false, true},
      {"Lb", "D", 'a', '3', Rational(-1), Kind::etab, false, true},
      {"Lb", "D", 'a', 'b', Rational(1), Kind::chibh, true, true},
  };
  return d;
}

bool derivative_slot_nonzero(const std::string& vector, char nu) {
  auto horizontal = [](char c) { return c == 'a' || c == 'b'; };
  for (const auto& e : deformation_list()) {
    if (e.vector != vector || e.kind != "D") continue;
    if (e.j == nu || (horizontal(nu) && horizontal(e.j))) return true;
  }
  return false;
}

const std::vector<CurrentForm>& current_forms() {
  static const std::vector<CurrentForm> c = {
      {"J^(N)", {"R^mu_N_beta^nu R_mu_nu_gamma_delta (x3 slot permutations) : Psi . Psi", "D^mu N^nu D_nu R_mu_beta_gamma_delta : psi . Psi(D R)"}},
      {"*J^(N)", {"R^mu_N_beta^nu *R_mu_nu_gamma_delta (x3 slot permutations) : Psi . Psi", "D^mu N^nu D_nu *R_mu_beta_gamma_delta : psi . Psi(D R)"}},
  };
  return c;
}

}  // namespace nullcalc
