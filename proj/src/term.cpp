#include "nullcalc/term.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace nullcalc {

std::string HalfInt::str() const {
  if (doubled_ % 2 == 0) return std::to_string(doubled_ / 2);
  return std::to_string(doubled_) + "/2";
}

HalfInt HalfInt::parse(const std::string& text) {
  return from_rational(parse_rational(text));
}

HalfInt HalfInt::from_rational(const Rational& r) {
  Rational d = r * 2;
  if (boost::multiprecision::denominator(d) != 1) throw std::invalid_argument("not a half-integer: " + to_string(r));
  return from_doubled(boost::multiprecision::numerator(d).convert_to<int>());
}

namespace {

struct KindInfo {
  Kind kind;
  const char* ascii;
  const char* unicode;
  KindClass cls;
};

constexpr std::array<KindInfo, kKindCount> kKinds = {{
    {Kind::chih, "chih", "χ̂", KindClass::connection},
    {Kind::trchi, "trchi", "trχ", KindClass::connection},
    {Kind::omega, "omega", "ω", KindClass::connection},
    {Kind::eta, "eta", "η", KindClass::connection},
    {Kind::etab, "etab", "η̄", KindClass::connection},
    {Kind::zeta, "zeta", "ζ", KindClass::connection},
    {Kind::chibh, "chibh", "χ̄̂", KindClass::connection},
    {Kind::trchib_tilde, "trchib_tilde", "tr͂χ̄", KindClass::connection},
    {Kind::trchib0, "trchib0", "trχ̄₀", KindClass::background},
    {Kind::omegab, "omegab", "ω̄", KindClass::connection},
    {Kind::alpha, "alpha", "α", KindClass::curvature},
    {Kind::beta, "beta", "β", KindClass::curvature},
    {Kind::rho, "rho", "ρ", KindClass::curvature},
    {Kind::sigma, "sigma", "σ", KindClass::curvature},
    {Kind::betab, "betab", "β̄", KindClass::curvature},
    {Kind::alphab, "alphab", "ᾱ", KindClass::curvature},
}};

const KindInfo& info(Kind k) { return kKinds[static_cast<int>(k)]; }

}  // namespace

const char* kind_name(Kind k) { return info(k).ascii; }
const char* kind_unicode(Kind k) { return info(k).unicode; }
KindClass kind_class(Kind k) { return info(k).cls; }

std::optional<Kind> kind_from_name(std::string_view s) {
  for (const auto& i : kKinds)
    if (s == i.ascii) return i.kind;
  return std::nullopt;
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> v = [] {
    std::vector<Kind> out;
    for (const auto& i : kKinds) out.push_back(i.kind);
    return out;
  }();
  return v;
}

const char* wildcard_name(Wildcard w) {
  switch (w) {
    case Wildcard::psi: return "psi";
    case Wildcard::psi_g: return "psi_g";
    case Wildcard::Psi: return "Psi";
    case Wildcard::Psi_g: return "Psi_g";
  }
  return "?";
}

std::optional<Wildcard> wildcard_from_name(std::string_view s) {
  for (Wildcard w : {Wildcard::psi, Wildcard::psi_g, Wildcard::Psi, Wildcard::Psi_g})
    if (s == wildcard_name(w)) return w;
  return std::nullopt;
}

const std::vector<Kind>& wildcard_members(Wildcard w) {
  static const std::vector<Kind> psi = {Kind::chih,  Kind::trchi, Kind::omega,        Kind::eta,
                                        Kind::etab,  Kind::chibh, Kind::trchib_tilde, Kind::omegab};
  static const std::vector<Kind> psi_g = {Kind::trchi, Kind::omega,        Kind::eta,
                                          Kind::etab,  Kind::trchib_tilde, Kind::omegab};
  static const std::vector<Kind> Psi = {Kind::alpha, Kind::beta, Kind::rho, Kind::sigma, Kind::betab, Kind::alphab};
  static const std::vector<Kind> Psi_g = {Kind::beta, Kind::rho, Kind::sigma, Kind::betab, Kind::alphab};
  switch (w) {
    case Wildcard::psi: return psi;
    case Wildcard::psi_g: return psi_g;
    case Wildcard::Psi: return Psi;
    case Wildcard::Psi_g: return Psi_g;
  }
  return psi;
}

bool wildcard_is_curvature(Wildcard w) { return w == Wildcard::Psi || w == Wildcard::Psi_g; }

const char* deriv_name(Deriv d) {
  switch (d) {
    case Deriv::nab4: return "nab4";
    case Deriv::nab3: return "nab3";
    case Deriv::nab: return "nab";
    case Deriv::D4: return "D4";
    case Deriv::D3: return "D3";
    case Deriv::Dc: return "Dc";
  }
  return "?";
}

bool is_curvature_deriv(Deriv d) { return d == Deriv::D4 || d == Deriv::D3 || d == Deriv::Dc; }

HalfInt deriv_increment(Deriv d) {
  switch (d) {
    case Deriv::nab4:
    case Deriv::D4: return HalfInt(1);
    case Deriv::nab:
    case Deriv::Dc: return HalfInt::half();
    case Deriv::nab3:
    case Deriv::D3: return HalfInt(0);
  }
  return HalfInt(0);
}

bool Factor::is_curvature() const {
  if (is_wildcard()) return wildcard_is_curvature(wildcard());
  return kind_class(kind()) == KindClass::curvature;
}

bool Factor::is_background() const { return !is_wildcard() && kind_class(kind()) == KindClass::background; }

void Factor::normalize() {
  std::sort(derivs.begin(), derivs.end());
  std::sort(curv_derivs.begin(), curv_derivs.end());
}

Factor make_factor(FactorName name, std::vector<Deriv> derivs, std::vector<Deriv> curv,
                   std::optional<HalfInt> annotation) {
  Factor f;
  f.name = name;
  f.derivs = std::move(derivs);
  f.curv_derivs = std::move(curv);
  f.annotation = annotation;
  f.normalize();
  return f;
}

namespace {

std::string name_ascii(const FactorName& n) {
  if (auto k = std::get_if<Kind>(&n)) return kind_name(*k);
  return wildcard_name(std::get<Wildcard>(n));
}

std::string name_unicode(const FactorName& n) {
  if (auto k = std::get_if<Kind>(&n)) return kind_unicode(*k);
  switch (std::get<Wildcard>(n)) {
    case Wildcard::psi: return "ψ";
    case Wildcard::psi_g: return "ψ_g";
    case Wildcard::Psi: return "Ψ";
    case Wildcard::Psi_g: return "Ψ_g";
  }
  return "?";
}

const char* deriv_unicode(Deriv d) {
  switch (d) {
    case Deriv::nab4: return "∇₄";
    case Deriv::nab3: return "∇₃";
    case Deriv::nab: return "∇";
    case Deriv::D4: return "D₄";
    case Deriv::D3: return "D₃";
    case Deriv::Dc: return "D_c";
  }
  return "?";
}

}  // namespace

std::string factor_key(const Factor& f) {
  std::string s;
  for (Deriv d : f.derivs) s += std::string(deriv_name(d)) + " ";
  s += name_ascii(f.name);
  if (!f.curv_derivs.empty()) {
    s += "(";
    for (Deriv d : f.curv_derivs) s += std::string(deriv_name(d)) + " ";
    s += "R)";
  }
  return s;
}

std::string to_ascii(const Factor& f) {
  std::string s = factor_key(f);
  if (f.annotation) s += "^{(" + f.annotation->str() + ")}";
  return s;
}

std::string to_ascii(const SchematicTerm& t) {
  std::string s;
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i) s += " * ";
    s += to_ascii(t.factors[i]);
  }
  return s;
}

std::string to_unicode(const Factor& f) {
  std::string s;
  for (Deriv d : f.derivs) s += deriv_unicode(d);
  s += name_unicode(f.name);
  if (!f.curv_derivs.empty()) {
    s += "(";
    for (Deriv d : f.curv_derivs) s += deriv_unicode(d);
    s += "R)";
  }
  if (f.annotation) s += "^(" + f.annotation->str() + ")";
  return s;
}

std::string to_unicode(const SchematicTerm& t) {
  std::string s;
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i) s += "·";
    s += to_unicode(t.factors[i]);
  }
  return s;
}

std::string to_ascii(const NormSpec& n) {
  std::string s = "L";
  s += n.p == NormP::p2 ? "2" : n.p == NormP::p4 ? "4" : "inf";
  if (n.scale_invariant) s += "sc";
  s += n.domain == Domain::S ? "(S)" : n.domain == Domain::H ? "(H)" : "(Hb)";
  return s;
}

std::string to_ascii(const NormExpr& n) { return "||" + to_ascii(n.term) + "||_{" + to_ascii(n.spec) + "}"; }

}  // namespace nullcalc
