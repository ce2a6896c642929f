#pragma once

// AST shared by the signature calculus, the schematic parser and the engine.

#include "nullcalc/halfint.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nullcalc {

enum class Kind {
  chih,
  trchi,
  omega,
  eta,
  etab,
  zeta,
  chibh,
  trchib_tilde,
  trchib0,
  omegab,
  alpha,
  beta,
  rho,
  sigma,
  betab,
  alphab,
};
inline constexpr int kKindCount = 16;

enum class KindClass { connection, curvature, background };

enum class Wildcard { psi, psi_g, Psi, Psi_g };

// nab* act on the component; D* live inside Psi(D R).
enum class Deriv { nab4, nab3, nab, D4, D3, Dc };

const char* kind_name(Kind k);
const char* kind_unicode(Kind k);
std::optional<Kind> kind_from_name(std::string_view s);
KindClass kind_class(Kind k);
const std::vector<Kind>& all_kinds();

const char* wildcard_name(Wildcard w);
std::optional<Wildcard> wildcard_from_name(std::string_view s);
// Concrete members.  psi excludes zeta (eliminated) and trchib0 (explicit).
const std::vector<Kind>& wildcard_members(Wildcard w);
bool wildcard_is_curvature(Wildcard w);

const char* deriv_name(Deriv d);
bool is_curvature_deriv(Deriv d);  // D4, D3, Dc
HalfInt deriv_increment(Deriv d);

using FactorName = std::variant<Kind, Wildcard>;

struct Factor {
  FactorName name = Kind::alpha;
  std::vector<Deriv> derivs;       // nab4/nab3/nab, sorted
  std::vector<Deriv> curv_derivs;  // D4/D3/Dc, sorted
  std::optional<HalfInt> annotation;

  bool is_wildcard() const { return std::holds_alternative<Wildcard>(name); }
  Kind kind() const { return std::get<Kind>(name); }
  Wildcard wildcard() const { return std::get<Wildcard>(name); }
  bool is_curvature() const;
  bool is_background() const;
  void normalize();

  friend bool operator==(const Factor&, const Factor&) = default;
};

struct SchematicTerm {
  std::vector<Factor> factors;
  friend bool operator==(const SchematicTerm&, const SchematicTerm&) = default;
};

enum class NormP { p2, p4, inf };
enum class Domain { S, H, Hb };

struct NormSpec {
  NormP p = NormP::p2;
  Domain domain = Domain::S;
  bool scale_invariant = true;
  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

struct NormExpr {
  SchematicTerm term;
  NormSpec spec;
  friend bool operator==(const NormExpr&, const NormExpr&) = default;
};

// ASCII printer; output reparses to the same AST.
std::string to_ascii(const Factor& f);
std::string to_ascii(const SchematicTerm& t);
std::string to_ascii(const NormSpec& n);
std::string to_ascii(const NormExpr& n);
std::string to_unicode(const Factor& f);
std::string to_unicode(const SchematicTerm& t);

// Factor without its annotation, e.g. "nab4 alpha", "beta(Dc R)".
std::string factor_key(const Factor& f);

Factor make_factor(FactorName name, std::vector<Deriv> derivs = {}, std::vector<Deriv> curv = {},
                   std::optional<HalfInt> annotation = std::nullopt);

}  // namespace nullcalc
