#pragma once

#include "nullcalc/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nullcalc {

// One right-hand-side term.  `exact` is the transcribed product; `expansions` splits the
// composite symbols (chi = chih + trchi/2, chib, trchib = trchib_tilde + trchib0, eta +- etab)
// into concrete products, all of which must carry the same signature.
struct RhsTerm {
  Rational coeff;
  std::string source;  // as written in the registry table, e.g. "trchib * alpha"
  std::string ops;     // operator tags: div, hat, star, dot, norm2, ...
  std::vector<SchematicTerm> expansions;
  const SchematicTerm& exact() const { return expansions.front(); }
};

struct EquationPart {
  SchematicTerm lhs;
  std::string lhs_source;
  std::vector<RhsTerm> rhs;  // paper's rhs, then lower-order lhs terms moved across
};

struct EquationEntry {
  std::string id;
  std::string family;  // NSE, NBE, COMM
  std::string citation;
  std::vector<EquationPart> parts;
  std::vector<EquationPart> zeta_free;  // same equation with zeta = (eta - etab)/2; empty if no zeta

  const SchematicTerm& lhs() const { return parts.front().lhs; }
  const std::vector<RhsTerm>& rhs() const { return parts.front().rhs; }
  bool mentions(Kind k) const;
};

const std::vector<EquationEntry>& registry();
const EquationEntry* find_equation(const std::string& id);  // nullptr if unknown

struct TermSignature {
  std::string text;
  HalfInt signature;
};

struct ConsistencyReport {
  std::string id;
  std::vector<HalfInt> lhs_signatures;  // one per part
  std::vector<TermSignature> terms;     // every expansion of every rhs term
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

// Throws std::invalid_argument when a term contains an unresolved wildcard.
ConsistencyReport check_signature_consistency(const EquationEntry& e);

// Build an entry from registry-style sources; used for user-supplied and adversarial checks.
// Each rhs item is (coefficient, source).  Throws ParseError on unknown components.
EquationEntry make_equation(const std::string& id, const std::string& lhs,
                            const std::vector<std::pair<Rational, std::string>>& rhs);

// Coefficient-blind collapse to the schematic classes (trchib0 * Psi, nab Psi, psi_g * Psi,
// psi * Psi_g, ...).  Commutators return their displayed terms.  Throws std::out_of_range.
std::vector<SchematicTerm> schematic_form(const std::string& id);

struct ComparisonIdentity {
  std::string id;
  std::string lhs;
  std::vector<SchematicTerm> rhs;
  std::string anchor;
};
const std::vector<ComparisonIdentity>& comparison_identities();

// Deformation tensors of L, Lb and the frame derivatives D^mu L^nu, D^mu Lb^nu.
struct DeformationEntry {
  std::string vector;  // "L" or "Lb"
  std::string kind;    // "pi" or "D"
  char i, j;           // '3', '4' or 'a'/'b' for horizontal slots
  Rational coeff;
  Kind value;
  bool full;           // value stands for the full chi / chib rather than its hat part
  bool omega_inverse;  // carries Omega^{-1}
};
const std::vector<DeformationEntry>& deformation_list();
// True iff some listed D^mu N^nu entry has nu == slot ('3', '4' or 'a').
bool derivative_slot_nonzero(const std::string& vector, char nu);

struct CurrentForm {
  std::string name;
  std::vector<std::string> families;
};
const std::vector<CurrentForm>& current_forms();

}  // namespace nullcalc
