#pragma once

#include "nullcalc/term.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nullcalc {

struct SignatureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

HalfInt signature_of(Kind k);
HalfInt scale_of(Kind k);

// Total signature of one factor.  Wildcards need an annotation; throws SignatureError otherwise.
HalfInt signature_of_factor(const Factor& f);
HalfInt signature_of_term(const SchematicTerm& t);
HalfInt scale_of_term(const SchematicTerm& t);

// Signatures a factor can take once its wildcard is resolved (singleton for concrete kinds).
std::vector<HalfInt> admissible_signatures(const Factor& f);

// Exponent of delta in ||phi||_sc = delta^e ||phi||.  Throws std::invalid_argument on
// (p, domain) pairs without a definition (only L2 exists on H, Hb).
Rational norm_exponent(HalfInt scale, const NormSpec& n);
Rational norm_exponent(Kind k, const NormSpec& n);
Rational norm_exponent(const SchematicTerm& t, const NormSpec& n);

// 1/2 per extra non-background factor; trchib0 is a bounded function and gains nothing.
Rational holder_gain(const SchematicTerm& t);

struct AnomalyClass {
  Rational delta_loss = 0;  // 0, -1/4 or -1/2
  bool mild = false;
  std::string anchor;  // registry row that produced it, empty for the default
};

struct AnomalyRow {
  std::string factor;           // factor_key form
  std::vector<NormSpec> norms;  // empty: every norm
  Rational loss;
  bool mild;
  std::string source;
};

const std::vector<AnomalyRow>& anomaly_registry();

// Wildcards report the worst member.
AnomalyClass anomaly_class(const Factor& f, const NormSpec& n);
AnomalyClass anomaly_class(Kind k, const NormSpec& n);

// Cross-check of the registry against the weights in the norm definitions O, R0, R1, Rb0, Rb1.
struct NormDefinitionEntry {
  std::string norm;  // "O_{0,4}", "Rb_0", ...
  Factor factor;
  NormSpec spec;
  Rational weight;  // delta^{weight} in front of the norm
};
const std::vector<NormDefinitionEntry>& norm_definitions();

struct RegistryConflict {
  std::string what;
  std::string verbatim;  // text reproduced from the source
  bool recorded;         // one of the documented open questions
};

struct AnomalyConsistencyReport {
  int entries_checked = 0;
  int matches = 0;
  std::vector<std::string> mismatches;  // definition vs registry disagreements
  std::vector<RegistryConflict> conflicts;
  bool ok() const;  // no mismatches, and every conflict is a recorded one
};
AnomalyConsistencyReport check_anomaly_registry();

std::string to_string(KindClass c);

}  // namespace nullcalc
