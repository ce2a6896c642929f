#pragma once

// Exponent bookkeeping for the four energy-estimate campaigns.
//
// A bound is a sum of monomials  c(I0) delta^e R^r  (c-class, data-controlled) and
// C delta^e (C-class).  A term's certified exponent is the smallest delta power over
// the C-class monomials; the c-class part must be delta^{>=0} and is summarised by its
// largest R power (the "factor tag").

#include "nullcalc/sig_scale.hpp"
#include "nullcalc/term.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nullcalc {

enum class Family { I, J, K };
const char* family_name(Family f);

struct ExpectedBound {
  Rational exponent;
  std::string tag;  // "const", "R^{3/2}", ...
  std::string anchor;
  std::optional<Rational> correction;
};

struct Campaign {
  std::string id;
  std::string commuted_direction;  // "L" or "Lb"
  std::vector<std::array<std::string, 3>> multipliers;
  HalfInt sig_lo, sig_hi;
  std::vector<NormExpr> lhs_norms;
  Domain domain;             // hypersurface the bulk pieces are measured on by default
  bool anomalous = false;    // nab4_alpha / nab3_alphab: no c/C split, exponents may be negative
  Rational data_weight = 0;  // delta power in front of I0^2 in the squared inequality
  std::map<std::string, ExpectedBound> expected_bounds;

  Deriv commuted_deriv() const { return commuted_direction == "L" ? Deriv::D4 : Deriv::D3; }
  bool in_range(HalfInt s) const { return sig_lo <= s && s <= sig_hi; }
};

const std::vector<std::string>& campaign_ids();
// Throws std::out_of_range on unknown ids.
const Campaign& campaign(const std::string& id);

// Anomalous curvature factors in the sense of the I_k/J_k/K_k split: alpha, alpha(D4 R),
// alphab(D3 R) and the mild alpha(D3 R), beta(Dc R).  Connection coefficients never count.
bool counts_as_anomaly(const Factor& concrete);
int anomaly_count(const SchematicTerm& concrete);

// Concrete, annotated integrand shapes of a family, filtered by the campaign's signature range.
std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f);
std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f, int k);
std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f, int k, HalfInt lo, HalfInt hi);
// Smallest w (step 1/2, up to max_widen) such that [lo - w, hi + w] gives a non-empty set.
std::optional<HalfInt> minimal_widening(const Campaign& c, Family f, int k, HalfInt max_widen);

struct Monomial {
  Rational delta;
  Rational r_power = 0;
  bool big_c = true;
};

struct NormedFactor {
  Factor factor;
  NormSpec norm;
  std::vector<Monomial> refined;  // empty: C delta^{loss}
  std::string refined_source;
};

enum class PieceKind { holder, cited, gronwall };

struct Piece {
  PieceKind kind = PieceKind::holder;
  std::vector<NormedFactor> factors;
  std::optional<Rational> prefactor;  // replaces holder_gain - 1/2
  bool beta_hb_invariant = false;     // read beta on Hb as scale invariant (recorded open question)
  bool absorb_leading = false;        // c-part removed by Gronwall
  std::optional<int> max_anomalies;   // partition constraint inherited from I_k/J_k/K_k
  Rational cited = 0;                 // exponent of a cited C delta^x error
};

struct PieceValue {
  std::optional<Rational> error;    // C-class exponent
  std::optional<Rational> leading;  // c-class exponent
  Rational r_power = 0;
  std::string note;  // signature diagnostics
};

PieceValue evaluate_piece(const Piece& p, const Campaign& c);
SchematicTerm piece_term(const Piece& p);

enum class MoveKind {
  holder_placement,
  ibp_null,
  ibp_horizontal,
  bianchi_sub,
  structure_sub,
  comparison_sub,
  mild_anomaly_swap,
  lot_error,
  prefactor_override,
  gronwall_absorb,
  exhaustion,
  structural,
  cancellation,
  sqrt_energy,
  young,
};
const char* move_name(MoveKind k);

struct Move {
  MoveKind kind = MoveKind::holder_placement;
  std::string detail;
  std::string cites;
  std::optional<Piece> piece;
};

enum class Status { bounded, vanishes, cancels, unbounded };
const char* status_name(Status s);

struct BoundReport {
  std::string campaign;
  std::string term_label;
  SchematicTerm integrand;
  std::vector<Move> moves;
  std::optional<Rational> delta_exponent;    // present iff bounded
  std::optional<Rational> leading_exponent;  // c-class exponent, when there is one
  std::optional<Rational> correction;        // finals of the anomalous campaigns
  std::string factor_tag = "const";
  Status status = Status::bounded;
  std::string paper_anchor;
  std::string diagnostic;
  std::vector<std::string> children;
  std::vector<std::string> reason_chain;
  std::optional<ExpectedBound> expected;
  std::string verdict;  // exact, improves, mismatch, info
};

struct Strategy {
  bool automatic = true;
  std::vector<Move> script;
  int max_depth = 3;
  static Strategy auto_search(int depth = 3);
  static Strategy scripted(std::vector<Move> moves);
};

// Auto: best over Holder placements, mild swaps, comparison substitutions and
// integration by parts up to max_depth.  Scripted: evaluates the pieces carried by the moves.
BoundReport bound_term(const SchematicTerm& t, const Campaign& c, const Strategy& s);

// Labels: outgoing {I3, I21, K2, K12.omega, J2}, incoming {I3, K2, J222}, nab4_alpha {I3},
// nab3_alphab {I3}.  Throws std::out_of_range on unknown labels.
BoundReport vanishing_certificate(const Campaign& c, const std::string& label);
std::vector<std::string> vanishing_labels(const Campaign& c);

// alpha.alphab cross terms in Q_{mu nu N1 N2} (N1, N2 null), largest brute-force residual.
double q_cross_term_residual(int draws, unsigned long long seed);

struct ReplayResult {
  std::string campaign;
  bool scripted = true;
  std::vector<BoundReport> reports;  // pre-order of the label tree
  bool pass = true;
  std::string first_mismatch;
};

ReplayResult replay(const Campaign& c, bool scripted = true);

// Re-derives every report of a replay from its move list and children.
bool recheck(const ReplayResult& r, std::string* why = nullptr);
bool recheck(const BoundReport& r, const Campaign& c, std::string* why = nullptr);

std::string exponent_str(const Rational& r);
std::string r_tag(const Rational& r_power);

}  // namespace nullcalc
