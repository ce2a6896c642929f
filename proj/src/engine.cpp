#include "nullcalc/engine.hpp"

#include "nullcalc/equations.hpp"
#include "nullcalc/schematic.hpp"
#include "nullcalc/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace nullcalc {

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }
const Rational kHalf(1, 2);
const Rational kQuarter(1, 4);

NormSpec spec(NormP p, Domain d) { return NormSpec{p, d, true}; }

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::S: return "S";
    case Domain::H: return "H";
    case Domain::Hb: return "Hb";
  }
  return "?";
}

Factor annotated(Factor f) {
  f.normalize();
  f.annotation = signature_of_factor(f);
  return f;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::I: return "I";
    case Family::J: return "J";
    case Family::K: return "K";
  }
  return "?";
}

const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::holder_placement: return "holder_placement";
    case MoveKind::ibp_null: return "ibp_null";
    case MoveKind::ibp_horizontal: return "ibp_horizontal";
    case MoveKind::bianchi_sub: return "bianchi_sub";
    case MoveKind::structure_sub: return "structure_sub";
    case MoveKind::comparison_sub: return "comparison_sub";
    case MoveKind::mild_anomaly_swap: return "mild_anomaly_swap";
    case MoveKind::lot_error: return "lot_error";
    case MoveKind::prefactor_override: return "prefactor_override";
    case MoveKind::gronwall_absorb: return "gronwall_absorb";
    case MoveKind::exhaustion: return "exhaustion";
    case MoveKind::structural: return "structural";
    case MoveKind::cancellation: return "cancellation";
    case MoveKind::sqrt_energy: return "sqrt_energy";
    case MoveKind::young: return "young";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::bounded: return "bounded";
    case Status::vanishes: return "vanishes";
    case Status::cancels: return "cancels";
    case Status::unbounded: return "unbounded";
  }
  return "?";
}

std::string exponent_str(const Rational& r) { return to_string(r); }

std::string r_tag(const Rational& r_power) {
  if (r_power == 0) return "const";
  return "R^{" + to_string(r_power) + "}";
}

// ---------------------------------------------------------------------------
// anomaly split

bool counts_as_anomaly(const Factor& f) {
  if (f.is_wildcard() || !f.is_curvature()) return false;
  if (!f.derivs.empty()) return false;
  // beta is anomalous only on Hb, and the split never treats it as one (see notes)
  if (f.kind() == Kind::beta && f.curv_derivs.empty()) return false;
  for (NormSpec n : {spec(NormP::p2, Domain::H), spec(NormP::p2, Domain::Hb)}) {
    AnomalyClass a = anomaly_class(f, n);
    if (a.mild || a.delta_loss < 0) return true;
  }
  return false;
}

int anomaly_count(const SchematicTerm& t) {
  int n = 0;
  for (const auto& f : t.factors) n += counts_as_anomaly(f) ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// campaigns

namespace {

const std::vector<Kind> kCurvature = {Kind::alpha, Kind::beta, Kind::rho, Kind::sigma, Kind::betab, Kind::alphab};

std::vector<std::array<std::string, 3>> all_triples_but_lll() {
  std::vector<std::array<std::string, 3>> out;
  for (const char* x : {"L", "Lb"})
    for (const char* y : {"L", "Lb"})
      for (const char* z : {"L", "Lb"}) {
        std::array<std::string, 3> t = {x, y, z};
        if (t[0] == "L" && t[1] == "L" && t[2] == "L") continue;
        out.push_back(t);
      }
  return out;
}

std::map<std::string, ExpectedBound> script_expectations(const std::string& id);

std::map<std::string, Campaign> build_campaigns() {
  std::map<std::string, Campaign> m;
  {
    Campaign c;
    c.id = "nab4_alpha";
    c.commuted_direction = "L";
    c.multipliers = {{"L", "L", "L"}};
    c.sig_lo = c.sig_hi = HalfInt(6);
    c.lhs_norms = {parse_norm("||nab4 alpha||_{L2sc(H)}")};
    c.domain = Domain::H;
    c.anomalous = true;
    c.data_weight = -1;
    m[c.id] = c;
  }
  {
    Campaign c;
    c.id = "nab3_alphab";
    c.commuted_direction = "Lb";
    c.multipliers = {{"Lb", "Lb", "Lb"}};
    c.sig_lo = c.sig_hi = HalfInt(1);
    c.lhs_norms = {parse_norm("||nab3 alphab||_{L2sc(Hb)}")};
    c.domain = Domain::Hb;
    c.anomalous = true;
    c.data_weight = -1;
    m[c.id] = c;
  }
  {
    Campaign c;
    c.id = "outgoing";
    c.commuted_direction = "L";
    c.multipliers = all_triples_but_lll();
    c.sig_lo = HalfInt(3);
    c.sig_hi = HalfInt(5);
    c.lhs_norms = {parse_norm("||Psi(D4 R)||_{L2sc(H)}"), parse_norm("||Psi(D4 R)||_{L2sc(Hb)}")};
    c.domain = Domain::H;
    m[c.id] = c;
  }
  {
    Campaign c;
    c.id = "incoming";
    c.commuted_direction = "Lb";
    c.multipliers = {{"L", "L", "Lb"}, {"L", "Lb", "Lb"}};
    c.sig_lo = HalfInt(2);
    c.sig_hi = HalfInt(3);
    c.lhs_norms = {parse_norm("||Psi(D3 R)||_{L2sc(H)}"), parse_norm("||Psi(D3 R)||_{L2sc(Hb)}")};
    c.domain = Domain::Hb;
    m[c.id] = c;
  }
  for (auto& [id, c] : m) c.expected_bounds = script_expectations(id);
  return m;
}

const std::map<std::string, Campaign>& campaigns() {
  static const std::map<std::string, Campaign> m = build_campaigns();
  return m;
}

}  // namespace

const std::vector<std::string>& campaign_ids() {
  static const std::vector<std::string> ids = {"nab4_alpha", "nab3_alphab", "outgoing", "incoming"};
  return ids;
}

const Campaign& campaign(const std::string& id) {
  auto it = campaigns().find(id);
  if (it == campaigns().end()) throw std::out_of_range("unknown campaign: " + id);
  return it->second;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

// D^mu N^nu values; full chi / chib enter through their trace parts as well.
std::vector<Kind> d_list_values(const std::string& vec, const std::string& kind) {
  std::vector<Kind> out;
  auto add = [&](Kind k) {
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  };
  for (const auto& e : deformation_list()) {
    if (e.vector != vec || e.kind != kind) continue;
    add(e.value);
    if (e.full) {
      if (e.value == Kind::chih) add(Kind::trchi);
      if (e.value == Kind::chibh) {
        add(Kind::trchib_tilde);
        add(Kind::trchib0);
      }
    }
  }
  return out;
}

std::vector<Deriv> nu_derivs(const std::string& vec) {
  std::vector<Deriv> out;
  if (derivative_slot_nonzero(vec, '4')) out.push_back(Deriv::D4);
  if (derivative_slot_nonzero(vec, '3')) out.push_back(Deriv::D3);
  if (derivative_slot_nonzero(vec, 'a')) out.push_back(Deriv::Dc);
  return out;
}

std::vector<SchematicTerm> raw_family(const Campaign& c, Family fam) {
  std::vector<SchematicTerm> out;
  const Deriv dn = c.commuted_deriv();
  auto curv = [](Kind k, std::vector<Deriv> d = {}) { return annotated(make_factor(k, {}, std::move(d))); };
  switch (fam) {
    case Family::I:
      for (Kind a : kCurvature)
        for (std::size_t i = 0; i < kCurvature.size(); ++i)
          for (std::size_t j = i; j < kCurvature.size(); ++j)
            out.push_back({{curv(a, {dn}), curv(kCurvature[i]), curv(kCurvature[j])}});
      break;
    case Family::J:
      for (Kind p : d_list_values(c.commuted_direction, "D"))
        for (Kind a : kCurvature)
          for (Deriv nu : nu_derivs(c.commuted_direction))
            for (Kind b : kCurvature) out.push_back({{annotated(make_factor(p)), curv(a, {dn}), curv(b, {nu})}});
      break;
    case Family::K: {
      std::vector<Kind> psis;
      std::set<std::string> seen;
      for (const auto& m : c.multipliers)
        for (const auto& v : m) {
          if (!seen.insert(v).second) continue;
          for (Kind k : d_list_values(v, "pi"))
            if (std::find(psis.begin(), psis.end(), k) == psis.end()) psis.push_back(k);
        }
      for (Kind p : psis)
        for (std::size_t i = 0; i < kCurvature.size(); ++i)
          for (std::size_t j = i; j < kCurvature.size(); ++j)
            out.push_back({{annotated(make_factor(p)), curv(kCurvature[i], {dn}), curv(kCurvature[j], {dn})}});
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f, int k, HalfInt lo, HalfInt hi) {
  std::vector<SchematicTerm> out;
  for (auto& t : raw_family(c, f)) {
    HalfInt s = signature_of_term(t);
    if (s < lo || hi < s) continue;
    if (k >= 0 && anomaly_count(t) != k) continue;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f, int k) {
  return enumerate_integrands(c, f, k, c.sig_lo, c.sig_hi);
}

std::vector<SchematicTerm> enumerate_integrands(const Campaign& c, Family f) {
  return enumerate_integrands(c, f, -1, c.sig_lo, c.sig_hi);
}

std::optional<HalfInt> minimal_widening(const Campaign& c, Family f, int k, HalfInt max_widen) {
  for (HalfInt w(0); w <= max_widen; w += HalfInt::half())
    if (!enumerate_integrands(c, f, k, c.sig_lo - w, c.sig_hi + w).empty()) return w;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// pieces

SchematicTerm piece_term(const Piece& p) {
  SchematicTerm t;
  for (const auto& nf : p.factors) t.factors.push_back(nf.factor);
  return t;
}

namespace {

std::vector<Factor> resolutions(const Factor& f) {
  if (!f.is_wildcard()) return {f};
  std::vector<Factor> out;
  for (Kind k : wildcard_members(f.wildcard())) {
    Factor g = f;
    g.name = k;
    g.annotation.reset();
    g.normalize();
    if (f.annotation && signature_of_factor(g) != *f.annotation) continue;
    out.push_back(g);
  }
  return out;
}

Rational factor_loss(const Factor& f, const NormSpec& n, bool beta_hb_invariant) {
  if (f.is_background()) return 0;
  if (beta_hb_invariant && f.kind() == Kind::beta && f.derivs.empty() && f.curv_derivs.empty() &&
      n.domain == Domain::Hb)
    return 0;
  return anomaly_class(f, n).delta_loss;
}

std::vector<Monomial> factor_monomials(const NormedFactor& nf, const Factor& concrete, bool beta_hb) {
  if (!nf.refined.empty()) return nf.refined;
  if (concrete.is_background()) return {Monomial{0, 0, false}};
  return {Monomial{factor_loss(concrete, nf.norm, beta_hb), 0, true}};
}

struct Expansion {
  std::optional<Rational> error, leading;
  Rational r_power = 0;
};

Expansion expand(const std::vector<std::vector<Monomial>>& lists, const Rational& prefactor) {
  Expansion e;
  std::function<void(std::size_t, Rational, Rational, bool)> rec = [&](std::size_t i, Rational d, Rational r,
                                                                         bool big) {
    if (i == lists.size()) {
      if (big) {
        if (!e.error || d < *e.error) e.error = d;
      } else {
        if (!e.leading || d < *e.leading) e.leading = d;
        if (r > e.r_power) e.r_power = r;
      }
      return;
    }
    for (const auto& m : lists[i]) rec(i + 1, d + m.delta, r + m.r_power, big || m.big_c);
  };
  rec(0, prefactor, 0, false);
  return e;
}

}  // namespace

PieceValue evaluate_piece(const Piece& p, const Campaign& c) {
  PieceValue v;
  if (p.kind == PieceKind::cited) {
    v.error = p.cited;
    return v;
  }
  if (p.kind == PieceKind::gronwall) {
    v.note = "absorbed by the left hand side";
    return v;
  }
  const SchematicTerm t = piece_term(p);
  const Rational prefactor = p.prefactor ? *p.prefactor : holder_gain(t) - kHalf;

  std::vector<std::vector<Factor>> options;
  for (const auto& nf : p.factors) options.push_back(resolutions(nf.factor));

  std::vector<std::vector<Factor>> in_range, anomaly_ok, all;
  std::vector<Factor> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) {
      SchematicTerm ct{cur};
      all.push_back(cur);
      bool a_ok = !p.max_anomalies || anomaly_count(ct) <= *p.max_anomalies;
      if (a_ok) anomaly_ok.push_back(cur);
      if (a_ok && c.in_range(signature_of_term(ct))) in_range.push_back(cur);
      return;
    }
    for (const auto& f : options[i]) {
      cur.push_back(f);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);

  const std::vector<std::vector<Factor>>* chosen = &in_range;
  if (in_range.empty()) {
    chosen = anomaly_ok.empty() ? &all : &anomaly_ok;
    v.note = "signature outside [" + c.sig_lo.str() + "," + c.sig_hi.str() + "]; evaluated unrestricted";
  }
  bool any = false;
  for (const auto& assignment : *chosen) {
    std::vector<std::vector<Monomial>> lists;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      lists.push_back(factor_monomials(p.factors[i], assignment[i], p.beta_hb_invariant));
    Expansion e = expand(lists, prefactor);
    if (e.error && (!v.error || *e.error < *v.error)) v.error = e.error;
    if (!p.absorb_leading && e.leading) {
      if (!v.leading || *e.leading < *v.leading) v.leading = e.leading;
      if (!any || e.r_power > v.r_power) v.r_power = e.r_power;
      any = true;
    }
  }
  return v;
}

namespace {

std::string piece_detail(const Piece& p) {
  if (p.kind == PieceKind::cited) return "C delta^{" + to_string(p.cited) + "}";
  if (p.kind == PieceKind::gronwall) return to_ascii(piece_term(p));
  std::vector<std::string> parts;
  for (const auto& nf : p.factors) {
    if (nf.factor.is_background()) {
      parts.push_back(to_ascii(nf.factor));
      continue;
    }
    std::string s = to_ascii(NormExpr{SchematicTerm{{nf.factor}}, nf.norm});
    if (!nf.refined_source.empty()) s += " [" + nf.refined_source + "]";
    parts.push_back(s);
  }
  std::string pre = p.prefactor ? "delta^{" + to_string(*p.prefactor) + "} " : "";
  return pre + join(parts, " . ");
}

}  // namespace

// ---------------------------------------------------------------------------
// auto search

namespace {

bool has_deriv(const Factor& f) { return !f.derivs.empty() || !f.curv_derivs.empty(); }

bool may_be(const Factor& f, Kind k) {
  if (!f.is_wildcard()) return f.kind() == k;
  const auto& m = wildcard_members(f.wildcard());
  return std::find(m.begin(), m.end(), k) != m.end();
}

std::vector<NormP> admissible_norms(const Factor& f) {
  if (f.is_background()) return {NormP::inf};
  if (f.is_curvature()) {
    if (has_deriv(f)) return {NormP::p2};
    return {NormP::p2, NormP::p4};
  }
  if (has_deriv(f)) {
    bool n4 = std::find(f.derivs.begin(), f.derivs.end(), Deriv::nab4) != f.derivs.end();
    bool n3 = std::find(f.derivs.begin(), f.derivs.end(), Deriv::nab3) != f.derivs.end();
    if ((n4 && may_be(f, Kind::omega)) || (n3 && may_be(f, Kind::omegab))) return {NormP::p2};
    return {NormP::p2, NormP::p4};
  }
  return {NormP::inf, NormP::p4};
}

int quarters(NormP p) { return p == NormP::p2 ? 2 : p == NormP::p4 ? 1 : 0; }

Piece cited_piece(const Rational& x) {
  Piece p;
  p.kind = PieceKind::cited;
  p.cited = x;
  return p;
}

struct AutoOut {
  std::optional<Rational> value;
  std::vector<Move> moves;
  std::string diagnostic;
};

std::string moves_key(const std::vector<Move>& ms) {
  std::string s;
  for (const auto& m : ms) s += std::string(move_name(m.kind)) + ":" + m.detail + ";";
  return s;
}

bool better(const AutoOut& a, const AutoOut& b) {
  if (!a.value) return false;
  if (!b.value) return true;
  if (*a.value != *b.value) return *a.value > *b.value;
  return moves_key(a.moves) < moves_key(b.moves);
}

class AutoSearch {
 public:
  explicit AutoSearch(const Campaign& c) : c_(c) {}

  AutoOut run(const SchematicTerm& t, Domain dom, int depth) {
    std::string key = to_ascii(t) + "|" + domain_name(dom) + "|" + std::to_string(depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    AutoOut best;
    best.diagnostic = "no admissible placement";
    auto consider = [&](AutoOut o) {
      if (better(o, best)) best = std::move(o);
    };
    consider(placement(t, dom));
    comparison(t, dom, depth, consider);
    mild_swap(t, dom, depth, consider);
    if (depth > 0) ibp(t, dom, depth, consider);
    memo_[key] = best;
    return best;
  }

 private:
  AutoOut placement(const SchematicTerm& t, Domain dom) {
    AutoOut best;
    std::vector<std::vector<NormP>> opts;
    for (const auto& f : t.factors) opts.push_back(admissible_norms(f));
    std::vector<NormP> cur;
    std::optional<Rational> failing;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int q) {
      if (i == opts.size()) {
        if (q != 4) return;
        Piece p;
        for (std::size_t j = 0; j < t.factors.size(); ++j)
          p.factors.push_back(NormedFactor{t.factors[j], spec(cur[j], dom), {}, {}});
        PieceValue v = evaluate_piece(p, c_);
        if (!v.error) return;
        AutoOut o;
        o.value = v.error;
        o.moves.push_back(Move{MoveKind::holder_placement, piece_detail(p), "trick 1: L4 x L4 placement", p});
        if (better(o, best)) best = std::move(o);
        return;
      }
      for (NormP n : opts[i]) {
        cur.push_back(n);
        rec(i + 1, q + quarters(n));
        cur.pop_back();
      }
    };
    rec(0, 0);
    return best;
  }

  template <typename F>
  void with_lot(const SchematicTerm& t2, Domain dom, int depth, Move head, const Rational& lot, F&& consider) {
    AutoOut sub = run(t2, dom, depth);
    if (!sub.value) return;
    AutoOut o;
    o.value = std::min(*sub.value, lot);
    o.moves.push_back(std::move(head));
    o.moves.push_back(Move{MoveKind::lot_error, "lower order terms", "", cited_piece(lot)});
    for (auto& m : sub.moves) o.moves.push_back(m);
    consider(std::move(o));
  }

  template <typename F>
  void comparison(const SchematicTerm& t, Domain dom, int depth, F&& consider) {
    SchematicTerm t2 = t;
    bool changed = false;
    for (auto& f : t2.factors) {
      if (f.curv_derivs.empty()) continue;
      for (Deriv d : f.curv_derivs)
        f.derivs.push_back(d == Deriv::D4 ? Deriv::nab4 : d == Deriv::D3 ? Deriv::nab3 : Deriv::nab);
      f.curv_derivs.clear();
      f.annotation.reset();
      f.normalize();
      changed = true;
    }
    if (!changed) return;
    with_lot(t2, dom, depth, Move{MoveKind::comparison_sub, to_ascii(t) + " -> " + to_ascii(t2), "CMP_DN", {}},
             kQuarter, consider);
  }

  template <typename F>
  void mild_swap(const SchematicTerm& t, Domain dom, int depth, F&& consider) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      if (f.is_wildcard() || !f.is_curvature()) continue;
      if (!anomaly_class(f, spec(NormP::p2, dom)).mild) continue;
      SchematicTerm t2 = t;
      t2.factors[i] = make_factor(Kind::alpha);
      with_lot(t2, dom, depth,
               Move{MoveKind::mild_anomaly_swap, factor_key(f) + " -> alpha", "Mild Anomalies: worst term alpha", {}},
               kQuarter, consider);
    }
  }

  template <typename F>
  void ibp(const SchematicTerm& t, Domain dom, int depth, F&& consider) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      if (f.derivs.empty()) continue;
      const Deriv d = f.derivs.front();
      bool ok = true;
      for (std::size_t j = 0; j < t.factors.size(); ++j)
        if (j != i && !t.factors[j].is_background() && has_deriv(t.factors[j])) ok = false;
      if (!ok) continue;
      SchematicTerm base = t;
      base.factors[i].derivs.erase(base.factors[i].derivs.begin());
      base.factors[i].annotation.reset();
      AutoOut o;
      o.value = std::nullopt;
      std::vector<Move> subs;
      bool failed = false;
      auto fold = [&](const AutoOut& s) {
        if (!s.value) {
          failed = true;
          return;
        }
        if (!o.value || *s.value < *o.value) o.value = s.value;
        for (const auto& m : s.moves) subs.push_back(m);
      };
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j == i || t.factors[j].is_background()) continue;
        SchematicTerm tj = base;
        tj.factors[j].derivs.push_back(d);
        tj.factors[j].annotation.reset();
        tj.factors[j].normalize();
        fold(run(tj, dom, depth - 1));
      }
      std::string where = "none";
      if (d == Deriv::nab4 || d == Deriv::nab3) {
        Domain bdom = d == Deriv::nab4 ? Domain::Hb : Domain::H;
        where = domain_name(bdom);
        fold(run(base, bdom, depth - 1));
      }
      if (failed || !o.value) continue;
      MoveKind mk = d == Deriv::nab ? MoveKind::ibp_horizontal : MoveKind::ibp_null;
      o.moves.push_back(Move{mk, std::string(deriv_name(d)) + " off " + factor_key(f) + "; boundary " + where,
                             "trick 2: integration by parts", {}});
      for (auto& m : subs) o.moves.push_back(m);
      consider(std::move(o));
    }
  }

  const Campaign& c_;
  std::map<std::string, AutoOut> memo_;
};

struct Agg {
  std::optional<Rational> error, leading;
  Rational r_power = 0;
  bool has_leading = false;
  std::vector<std::string> notes;

  void add(const std::optional<Rational>& e, const std::optional<Rational>& l, const Rational& r) {
    if (e && (!error || *e < *error)) error = e;
    if (l) {
      if (!leading || *l < *leading) leading = l;
      if (!has_leading || r > r_power) r_power = r;
      has_leading = true;
    }
  }
};

Agg aggregate_moves(const std::vector<Move>& moves, const Campaign& c) {
  Agg a;
  for (const auto& m : moves) {
    if (!m.piece || m.piece->kind == PieceKind::gronwall) continue;
    PieceValue v = evaluate_piece(*m.piece, c);
    a.add(v.error, v.leading, v.r_power);
    if (!v.note.empty()) a.notes.push_back(piece_detail(*m.piece) + ": " + v.note);
  }
  return a;
}

bool only_gronwall(const std::vector<Move>& moves) {
  bool any = false;
  for (const auto& m : moves) {
    if (!m.piece) continue;
    if (m.piece->kind != PieceKind::gronwall) return false;
    any = true;
  }
  return any;
}

void fill_from_agg(BoundReport& r, const Agg& a, const Campaign& c) {
  r.factor_tag = r_tag(a.r_power);
  r.leading_exponent = a.leading;
  if (!a.error && !a.leading) {
    r.status = Status::unbounded;
    r.delta_exponent.reset();
    if (r.diagnostic.empty()) r.diagnostic = "no bounded piece";
    return;
  }
  // a term with only a c-part is bounded by its data; its error exponent is +inf, report the leading one
  r.delta_exponent = a.error ? *a.error : *a.leading;
  if (!c.anomalous && a.leading && *a.leading < 0) {
    r.status = Status::unbounded;
    r.diagnostic = "c-class part carries delta^{" + to_string(*a.leading) + "} < 1";
    r.delta_exponent.reset();
    return;
  }
  r.status = Status::bounded;
}

}  // namespace

Strategy Strategy::auto_search(int depth) {
  Strategy s;
  s.automatic = true;
  s.max_depth = depth;
  return s;
}

Strategy Strategy::scripted(std::vector<Move> moves) {
  Strategy s;
  s.automatic = false;
  s.script = std::move(moves);
  return s;
}

BoundReport bound_term(const SchematicTerm& t, const Campaign& c, const Strategy& s) {
  BoundReport r;
  r.campaign = c.id;
  r.term_label = to_ascii(t);
  r.integrand = t;
  if (s.automatic) {
    AutoSearch search(c);
    AutoOut o = search.run(t, c.domain, s.max_depth);
    r.moves = o.moves;
    if (!o.value) {
      r.status = Status::unbounded;
      r.diagnostic = o.diagnostic;
      return r;
    }
    r.delta_exponent = o.value;
    r.status = Status::bounded;
    return r;
  }
  r.moves = s.script;
  if (only_gronwall(r.moves)) {
    r.delta_exponent = Rational(0);
    r.status = Status::bounded;
    return r;
  }
  Agg a = aggregate_moves(r.moves, c);
  r.reason_chain = a.notes;
  fill_from_agg(r, a, c);
  return r;
}

// ---------------------------------------------------------------------------
// scripted label trees

namespace {

enum class NodeKind { group, vanish, cancel, final_plain, final_young, final_sqrt };

struct Node {
  std::string label, parent, integrand, anchor;
  NodeKind kind = NodeKind::group;
  std::vector<Move> moves;
  std::optional<ExpectedBound> expected;
  std::vector<std::string> sources;  // finals only

  Node& expect(Rational x, std::string tag = "const", std::optional<Rational> corr = std::nullopt) {
    expected = ExpectedBound{std::move(x), std::move(tag), anchor, std::move(corr)};
    return *this;
  }
  Node& with(std::vector<Move> ms) {
    for (auto& m : ms) moves.push_back(std::move(m));
    return *this;
  }
};

struct Script {
  std::vector<Node> nodes;
  Node& add(std::string label, std::string parent, std::string integrand, std::string anchor = "",
            NodeKind kind = NodeKind::group) {
    Node n;
    n.label = std::move(label);
    n.parent = std::move(parent);
    n.integrand = std::move(integrand);
    n.anchor = std::move(anchor);
    n.kind = kind;
    nodes.push_back(std::move(n));
    return nodes.back();
  }
};

Monomial cm(Rational d, Rational r = 0) { return Monomial{std::move(d), std::move(r), false}; }
Monomial Cm(Rational d) { return Monomial{std::move(d), 0, true}; }

const NormSpec L2H = spec(NormP::p2, Domain::H), L2Hb = spec(NormP::p2, Domain::Hb);
const NormSpec L4H = spec(NormP::p4, Domain::H), L4Hb = spec(NormP::p4, Domain::Hb);
const NormSpec LiH = spec(NormP::inf, Domain::H), LiHb = spec(NormP::inf, Domain::Hb);

NormedFactor nf(const std::string& text, NormSpec n, std::vector<Monomial> refined = {}, std::string src = "") {
  return NormedFactor{parse_term(text).factors.at(0), n, std::move(refined), std::move(src)};
}

Piece pc(std::vector<NormedFactor> fs) {
  Piece p;
  p.factors = std::move(fs);
  return p;
}

Move hold(Piece p, std::string cites = "Holder") {
  std::string d = piece_detail(p);
  return Move{MoveKind::holder_placement, d, std::move(cites), std::move(p)};
}

Move hold(std::vector<NormedFactor> fs, std::string cites = "Holder") { return hold(pc(std::move(fs)), std::move(cites)); }

Move lot(Rational x, std::string what, std::string cites = "lower order terms") {
  return Move{MoveKind::lot_error, std::move(what), std::move(cites), cited_piece(std::move(x))};
}

Move cite(Rational x, std::string what, std::string cites) {
  return Move{MoveKind::structural, std::move(what), std::move(cites), cited_piece(std::move(x))};
}

Move mv(MoveKind k, std::string detail, std::string cites = "") {
  return Move{k, std::move(detail), std::move(cites), std::nullopt};
}

Move gronwall(const std::string& term) {
  Piece p;
  p.kind = PieceKind::gronwall;
  for (const auto& f : parse_term(term).factors) p.factors.push_back(NormedFactor{f, LiH, {}, {}});
  return Move{MoveKind::gronwall_absorb, term, "absorbed by the left hand side (Gronwall)", p};
}

Piece with_max(Piece p, int k) {
  p.max_anomalies = k;
  return p;
}

// refined factor bounds, all in scale invariant norms
std::vector<Monomial> alpha_l4_lemma() { return {cm(R(-1, 4)), cm(R(-1, 4), kHalf), Cm(R(1, 16))}; }
std::vector<Monomial> alpha_l4_display() { return {cm(R(-1, 4)), cm(R(-1, 4), kHalf), Cm(0)}; }
std::vector<Monomial> curv_energy() { return {cm(0), cm(0, kHalf), Cm(R(1, 8))}; }
std::vector<Monomial> boot() { return {cm(0, 1)}; }
std::vector<Monomial> boot_l4() { return {cm(0, 1), Cm(kQuarter)}; }
std::vector<Monomial> chi_l4() { return {cm(R(-1, 4)), Cm(kQuarter)}; }
std::vector<Monomial> chib_l4_h() { return {cm(R(-1, 4)), cm(0, R(3, 4)), Cm(kQuarter)}; }
std::vector<Monomial> omega_l4() { return {cm(0, R(3, 4)), Cm(kQuarter)}; }
std::vector<Monomial> nab4_alpha_h() { return {cm(-kHalf), Cm(kQuarter)}; }

const char* kAlphaLemma = "L4 lemma: ||alpha||_{L4} <= delta^{-1/4}(c + c R^{1/2}) + C delta^{1/16}";
const char* kAlphaDisplay = "L4: ||alpha||_{L4} <= delta^{-1/4}(c + c R^{1/2}) + C";
const char* kCurvEnergy = "energy: c + c R^{1/2} + C delta^{1/8}";

Script nab4_alpha_script() {
  Script s;
  s.add("I", "", "Psi(D4 R) * Psi * Psi", "Sec. 4.1: I <= C delta^{-1/4}")
      .expect(R(-1, 4))
      .with({hold({nf("alpha(D4 R)", L2H), nf("alpha", L4H), nf("Psi_g", L4H)}),
             hold({nf("Psi_g(D4 R)", L2H), nf("Psi", L4H), nf("Psi", L4H)})});
  s.add("I3", "I", "", "Sec. 4.1: we do not have triple anomalies", NodeKind::vanish);
  s.add("K", "", "psi * Psi(D4 R) * Psi(D4 R)", "Sec. 4.1: K <= C delta^{-1/2}")
      .expect(R(-1, 2))
      .with({hold({nf("psi", LiH), nf("alpha(D4 R)", L2H), nf("alpha(D4 R)", L2H)}),
             hold({nf("psi", LiH), nf("Psi_g(D4 R)", L2H), nf("Psi(D4 R)", L2H)})});
  s.add("J", "", "", "Sec. 4.1: J <= C delta^{-1/2}")
      .expect(R(-1, 2))
      .with({mv(MoveKind::structural, "psi != trchib0 in the J integrand", "Sec. 4.1 split"),
             hold({nf("psi", LiH), nf("Psi(D4 R)", L2H), nf("Psi(D4 R)", L2H)}),
             hold({nf("psi", LiH), nf("Psi(D4 R)", L2H), nf("Psi(Dc R)", L2H)})});
  Node& f = s.add("final", "", "nab4 alpha", "Eq. (estimates for nabla_4 alpha on H): delta^{-1/2} c(I0) + C delta^{1/4}",
                  NodeKind::final_young);
  f.sources = {"I", "J", "K"};
  f.expect(R(-1, 2), "const", kQuarter);
  f.with({mv(MoveKind::young, "delta^{-1} I0^2 + C delta^{m}, square root", "Young's inequality")});
  return s;
}

Script nab3_alphab_script() {
  Script s;
  s.add("I", "", "Psi(D3 R) * Psi * Psi", "Sec. 4.2: I <= C")
      .expect(0)
      .with({hold({nf("Psi(D3 R)", L2Hb), nf("Psi_g", L4Hb), nf("Psi_g", L4Hb)})});
  s.add("I3", "I", "", "Sec. 4.2: none of Psi^{(s1)}, Psi^{(s2)} can be anomalous", NodeKind::vanish);
  s.add("K", "", "", "Sec. 4.2: K <= C delta^{-1/2}")
      .expect(R(-1, 2))
      .with({hold(with_max(pc({nf("trchib0", LiHb), nf("Psi_g(D3 R)", L2Hb), nf("Psi(D3 R)", L2Hb)}), 1)),
             hold(with_max(pc({nf("psi", LiHb), nf("Psi_g(D3 R)", L2Hb), nf("Psi(D3 R)", L2Hb)}), 1)),
             hold({nf("psi", LiHb), nf("alphab(D3 R)", L2Hb), nf("alphab(D3 R)", L2Hb)})});
  s.add("J", "", "", "Sec. 4.2: J <= C delta^{-1/2}")
      .expect(R(-1, 2))
      .with({mv(MoveKind::structural, "exactly the same as K", "Sec. 4.2"),
             hold(with_max(pc({nf("psi", LiHb), nf("Psi_g(D3 R)", L2Hb), nf("Psi(D3 R)", L2Hb)}), 1)),
             hold({nf("psi", LiHb), nf("alphab(D3 R)", L2Hb), nf("alphab(D3 R)", L2Hb)}),
             hold({nf("psi", LiHb), nf("Psi(D3 R)", L2Hb), nf("Psi(Dc R)", L2Hb)})});
  Node& f = s.add("final", "", "nab3 alphab",
                  "Eq. (estimates for nabla_3 alphab on Hb): delta^{-1/2} I0 + C delta^{1/4}", NodeKind::final_young);
  f.sources = {"I", "J", "K"};
  f.expect(R(-1, 2), "const", kQuarter);
  f.with({mv(MoveKind::young, "delta^{-1} I0^2 + C delta^{m}, square root", "Young's inequality")});
  return s;
}

Script outgoing_script() {
  Script s;
  const auto ibp4 = [](const std::string& what) { return mv(MoveKind::ibp_null, what + "; boundary on Hb", "trick 2"); };
  const auto ibph = [](const std::string& what) { return mv(MoveKind::ibp_horizontal, what, "trick 2"); };
  const auto cmp = mv(MoveKind::comparison_sub, "Psi(D4 R) = nab4 Psi + psi_g . Psi", "CMP_DN");

  s.add("I", "", "Psi(D4 R) * Psi * Psi", "Eq. (Estimate for L I): I <= c(I0)(1 + R^{3/2}) + C delta^{1/8}")
      .expect(R(1, 8), "R^{3/2}");
  s.add("I0", "I", "Psi_g(D4 R) * Psi_g * Psi_g", "Eq. (I'_0): <= C delta^{1/2}")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("Psi_g(D4 R)", L2H), nf("Psi_g", L4H), nf("Psi_g", L4H)}), 0))});
  s.add("I1", "I", "", "Sec. 5.1: I_1 <= C delta^{1/4}").expect(kQuarter);
  s.add("I11", "I1", "Psi_g(D4 R) * alpha * Psi_g", "Sec. 5.1.2: <= C delta^{1/4}")
      .expect(kQuarter)
      .with({hold({nf("Psi_g(D4 R)", L2H), nf("alpha", L4H), nf("Psi_g", L4H)})});
  s.add("I12", "I1", "alpha(D4 R) * Psi_g * Psi_g", "Sec. 5.1.2: I_12 <= C delta^{1/4}").expect(kQuarter).with({cmp});
  s.add("I121", "I12", "nab4 alpha * Psi_g * Psi_g", "Sec. 5.1.2: I_121")
      .with({ibp4("nab4 off alpha"),
             hold({nf("nab4 Psi_g", L2H), nf("alpha", L4H), nf("Psi_g", L4H)}),
             hold([] {
               Piece p = pc({nf("Psi_g", L2Hb), nf("alpha", L4Hb), nf("Psi_g", L4Hb)});
               p.beta_hb_invariant = true;
               return p;
             }(),
                  "boundary on Hb; beta on Hb read as scale invariant")});
  s.add("I122", "I12", "psi_g * Psi * Psi_g * Psi_g", "Sec. 5.1.2: I_122 quartic")
      .expect(kHalf)
      .with({hold({nf("psi_g", LiH), nf("Psi", L2H), nf("Psi_g", L4H), nf("Psi_g", L4H)})});
  s.add("I2", "I", "", "Sec. 5.1.3: I_2 <= c(I0) R^{3/2} + C delta^{1/8}").expect(R(1, 8), "R^{3/2}");
  s.add("I21", "I2", "", "Sec. 5.1.3: I_21 = 0", NodeKind::vanish);
  s.add("I22", "I2", "alpha(D4 R) * alpha * alphab", "Sec. 5.1.3: I_22")
      .expect(R(1, 8), "R^{3/2}")
      .with({cmp, ibp4("1/2 nab4(alpha . alpha) . alphab")});
  s.add("I22.bulk", "I22", "alpha * alpha * nab4 alphab", "Sec. 5.1.3: bulk after Bianchi")
      .expect(kQuarter)
      .with({mv(MoveKind::bianchi_sub, "nab4 alphab = -nab betab + psi . Psi", "NBE_L_alphab"), lot(kQuarter, "psi . Psi terms"),
             ibph("nab off betab"), hold({nf("nab alpha", L2H), nf("alpha", L4H), nf("betab", L4H)})});
  s.add("I22.boundary", "I22", "alpha * alpha * alphab", "Sec. 5.1.3: boundary on Hb")
      .expect(R(1, 8), "R^{3/2}")
      .with({hold({nf("alphab", L2Hb, curv_energy(), kCurvEnergy), nf("alpha", L4Hb, alpha_l4_lemma(), kAlphaLemma),
                   nf("alpha", L4Hb, alpha_l4_lemma(), kAlphaLemma)})});
  s.add("I3", "I", "", "Sec. 5.1: I_3 = 0 according to signature considerations", NodeKind::vanish);

  s.add("K", "", "", "Eq. (Estimate for L K): K <= c(I0) R^{3/2} + C delta^{1/4}")
      .expect(kQuarter, "R^{3/2}");
  s.add("K0", "K", "", "Sec. 5.2: K_0 <= C delta^{1/2}").expect(kHalf);
  s.add("K01", "K0", "psi * Psi_g(D4 R) * Psi_g(D4 R)", "Sec. 5.2: K_01")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("psi", LiH), nf("Psi_g(D4 R)", L2H), nf("Psi_g(D4 R)", L2H)}), 0))});
  s.add("K02", "K0", "trchib0 * Psi_g(D4 R) * Psi_g(D4 R)", "Sec. 5.2: K_02 absorbed by the left hand side")
      .with({gronwall("trchib0 * Psi_g(D4 R) * Psi_g(D4 R)")});
  s.add("K1", "K", "", "Sec. 5.2: K_1 <= c(I0) R^{3/2} + C delta^{1/4}").expect(kQuarter, "R^{3/2}");
  s.add("K11", "K1", "chibh * alpha(D4 R) * rho(D4 R)", "Sec. 5.2: K_11")
      .expect(kQuarter, "R^{3/2}")
      .with({mv(MoveKind::structural, "trchib0 pairs with the traceless alpha and drops", "Q_{ab44}"), cmp,
             mv(MoveKind::bianchi_sub, "nab4 rho = div beta + psi . Psi", "NBE_L_rho"), lot(kQuarter, "psi . Psi terms")});
  s.add("K111", "K11", "chibh * nab4 alpha * nab beta", "Sec. 5.2: K_111").with({ibp4("nab4 off alpha")});
  s.add("K1111", "K111", "nab4 chibh * alpha * nab beta", "Sec. 5.2: K_1111 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({mv(MoveKind::structure_sub, "nab4 chibh = nab etab + psi . psi", "NSE_L_chibh"), lot(kQuarter, "psi . psi terms"),
             ibph("nab off beta"), hold({nf("chih", LiH), nf("nab alpha", L2H), nf("beta", L2H)}),
             hold({nf("nab chih", L4H), nf("alpha", L4H), nf("beta", L2H)})});
  s.add("K1112", "K111", "chibh * alpha * nab4 nab beta", "Sec. 5.2: K_1112 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({mv(MoveKind::structural, "[nab4, nab] beta", "COMM_4_beta"),
             hold({nf("chibh", LiH), nf("beta", L4H), nf("beta", L4H), nf("alpha", L2H)}), ibph("nab off nab4 beta"),
             hold({nf("nab chibh", L4H), nf("alpha", L4H), nf("nab4 beta", L2H)}),
             hold({nf("chibh", LiH), nf("nab alpha", L2H), nf("nab4 beta", L2H)})});
  s.add("K1113", "K111", "chibh * alpha * nab beta", "Sec. 5.2: K_1113 <= c(I0) R^{3/2} + C delta^{1/4}")
      .expect(kQuarter, "R^{3/2}")
      .with({hold({nf("nab beta", L2Hb, boot(), "Rb_1"), nf("alpha", L4Hb, alpha_l4_lemma(), kAlphaLemma),
                   nf("chibh", L4Hb, chi_l4(), "delta^{-1/4} + C delta^{1/4}")},
                  "boundary on Hb")});
  s.add("K112", "K11", "chibh * nab4 alpha * chibh * alpha", "Sec. 5.2: K_112").with({ibp4("1/2 nab4(alpha . alpha)")});
  {
    Piece p = pc({nf("chih", L4H), nf("alpha", L4H), nf("chibh", L4H), nf("alpha", L4H)});
    p.prefactor = R(3, 2);
    s.add("K1121", "K112", "nab4 chibh * alpha * chibh * alpha", "Sec. 5.2: K_1121 <= C delta^{1/4}")
        .expect(kQuarter)
        .with({mv(MoveKind::structure_sub, "nab4 chibh = psi . psi", "NSE_L_chibh"), lot(kQuarter, "psi . psi terms"),
               mv(MoveKind::prefactor_override, "delta^{3/2} for the quartic term", "Sec. 5.2"), hold(p)});
    Piece q = pc({nf("chibh", L4H), nf("alpha", L4H), nf("chibh", L4H), nf("alpha", L4H)});
    q.prefactor = R(3, 2);
    s.add("K1122", "K112", "chibh * alpha * chibh * alpha", "Sec. 5.2: K_1122 <= C delta^{1/2}")
        .expect(kHalf)
        .with({mv(MoveKind::prefactor_override, "delta^{3/2} for the quartic term", "Sec. 5.2"), hold(q)});
  }
  s.add("K12", "K1", "psi_g * alpha(D4 R) * Psi_g(D4 R)", "Sec. 5.2: K_12 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({mv(MoveKind::structural, "psi_g = omega drops: see K12.omega", "Q_{mu nu N1 N2} table"),
             cite(kQuarter, "remaining psi_g as in K_11", "Sec. 5.2")});
  s.add("K12.omega", "K12", "", "Sec. 5.2: alpha . alphab never appears", NodeKind::vanish);
  s.add("K2", "K", "", "Sec. 5.2: K_2 = 0 according to the signature considerations", NodeKind::vanish);

  s.add("J", "", "", "Eq. (Estimate for L J): J <= c(I0) R^{3/2} + C delta^{1/4}")
      .expect(kQuarter, "R^{3/2}");
  s.add("J0", "J", "", "Sec. 5.3: J_0 <= C delta^{1/2}")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("psi", LiH), nf("Psi(D4 R)", L2H), nf("Psi(D4 R)", L2H)}), 0)),
             hold(with_max(pc({nf("psi", LiH), nf("Psi(D4 R)", L2H), nf("Psi(Dc R)", L2H)}), 0))});
  s.add("J1", "J", "", "Sec. 5.3: J_1 <= c(I0) R^{3/2} + C delta^{1/4}").expect(kQuarter, "R^{3/2}");
  s.add("J11", "J1", "", "Sec. 5.3: J_11 <= c(I0) R^{3/2} + C delta^{1/4}")
      .expect(kQuarter, "R^{3/2}")
      .with({cmp, mv(MoveKind::structural, "D^mu L^3 = 0, so nu is 4 or horizontal", "D^mu L^nu list")});
  s.add("J111", "J11", "chih * nab4 alpha * nab betab", "Sec. 5.3: J_111").with({ibp4("nab4 off alpha")});
  s.add("J1111", "J111", "nab4 chih * alpha * nab betab", "Sec. 5.3: J_1111 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({mv(MoveKind::structure_sub, "nab4 chih = -alpha + psi . psi", "NSE_L_chi"), lot(kQuarter, "psi . psi terms"),
             ibph("nab off betab"), hold({nf("nab alpha", L2H), nf("alpha", L4H), nf("betab", L4H)})});
  s.add("J1112", "J111", "chih * alpha * nab4 nab betab", "Sec. 5.3: J_1112 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({lot(kQuarter, "commutator [nab4, nab] betab"), ibph("nab off nab4 betab"),
             hold({nf("nab chih", L4H), nf("alpha", L4H), nf("nab4 betab", L2H)}),
             hold({nf("chih", LiH), nf("nab alpha", L2H), nf("nab4 betab", L2H)})});
  s.add("J1113", "J111", "chih * alpha * nab betab", "Sec. 5.3: J_1113 boundary on Hb")
      .with({hold({nf("nab betab", L2Hb, boot(), "Rb_1"), nf("alpha", L4Hb, alpha_l4_lemma(), kAlphaLemma),
                   nf("chih", L4Hb, chi_l4(), "delta^{-1/4} + C delta^{1/4}")},
                  "boundary on Hb")});
  s.add("J112", "J11", "psi_g * nab4 alpha * nab Psi_g", "Sec. 5.3: J_112 <= C delta^{1/2}")
      .expect(kHalf)
      .with({cite(kHalf, "same form as K_12 with good psi", "Sec. 5.3")});
  s.add("J12", "J1", "psi * Psi_g(D4 R) * beta(Dc R)", "Sec. 5.3: J_12 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({mv(MoveKind::mild_anomaly_swap, "beta(Dc R) -> alpha", "Mild Anomalies"), lot(kQuarter, "mild remainder"),
             ibph("nab off Psi_g"), hold({nf("nab psi", L2H), nf("alpha", L4H), nf("Psi_g", L4H)}),
             hold({nf("psi", LiH), nf("nab alpha", L2H), nf("Psi_g", L2H)}),
             hold({nf("nab Psi", L2H), nf("psi_g", L4H), nf("alpha", L4H)})});
  s.add("J2", "J", "", "Sec. 5.3: we claim J_2 = 0", NodeKind::vanish);

  Node& f = s.add("final", "", "Psi(D4 R)", "Eq. (Close Bootstrap 1): c(I0)(1 + R^{3/2}) + C delta^{1/8}", NodeKind::final_plain);
  f.sources = {"I", "J", "K"};
  f.expect(R(1, 8), "R^{3/2}");
  return s;
}

Script incoming_script() {
  Script s;
  const auto ibp3 = [](const std::string& what) { return mv(MoveKind::ibp_null, what + "; boundary on H", "trick 2"); };
  const auto ibp4 = [](const std::string& what) { return mv(MoveKind::ibp_null, what + "; boundary on Hb", "trick 2"); };
  const auto ibph = [](const std::string& what) { return mv(MoveKind::ibp_horizontal, what, "trick 2"); };
  const auto cmp = mv(MoveKind::comparison_sub, "Psi(D3 R) = nab3 Psi + psi_g . Psi", "CMP_DN");
  const auto mild = [](const std::string& f) {
    return mv(MoveKind::mild_anomaly_swap, f + " -> alpha", "Mild Anomalies: replace by the worst term alpha");
  };

  s.add("I", "", "Psi(D3 R) * Psi * Psi", "Eq. (Estimate for Lb I): I <= C delta^{1/4}").expect(kQuarter);
  s.add("I0", "I", "Psi_g(D3 R) * Psi_g * Psi_g", "Sec. 6.1: I_0 <= C delta^{1/2}")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("Psi_g(D3 R)", L2Hb), nf("Psi_g", L4Hb), nf("Psi_g", L4Hb)}), 0))});
  s.add("I1", "I", "", "Sec. 6.1: I_1 <= C delta^{1/4}").expect(kQuarter);
  s.add("I11", "I1", "Psi_g(D3 R) * alpha * Psi_g", "Sec. 6.1: I_11")
      .expect(kQuarter)
      .with({hold(with_max(pc({nf("Psi_g(D3 R)", L2Hb), nf("alpha", L4Hb), nf("Psi_g", L4Hb)}), 1))});
  s.add("I12", "I1", "alpha(D3 R) * Psi_g * Psi_g", "Sec. 6.1: I_12")
      .expect(kQuarter)
      .with({mild("alpha(D3 R)"), lot(kQuarter, "mild remainder"),
             hold({nf("alpha", L4Hb), nf("Psi_g", L2Hb), nf("Psi_g", L4Hb)})});
  s.add("I13", "I1", "alphab(D3 R) * Psi_g * Psi_g", "Sec. 6.1: I_13")
      .expect(kQuarter)
      .with({cmp, lot(kQuarter, "psi_g . Psi terms"), ibp3("nab3 off alphab"),
             hold({nf("nab3 Psi_g", L2H), nf("alphab", L4H), nf("Psi_g", L4H)}, "bulk, integrated over H"),
             hold({nf("alphab", L2H), nf("Psi_g", L4H), nf("Psi_g", L4H)}, "boundary on H")});
  s.add("I2", "I", "", "Sec. 6.1: I_2 <= C delta^{1/4}").expect(kQuarter);
  s.add("I21", "I2", "nab3 alphab * alpha * alphab", "Sec. 6.1: I_21")
      .expect(kQuarter)
      .with({ibp3("nab3 off alphab"), mild("nab3 alpha"), lot(kQuarter, "mild remainder"),
             hold({nf("alphab", L2H), nf("alphab", L4H), nf("alpha", L4H)}),
             hold({nf("alphab", L2H), nf("alphab", L4H), nf("alpha", L4H)}, "boundary on H")});
  s.add("I22", "I2", "nab3 alphab * alpha * rho", "Sec. 6.1: I_22")
      .expect(kQuarter)
      .with({ibp3("nab3 off alphab"), mild("nab3 alpha"), lot(kQuarter, "mild remainder"),
             hold({nf("alphab", L4H), nf("rho", L2H), nf("alpha", L4H)}),
             hold({nf("nab3 rho", L2H), nf("alphab", L4H), nf("alpha", L4H)}),
             hold({nf("alphab", L4H), nf("rho", L2H), nf("alpha", L4H)}, "boundary on H")});
  s.add("I3", "I", "", "Sec. 6.1: I_3 = 0", NodeKind::vanish);

  s.add("K", "", "", "Eq. (K Lb): K <= C delta^{1/4}").expect(kQuarter);
  s.add("K0", "K", "", "Sec. 6.2: K_0 <= C delta^{1/2}").expect(kHalf);
  s.add("K01", "K0", "psi * Psi_g(D3 R) * Psi_g(D3 R)", "Sec. 6.2: K_01 over H")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("psi", LiH), nf("Psi_g(D3 R)", L2H), nf("Psi_g(D3 R)", L2H)}), 0))});
  s.add("K02", "K0", "trchib0 * Psi_g(D3 R) * Psi_g(D3 R)", "Sec. 6.2: K_02 absorbed")
      .with({gronwall("trchib0 * Psi_g(D3 R) * Psi_g(D3 R)")});
  s.add("K1", "K", "", "Sec. 6.2: K_1 <= C delta^{1/4}").expect(kQuarter);
  s.add("K11", "K1", "psi * alpha(D3 R) * Psi_g(D3 R)", "Sec. 6.2: K_11")
      .expect(kQuarter)
      .with({mv(MoveKind::bianchi_sub, "Psi_g(D3 R) through the Bianchi equations", "NBE_Lb_beta"), mild("alpha(D3 R)"),
             lot(kQuarter, "mild remainder"), ibph("nab off Psi_g"),
             hold({nf("nab psi", L4H), nf("alpha", L4H), nf("Psi_g", L2H)}),
             hold({nf("psi", LiH), nf("nab alpha", L2H), nf("Psi_g", L2H)})});
  s.add("K12", "K1", "", "Sec. 6.2: K_12").expect(kQuarter);
  s.add("K121", "K12", "chih * alphab(D3 R) * rho(D3 R)", "Sec. 6.2: K_121")
      .expect(kQuarter)
      .with({cmp, mv(MoveKind::bianchi_sub, "nab3 rho = -div betab + psi . Psi", "NBE_Lb_rho"), lot(kQuarter, "psi . Psi terms"),
             ibp3("nab3 off alphab")});
  s.add("K1211", "K121", "nab3 chih * alphab * nab betab", "Sec. 6.2: K_1211")
      .expect(kQuarter)
      .with({mv(MoveKind::structure_sub, "nab3 chih = -1/2 trchib chih + nab eta + ...", "NSE_Lb_chih"),
             lot(kQuarter, "psi . psi terms"),
             hold({nf("trchib0", LiH), nf("chih", LiH), nf("alphab", L2H), nf("nab betab", L2H)}),
             hold({nf("nab betab", L2H), nf("alphab", L4H), nf("nab eta", L4H)})});
  s.add("K1212", "K121", "chih * alphab * nab3 nab betab", "Sec. 6.2: K_1212")
      .expect(kQuarter)
      .with({lot(kQuarter, "commutator [nab3, nab] betab", "COMM_3_betab"), ibph("nab off nab3 betab"),
             hold({nf("nab chih", L4H), nf("alphab", L4H), nf("nab3 betab", L2H)}),
             hold({nf("chih", LiH), nf("nab alphab", L2H), nf("nab3 betab", L2H)})});
  s.add("K1213", "K121", "chih * alphab * nab betab", "Sec. 6.2: K_1213 boundary on H")
      .expect(kHalf)
      .with({hold({nf("chih", LiH), nf("alphab", L2H), nf("nab betab", L2H)}, "boundary on H")});
  s.add("K122", "K12", "psi * alphab(D3 R) * Psi_g(D3 R)", "Sec. 6.2: K_122, exactly as K_121")
      .expect(kQuarter)
      .with({cite(kQuarter, "proceed as for K_121", "Sec. 6.2")});
  s.add("K2", "K", "", "Sec. 6.2: we claim K_2 = 0", NodeKind::vanish);

  s.add("J", "", "", "Sec. 6.3: J <= c + c R^{7/4} + C delta^{1/16}")
      .expect(R(1, 16), "R^{7/4}");
  s.add("J0", "J", "", "Sec. 6.3: J_0 <= C delta^{1/2}")
      .expect(kHalf)
      .with({hold(with_max(pc({nf("psi", LiH), nf("Psi(D3 R)", L2H), nf("Psi(D3 R)", L2H)}), 0)),
             hold(with_max(pc({nf("psi", LiH), nf("Psi(D3 R)", L2H), nf("Psi(Dc R)", L2H)}), 0)),
             gronwall("trchib0 * Psi_g(D3 R) * Psi_g(D3 R)")});
  s.add("J1", "J", "", "Sec. 6.3: J_1 <= c(I0) R^{3/2} + C delta^{1/8}").expect(R(1, 8), "R^{3/2}");
  s.add("J11", "J1", "trchib0 * alpha(D3 R) * Psi_g(D3 R)", "Sec. 6.3: J_11")
      .expect(R(1, 8), "R^{3/2}")
      .with({mv(MoveKind::bianchi_sub, "Psi_g(D3 R) = nab Psi_g + ...", "NBE_Lb_beta"), mild("alpha(D3 R)"),
             lot(kQuarter, "mild remainder"), ibph("nab off Psi_g"),
             hold({nf("trchib0", LiH), nf("nab alpha", L2H, boot(), "R_1"), nf("Psi_g", L2H, curv_energy(), kCurvEnergy)})});
  s.add("J12", "J1", "", "Sec. 6.3: J_12, essentially K_122")
      .expect(kQuarter)
      .with({cite(kQuarter, "as K_122", "Sec. 6.3")});
  s.add("J13", "J1", "", "Sec. 6.3: J_13, as J_11 and K_122")
      .with({mild("beta(Dc R)"), lot(kQuarter, "mild remainder"), cite(kQuarter, "psi part as K_122", "Sec. 6.3"),
             hold({nf("trchib0", LiH), nf("nab alpha", L2H, boot(), "R_1"), nf("Psi_g", L2H, curv_energy(), kCurvEnergy)},
                  "trchib0 part as J_11")});
  s.add("J2", "J", "", "Sec. 6.3: J_2 <= c + c R^{7/4} + C delta^{1/16}").expect(R(1, 16), "R^{7/4}");
  s.add("J21", "J2", "omega * nab4 alpha * nab3 alphab", "Sec. 6.3: J_21 <= c(I0) R^{7/4} + C delta^{1/4}")
      .expect(kQuarter, "R^{7/4}")
      .with({mv(MoveKind::structural, "D^4 Lb^4 = 2 omega, both factors anomalous", "D^mu Lb^nu list"),
             ibp3("nab3 off alphab")});
  {
    Piece p = pc({nf("rho", L4H, boot_l4(), "R + C delta^{1/4}"), nf("alphab", L4H, boot_l4(), "R + C delta^{1/4}"),
                  nf("nab4 alpha", L2H, nab4_alpha_h(), "Eq. (estimates for nabla_4 alpha on H)")});
    p.absorb_leading = true;
    s.add("J211", "J21", "nab3 omega * nab4 alpha * alphab", "Sec. 6.3: J_211 <= C delta^{1/4}")
        .expect(kQuarter)
        .with({mv(MoveKind::structure_sub, "nab3 omega = 1/2 rho + psi . psi", "NSE_Lb_omega"), lot(kQuarter, "psi . psi terms"),
               mv(MoveKind::gronwall_absorb, "c-part absorbed", "Gronwall"), hold(p)});
  }
  s.add("J212", "J21", "omega * alphab * nab4 alpha", "Sec. 6.3: J_212 <= c(I0) R^{7/4} + C delta^{1/4}")
      .expect(kQuarter, "R^{7/4}")
      .with({hold({nf("omega", L4H, omega_l4(), "R^{3/4} + C delta^{1/4}"), nf("alphab", L4H, boot_l4(), "R + C delta^{1/4}"),
                   nf("nab4 alpha", L2H, nab4_alpha_h(), "Eq. (estimates for nabla_4 alpha on H)")},
                  "boundary on H")});
  s.add("J213", "J21", "omega * alphab * nab3 nab4 alpha", "Sec. 6.3: J_213 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({lot(kQuarter, "commutator [nab3, nab4] alpha"), ibp4("nab4 off nab3 alpha"), mild("nab3 alpha"),
             lot(kQuarter, "mild remainder"), mv(MoveKind::bianchi_sub, "nab3 alpha = nab beta + ...", "NBE_Lb_alpha"),
             hold({nf("omega", L4H), nf("nab4 alphab", L2H), nf("alpha", L4H)}),
             hold({nf("omega", L4Hb), nf("alphab", L2Hb), nf("alpha", L4Hb)}, "boundary on Hb"),
             hold({nf("nab4 omega", L2H), nf("alphab", L4H), nf("alpha", L4H)}),
             hold({nf("nab omega", L4H), nf("alphab", L4H), nf("nab4 beta", L2H)}),
             hold({nf("omega", LiH), nf("nab alphab", L2H), nf("nab4 beta", L2H)})});
  s.add("J22", "J2", "", "Sec. 6.3: J_22");
  s.add("J221", "J22", "chibh * nab3 alphab * nab beta", "Sec. 6.3: J_221 <= c + c R^{7/4} + C delta^{1/16}")
      .expect(R(1, 16), "R^{7/4}")
      .with({mv(MoveKind::structural, "D^4 Lb^nu = D^mu Lb^4 = 0", "D^mu Lb^nu list"),
             mv(MoveKind::comparison_sub, "D_c R_{da4b} = nab beta + alpha + ...", "CMP_Dc_beta"), lot(kQuarter, "psi . Psi terms")});
  s.add("J2211", "J221", "chibh * nab3 alphab * nab beta", "Sec. 6.3: J_2211 <= C delta^{1/4}")
      .expect(kQuarter)
      .with({ibp3("nab3 off alphab"), mv(MoveKind::structure_sub, "nab3 chibh = -trchib chibh + ...", "NSE_Lb_chib"),
             lot(kQuarter, "routine terms"), hold({nf("alphab", L4H), nf("alphab", L4H), nf("nab beta", L2H)}),
             hold({nf("trchib0", LiH), nf("chibh", L4H), nf("alphab", L4H), nf("nab beta", L2H)})});
  s.add("J2212", "J221", "chibh * alphab * alpha", "Sec. 6.3: J_2212 <= c + c R^{7/4} + C delta^{1/16}")
      .expect(R(1, 16), "R^{7/4}")
      .with({ibp3("nab3 off alphab"), mv(MoveKind::structure_sub, "nab3 chibh, nab3 alpha as in J_2211", "NSE_Lb_chib"),
             hold({nf("chibh", L4H, chib_l4_h(), "delta^{-1/4} + R^{3/4} + C delta^{1/4}"),
                   nf("alphab", L2H, curv_energy(), kCurvEnergy), nf("alpha", L4H, alpha_l4_display(), kAlphaDisplay)},
                  "boundary on H")});
  s.add("J222", "J22", "", "Sec. 6.3: J_222 = 0", NodeKind::cancel);

  Node& f = s.add("final", "", "Psi(D3 R)", "Eq. (Close Bootstrap 2): c(I0)(1 + R^{7/8}) + C delta^{1/32}", NodeKind::final_sqrt);
  f.sources = {"I", "J", "K"};
  f.expect(R(1, 32), "R^{7/8}");
  f.with({mv(MoveKind::sqrt_energy, "square root of the energy inequality", "Eq. (Close Bootstrap 2)")});
  return s;
}

Script build_script(const std::string& id) {
  if (id == "nab4_alpha") return nab4_alpha_script();
  if (id == "nab3_alphab") return nab3_alphab_script();
  if (id == "outgoing") return outgoing_script();
  if (id == "incoming") return incoming_script();
  throw std::out_of_range("unknown campaign: " + id);
}

std::map<std::string, ExpectedBound> script_expectations(const std::string& id) {
  std::map<std::string, ExpectedBound> m;
  for (const auto& n : build_script(id).nodes)
    if (n.expected) m[n.label] = *n.expected;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// vanishing certificates

namespace {

// Signature of a frame component R_{i j k l}, slots '3', '4' or 'a' (horizontal).
HalfInt pattern_signature(const std::string& p, int d_increment_doubled = 0) {
  int n4 = 0, n3 = 0;
  for (char ch : p) {
    if (ch == '4') ++n4;
    if (ch == '3') ++n3;
  }
  return HalfInt::from_doubled(n4 - n3 + 2 + d_increment_doubled);
}

bool zero_by_antisymmetry(const std::string& p) {
  auto null = [](char c) { return c == '3' || c == '4'; };
  return (null(p[0]) && p[0] == p[1]) || (null(p[2]) && p[2] == p[3]);
}

std::vector<std::string> nonzero_patterns() {
  std::vector<std::string> out;
  const std::string slots = "34a";
  for (char a : slots)
    for (char b : slots)
      for (char c : slots)
        for (char d : slots) {
          std::string p{a, b, c, d};
          if (!zero_by_antisymmetry(p)) out.push_back(p);
        }
  return out;
}

BoundReport base_report(const Campaign& c, const std::string& label) {
  BoundReport r;
  r.campaign = c.id;
  r.term_label = label;
  r.delta_exponent.reset();
  return r;
}

void exhaustion_cert(BoundReport& r, const Campaign& c, Family f, int k, bool show_widening) {
  auto terms = enumerate_integrands(c, f, k);
  r.moves.push_back(mv(MoveKind::exhaustion, std::string(family_name(f)) + " with " + std::to_string(k) + " anomalies",
                       "signature considerations"));
  r.reason_chain.push_back("enumerated " + std::string(family_name(f)) + " shapes with k=" + std::to_string(k) +
                           " in [" + c.sig_lo.str() + "," + c.sig_hi.str() + "]: " + std::to_string(terms.size()));
  if (show_widening) {
    auto w = minimal_widening(c, f, k, HalfInt(2));
    r.reason_chain.push_back("minimal widening giving a non-empty set: " + (w ? w->str() : std::string("none up to 2")));
  }
  if (terms.empty()) {
    r.status = Status::vanishes;
  } else {
    r.status = Status::unbounded;
    r.integrand = terms.front();
    r.diagnostic = "exhaustion failed: " + to_ascii(terms.front());
  }
}

std::vector<std::string> anomalous_members(Deriv d) {
  std::vector<std::string> out;
  for (Kind k : kCurvature) {
    Factor f = make_factor(k, {}, {d});
    if (counts_as_anomaly(f)) out.push_back(factor_key(f));
  }
  return out;
}

bool multiplier_present(const Campaign& c, const std::array<std::string, 3>& t) {
  return std::find(c.multipliers.begin(), c.multipliers.end(), t) != c.multipliers.end();
}

void q_scan(BoundReport& r, const std::string& what) {
  double res = q_cross_term_residual(50, 42);
  r.moves.push_back(mv(MoveKind::structural, "alpha . alphab absent from Q_{mu nu N1 N2}", "Q_{mu nu N1 N2} table"));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", res);
  r.reason_chain.push_back(what + ": alpha . alphab cross terms of Q_{mu nu N1 N2}, N1,N2 null, 50 draws, max residual " +
                           buf);
  if (res < 1e-10) {
    r.status = Status::vanishes;
  } else {
    r.status = Status::unbounded;
    r.diagnostic = "alpha . alphab appears in Q";
  }
}

void outgoing_i21(BoundReport& r, const Campaign& c) {
  std::vector<std::string> sig2;
  for (const auto& p : nonzero_patterns())
    if (pattern_signature(p) == HalfInt(2)) sig2.push_back(p);
  // every such pattern is R_{a4b4} up to pair antisymmetry, i.e. alpha
  auto pair_is_4a = [](char x, char y) { return (x == '4' && y == 'a') || (x == 'a' && y == '4'); };
  bool only_alpha = !sig2.empty() && std::all_of(sig2.begin(), sig2.end(), [&](const std::string& p) {
    return pair_is_4a(p[0], p[1]) && pair_is_4a(p[2], p[3]);
  });
  r.reason_chain.push_back("nonzero R_{ijkl} with signature 2: " + join(sig2, ",") + " (alpha only: " +
                           (only_alpha ? "yes" : "no") + ")");
  r.reason_chain.push_back("alpha . alpha in R^mu_N Y^nu R_{mu beta nu delta} forces Y = L and beta = delta = 4");
  bool lb_zero = zero_by_antisymmetry("33a3") && zero_by_antisymmetry("a333");
  r.reason_chain.push_back(std::string("X or Z = Lb gives D_4 R_{33 Z3}, D_4 R_{X3 33}: zero by antisymmetry: ") +
                           (lb_zero ? "yes" : "no"));
  bool lll = multiplier_present(c, {"L", "L", "L"});
  HalfInt s = pattern_signature("4343", 2) + HalfInt(4);
  r.reason_chain.push_back(std::string("X = Y = Z = L is not a multiplier of this campaign: ") + (lll ? "no" : "yes") +
                           "; its total signature would be " + s.str());
  r.moves.push_back(mv(MoveKind::structural, "index pattern of alpha . alpha", "J^(N) current"));
  r.status = only_alpha && lb_zero && !lll ? Status::vanishes : Status::unbounded;
  if (r.status == Status::unbounded) r.diagnostic = "index argument failed";
}

void outgoing_j2(BoundReport& r, const Campaign& c) {
  auto d4 = anomalous_members(Deriv::D4);
  bool s1 = d4 == std::vector<std::string>{"alpha(D4 R)"};
  r.reason_chain.push_back("anomalous Psi(D4 R): " + join(d4, ",") + "; alpha(D4 R) forces X = Y = L");
  bool s2 = !multiplier_present(c, {"L", "L", "L"}) && multiplier_present(c, {"L", "L", "Lb"});
  r.reason_chain.push_back(std::string("LLL excluded, so Z = Lb: ") + (s2 ? "yes" : "no"));
  bool s3 = !derivative_slot_nonzero("L", '3');
  r.reason_chain.push_back(std::string("D^mu L^3 = 0, so nu is 4 or horizontal: ") + (s3 ? "yes" : "no"));
  Factor a4 = make_factor(Kind::alpha, {}, {Deriv::D4});
  HalfInt min_psi(100);
  for (Kind k : d_list_values("L", "D")) min_psi = std::min(min_psi, signature_of(k));
  HalfInt s_nu4 = min_psi + signature_of_factor(a4) + signature_of_factor(a4);
  bool s4 = !c.in_range(s_nu4);
  auto dc = anomalous_members(Deriv::Dc);
  r.reason_chain.push_back("nu = 4: second anomaly alpha(D4 R), signature >= " + s_nu4.str() + " outside range; " +
                           "so the second anomaly is " + join(dc, ","));
  HalfInt mx(-100);
  for (char mu : std::string("34a")) mx = std::max(mx, pattern_signature(std::string{mu, 'a', '3', 'a'}, 1));
  HalfInt need = signature_of_factor(make_factor(Kind::beta, {}, {Deriv::Dc}));
  bool s5 = mx < need;
  r.reason_chain.push_back("max sgn D_c R_{mu a 3 b} = " + mx.str() + " < sgn beta(Dc R) = " + need.str());
  r.moves.push_back(mv(MoveKind::structural, "D^mu L^3 = 0 forces beta(Dc R)", "D^mu L^nu list"));
  r.status = s1 && s2 && s3 && s4 && s5 ? Status::vanishes : Status::unbounded;
  if (r.status == Status::unbounded) r.diagnostic = "structural chain failed";
}

void outgoing_k12_omega(BoundReport& r, const Campaign& c) {
  SchematicTerm t = parse_term("omega * alpha(D4 R) * alphab(D4 R)");
  HalfInt s = signature_of_term(t);
  r.integrand = t;
  r.reason_chain.push_back("psi_g = omega pairs alpha(D4 R) with alphab(D4 R), signature " + s.str() +
                           (c.in_range(s) ? " in range" : " out of range"));
  q_scan(r, "omega . alpha(D4 R) . alphab(D4 R)");
}

void incoming_k2(BoundReport& r, const Campaign& c) {
  auto terms = enumerate_integrands(c, Family::K, 2);
  const Factor a3 = make_factor(Kind::alpha, {}, {Deriv::D3});
  const Factor ab3 = make_factor(Kind::alphab, {}, {Deriv::D3});
  bool ok = true;
  std::size_t cross = 0;
  for (const auto& t : terms) {
    int na = 0, nab = 0;
    for (const auto& f : t.factors) {
      Factor g = f;
      g.annotation.reset();
      if (g == a3) ++na;
      if (g == ab3) ++nab;
    }
    if (na == 1 && nab == 1) ++cross;
    else ok = false;
  }
  HalfInt s_aa = signature_of_factor(a3) + signature_of_factor(a3);
  HalfInt s_bb = signature_of_factor(ab3) + signature_of_factor(ab3);
  HalfInt max_psi(-100);
  for (const auto& m : c.multipliers)
    for (const auto& v : m)
      for (Kind k : d_list_values(v, "pi")) max_psi = std::max(max_psi, signature_of(k));
  r.reason_chain.push_back("alpha(D3 R)^2: signature >= " + s_aa.str() + " > " + c.sig_hi.str());
  r.reason_chain.push_back("alphab(D3 R)^2: signature <= " + (s_bb + max_psi).str() + " < " + c.sig_lo.str());
  r.reason_chain.push_back("double anomaly shapes in range: " + std::to_string(terms.size()) + ", all alpha(D3 R) . alphab(D3 R): " +
                           (ok ? "yes" : "no"));
  r.moves.push_back(mv(MoveKind::exhaustion, "K with 2 anomalies", "signature considerations"));
  if (!ok) {
    r.status = Status::unbounded;
    r.diagnostic = "unexpected double anomaly shape";
    return;
  }
  q_scan(r, "alpha(D3 R) . alphab(D3 R), " + std::to_string(cross) + " shapes");
}

void incoming_j222(BoundReport& r) {
  Rng rng(42);
  int exact = 0;
  const int draws = 50;
  for (int i = 0; i < draws; ++i) {
    Rational a = random_small_rational(rng), b = random_small_rational(rng);
    RMat2 ab = {{{a, b}, {b, -a}}};
    std::array<RVec2, 2> bs;
    for (auto& v : bs)
      for (auto& x : v) x = random_small_rational(rng);
    auto [t, ts] = j222_cancellation(ab, bs);
    if (t + ts == 0) ++exact;
  }
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    DTensor w3 = random_weyl(rng);
    std::array<DTensor, 2> wc = {random_weyl(rng), random_weyl(rng)};
    auto [t, ts] = j222_tensor_witness(w3, wc);
    worst = std::max(worst, std::abs(t + ts));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  r.moves.push_back(mv(MoveKind::cancellation, "T + T* = 0", "Hodge dual pair"));
  r.reason_chain.push_back("j222: T + T* exactly 0 on " + std::to_string(exact) + "/" + std::to_string(draws) +
                           " rational draws");
  r.reason_chain.push_back(std::string("tensor witness on 20 random Weyl fields: max |T + T*| = ") + buf);
  r.status = exact == draws && worst < 1e-10 ? Status::cancels : Status::unbounded;
  if (r.status == Status::unbounded) r.diagnostic = "j222 cancellation failed";
}

}  // namespace

std::vector<std::string> vanishing_labels(const Campaign& c) {
  if (c.id == "outgoing") return {"I3", "I21", "K2", "K12.omega", "J2"};
  if (c.id == "incoming") return {"I3", "K2", "J222"};
  return {"I3"};
}

BoundReport vanishing_certificate(const Campaign& c, const std::string& label) {
  auto labels = vanishing_labels(c);
  if (std::find(labels.begin(), labels.end(), label) == labels.end())
    throw std::out_of_range("no vanishing claim " + label + " in campaign " + c.id);
  BoundReport r = base_report(c, label);
  if (label == "I3") exhaustion_cert(r, c, Family::I, 3, c.id == "outgoing");
  else if (label == "K2" && c.id == "outgoing") exhaustion_cert(r, c, Family::K, 2, true);
  else if (label == "I21") outgoing_i21(r, c);
  else if (label == "J2") outgoing_j2(r, c);
  else if (label == "K12.omega") outgoing_k12_omega(r, c);
  else if (label == "K2") incoming_k2(r, c);
  else if (label == "J222") incoming_j222(r);
  auto it = c.expected_bounds.find(label);
  if (it != c.expected_bounds.end()) r.expected = it->second;
  return r;
}

double q_cross_term_residual(int draws, unsigned long long seed) {
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < draws; ++i) {
    WeylComponents full = random_components(rng);
    WeylComponents a, b, ab;
    a.alpha = ab.alpha = full.alpha;
    b.alphab = ab.alphab = full.alphab;
    auto qa = bel_robinson(reconstruct(a)).components;
    auto qb = bel_robinson(reconstruct(b)).components;
    auto qab = bel_robinson(reconstruct(ab)).components;
    double scale = 1.0;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int p : {2, 3})
          for (int q : {2, 3}) scale = std::max(scale, std::abs(qab(m, n, p, q)));
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int p : {2, 3})
          for (int q : {2, 3})
            worst = std::max(worst, std::abs(qab(m, n, p, q) - qa(m, n, p, q) - qb(m, n, p, q)) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// replay

namespace {

Rational tag_power(const std::string& tag) {
  if (tag == "const") return 0;
  return parse_rational(tag.substr(3, tag.size() - 4));
}

void set_verdict(BoundReport& r) {
  if (!r.expected) {
    r.verdict = "info";
    return;
  }
  const auto& e = *r.expected;
  if (r.status != Status::bounded || !r.delta_exponent) {
    r.verdict = "mismatch";
    return;
  }
  bool tag_ok = e.tag.empty() || e.tag == r.factor_tag;
  bool corr_ok = !e.correction || (r.correction && *r.correction == *e.correction);
  if (!tag_ok || !corr_ok || *r.delta_exponent < e.exponent) r.verdict = "mismatch";
  else if (*r.delta_exponent == e.exponent) r.verdict = "exact";
  else r.verdict = "improves";
}

bool excluded_child(const BoundReport& r) {
  return r.status == Status::vanishes || r.status == Status::cancels || only_gronwall(r.moves);
}

// Group value from own pieces and children.
void combine(BoundReport& r, const Campaign& c, const std::vector<const BoundReport*>& kids) {
  Agg a = aggregate_moves(r.moves, c);
  r.reason_chain = a.notes;
  for (const auto* k : kids) {
    if (excluded_child(*k)) continue;
    if (k->status == Status::unbounded) {
      r.status = Status::unbounded;
      r.diagnostic = "child " + k->term_label + " unbounded";
      r.delta_exponent.reset();
      return;
    }
    a.add(k->delta_exponent, k->leading_exponent, tag_power(k->factor_tag));
  }
  fill_from_agg(r, a, c);
}

void finalize(BoundReport& r, const Node& n, const Campaign& c, const std::vector<const BoundReport*>& srcs) {
  Agg a;
  for (const auto* k : srcs) {
    if (k->status == Status::unbounded) {
      r.status = Status::unbounded;
      r.diagnostic = "source " + k->term_label + " unbounded";
      return;
    }
    a.add(k->delta_exponent, k->leading_exponent, tag_power(k->factor_tag));
  }
  if (!a.error) {
    r.status = Status::unbounded;
    r.diagnostic = "no bulk exponent";
    return;
  }
  r.status = Status::bounded;
  switch (n.kind) {
    case NodeKind::final_young:
      r.delta_exponent = c.data_weight / 2;
      r.leading_exponent = c.data_weight / 2;
      r.correction = (*a.error - c.data_weight) / 2;
      r.factor_tag = "const";
      break;
    case NodeKind::final_sqrt:
      r.delta_exponent = *a.error / 2;
      if (a.leading) r.leading_exponent = *a.leading / 2;
      r.factor_tag = r_tag(a.r_power / 2);
      break;
    default:
      r.delta_exponent = a.error;
      r.leading_exponent = a.leading;
      r.factor_tag = r_tag(a.r_power);
      break;
  }
}

ReplayResult replay_scripted(const Campaign& c) {
  Script s = build_script(c.id);
  std::map<std::string, BoundReport> done;
  auto children_of = [&](const std::string& label) {
    std::vector<std::string> out;
    for (const auto& n : s.nodes)
      if (n.parent == label) out.push_back(n.label);
    return out;
  };
  std::map<std::string, const Node*> nodes;
  for (const auto& n : s.nodes) nodes[n.label] = &n;
  std::function<const BoundReport&(const std::string&)> eval = [&](const std::string& label) -> const BoundReport& {
    if (auto it = done.find(label); it != done.end()) return it->second;
    const Node& n = *nodes.at(label);
    BoundReport r;
    if (n.kind == NodeKind::vanish || n.kind == NodeKind::cancel) {
      r = vanishing_certificate(c, n.label);
    } else {
      r.campaign = c.id;
      r.term_label = n.label;
      if (!n.integrand.empty()) r.integrand = parse_term(n.integrand);
      r.moves = n.moves;
      if (n.kind == NodeKind::group) {
        r.children = children_of(n.label);
        std::vector<const BoundReport*> kids;
        for (const auto& k : r.children) kids.push_back(&eval(k));
        if (only_gronwall(r.moves)) {
          r.delta_exponent = Rational(0);
          r.status = Status::bounded;
        } else {
          combine(r, c, kids);
        }
      } else {
        r.children = n.sources;
        std::vector<const BoundReport*> srcs;
        for (const auto& k : n.sources) srcs.push_back(&eval(k));
        finalize(r, n, c, srcs);
      }
    }
    r.paper_anchor = n.anchor;
    r.expected = n.expected;
    set_verdict(r);
    return done.emplace(label, std::move(r)).first->second;
  };
  for (const auto& n : s.nodes) eval(n.label);
  ReplayResult out;
  out.campaign = c.id;
  out.scripted = true;
  for (const auto& n : s.nodes) {
    const BoundReport& r = done.at(n.label);
    if (out.pass && (r.verdict == "mismatch" || r.status == Status::unbounded)) {
      out.pass = false;
      out.first_mismatch = r.term_label;
    }
    out.reports.push_back(r);
  }
  return out;
}

ReplayResult replay_auto(const Campaign& c) {
  ReplayResult out;
  out.campaign = c.id;
  out.scripted = false;
  AutoSearch search(c);
  for (Family f : {Family::I, Family::J, Family::K}) {
    BoundReport fam;
    fam.campaign = c.id;
    fam.term_label = std::string(family_name(f)) + "*";
    std::optional<Rational> fam_min;
    for (int k = 0; k <= 3; ++k) {
      auto terms = enumerate_integrands(c, f, k);
      BoundReport r;
      r.campaign = c.id;
      r.term_label = std::string(family_name(f)) + std::to_string(k) + "*";
      if (terms.empty()) {
        r.status = Status::vanishes;
        r.moves.push_back(mv(MoveKind::exhaustion, "no shapes in range", "signature considerations"));
        r.reason_chain.push_back("enumerated 0 shapes");
      } else {
        std::optional<Rational> worst;
        for (const auto& t : terms) {
          AutoOut o = search.run(t, c.domain, 3);
          if (!o.value) {
            r.status = Status::unbounded;
            r.integrand = t;
            r.diagnostic = o.diagnostic + ": " + to_ascii(t);
            worst.reset();
            break;
          }
          if (!worst || *o.value < *worst) {
            worst = o.value;
            r.integrand = t;
            r.moves = o.moves;
          }
        }
        if (r.status != Status::unbounded) {
          r.delta_exponent = worst;
          r.reason_chain.push_back(std::to_string(terms.size()) + " shapes, worst " + to_ascii(r.integrand));
          if (!fam_min || *worst < *fam_min) fam_min = worst;
        }
      }
      r.verdict = "info";
      fam.children.push_back(r.term_label);
      if (r.status == Status::unbounded && out.pass) {
        out.pass = false;
        out.first_mismatch = r.term_label;
      }
      out.reports.push_back(std::move(r));
    }
    fam.delta_exponent = fam_min;
    fam.status = fam_min ? Status::bounded : Status::vanishes;
    fam.verdict = "info";
    out.reports.push_back(std::move(fam));
  }
  return out;
}

}  // namespace

ReplayResult replay(const Campaign& c, bool scripted) { return scripted ? replay_scripted(c) : replay_auto(c); }

// ---------------------------------------------------------------------------
// re-check

bool recheck(const BoundReport& r, const Campaign& c, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = r.term_label + ": " + m;
    return false;
  };
  if (r.status == Status::vanishes || r.status == Status::cancels) {
    auto labels = vanishing_labels(c);
    if (std::find(labels.begin(), labels.end(), r.term_label) == labels.end()) {
      // auto replay: empty enumeration
      return r.reason_chain == std::vector<std::string>{"enumerated 0 shapes"} ? true : fail("unknown vanishing label");
    }
    BoundReport again = vanishing_certificate(c, r.term_label);
    if (again.status != r.status) return fail("status differs");
    if (again.reason_chain != r.reason_chain) return fail("reason chain differs");
    return true;
  }
  if (!r.children.empty()) return true;  // needs the whole replay
  if (r.status == Status::unbounded) return r.diagnostic.empty() ? fail("unbounded without diagnostic") : true;
  if (only_gronwall(r.moves)) return r.delta_exponent == Rational(0) ? true : fail("gronwall exponent");
  bool has_piece = std::any_of(r.moves.begin(), r.moves.end(), [](const Move& m) { return m.piece.has_value(); });
  if (!has_piece) return fail("no pieces");
  BoundReport again = bound_term(r.integrand, c, Strategy::scripted(r.moves));
  if (again.delta_exponent != r.delta_exponent) return fail("exponent differs");
  if (again.factor_tag != r.factor_tag) return fail("tag differs");
  if (again.leading_exponent != r.leading_exponent && r.children.empty()) {
    // auto reports keep only the error exponent
    if (r.leading_exponent) return fail("leading exponent differs");
  }
  return true;
}

bool recheck(const ReplayResult& rr, std::string* why) {
  const Campaign& c = campaign(rr.campaign);
  std::map<std::string, const BoundReport*> by_label;
  for (const auto& r : rr.reports) by_label[r.term_label] = &r;
  for (const auto& r : rr.reports) {
    if (!recheck(r, c, why)) return false;
    if (r.children.empty() || r.status == Status::vanishes) continue;
    if (!rr.scripted) continue;
    std::vector<const BoundReport*> kids;
    for (const auto& k : r.children) {
      auto it = by_label.find(k);
      if (it == by_label.end()) {
        if (why) *why = r.term_label + ": missing child " + k;
        return false;
      }
      kids.push_back(it->second);
    }
    BoundReport again;
    again.term_label = r.term_label;
    again.moves = r.moves;
    again.children = r.children;
    if (r.correction || std::any_of(r.moves.begin(), r.moves.end(), [](const Move& m) {
          return m.kind == MoveKind::sqrt_energy || m.kind == MoveKind::young;
        }) || r.term_label == "final") {
      Node n;
      n.kind = NodeKind::final_plain;
      for (const auto& m : r.moves) {
        if (m.kind == MoveKind::sqrt_energy) n.kind = NodeKind::final_sqrt;
        if (m.kind == MoveKind::young) n.kind = NodeKind::final_young;
      }
      finalize(again, n, c, kids);
    } else {
      combine(again, c, kids);
    }
    if (again.delta_exponent != r.delta_exponent || again.factor_tag != r.factor_tag || again.correction != r.correction ||
        again.status != r.status) {
      if (why) *why = r.term_label + ": aggregate differs";
      return false;
    }
  }
  return true;
}

}  // namespace nullcalc
