#include "cfw/proofcheck.hpp"

#include <algorithm>
#include <map>

namespace cfw {

// ---------------------------------------------------------------------------
// Justification tags

namespace {

const std::map<std::string, JustKind>& tag_names() {
  static const std::map<std::string, JustKind> names = {
      {"LOC1c", JustKind::Loc1c}, {"LOC1d", JustKind::Loc1d},
      {"LOC1e", JustKind::Loc1e}, {"LOC1f", JustKind::Loc1f},
      {"QM", JustKind::Qm},       {"From", JustKind::From},
      {"Eq2_1", JustKind::Eq21},  {"LOGIC", JustKind::Logic},
      {"LOC2", JustKind::Loc2},
  };
  return names;
}

std::string kind_name(JustKind k) {
  for (const auto& [name, kind] : tag_names())
    if (kind == k) return name;
  return "?";
}

}  // namespace

Justification Justification::parse_tag(const std::string& text) {
  Justification out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t end = text.find('+', i);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(i, end - i);
    // Trim.
    while (!piece.empty() && piece.front() == ' ') piece.erase(piece.begin());
    while (!piece.empty() && piece.back() == ' ') piece.pop_back();

    std::string args;
    const std::size_t paren = piece.find('(');
    if (paren != std::string::npos) {
      if (piece.back() != ')')
        throw Error("malformed justification tag '" + piece + "'");
      args = piece.substr(paren + 1, piece.size() - paren - 2);
      piece = piece.substr(0, paren);
    }
    const auto it = tag_names().find(piece);
    if (it == tag_names().end())
      throw Error("unknown justification tag '" + piece + "'");
    out.kinds.push_back(it->second);
    if (it->second == JustKind::Qm) {
      if (args.empty()) throw Error("QM tag needs a prediction id");
      out.qm_id = args;
    } else if (it->second == JustKind::From) {
      std::size_t p = 0;
      while (p < args.size()) {
        std::size_t comma = args.find(',', p);
        if (comma == std::string::npos) comma = args.size();
        out.from.push_back(std::stoi(args.substr(p, comma - p)));
        p = comma + 1;
      }
      if (out.from.empty()) throw Error("From tag needs line indices");
    } else if (!args.empty()) {
      throw Error("tag '" + piece + "' takes no arguments");
    }
    i = end + 1;
  }
  if (out.kinds.empty()) throw Error("empty justification tag");
  return out;
}

std::string Justification::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) out += "+";
    out += kind_name(kinds[i]);
    if (kinds[i] == JustKind::Qm) out += "(" + qm_id + ")";
    if (kinds[i] == JustKind::From) {
      out += "(";
      for (std::size_t j = 0; j < from.size(); ++j) {
        if (j) out += ",";
        out += std::to_string(from[j]);
      }
      out += ")";
    }
  }
  return out;
}

bool Justification::has(JustKind k) const {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

// ---------------------------------------------------------------------------
// Scripts

ProofScript::ProofScript(std::vector<ProofLine> lines)
    : lines_(std::move(lines)) {
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    const auto violations = validate_proof_line(lines_[i].formula);
    if (!violations.empty())
      throw Error("proof line " + std::to_string(i + 1) + " ill-formed: " +
                  to_string(violations.front()));
    for (int ref : lines_[i].just.from)
      if (ref < 1 || static_cast<std::size_t>(ref) > i)
        throw Error("proof line " + std::to_string(i + 1) +
                    " cites line " + std::to_string(ref) +
                    " which is not strictly earlier");
  }
}

const ProofLine& ProofScript::line(std::size_t idx1) const {
  if (idx1 < 1 || idx1 > lines_.size())
    throw BadIndexError("no proof line " + std::to_string(idx1));
  return lines_[idx1 - 1];
}

namespace {

struct HardyAtoms {
  Formula l1, l2, r1, r2;          // choices
  Formula l1p, l1m, l2p, l2m;      // L outcomes
  Formula r1p, r1m, r2p, r2m;      // R outcomes
  Atom r1_atom, r2_atom, l1_atom, l2_atom;
};

bool hardy_shaped(const Setup& s) {
  if (s.region_count() != 2) return false;
  for (std::size_t r = 0; r < 2; ++r) {
    if (s.region(r).measurements.size() < 2) return false;
    for (std::size_t m = 0; m < 2; ++m)
      if (s.region(r).measurements[m].outcomes.size() < 2) return false;
  }
  return true;
}

HardyAtoms hardy_atoms(const Setup& s) {
  if (!hardy_shaped(s))
    throw Error("setup is not two regions with two binary measurements each");
  HardyAtoms a{
      Formula::atom(Atom::choice(s, 0, 0)), Formula::atom(Atom::choice(s, 0, 1)),
      Formula::atom(Atom::choice(s, 1, 0)), Formula::atom(Atom::choice(s, 1, 1)),
      Formula::atom(Atom::outcome_atom(s, 0, 0, 0)),
      Formula::atom(Atom::outcome_atom(s, 0, 0, 1)),
      Formula::atom(Atom::outcome_atom(s, 0, 1, 0)),
      Formula::atom(Atom::outcome_atom(s, 0, 1, 1)),
      Formula::atom(Atom::outcome_atom(s, 1, 0, 0)),
      Formula::atom(Atom::outcome_atom(s, 1, 0, 1)),
      Formula::atom(Atom::outcome_atom(s, 1, 1, 0)),
      Formula::atom(Atom::outcome_atom(s, 1, 1, 1)),
      Atom::choice(s, 1, 0), Atom::choice(s, 1, 1),
      Atom::choice(s, 0, 0), Atom::choice(s, 0, 1)};
  return a;
}

}  // namespace

bool hardy_shaped_setup(const Setup& s) { return hardy_shaped(s); }

Formula prediction_statement(const Setup& s, const std::string& id) {
  const HardyAtoms a = hardy_atoms(s);
  auto conj3 = [](Formula x, Formula y, Formula z) {
    return Formula::conjunction_of({x, y, z});
  };
  if (id == "3.1")
    return Formula::strict(conj3(a.l2, a.r2, a.r2p), conj3(a.l2, a.r2, a.l2p));
  if (id == "3.2")
    return Formula::strict(conj3(a.l2, a.r1, a.l2p), conj3(a.l2, a.r1, a.r1m));
  if (id == "3.3")
    return Formula::strict(conj3(a.l1, a.r2, a.l1m), conj3(a.l1, a.r2, a.r2p));
  if (id == "3.4")
    return Formula::negation(
        Formula::strict(conj3(a.l1, a.r1, a.l1m), a.r1m));
  throw Error("unknown prediction id '" + id + "'");
}

ProofScript ProofScript::builtin(const Setup& s) {
  const HardyAtoms a = hardy_atoms(s);
  auto conj = [](std::vector<Formula> fs) {
    return Formula::conjunction_of(fs);
  };
  auto cf = [&](const Atom& c, Formula d) {
    return Formula::counterfactual(Formula::atom(c), std::move(d));
  };

  const Formula r1_and_minus = Formula::conjunction(a.r1, a.r1m);
  const Formula not_forced =
      Formula::negation(Formula::material(a.l1m, r1_and_minus));

  std::vector<std::pair<Formula, std::string>> raw = {
      {Formula::strict(conj({a.l2, a.r2, a.l2p}),
                       cf(a.r1_atom, conj({a.l2, a.r1, a.l2p}))),
       "LOC1c"},
      {Formula::strict(conj({a.l2, a.r2, a.r2p}), conj({a.l2, a.r2, a.l2p})),
       "QM(3.1)"},
      {Formula::strict(conj({a.l2, a.r1, a.l2p}), conj({a.l2, a.r1, a.r1m})),
       "QM(3.2)"},
      {Formula::strict(conj({a.l2, a.r2, a.r2p}),
                       cf(a.r1_atom, conj({a.l2, a.r1, a.r1m}))),
       "From(1,2,3)"},
      {Formula::strict(a.l2,
                       Formula::material(Formula::conjunction(a.r2, a.r2p),
                                         cf(a.r1_atom, r1_and_minus))),
       "LOC1e+Eq2_1"},
      {Formula::strict(a.l1,
                       Formula::material(Formula::conjunction(a.r2, a.r2p),
                                         cf(a.r1_atom, r1_and_minus))),
       "LOC2"},
      {Formula::strict(Formula::conjunction(a.l1, a.r2),
                       Formula::material(a.r2p, cf(a.r1_atom, r1_and_minus))),
       "LOGIC"},
      {Formula::strict(Formula::conjunction(a.l1, a.r2),
                       Formula::material(a.l1m, a.r2p)),
       "QM(3.3)"},
      {Formula::strict(Formula::conjunction(a.l1, a.r2),
                       Formula::material(a.l1m, cf(a.r1_atom, r1_and_minus))),
       "From(7,8)"},
      {Formula::strict(conj({a.l1, a.r2, a.l1m}), cf(a.r1_atom, r1_and_minus)),
       "Eq2_1"},
      {Formula::strict(Formula::conjunction(a.l1, a.r2),
                       cf(a.r1_atom, Formula::material(a.l1m, r1_and_minus))),
       "LOC1d"},
      {Formula::strict(a.l1, Formula::material(a.r1, not_forced)), "QM(3.4)"},
      {Formula::strict(a.l1, cf(a.r1_atom, not_forced)), "LOC1f"},
      {Formula::strict(Formula::conjunction(a.l1, a.r2),
                       cf(a.r1_atom, not_forced)),
       "LOGIC"},
  };

  std::vector<ProofLine> lines;
  for (auto& [f, tag] : raw)
    lines.push_back({f, Justification::parse_tag(tag), print(f)});
  return ProofScript(std::move(lines));
}

// ---------------------------------------------------------------------------
// Canonical forms and rewrite generators

namespace {

// Conjunction chains are compared as multisets: sort conjuncts by their
// printed form and rebuild right-associated.
Formula canonicalize(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return f;
    case Op::Not:
      return Formula::negation(canonicalize(f.lhs()));
    case Op::And: {
      std::vector<Formula> cs;
      for (const auto& c : f.conjuncts()) cs.push_back(canonicalize(c));
      std::sort(cs.begin(), cs.end(), [](const Formula& x, const Formula& y) {
        return print(x) < print(y);
      });
      return Formula::conjunction_of(cs);
    }
    case Op::Or:
      return Formula::disjunction(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case Op::Material:
      return Formula::material(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case Op::Counterfactual:
      return Formula::counterfactual(canonicalize(f.lhs()),
                                     canonicalize(f.rhs()));
    case Op::Strict:
      return Formula::strict(canonicalize(f.lhs()), canonicalize(f.rhs()));
  }
  throw Error("unreachable");
}

bool same_formula(const Formula& a, const Formula& b) {
  return canonicalize(a) == canonicalize(b);
}

// Nonempty proper subsets of {0..n-1}, as bitmasks, smallest first.
std::vector<uint32_t> proper_subsets(std::size_t n) {
  std::vector<uint32_t> out;
  const uint32_t all = (uint32_t{1} << n) - 1;
  for (uint32_t m = 1; m < all; ++m) out.push_back(m);
  return out;
}

std::pair<Formula, Formula> split_conjuncts(const std::vector<Formula>& cs,
                                            uint32_t picked_mask) {
  std::vector<Formula> picked, rest;
  for (std::size_t i = 0; i < cs.size(); ++i)
    ((picked_mask >> i) & 1 ? picked : rest).push_back(cs[i]);
  return {Formula::conjunction_of(picked), Formula::conjunction_of(rest)};
}

// The import/export rewrite in both directions.
std::vector<Formula> eq21_variants(const Formula& f) {
  std::vector<Formula> out;
  if (f.op() != Op::Strict) return out;
  // Import: [X => (Y -> Z)]  ->  [X & Y => Z]
  if (f.rhs().op() == Op::Material)
    out.push_back(Formula::strict(
        Formula::conjunction(f.lhs(), f.rhs().lhs()), f.rhs().rhs()));
  // Export: [X & Y => Z]  ->  [X => (Y -> Z)], every split
  const auto cs = f.lhs().conjuncts();
  if (cs.size() >= 2)
    for (uint32_t mask : proper_subsets(cs.size())) {
      auto [picked, rest] = split_conjuncts(cs, mask);
      out.push_back(
          Formula::strict(rest, Formula::material(picked, f.rhs())));
    }
  return out;
}

bool cf_shape(const Formula& f, Atom& c, Formula& d) {
  if (f.op() != Op::Counterfactual) return false;
  if (f.lhs().op() != Op::Atom ||
      f.lhs().as_atom().kind != AtomKind::Choice)
    return false;
  c = f.lhs().as_atom();
  d = f.rhs();
  return true;
}

// Moving a faraway condition across the counterfactual, both directions.
std::vector<Formula> loc1d_variants(const Model& m, const Formula& f) {
  std::vector<Formula> out;
  if (f.op() != Op::Strict) return out;
  Atom c;
  Formula d;
  // [(A & B) => (c []-> D)] -> [A => (c []-> (B -> D))]
  if (cf_shape(f.rhs(), c, d)) {
    const auto cs = f.lhs().conjuncts();
    if (cs.size() >= 2)
      for (uint32_t mask : proper_subsets(cs.size())) {
        auto [b, a] = split_conjuncts(cs, mask);
        if (!outside_forward_cone(m, b, c)) continue;
        out.push_back(Formula::strict(
            a, Formula::counterfactual(Formula::atom(c),
                                       Formula::material(b, d))));
      }
  }
  // [A => (c []-> (B -> D))] -> [(A & B) => (c []-> D)]
  if (cf_shape(f.rhs(), c, d) && d.op() == Op::Material) {
    const Formula& b = d.lhs();
    if (outside_forward_cone(m, b, c))
      out.push_back(Formula::strict(
          Formula::conjunction(f.lhs(), b),
          Formula::counterfactual(Formula::atom(c), d.rhs())));
  }
  return out;
}

// Adding or dropping a faraway conjunct inside the counterfactual consequent.
std::vector<Formula> loc1e_variants(const Model& m, const Formula& f) {
  std::vector<Formula> out;
  if (f.op() != Op::Strict) return out;
  Atom c;
  Formula d;
  if (!cf_shape(f.rhs(), c, d)) return out;
  const auto ante = f.lhs().conjuncts();

  // Drop: consequent B & D with B drawn from the antecedent, outside V+(c).
  const auto dcs = d.conjuncts();
  if (dcs.size() >= 2)
    for (uint32_t mask : proper_subsets(dcs.size())) {
      auto [b, rest] = split_conjuncts(dcs, mask);
      if (!outside_forward_cone(m, b, c)) continue;
      bool in_ante = true;
      for (const auto& bc : b.conjuncts())
        in_ante = in_ante &&
                  std::find(ante.begin(), ante.end(), bc) != ante.end();
      if (!in_ante) continue;
      out.push_back(Formula::strict(
          f.lhs(), Formula::counterfactual(Formula::atom(c), rest)));
    }

  // Add: any antecedent subset outside V+(c) onto the consequent.
  for (uint32_t mask = 1; mask < (uint32_t{1} << ante.size()); ++mask) {
    std::vector<Formula> picked;
    for (std::size_t i = 0; i < ante.size(); ++i)
      if ((mask >> i) & 1) picked.push_back(ante[i]);
    const Formula b = Formula::conjunction_of(picked);
    if (!outside_forward_cone(m, b, c)) continue;
    out.push_back(Formula::strict(
        f.lhs(), Formula::counterfactual(Formula::atom(c),
                                         Formula::conjunction(b, d))));
  }
  return out;
}

// [B => (c -> D)] -> [B => (c []-> D)], B outside V+(c).
std::vector<Formula> loc1f_variants(const Model& m, const Formula& f) {
  std::vector<Formula> out;
  if (f.op() != Op::Strict || f.rhs().op() != Op::Material) return out;
  const Formula& cond = f.rhs().lhs();
  if (cond.op() != Op::Atom || cond.as_atom().kind != AtomKind::Choice)
    return out;
  const Atom c = cond.as_atom();
  if (!outside_forward_cone(m, f.lhs(), c)) return out;
  out.push_back(Formula::strict(
      f.lhs(), Formula::counterfactual(cond, f.rhs().rhs())));
  return out;
}

std::vector<Formula> apply_kind(const Model& m, JustKind k, const Formula& f) {
  switch (k) {
    case JustKind::Eq21: return eq21_variants(f);
    case JustKind::Loc1d: return loc1d_variants(m, f);
    case JustKind::Loc1e: return loc1e_variants(m, f);
    case JustKind::Loc1f: return loc1f_variants(m, f);
    default: return {};
  }
}

// World-wise content of a proof line: the matrix of a top-level strict
// conditional, the line itself otherwise.
Formula line_matrix(const Formula& f) {
  if (f.op() == Op::Strict) return Formula::material(f.lhs(), f.rhs());
  return f;
}

// Violation set of a strict line over every logical world, for comparing
// statement content independently of the physical filter.
WorldSet logical_violation_set(const Model& m, const Formula& strict_f) {
  const WorldSet matrix = extension_logical(m, line_matrix(strict_f));
  return WorldSet::full(m.worlds().size()).set_difference(matrix);
}

LineVerdict check_qm_line(const Model& m, const ProofLine& line) {
  LineVerdict v;
  const std::string& id = line.just.qm_id;
  Formula pred;
  try {
    pred = prediction_statement(m.setup(), id);
  } catch (const Error& e) {
    v.reason = e.what();
    return v;
  }
  if (line.formula.contains(Op::Counterfactual)) {
    v.reason = "a prediction line cannot contain a counterfactual";
    return v;
  }

  const bool line_negated = line.formula.op() == Op::Not;
  const bool pred_negated = pred.op() == Op::Not;
  const Formula line_core = line_negated ? line.formula.lhs() : line.formula;
  const Formula pred_core = pred_negated ? pred.lhs() : pred;

  if (line_core.op() != Op::Strict) {
    v.reason = "a prediction line must be a strict conditional";
    return v;
  }

  const WorldSet content = logical_violation_set(m, line_core);
  const WorldSet pred_content = logical_violation_set(m, pred_core);
  const WorldSet phys_violation =
      m.physical().set_difference(extension(m, line_matrix(line_core)));

  if (line_negated != pred_negated) {
    // The recognized contested pattern: a strict line cited to the
    // positivity prediction. Report the plain-semantics evaluation.
    v.reason = "prediction " + id +
               " asserts nonemptiness and cannot yield a strict line";
    if (!phys_violation.empty()) v.witness = phys_violation.first();
    v.contested = !line_negated && id == "3.4";
    return v;
  }

  if (!(content == pred_content)) {
    v.reason = "formula does not restate prediction " + id;
    return v;
  }

  const bool pred_holds = line_negated ? !phys_violation.empty()
                                       : phys_violation.empty();
  if (!pred_holds) {
    v.reason = "prediction " + id + " fails in this model";
    if (!line_negated && !phys_violation.empty())
      v.witness = phys_violation.first();
    return v;
  }
  v.status = LineStatus::Pass;
  v.reason = "restates prediction " + id;
  return v;
}

LineVerdict check_loc1c_line(const Model& m, const ProofLine& line) {
  LineVerdict v;
  if (line.formula.op() != Op::Strict) {
    v.reason = "LOC1c line must be a strict conditional";
    return v;
  }
  Atom c;
  Formula d;
  if (!cf_shape(line.formula.rhs(), c, d)) {
    v.reason = "LOC1c line must conclude with a counterfactual";
    return v;
  }
  switch (check_loc1c_instance(m, line.formula.lhs(), c, d)) {
    case LemmaVerdict::Pass:
      v.status = LineStatus::Pass;
      v.reason = "locality instance holds";
      return v;
    case LemmaVerdict::SideConditionViolated:
      v.reason = "consequent claims conditions inside the change cone";
      return v;
    case LemmaVerdict::Fail:
      v.reason = "locality instance fails in this model";
      return v;
  }
  return v;
}

LineVerdict check_rewrite_line(const Model& m, const ProofScript& script,
                               std::size_t idx1) {
  const ProofLine& line = script.line(idx1);
  LineVerdict v;
  for (std::size_t src = 1; src < idx1; ++src) {
    std::vector<Formula> frontier{script.line(src).formula};
    for (JustKind k : line.just.kinds) {
      std::vector<Formula> next;
      for (const auto& f : frontier)
        for (auto& g : apply_kind(m, k, f)) next.push_back(std::move(g));
      frontier = std::move(next);
    }
    for (const auto& f : frontier) {
      if (!same_formula(f, line.formula)) continue;
      const bool src_valid = model_valid(m, script.line(src).formula);
      const bool line_valid = model_valid(m, line.formula);
      const bool entailment_only = line.just.has(JustKind::Loc1f);
      const bool sound =
          entailment_only ? (!src_valid || line_valid) : (src_valid == line_valid);
      if (!sound) {
        v.reason = "rewrite of line " + std::to_string(src) +
                   " is not semantically sound here";
        return v;
      }
      v.status = LineStatus::Pass;
      v.reason = "from line " + std::to_string(src) + " by " +
                 line.just.to_text();
      return v;
    }
  }
  v.reason = "no earlier line yields this formula by " + line.just.to_text();
  return v;
}

LineVerdict check_entailment_line(const Model& m, const ProofScript& script,
                                  std::size_t idx1) {
  const ProofLine& line = script.line(idx1);
  LineVerdict v;
  std::vector<int> premises = line.just.from;
  if (premises.empty())  // LOGIC: every earlier line
    for (std::size_t i = 1; i < idx1; ++i)
      premises.push_back(static_cast<int>(i));

  WorldSet premise_ext = m.physical();
  for (int p : premises) {
    if (p < 1 || static_cast<std::size_t>(p) >= idx1) {
      v.reason = "cited line " + std::to_string(p) + " is not earlier";
      return v;
    }
    premise_ext = premise_ext.set_intersection(
        extension(m, line_matrix(script.line(p).formula)));
  }
  const WorldSet target = extension(m, line_matrix(line.formula));
  if (premise_ext.subset_of(target)) {
    v.status = LineStatus::Pass;
    v.reason = "entailed world-wise by cited lines";
    return v;
  }
  v.reason = "not entailed by the cited lines";
  v.witness = premise_ext.set_difference(target).first();
  return v;
}

LineVerdict check_loc2_line(const Model& m, const ProofScript& script,
                            std::size_t idx1) {
  const ProofLine& line = script.line(idx1);
  LineVerdict v;
  for (std::size_t src = 1; src < idx1; ++src) {
    try {
      const Formula t = loc2_transform(script.line(src).formula, m.setup());
      if (same_formula(t, line.formula)) {
        v.status = LineStatus::Flag;
        v.reason = "assumption-injected";
        return v;
      }
    } catch (const ShapeMismatchError&) {
    }
  }
  v.reason = "not the locality-2 transform of any earlier line";
  return v;
}

}  // namespace

LineVerdict check_line(const Model& m, const ProofScript& script,
                       std::size_t idx) {
  const ProofLine& line = script.line(idx);
  const JustKind primary = line.just.kinds.front();

  if (line.just.has(JustKind::Loc2)) return check_loc2_line(m, script, idx);
  if (primary == JustKind::Qm) return check_qm_line(m, line);
  if (primary == JustKind::Loc1c) return check_loc1c_line(m, line);
  if (primary == JustKind::From || primary == JustKind::Logic)
    return check_entailment_line(m, script, idx);
  return check_rewrite_line(m, script, idx);
}

Formula loc2_transform(const Formula& f, const Setup& setup) {
  if (f.op() != Op::Strict || f.lhs().op() != Op::Atom)
    throw ShapeMismatchError("antecedent is not a single atom");
  const Atom& a = f.lhs().as_atom();
  if (a.kind != AtomKind::Choice)
    throw ShapeMismatchError("antecedent is not a choice atom");
  if (a.measurement != 1)
    throw ShapeMismatchError(
        "antecedent must be the second measurement of its region");
  if (f.rhs().op() != Op::Material ||
      f.rhs().rhs().op() != Op::Counterfactual)
    throw ShapeMismatchError(
        "consequent is not a conditional ending in a counterfactual");
  const Atom replacement = Atom::choice(setup, a.region, 0);
  return Formula::strict(Formula::atom(replacement), f.rhs());
}

bool line5_constraint_forced(const Model& m) {
  const HardyAtoms a = hardy_atoms(m.setup());
  const Formula premise = Formula::conjunction_of({a.l2, a.r2, a.r2p});
  const WorldSet target =
      extension(m, Formula::conjunction(a.r1, a.r1m));
  for (std::size_t i : extension(m, premise).indices())
    if (!accessible_worlds(m, m.world(i), a.r1_atom).subset_of(target))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Candidate space and the contradiction search

CandidateSpace enumerate_candidates(const Model& m, uint64_t bound) {
  const HardyAtoms a = hardy_atoms(m.setup());
  CandidateSpace space;
  for (std::size_t i : extension(m, a.r2).indices()) {
    space.constrained_worlds.push_back(i);
    space.accessible.push_back(
        accessible_worlds(m, m.world(i), a.r1_atom).indices());
  }
  for (const auto& acc : space.accessible) {
    if (acc.size() > 20)
      throw CapacityError("accessible set too large to enumerate");
    const uint64_t radix =
        acc.empty() ? 1 : (uint64_t{1} << acc.size()) - 1;
    if (space.total > bound / radix)
      throw CapacityError("candidate space exceeds bound " +
                          std::to_string(bound));
    space.radix.push_back(radix);
    space.total *= radix;
  }
  return space;
}

std::vector<std::size_t> CandidateSpace::successors(uint64_t idx,
                                                    std::size_t k) const {
  uint64_t rest = idx;
  for (std::size_t j = 0; j < k; ++j) rest /= radix[j];
  const uint64_t digit = rest % radix[k];
  std::vector<std::size_t> out;
  if (accessible[k].empty()) return out;
  const uint64_t mask = digit + 1;  // nonempty subsets only
  for (std::size_t b = 0; b < accessible[k].size(); ++b)
    if ((mask >> b) & 1) out.push_back(accessible[k][b]);
  return out;
}

std::vector<Constraint> contradiction_constraints(const Model& m) {
  const HardyAtoms a = hardy_atoms(m.setup());
  const WorldSet phys = m.physical();
  std::vector<Constraint> out;
  out.push_back({"C-LOC2", extension(m, Formula::conjunction(a.r2, a.r2p)),
                 extension(m, a.r1m)});
  const WorldSet l1r2 = extension(m, Formula::conjunction(a.l1, a.r2));
  out.push_back({"C-11", l1r2,
                 phys.set_difference(extension(
                     m, Formula::conjunction(Formula::negation(a.r1m), a.l1m)))});
  out.push_back({"C-14", l1r2,
                 phys.set_difference(extension(
                     m, Formula::disjunction(a.r1m, Formula::negation(a.l1m))))});
  return out;
}

SearchResult search_constraints(const Model& m, const CandidateSpace& space,
                                const std::vector<std::string>& ids,
                                bool require_nonempty) {
  SearchResult res;
  res.constraint_ids = ids;
  res.require_nonempty = require_nonempty;

  std::vector<Constraint> active;
  for (const auto& c : contradiction_constraints(m))
    if (std::find(ids.begin(), ids.end(), c.id) != ids.end())
      active.push_back(c);

  // Per constrained world: the constraints that speak about it, and the
  // successor mask each one allows.
  const std::size_t nk = space.constrained_worlds.size();
  std::vector<std::vector<std::pair<std::string, uint32_t>>> allowed(nk);
  std::vector<uint32_t> acc_mask(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    const std::size_t w = space.constrained_worlds[k];
    acc_mask[k] = (uint32_t{1} << space.accessible[k].size()) - 1;
    for (const auto& c : active) {
      if (!c.constrained.test(w)) continue;
      uint32_t mask = 0;
      for (std::size_t b = 0; b < space.accessible[k].size(); ++b)
        if (c.allowed.test(space.accessible[k][b])) mask |= uint32_t{1} << b;
      allowed[k].push_back({c.id, mask});
    }
  }

  // Where do the constraints jointly leave no successor although each one
  // alone leaves some?
  for (std::size_t k = 0; k < nk; ++k) {
    uint32_t joint = acc_mask[k];
    bool each_alone = !allowed[k].empty();
    for (const auto& [id, mask] : allowed[k]) {
      joint &= mask;
      each_alone = each_alone && (mask & acc_mask[k]) != 0;
    }
    if (!allowed[k].empty() && joint == 0) {
      res.forced_empty_worlds.push_back(space.constrained_worlds[k]);
      if (each_alone && allowed[k].size() >= 2 && !res.conflict_witness) {
        res.conflict_witness = space.constrained_worlds[k];
        res.conflicting = {allowed[k][0].first, allowed[k][1].first};
      }
    }
  }

  res.searched = space.total;
  for (uint64_t idx = 0; idx < space.total; ++idx) {
    bool ok = true;
    for (std::size_t k = 0; k < nk && ok; ++k) {
      const auto succ = space.successors(idx, k);
      if (succ.empty()) {
        if (require_nonempty) {
          res.violations.push_back(
              {idx, "NE", space.constrained_worlds[k]});
          ok = false;
        }
        continue;
      }
      uint32_t mask = 0;
      for (std::size_t b = 0; b < space.accessible[k].size(); ++b)
        if (std::find(succ.begin(), succ.end(), space.accessible[k][b]) !=
            succ.end())
          mask |= uint32_t{1} << b;
      for (const auto& [id, amask] : allowed[k]) {
        if ((mask & ~amask) != 0) {
          res.violations.push_back({idx, id, space.constrained_worlds[k]});
          ok = false;
          break;
        }
      }
    }
    if (ok && !res.sat) {
      res.sat = true;
      res.sat_candidate = idx;
      for (std::size_t k = 0; k < nk; ++k)
        res.sat_successors.push_back(space.successors(idx, k));
    }
  }
  return res;
}

ContradictionReport verify_contradiction(const Model& m, uint64_t bound) {
  const CandidateSpace space = enumerate_candidates(m, bound);
  ContradictionReport rep;
  rep.searched = space.total;
  rep.c11_c14 = search_constraints(m, space, {"C-11", "C-14"}, true);
  rep.loc2_c14 = search_constraints(m, space, {"C-LOC2", "C-14"}, true);
  rep.loc2_c11 = search_constraints(m, space, {"C-LOC2", "C-11"}, true);
  return rep;
}

Line12Report check_line12_readings(const Model& m) {
  const HardyAtoms a = hardy_atoms(m.setup());
  Line12Report rep;
  rep.crossref = "see proof.line.12";

  // The line itself, read as an emptiness claim over the physical worlds.
  const Formula claim = Formula::conjunction_of(
      {a.l1, a.r1,
       Formula::material(a.l1m, Formula::conjunction(a.r1, a.r1m))});
  const WorldSet claim_set = extension(m, claim);
  rep.entries.push_back({"literal-empty", claim_set.empty(),
                         claim_set.empty()
                             ? std::nullopt
                             : std::optional<std::size_t>(claim_set.first())});

  // What detector completeness turns that claim into: some world with
  // L1 & R1 & L1- & ~R1-.
  const WorldSet consequence = extension(
      m, Formula::conjunction_of(
             {a.l1, a.r1, a.l1m, Formula::negation(a.r1m)}));
  rep.entries.push_back(
      {"nonempty-consequence", !consequence.empty(),
       consequence.empty() ? std::nullopt
                           : std::optional<std::size_t>(consequence.first())});

  // The positivity prediction evaluated through the strict conditional.
  const bool paradox =
      !holds_strict(m, Formula::conjunction_of({a.l1, a.r1, a.l1m}), a.r1m);
  const WorldSet exhibit =
      extension(m, Formula::conjunction_of({a.l1, a.r1, a.l1m}))
          .set_difference(extension(m, a.r1m));
  rep.entries.push_back(
      {"paradox-nonempty", paradox,
       exhibit.empty() ? std::nullopt
                       : std::optional<std::size_t>(exhibit.first())});
  return rep;
}

std::string to_string(LineStatus s) {
  switch (s) {
    case LineStatus::Pass: return "PASS";
    case LineStatus::Fail: return "FAIL";
    case LineStatus::Flag: return "FLAG";
  }
  return "?";
}

ScriptReport run_script(const Model& m, const ProofScript& script,
                        uint64_t bound) {
  ScriptReport rep;
  for (std::size_t i = 1; i <= script.lines().size(); ++i)
    rep.verdicts.push_back(check_line(m, script, i));
  rep.line12 = check_line12_readings(m);
  rep.contradiction = verify_contradiction(m, bound);

  bool lines_ok = true;
  for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
    const auto& v = rep.verdicts[i];
    const bool acceptable =
        v.status == LineStatus::Pass ||
        (v.status == LineStatus::Flag &&
         script.lines()[i].just.has(JustKind::Loc2)) ||
        (v.status == LineStatus::Fail && v.contested);
    lines_ok = lines_ok && acceptable;
  }
  if (!lines_ok)
    rep.status = "LINES-FAILED";
  else if (!rep.contradiction.c11_c14.sat)
    rep.status = "THEOREM-REPLAYED";
  else
    rep.status = "NO-CONTRADICTION";
  return rep;
}

}  // namespace cfw
