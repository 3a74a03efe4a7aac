#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cfw/setup.hpp"

namespace cfw {

enum class AtomKind : uint8_t { Choice, Outcome };

/// A propositional atom of the experiment language. "R1" asserts that
/// measurement R1 is chosen and performed in region R; "R1+" asserts that it
/// is performed and yields outcome +.
struct Atom {
  AtomKind kind = AtomKind::Choice;
  uint8_t region = 0;
  uint8_t measurement = 0;
  uint8_t outcome = 0;  // meaningful for Outcome atoms only
  std::string text;     // token as written, e.g. "L2+"

  static Atom choice(const Setup& s, std::size_t region, std::size_t m);
  static Atom outcome_atom(const Setup& s, std::size_t region, std::size_t m,
                           std::size_t o);

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.region == b.region &&
           a.measurement == b.measurement &&
           (a.kind == AtomKind::Choice || a.outcome == b.outcome);
  }
};

enum class Op : uint8_t {
  Atom,
  Not,
  And,
  Or,
  Material,        // ->
  Counterfactual,  // []->
  Strict,          // =>
};

/// Immutable formula tree with value semantics (nodes are shared).
class Formula {
public:
  Formula() = default;

  static Formula atom(Atom a);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula material(Formula a, Formula b);
  static Formula counterfactual(Formula a, Formula b);
  static Formula strict(Formula a, Formula b);

  /// Right-associated conjunction of one or more formulas.
  static Formula conjunction_of(const std::vector<Formula>& fs);

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  const Atom& as_atom() const;
  const Formula& lhs() const;  // also the operand of Not
  const Formula& rhs() const;

  bool contains(Op op) const;
  /// No strict conditional and no counterfactual anywhere.
  bool rudimentary() const;
  /// Indices of the regions whose atoms occur in the formula.
  std::set<std::size_t> region_support() const;
  /// And-tree flattened left to right.
  std::vector<Formula> conjuncts() const;

  friend bool operator==(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, Atom atom, Formula lhs, Formula rhs);
  std::shared_ptr<const Node> node_;
};

/// Parses the formula grammar:
///
///   formula := strict
///   strict  := cf ("=>" cf)?
///   cf      := cond ("[]->" cond)?
///   cond    := disj ("->" cond)?
///   disj    := conj ("|" conj)*
///   conj    := unary ("&" unary)*
///   unary   := "~" unary | "(" formula ")" | atom
///   atom    := measurement label with optional trailing "+" or "-"
///
/// Precedence is ~ > & > | > -> > []-> > =>, conditionals associate to the
/// right, whitespace between tokens is ignored. Atom tokens must name
/// measurements declared in `setup`; throws SyntaxError / UnknownAtomError.
Formula parse(const std::string& text, const Setup& setup);

/// Canonical text; parse(print(f)) == f structurally.
std::string print(const Formula& f);

enum class ProofLineViolation {
  NestedStrict,           // a strict conditional below the top level
  MultipleStrict,         // more than one strict conditional
  CompoundCfAntecedent,   // counterfactual antecedent not an atom
  NonChoiceCfAntecedent,  // counterfactual antecedent an outcome atom
};

std::string to_string(ProofLineViolation v);

/// Checks the shape every proof line must have: at most one strict
/// conditional, placed at the top, and counterfactual antecedents that are
/// single choice atoms. Empty result means the line is well formed.
std::vector<ProofLineViolation> validate_proof_line(const Formula& f);

}  // namespace cfw
