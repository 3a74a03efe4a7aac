#include "cfw/formula.hpp"

#include <algorithm>
#include <cctype>

namespace cfw {

struct Formula::Node {
  Op op;
  Atom atom;
  Formula lhs;
  Formula rhs;
};

Atom Atom::choice(const Setup& s, std::size_t region, std::size_t m) {
  Atom a;
  a.kind = AtomKind::Choice;
  a.region = static_cast<uint8_t>(region);
  a.measurement = static_cast<uint8_t>(m);
  a.text = s.region(region).measurements.at(m).label;
  return a;
}

Atom Atom::outcome_atom(const Setup& s, std::size_t region, std::size_t m,
                        std::size_t o) {
  Atom a;
  a.kind = AtomKind::Outcome;
  a.region = static_cast<uint8_t>(region);
  a.measurement = static_cast<uint8_t>(m);
  a.outcome = static_cast<uint8_t>(o);
  const auto& meas = s.region(region).measurements.at(m);
  a.text = meas.label + meas.outcomes.at(o);
  return a;
}

Formula Formula::make(Op op, Atom atom, Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->atom = std::move(atom);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::atom(Atom a) { return make(Op::Atom, std::move(a), {}, {}); }
Formula Formula::negation(Formula f) {
  return make(Op::Not, {}, std::move(f), {});
}
Formula Formula::conjunction(Formula a, Formula b) {
  return make(Op::And, {}, std::move(a), std::move(b));
}
Formula Formula::disjunction(Formula a, Formula b) {
  return make(Op::Or, {}, std::move(a), std::move(b));
}
Formula Formula::material(Formula a, Formula b) {
  return make(Op::Material, {}, std::move(a), std::move(b));
}
Formula Formula::counterfactual(Formula a, Formula b) {
  return make(Op::Counterfactual, {}, std::move(a), std::move(b));
}
Formula Formula::strict(Formula a, Formula b) {
  return make(Op::Strict, {}, std::move(a), std::move(b));
}

Formula Formula::conjunction_of(const std::vector<Formula>& fs) {
  if (fs.empty()) throw Error("empty conjunction");
  Formula out = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;)
    out = conjunction(fs[i], out);
  return out;
}

Op Formula::op() const {
  if (!node_) throw Error("empty formula");
  return node_->op;
}
const Atom& Formula::as_atom() const {
  if (op() != Op::Atom) throw Error("formula is not an atom");
  return node_->atom;
}
const Formula& Formula::lhs() const {
  if (!node_) throw Error("empty formula");
  return node_->lhs;
}
const Formula& Formula::rhs() const {
  if (!node_) throw Error("empty formula");
  return node_->rhs;
}

bool Formula::contains(Op op) const {
  if (!node_) return false;
  if (node_->op == op) return true;
  if (node_->op == Op::Atom) return false;
  if (node_->lhs.valid() && node_->lhs.contains(op)) return true;
  return node_->rhs.valid() && node_->rhs.contains(op);
}

bool Formula::rudimentary() const {
  return !contains(Op::Strict) && !contains(Op::Counterfactual);
}

std::set<std::size_t> Formula::region_support() const {
  std::set<std::size_t> out;
  if (!node_) return out;
  if (node_->op == Op::Atom) {
    out.insert(node_->atom.region);
    return out;
  }
  if (node_->lhs.valid())
    for (auto r : node_->lhs.region_support()) out.insert(r);
  if (node_->rhs.valid())
    for (auto r : node_->rhs.region_support()) out.insert(r);
  return out;
}

std::vector<Formula> Formula::conjuncts() const {
  if (valid() && op() == Op::And) {
    auto left = lhs().conjuncts();
    auto right = rhs().conjuncts();
    left.insert(left.end(), right.begin(), right.end());
    return left;
  }
  return {*this};
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->op != b.node_->op) return false;
  if (a.node_->op == Op::Atom) return a.node_->atom == b.node_->atom;
  if (a.node_->op == Op::Not) return a.node_->lhs == b.node_->lhs;
  return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Atom, Not, And, Or, Material, Counterfactual, Strict,
                 LParen, RParen, End };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Atom: return "atom";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Material: return "'->'";
    case Tok::Counterfactual: return "'[]->'";
    case Tok::Strict: return "'=>'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;  // atom token
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](const char* lit) {
    return s.compare(i, std::string::traits_type::length(lit), lit) == 0;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '~') { out.push_back({Tok::Not, "", i++}); continue; }
    if (c == '&') { out.push_back({Tok::And, "", i++}); continue; }
    if (c == '|') { out.push_back({Tok::Or, "", i++}); continue; }
    if (c == '(') { out.push_back({Tok::LParen, "", i++}); continue; }
    if (c == ')') { out.push_back({Tok::RParen, "", i++}); continue; }
    if (starts("[]->")) { out.push_back({Tok::Counterfactual, "", i}); i += 4; continue; }
    if (starts("=>")) { out.push_back({Tok::Strict, "", i}); i += 2; continue; }
    if (starts("->")) { out.push_back({Tok::Material, "", i}); i += 2; continue; }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < s.size() &&
             std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
      std::string name = s.substr(start, i - start);
      // A trailing sign belongs to the atom unless it opens a '->'.
      if (i < s.size() && (s[i] == '+' || s[i] == '-') &&
          !(s[i] == '-' && i + 1 < s.size() && s[i + 1] == '>')) {
        name += s[i];
        ++i;
      }
      out.push_back({Tok::Atom, std::move(name), start});
      continue;
    }
    throw SyntaxError(i, {"atom", "'~'", "'('"},
                      std::string("'") + c + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> toks, const Setup& setup)
      : toks_(std::move(toks)), setup_(setup) {}

  Formula run() {
    Formula f = formula();
    expect(Tok::End);
    return f;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token advance() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k) {
    if (!accept(k))
      throw SyntaxError(peek().pos, {tok_name(k)}, tok_name(peek().kind));
  }

  Formula formula() { return strict(); }

  Formula strict() {
    Formula left = cf();
    if (accept(Tok::Strict)) return Formula::strict(left, cf());
    return left;
  }

  Formula cf() {
    Formula left = cond();
    if (accept(Tok::Counterfactual))
      return Formula::counterfactual(left, cond());
    return left;
  }

  Formula cond() {
    Formula left = disj();
    if (accept(Tok::Material)) return Formula::material(left, cond());
    return left;
  }

  Formula disj() {
    Formula left = conj();
    while (accept(Tok::Or)) left = Formula::disjunction(left, conj());
    return left;
  }

  Formula conj() {
    Formula left = unary();
    while (accept(Tok::And)) left = Formula::conjunction(left, unary());
    return left;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
    if (peek().kind == Tok::Atom) {
      Token t = advance();
      return Formula::atom(resolve_atom(t));
    }
    throw SyntaxError(peek().pos, {"atom", "'~'", "'('"},
                      tok_name(peek().kind));
  }

  Atom resolve_atom(const Token& t) {
    std::string name = t.text;
    char sign = 0;
    if (!name.empty() && (name.back() == '+' || name.back() == '-')) {
      sign = name.back();
      name.pop_back();
    }
    auto rm = setup_.find_measurement(name);
    if (!rm) throw UnknownAtomError(t.pos, t.text);
    if (!sign) return Atom::choice(setup_, rm->first, rm->second);
    const auto& outs =
        setup_.region(rm->first).measurements[rm->second].outcomes;
    for (std::size_t o = 0; o < outs.size(); ++o)
      if (outs[o] == std::string(1, sign))
        return Atom::outcome_atom(setup_, rm->first, rm->second, o);
    throw UnknownAtomError(t.pos, t.text);
  }

  std::vector<Token> toks_;
  const Setup& setup_;
  std::size_t pos_ = 0;
};

}  // namespace

SyntaxError::SyntaxError(std::size_t position,
                         std::vector<std::string> expected,
                         const std::string& found)
    : Error([&] {
        std::string msg =
            "syntax error at offset " + std::to_string(position) + ": found " +
            found + ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i) msg += " or ";
          msg += expected[i];
        }
        return msg;
      }()),
      position_(position),
      expected_(std::move(expected)) {}

Formula parse(const std::string& text, const Setup& setup) {
  return Parser(lex(text), setup).run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength, loosest first. Parenthesize a child whose operator binds
// no tighter than its parent (conditionals keep right-nesting implicit).
int strength(Op op) {
  switch (op) {
    case Op::Strict: return 0;
    case Op::Counterfactual: return 1;
    case Op::Material: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    case Op::Atom: return 6;
  }
  return 6;
}

void print_rec(const Formula& f, int min_strength, std::string& out) {
  const Op op = f.op();
  const int s = strength(op);
  const bool parens = s < min_strength;
  if (parens) out += '(';
  switch (op) {
    case Op::Atom:
      out += f.as_atom().text;
      break;
    case Op::Not:
      out += '~';
      print_rec(f.lhs(), strength(Op::Not), out);
      break;
    case Op::And:
      print_rec(f.lhs(), s + 1, out);
      out += " & ";
      print_rec(f.rhs(), s, out);
      break;
    case Op::Or:
      print_rec(f.lhs(), s + 1, out);
      out += " | ";
      print_rec(f.rhs(), s, out);
      break;
    case Op::Material:
      print_rec(f.lhs(), s + 1, out);
      out += " -> ";
      print_rec(f.rhs(), s, out);
      break;
    case Op::Counterfactual:
      print_rec(f.lhs(), s + 1, out);
      out += " []-> ";
      print_rec(f.rhs(), s + 1, out);
      break;
    case Op::Strict:
      print_rec(f.lhs(), s + 1, out);
      out += " => ";
      print_rec(f.rhs(), s + 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Proof-line shape

std::string to_string(ProofLineViolation v) {
  switch (v) {
    case ProofLineViolation::NestedStrict:
      return "strict conditional below top level";
    case ProofLineViolation::MultipleStrict:
      return "more than one strict conditional";
    case ProofLineViolation::CompoundCfAntecedent:
      return "counterfactual antecedent is not a single atom";
    case ProofLineViolation::NonChoiceCfAntecedent:
      return "counterfactual antecedent is not a choice atom";
  }
  return "?";
}

namespace {
void collect_violations(const Formula& f, bool top,
                        std::vector<ProofLineViolation>& out) {
  switch (f.op()) {
    case Op::Atom:
      return;
    case Op::Not:
      collect_violations(f.lhs(), false, out);
      return;
    case Op::Strict:
      if (!top) out.push_back(ProofLineViolation::NestedStrict);
      collect_violations(f.lhs(), false, out);
      collect_violations(f.rhs(), false, out);
      return;
    case Op::Counterfactual:
      if (f.lhs().op() != Op::Atom)
        out.push_back(ProofLineViolation::CompoundCfAntecedent);
      else if (f.lhs().as_atom().kind != AtomKind::Choice)
        out.push_back(ProofLineViolation::NonChoiceCfAntecedent);
      collect_violations(f.rhs(), false, out);
      return;
    default:
      collect_violations(f.lhs(), false, out);
      collect_violations(f.rhs(), false, out);
      return;
  }
}
}  // namespace

std::vector<ProofLineViolation> validate_proof_line(const Formula& f) {
  std::vector<ProofLineViolation> out;
  const bool top_strict = f.op() == Op::Strict;
  collect_violations(f, true, out);
  // Count nested stricts already reported; a second top-level strict can
  // only appear nested, so MultipleStrict reduces to any strict besides the
  // root one.
  if (top_strict) {
    if (f.lhs().contains(Op::Strict) || f.rhs().contains(Op::Strict)) {
      out.push_back(ProofLineViolation::MultipleStrict);
    }
  }
  return out;
}

}  // namespace cfw
