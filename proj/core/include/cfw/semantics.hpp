#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfw/formula.hpp"
#include "cfw/quantum.hpp"
#include "cfw/setup.hpp"
#include "cfw/worldset.hpp"

namespace cfw {

/// The semantic frame: the enumerated logical worlds together with the
/// physically possible subset (non-null probability) and the causal
/// structure that drives counterfactual accessibility.
class Model {
public:
  Model(Setup setup, CausalStructure causal, std::vector<double> world_probs,
        double null_tolerance);

  /// Builds the world probabilities from a two-region joint table.
  static Model from_table(Setup setup, CausalStructure causal,
                          const JointTable& table);

  const Setup& setup() const { return setup_; }
  const CausalStructure& causal() const { return causal_; }
  const std::vector<World>& worlds() const { return worlds_; }
  const World& world(std::size_t i) const { return worlds_.at(i); }
  const WorldSet& physical() const { return phys_; }
  double world_probability(std::size_t i) const { return probs_.at(i); }
  double null_tolerance() const { return null_tol_; }

  /// Empty set sized to the logical world count.
  WorldSet empty_set() const { return WorldSet(worlds_.size()); }

private:
  Setup setup_;
  CausalStructure causal_;
  std::vector<World> worlds_;
  std::vector<double> probs_;
  WorldSet phys_;
  double null_tol_;
};

/// Classical recursive truth of a rudimentary formula at one world. The
/// material conditional is truth-functional: true unless the antecedent
/// holds and the consequent fails. Throws NotRudimentaryError on => or []->.
bool truth_at(const Model& m, const World& w, const Formula& f);

/// {w in phys : f true at w}. Strict conditionals evaluate to a
/// model-global truth value (all of phys or nothing); counterfactuals are
/// evaluated per world through the accessibility relation.
WorldSet extension(const Model& m, const Formula& f);

/// Extension over every logical world, ignoring the physical filter. Used
/// to compare the content of rudimentary statements independently of which
/// worlds a particular model admits.
WorldSet extension_logical(const Model& m, const Formula& f);

/// A => B as containment of extensions. Both set formulations (empty
/// intersection with the complement, and subset inclusion) are computed and
/// must agree; disagreement would be an internal fault.
bool holds_strict(const Model& m, const Formula& a, const Formula& b);

/// A formula is true in the model when it holds at every physically
/// possible world (for a top-level strict conditional this is its global
/// truth value).
bool model_valid(const Model& m, const Formula& f);

/// The worlds reachable from `w` when choice atom `c` is imposed: the
/// physically possible worlds that satisfy `c` and coincide with `w`
/// outside the forward cone of the region where `c` conflicts with `w`.
/// When `c` already holds at `w` the set is {w}.
WorldSet accessible_worlds(const Model& m, const World& w, const Atom& c);

/// "If, instead, c then d": d holds at every accessible world. Vacuously
/// true when the accessible set is empty; free-choice nonemptiness is
/// enforced separately by the proof checker.
bool eval_counterfactual(const Model& m, const World& w, const Atom& c,
                         const Formula& d);

/// The import/export identity between [a => (b -> c)] and [(a and b) => c]:
/// both sides always have the same truth value.
bool check_eq_2_1(const Model& m, const Formula& a, const Formula& b,
                  const Formula& c);

enum class LemmaVerdict : uint8_t { Pass, Fail, SideConditionViolated };

std::string to_string(LemmaVerdict v);

/// B must be localized outside the forward cone of c's region: every region
/// an atom of B mentions must lie outside V+(c.region).
bool outside_forward_cone(const Model& m, const Formula& b, const Atom& c);

/// The four locality lemma checkers. Each validates its side condition and
/// then decides the lemma instance semantically in the model.

/// LOC1c instance  A => (c []-> d):  d may claim only c itself plus the
/// conjuncts of A that lie outside V+(c); such an instance must hold.
LemmaVerdict check_loc1c_instance(const Model& m, const Formula& a,
                                  const Atom& c, const Formula& d);

/// LOC1d: [(A & B) => (c []-> D)]  ==  [A => (c []-> (B -> D))],
/// for B outside V+(c).
LemmaVerdict check_loc1d_instance(const Model& m, const Formula& a,
                                  const Formula& b, const Atom& c,
                                  const Formula& d);

/// LOC1e: [(A & B) => (c []-> B & D)]  ==  [(A & B) => (c []-> D)],
/// for B outside V+(c).
LemmaVerdict check_loc1e_instance(const Model& m, const Formula& a,
                                  const Formula& b, const Atom& c,
                                  const Formula& d);

/// LOC1f: [B => (c -> D)]  entails  [B => (c []-> D)], for B outside V+(c).
LemmaVerdict check_loc1f_instance(const Model& m, const Formula& b,
                                  const Atom& c, const Formula& d);

struct LemmaSweepResult {
  std::string id;
  bool pass = true;
  std::size_t checked = 0;                 // instances evaluated
  std::size_t side_condition_skips = 0;    // filtered by the side condition
  std::string first_failure;               // printed instance, when !pass
};

/// Exhaustive lemma verification over instantiation pools drawn from the
/// setup's atoms plus seeded random rudimentary formulas. All four lemmas
/// must pass in any model; the sweep also confirms that side-condition
/// violations are detected.
std::vector<LemmaSweepResult> verify_loc1_lemmas(const Model& m,
                                                 uint64_t seed = 0);

/// Seeded generator for random rudimentary formulas (used by the lemma
/// sweeps, the fuzz checks and the tests).
class FormulaGen {
public:
  FormulaGen(const Setup& setup, uint64_t seed);
  /// Random rudimentary formula of at most the given depth.
  Formula rudimentary(int max_depth);
  /// Random formula over the full grammar (may nest => and []->).
  Formula any(int max_depth);
  uint64_t next_u64();
  double next_unit();  // in [0, 1)

private:
  Atom random_atom();
  const Setup* setup_;
  uint64_t state_;
};

}  // namespace cfw
