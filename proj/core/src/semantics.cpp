#include "cfw/semantics.hpp"

#include <algorithm>

namespace cfw {

Model::Model(Setup setup, CausalStructure causal,
             std::vector<double> world_probs, double null_tolerance)
    : setup_(std::move(setup)),
      causal_(std::move(causal)),
      worlds_(enumerate_logical_worlds(setup_)),
      probs_(std::move(world_probs)),
      phys_(worlds_.size()),
      null_tol_(null_tolerance) {
  if (causal_.region_count() != setup_.region_count())
    throw Error("causal structure does not match setup");
  causal_.validate();
  if (probs_.size() != worlds_.size())
    throw Error("world probability vector has wrong length");
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (probs_[i] > null_tol_) phys_.set(i);
}

Model Model::from_table(Setup setup, CausalStructure causal,
                        const JointTable& table) {
  const auto worlds = enumerate_logical_worlds(setup);
  std::vector<double> probs(worlds.size());
  for (const auto& w : worlds)
    probs[w.index()] =
        table.at(w.choice(0), w.choice(1), w.outcome(0), w.outcome(1));
  return Model(std::move(setup), std::move(causal), std::move(probs),
               table.null_tolerance());
}

bool truth_at(const Model& m, const World& w, const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return atom_truth(w, f.as_atom());
    case Op::Not:
      return !truth_at(m, w, f.lhs());
    case Op::And:
      return truth_at(m, w, f.lhs()) && truth_at(m, w, f.rhs());
    case Op::Or:
      return truth_at(m, w, f.lhs()) || truth_at(m, w, f.rhs());
    case Op::Material:
      return !truth_at(m, w, f.lhs()) || truth_at(m, w, f.rhs());
    case Op::Strict:
    case Op::Counterfactual:
      throw NotRudimentaryError("formula contains a modal connective: " +
                                print(f));
  }
  throw Error("unreachable");
}

namespace {

// Shared recursion for the physical and the all-worlds extension. `domain`
// is the set the connectives are relative to; counterfactual accessibility
// always quantifies over the physically possible worlds.
WorldSet extension_over(const Model& m, const Formula& f,
                        const WorldSet& domain) {
  switch (f.op()) {
    case Op::Atom: {
      WorldSet out(domain.universe_size());
      for (std::size_t i : domain.indices())
        if (atom_truth(m.world(i), f.as_atom())) out.set(i);
      return out;
    }
    case Op::Not:
      return domain.set_difference(extension_over(m, f.lhs(), domain));
    case Op::And:
      return extension_over(m, f.lhs(), domain)
          .set_intersection(extension_over(m, f.rhs(), domain));
    case Op::Or:
      return extension_over(m, f.lhs(), domain)
          .set_union(extension_over(m, f.rhs(), domain));
    case Op::Material:
      return domain.set_difference(extension_over(m, f.lhs(), domain))
          .set_union(extension_over(m, f.rhs(), domain));
    case Op::Strict: {
      // Model-global: all of the domain or nothing.
      const WorldSet a = extension_over(m, f.lhs(), domain);
      const WorldSet b = extension_over(m, f.rhs(), domain);
      return a.subset_of(b) ? domain : WorldSet(domain.universe_size());
    }
    case Op::Counterfactual: {
      if (f.lhs().op() != Op::Atom ||
          f.lhs().as_atom().kind != AtomKind::Choice)
        throw Error("counterfactual antecedent must be a choice atom: " +
                    print(f));
      const Atom& c = f.lhs().as_atom();
      const WorldSet target = extension_over(m, f.rhs(), domain);
      WorldSet out(domain.universe_size());
      for (std::size_t i : domain.indices())
        if (accessible_worlds(m, m.world(i), c).subset_of(target)) out.set(i);
      return out;
    }
  }
  throw Error("unreachable");
}

}  // namespace

WorldSet extension(const Model& m, const Formula& f) {
  return extension_over(m, f, m.physical());
}

WorldSet extension_logical(const Model& m, const Formula& f) {
  return extension_over(m, f, WorldSet::full(m.worlds().size()));
}

bool holds_strict(const Model& m, const Formula& a, const Formula& b) {
  const WorldSet ea = extension(m, a);
  const WorldSet eb = extension(m, b);
  const bool via_subset = ea.subset_of(eb);
  const bool via_empty_meet =
      !ea.intersects(m.physical().set_difference(eb));
  if (via_subset != via_empty_meet)
    throw Error("internal: the two set formulations of => disagree");
  return via_subset;
}

bool model_valid(const Model& m, const Formula& f) {
  return extension(m, f) == m.physical();
}

WorldSet accessible_worlds(const Model& m, const World& w, const Atom& c) {
  const auto source = conflict_region(w, c);
  WorldSet out = m.empty_set();
  for (std::size_t i : m.physical().indices()) {
    const World& v = m.world(i);
    if (atom_truth(v, c) && agrees_outside_cone(v, w, source, m.causal()))
      out.set(i);
  }
  return out;
}

bool eval_counterfactual(const Model& m, const World& w, const Atom& c,
                         const Formula& d) {
  const WorldSet target = extension(m, d);
  return accessible_worlds(m, w, c).subset_of(target);
}

bool check_eq_2_1(const Model& m, const Formula& a, const Formula& b,
                  const Formula& c) {
  const bool lhs = holds_strict(m, a, Formula::material(b, c));
  const bool rhs = holds_strict(m, Formula::conjunction(a, b), c);
  return lhs == rhs;
}

std::string to_string(LemmaVerdict v) {
  switch (v) {
    case LemmaVerdict::Pass: return "PASS";
    case LemmaVerdict::Fail: return "FAIL";
    case LemmaVerdict::SideConditionViolated: return "SIDE-CONDITION-VIOLATED";
  }
  return "?";
}

bool outside_forward_cone(const Model& m, const Formula& b, const Atom& c) {
  for (std::size_t r : b.region_support())
    if (m.causal().in_forward_cone(c.region, r)) return false;
  return true;
}

LemmaVerdict check_loc1c_instance(const Model& m, const Formula& a,
                                  const Atom& c, const Formula& d) {
  // d may assert only c plus conjuncts of a that lie outside V+(c).
  const auto a_conj = a.conjuncts();
  const Formula c_formula = Formula::atom(c);
  for (const auto& dc : d.conjuncts()) {
    if (dc == c_formula) continue;
    const bool from_a =
        std::find(a_conj.begin(), a_conj.end(), dc) != a_conj.end();
    if (!from_a || !outside_forward_cone(m, dc, c))
      return LemmaVerdict::SideConditionViolated;
  }
  const Formula lemma =
      Formula::strict(a, Formula::counterfactual(c_formula, d));
  return model_valid(m, lemma) ? LemmaVerdict::Pass : LemmaVerdict::Fail;
}

LemmaVerdict check_loc1d_instance(const Model& m, const Formula& a,
                                  const Formula& b, const Atom& c,
                                  const Formula& d) {
  if (!outside_forward_cone(m, b, c))
    return LemmaVerdict::SideConditionViolated;
  const Formula cf = Formula::atom(c);
  const Formula lhs = Formula::strict(Formula::conjunction(a, b),
                                      Formula::counterfactual(cf, d));
  const Formula rhs = Formula::strict(
      a, Formula::counterfactual(cf, Formula::material(b, d)));
  return model_valid(m, lhs) == model_valid(m, rhs) ? LemmaVerdict::Pass
                                                    : LemmaVerdict::Fail;
}

LemmaVerdict check_loc1e_instance(const Model& m, const Formula& a,
                                  const Formula& b, const Atom& c,
                                  const Formula& d) {
  if (!outside_forward_cone(m, b, c))
    return LemmaVerdict::SideConditionViolated;
  const Formula cf = Formula::atom(c);
  const Formula ab = Formula::conjunction(a, b);
  const Formula with_b = Formula::strict(
      ab, Formula::counterfactual(cf, Formula::conjunction(b, d)));
  const Formula without_b =
      Formula::strict(ab, Formula::counterfactual(cf, d));
  return model_valid(m, with_b) == model_valid(m, without_b)
             ? LemmaVerdict::Pass
             : LemmaVerdict::Fail;
}

LemmaVerdict check_loc1f_instance(const Model& m, const Formula& b,
                                  const Atom& c, const Formula& d) {
  if (!outside_forward_cone(m, b, c))
    return LemmaVerdict::SideConditionViolated;
  const Formula cf = Formula::atom(c);
  const Formula premise = Formula::strict(b, Formula::material(cf, d));
  const Formula conclusion =
      Formula::strict(b, Formula::counterfactual(cf, d));
  if (model_valid(m, premise) && !model_valid(m, conclusion))
    return LemmaVerdict::Fail;
  return LemmaVerdict::Pass;
}

// ---------------------------------------------------------------------------
// Instantiation pools and the lemma sweep

FormulaGen::FormulaGen(const Setup& setup, uint64_t seed)
    : setup_(&setup), state_(seed ^ 0x9e3779b97f4a7c15ull) {}

uint64_t FormulaGen::next_u64() {
  // splitmix64: tiny, deterministic across platforms.
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double FormulaGen::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Atom FormulaGen::random_atom() {
  const std::size_t r = next_u64() % setup_->region_count();
  const auto& ms = setup_->region(r).measurements;
  const std::size_t m = next_u64() % ms.size();
  if (next_u64() % 2 == 0) return Atom::choice(*setup_, r, m);
  const std::size_t o = next_u64() % ms[m].outcomes.size();
  return Atom::outcome_atom(*setup_, r, m, o);
}

Formula FormulaGen::rudimentary(int max_depth) {
  if (max_depth <= 0 || next_u64() % 4 == 0)
    return Formula::atom(random_atom());
  switch (next_u64() % 4) {
    case 0:
      return Formula::negation(rudimentary(max_depth - 1));
    case 1:
      return Formula::conjunction(rudimentary(max_depth - 1),
                                  rudimentary(max_depth - 1));
    case 2:
      return Formula::disjunction(rudimentary(max_depth - 1),
                                  rudimentary(max_depth - 1));
    default:
      return Formula::material(rudimentary(max_depth - 1),
                               rudimentary(max_depth - 1));
  }
}

Formula FormulaGen::any(int max_depth) {
  if (max_depth <= 0 || next_u64() % 5 == 0)
    return Formula::atom(random_atom());
  switch (next_u64() % 6) {
    case 0:
      return Formula::negation(any(max_depth - 1));
    case 1:
      return Formula::conjunction(any(max_depth - 1), any(max_depth - 1));
    case 2:
      return Formula::disjunction(any(max_depth - 1), any(max_depth - 1));
    case 3:
      return Formula::material(any(max_depth - 1), any(max_depth - 1));
    case 4:
      return Formula::counterfactual(any(max_depth - 1), any(max_depth - 1));
    default:
      return Formula::strict(any(max_depth - 1), any(max_depth - 1));
  }
}

namespace {

// Atoms, negated atoms and small regional conjunctions for one region.
std::vector<Formula> regional_pool(const Setup& s, std::size_t region) {
  std::vector<Formula> out;
  const auto& ms = s.region(region).measurements;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    out.push_back(Formula::atom(Atom::choice(s, region, m)));
    for (std::size_t o = 0; o < ms[m].outcomes.size(); ++o)
      out.push_back(Formula::atom(Atom::outcome_atom(s, region, m, o)));
  }
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n && i < 2; ++i)
    out.push_back(Formula::negation(out[i]));
  if (n >= 2) out.push_back(Formula::conjunction(out[0], out[1]));
  return out;
}

std::vector<Formula> mixed_pool(const Model& m) {
  const Setup& s = m.setup();
  std::vector<Formula> out;
  for (std::size_t r = 0; r < s.region_count(); ++r) {
    auto rp = regional_pool(s, r);
    out.insert(out.end(), rp.begin(), rp.end());
  }
  if (s.region_count() >= 2) {
    const auto l = regional_pool(s, 0);
    const auto r = regional_pool(s, 1);
    out.push_back(Formula::conjunction(l[0], r[0]));
    out.push_back(Formula::disjunction(l[1], r[1]));
    out.push_back(Formula::material(l[2], r[2]));
  }
  return out;
}

std::string describe_instance(const Formula& a, const Formula& b,
                              const Atom& c, const Formula& d) {
  return "A=" + print(a) + " B=" + print(b) + " C=" + c.text +
         " D=" + print(d);
}

}  // namespace

std::vector<LemmaSweepResult> verify_loc1_lemmas(const Model& m,
                                                 uint64_t seed) {
  const Setup& s = m.setup();
  std::vector<LemmaSweepResult> out;

  std::vector<Atom> choice_atoms;
  for (std::size_t r = 0; r < s.region_count(); ++r)
    for (std::size_t mm = 0; mm < s.region(r).measurements.size(); ++mm)
      choice_atoms.push_back(Atom::choice(s, r, mm));

  const auto mixed = mixed_pool(m);
  std::vector<std::vector<Formula>> regional(s.region_count());
  for (std::size_t r = 0; r < s.region_count(); ++r)
    regional[r] = regional_pool(s, r);

  // Pool of B candidates outside V+(c): formulas supported on regions not in
  // the cone of c's region.
  auto b_pool_for = [&](const Atom& c) {
    std::vector<Formula> pool;
    for (std::size_t r = 0; r < s.region_count(); ++r)
      if (!m.causal().in_forward_cone(c.region, r))
        pool.insert(pool.end(), regional[r].begin(), regional[r].end());
    return pool;
  };

  // LOC1c on the canonical instance shape: A = B' & c' (c' the rival choice
  // in c's region plus one of its outcomes), D = B' & c.
  {
    LemmaSweepResult r{"loc1c"};
    for (const Atom& c : choice_atoms) {
      for (const auto& b : b_pool_for(c)) {
        for (const Atom& rival : choice_atoms) {
          if (rival.region != c.region || rival.measurement == c.measurement)
            continue;
          const Formula a =
              Formula::conjunction(b, Formula::atom(rival));
          const Formula d = Formula::conjunction(b, Formula::atom(c));
          const auto v = check_loc1c_instance(m, a, c, d);
          ++r.checked;
          if (v != LemmaVerdict::Pass) {
            r.pass = false;
            if (r.first_failure.empty())
              r.first_failure = describe_instance(a, b, c, d);
          }
        }
      }
    }
    out.push_back(std::move(r));
  }

  // LOC1d / LOC1e equivalences over the pools.
  for (const char* id : {"loc1d", "loc1e"}) {
    LemmaSweepResult r{id};
    for (const Atom& c : choice_atoms) {
      const auto bs = b_pool_for(c);
      for (const auto& a : mixed) {
        for (const auto& b : bs) {
          for (const auto& d : mixed) {
            const auto v = std::string(id) == "loc1d"
                               ? check_loc1d_instance(m, a, b, c, d)
                               : check_loc1e_instance(m, a, b, c, d);
            ++r.checked;
            if (v != LemmaVerdict::Pass) {
              r.pass = false;
              if (r.first_failure.empty())
                r.first_failure = describe_instance(a, b, c, d);
            }
          }
        }
      }
    }
    out.push_back(std::move(r));
  }

  // LOC1f entailment, pools plus seeded random consequents.
  {
    LemmaSweepResult r{"loc1f"};
    FormulaGen gen(s, seed);
    std::vector<Formula> ds = mixed;
    for (int i = 0; i < 200; ++i) ds.push_back(gen.rudimentary(3));
    for (const Atom& c : choice_atoms) {
      for (const auto& b : b_pool_for(c)) {
        for (const auto& d : ds) {
          const auto v = check_loc1f_instance(m, b, c, d);
          ++r.checked;
          if (v != LemmaVerdict::Pass) {
            r.pass = false;
            if (r.first_failure.empty())
              r.first_failure = describe_instance(b, b, c, d);
          }
        }
      }
    }
    out.push_back(std::move(r));
  }

  // The side condition must actually reject in-cone conditions.
  {
    LemmaSweepResult r{"loc1d-side-condition"};
    for (const Atom& c : choice_atoms) {
      // B inside the cone of c's own region must be rejected.
      const Formula inside = Formula::atom(c);
      const auto v =
          check_loc1d_instance(m, mixed.front(), inside, c, mixed.back());
      ++r.checked;
      if (v != LemmaVerdict::SideConditionViolated) r.pass = false;
      else ++r.side_condition_skips;
    }
    out.push_back(std::move(r));
  }

  return out;
}

}  // namespace cfw
