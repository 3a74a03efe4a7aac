// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cfw/commands.hpp"
#include "cfw/histories.hpp"
#include "cfw/proofcheck.hpp"
#include "test_helpers.hpp"

using namespace cfw;

namespace {

struct Criterion {
  std::string name;
  double time_budget_s;  // 0 = no budget
  std::function<bool(std::string&)> run;
};

std::size_t world_index(const Model& m, const std::string& label) {
  for (const auto& w : m.worlds())
    if (w.label(m.setup()) == label) return w.index();
  return static_cast<std::size_t>(-1);
}

bool require(bool cond, const std::string& what, std::string& log) {
  if (!cond) log += (log.empty() ? "" : "; ") + what;
  return cond;
}

// 1. World counts: 16 logical, 13 physical, exclusions = the three zero
//    sets, under 0.1 s.
bool criterion_worlds(std::string& log) {
  bool ok = true;
  const Model m = test::hardy_model();
  ok &= require(m.worlds().size() == 16, "logical world count", log);
  ok &= require(m.physical().count() == 13, "physical world count", log);

  const std::set<std::size_t> expected = {
      world_index(m, "L2- R2+"),   // zero of 3.1
      world_index(m, "L2+ R1+"),   // zero of 3.2
      world_index(m, "L1- R2-")};  // zero of 3.3
  std::set<std::size_t> excluded;
  for (const auto& w : m.worlds())
    if (!m.physical().test(w.index())) excluded.insert(w.index());
  ok &= require(excluded == expected, "exclusion identity", log);

  // Each exclusion is named by its own zero set.
  for (const char* id : {"3.1", "3.2", "3.3"}) {
    const Formula pred = prediction_statement(m.setup(), id);
    const WorldSet zs = extension_logical(m, pred.lhs())
                            .set_difference(extension_logical(m, pred.rhs()));
    ok &= require(zs.count() == 1 && excluded.count(zs.first()) == 1,
                  std::string("zero set of ") + id, log);
  }
  return ok;
}

// 2. Quantum backend: solve satisfies all predictions at 1e-9; preset
//    paradox = (5*sqrt(5)-11)/2 within 1e-4 (the frozen output of the
//    independent maximization oracle in the unit suite); no-signaling and
//    cross commutators at 1e-12; under 5 s including the solve.
bool criterion_quantum(std::string& log) {
  bool ok = true;
  const QuantumModel solved = build_hardy_model(HardyMode::Solve, 1e-9);
  ok &= require(
      verify_predictions(Setup::hardy(), joint_table(solved, 1e-9)).all_pass(),
      "solve-mode predictions", log);

  const QuantumModel preset = build_hardy_model(HardyMode::PresetOptimal);
  const JointTable t = joint_table(preset);
  ok &= require(std::abs(t.at(0, 0, 1, 0) - test::kParadoxOptimal) < 1e-4,
                "preset paradox probability", log);
  ok &= require(no_signaling_sweep(preset) <= 1e-12, "no-signaling sweep",
                log);
  ok &= require(commutator_sweep(preset.measurements).max_cross_region <=
                    1e-12,
                "cross-region commutators", log);
  return ok;
}

// 3. Lemma suite: the import/export identity on 1000 seeded triples, the
//    locality lemmas and the set identities, the vacuity demonstration on
//    100 random consequents, under 2 s.
bool criterion_lemmas(std::string& log) {
  bool ok = true;
  const Model m = test::hardy_model();
  FormulaGen gen(m.setup(), 0);

  std::size_t agree = 0;
  for (int i = 0; i < 1000; ++i)
    agree += check_eq_2_1(m, gen.rudimentary(3), gen.rudimentary(3),
                          gen.rudimentary(3))
                 ? 1
                 : 0;
  ok &= require(agree == 1000, "import/export fuzz", log);

  std::size_t vacuous = 0;
  for (int i = 0; i < 100; ++i) {
    const Formula b = gen.rudimentary(2);
    vacuous += holds_strict(m, Formula::negation(b),
                            Formula::material(b, gen.rudimentary(3)))
                   ? 1
                   : 0;
  }
  ok &= require(vacuous == 100, "vacuity demonstration", log);

  for (const auto& sweep : verify_loc1_lemmas(m, 0))
    ok &= require(sweep.pass, "lemma sweep " + sweep.id, log);

  // Set identities behind the strict conditional and the material
  // conditional, on seeded random formulas.
  for (int i = 0; i < 200; ++i) {
    const Formula a = gen.rudimentary(3), b = gen.rudimentary(3);
    const WorldSet ea = extension(m, a), eb = extension(m, b);
    ok &= require(ea.subset_of(eb) ==
                      !ea.intersects(m.physical().set_difference(eb)),
                  "strict-conditional set readings", log);
    ok &= require(extension(m, Formula::material(a, b)) ==
                      m.physical().set_difference(ea).set_union(eb),
                  "material-conditional set form", log);
    if (!ok) break;
  }
  return ok;
}

// 4. Proof replay: the required line verdicts, the line-12 readings, and
//    the three constraint searches over 100% of the candidate space, under
//    10 s.
bool criterion_proof(std::string& log) {
  bool ok = true;
  const Model m = test::hardy_model();
  const ScriptReport rep = run_script(m, ProofScript::builtin(m.setup()));

  for (std::size_t i : {1u, 2u, 3u, 4u, 5u, 8u, 10u, 11u})
    ok &= require(rep.verdicts[i - 1].status == LineStatus::Pass,
                  "line " + std::to_string(i) + " PASS", log);
  ok &= require(rep.verdicts[5].status == LineStatus::Flag &&
                    rep.verdicts[5].reason == "assumption-injected",
                "line 6 FLAG", log);
  ok &= require(rep.verdicts[11].status == LineStatus::Fail &&
                    rep.verdicts[11].witness.has_value(),
                "line 12 plain-semantics FAIL with witness", log);

  ok &= require(!rep.line12.entries[0].pass &&
                    rep.line12.entries[0].witness.has_value(),
                "line-12 literal emptiness fails with witness", log);
  ok &= require(rep.line12.entries[1].pass, "line-12 consequence nonempty",
                log);
  ok &= require(rep.line12.entries[2].pass, "paradox nonemptiness", log);

  const auto& search = rep.contradiction;
  ok &= require(!search.c11_c14.sat, "C-11+C-14 UNSAT", log);
  ok &= require(search.c11_c14.conflict_witness &&
                    *search.c11_c14.conflict_witness ==
                        world_index(m, "L1- R2+"),
                "C-11+C-14 witness world", log);
  ok &= require(!search.loc2_c14.sat, "C-LOC2+C-14 UNSAT", log);
  ok &= require(search.loc2_c11.sat, "C-LOC2+C-11 SAT", log);

  // Certificate coverage: searched count equals the full space cardinality
  // recomputed from the accessible sets.
  const CandidateSpace space = enumerate_candidates(m);
  uint64_t total = 1;
  for (const auto& acc : space.accessible)
    total *= (uint64_t{1} << acc.size()) - 1;
  ok &= require(search.searched == total, "full candidate-space coverage",
                log);
  ok &= require(search.c11_c14.violations.size() == total,
                "violation per candidate", log);
  ok &= require(rep.status == "THEOREM-REPLAYED", "overall status", log);
  return ok;
}

// 5. Histories: consistency at 1e-10, the line-5 forcing, the reproduced
//    clash with reachable R1+ weight above 1e-3, invariance over 5 random
//    full-support policies, under 2 s.
bool criterion_histories(std::string& log) {
  bool ok = true;
  const QuantumModel qm = build_hardy_model(HardyMode::PresetOptimal);
  const JointTable t = joint_table(qm);
  const Model m = test::hardy_model();

  ok &= require(check_consistency(natural_family(qm)) <= 1e-10,
                "decoherence functional off-diagonals", log);

  const BranchTree tree(m.setup(), t, {});
  const auto l5 = verify_histories_line5(tree);
  ok &= require(l5.forced && l5.start_all_l2_plus, "line-5 forcing", log);

  const auto clash = verify_5_4_contradiction(tree);
  ok &= require(clash.verdict == "CONTRADICTION-REPRODUCED",
                "contradiction reproduced", log);
  ok &= require(clash.r1_plus_leaf_weight > 1e-3 &&
                    clash.r1_plus_conditional > 1e-3,
                "reachable R1+ weight", log);

  test::Rng rng(0);
  for (int i = 0; i < 5; ++i) {
    ChoicePolicy p;
    const double a = 0.05 + 0.9 * rng.unit();
    const double b = 0.05 + 0.9 * rng.unit();
    p.left = {a, 1 - a};
    p.right = {b, 1 - b};
    const BranchTree t2(m.setup(), t, p);
    ok &= require(verify_histories_line5(t2).forced == l5.forced &&
                      verify_5_4_contradiction(t2).verdict == clash.verdict,
                  "policy invariance", log);
  }
  return ok;
}

// 6. Cross-framework agreement on 50 seeded perturbed models.
bool criterion_agreement(std::string& log) {
  bool ok = true;
  test::Rng rng(2025);
  for (int iter = 0; iter < 50; ++iter) {
    const JointTable t = test::random_table(rng, iter % 2 == 0);
    const bool worlds_view = line5_constraint_forced(test::model_from(t));
    const bool tree_view =
        verify_histories_line5(BranchTree(Setup::hardy(), t, {})).forced;
    ok &= require(worlds_view == tree_view,
                  "model " + std::to_string(iter), log);
  }
  return ok;
}

// 7. Determinism: two full machine reports, byte-identical.
bool criterion_determinism(std::string& log) {
  const Config cfg = Config::hardy_default();
  RunOptions opt;
  opt.seed = 0;
  const std::string a = cmd_all(cfg, opt).render_machine();
  const std::string b = cmd_all(cfg, opt).render_machine();
  return require(a == b && !a.empty(), "byte-identical reports", log);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"world-counts", 0.1, criterion_worlds},
      {"quantum-backend", 5.0, criterion_quantum},
      {"lemma-suite", 2.0, criterion_lemmas},
      {"proof-replay", 10.0, criterion_proof},
      {"histories", 2.0, criterion_histories},
      {"cross-framework-agreement", 0.0, criterion_agreement},
      {"determinism", 0.0, criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    std::string log;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(log);
    } catch (const std::exception& e) {
      log = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.time_budget_s > 0 && secs > c.time_budget_s) {
      ok = false;
      log += (log.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("ACCEPTANCE %zu %s %s (%.3fs)%s%s\n", i + 1, c.name.c_str(),
                ok ? "PASS" : "FAIL", secs, log.empty() ? "" : " -- ",
                log.c_str());
    failures += ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
