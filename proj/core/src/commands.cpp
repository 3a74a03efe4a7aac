#include "cfw/commands.hpp"

#include <cmath>
#include <cstdio>

#include "cfw/histories.hpp"
#include "cfw/proofcheck.hpp"

namespace cfw {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Context {
  QuantumModel qmodel;
  JointTable table;
  Model model;
};

Context make_context(const Config& cfg, const RunOptions& opt) {
  if (!hardy_shaped_setup(cfg.setup))
    throw ConfigError(0, 0,
                      "check suites need two regions with two binary "
                      "measurements each");
  const double nt = opt.null_tolerance.value_or(cfg.null_tolerance);
  QuantumModel qm = cfg.build_model();
  JointTable table = joint_table(qm, nt);
  Model model = Model::from_table(cfg.setup, cfg.causal, table);
  return {std::move(qm), std::move(table), std::move(model)};
}

std::string wlabel(const Model& m, std::size_t idx) {
  return m.world(idx).label(m.setup(), ",");
}

ProofScript select_script(const Config& cfg, const RunOptions& opt) {
  if (opt.script && *opt.script != "builtin")
    return load_script(*opt.script, cfg.setup);
  if (!opt.script && cfg.script) return *cfg.script;
  return ProofScript::builtin(cfg.setup);
}

}  // namespace

Report cmd_worlds(const Config& cfg, const RunOptions& opt) {
  const Context ctx = make_context(cfg, opt);
  const Model& m = ctx.model;
  Report rep;

  rep.note("worlds: " + std::to_string(m.worlds().size()) + " logical / " +
           std::to_string(m.physical().count()) + " physical");
  for (const auto& w : m.worlds()) {
    const bool phys = m.physical().test(w.index());
    rep.note("  " + w.label(m.setup()) + "  p=" +
             fmt(m.world_probability(w.index())) +
             (phys ? "" : "  EXCLUDED"));
  }

  rep.add("worlds.counts", Verdict::Pass,
          "logical=" + std::to_string(m.worlds().size()) +
              ";physical=" + std::to_string(m.physical().count()));

  // Tag each excluded world with the zero prediction that names it.
  const char* zero_ids[] = {"3.1", "3.2", "3.3"};
  std::vector<std::pair<std::string, WorldSet>> zero_sets;
  for (const char* id : zero_ids) {
    const Formula pred = prediction_statement(cfg.setup, id);
    zero_sets.push_back({id, extension_logical(m, pred.lhs())
                                 .set_difference(
                                     extension_logical(m, pred.rhs()))});
  }
  for (const auto& w : m.worlds()) {
    if (m.physical().test(w.index())) continue;
    std::string tag = "unexplained";
    for (const auto& [id, zs] : zero_sets)
      if (zs.test(w.index())) {
        tag = id;
        break;
      }
    rep.add("worlds.exclusion." + wlabel(m, w.index()),
            tag == "unexplained" ? Verdict::Flag : Verdict::Pass, tag);
  }
  return rep;
}

Report cmd_quantum(const Config& cfg, const RunOptions& opt) {
  const Context ctx = make_context(cfg, opt);
  Report rep;

  const double norm_dev = std::abs(norm(ctx.qmodel.state.amplitudes) - 1.0);
  rep.add("quantum.state-norm",
          norm_dev <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "dev=" + fmt(norm_dev));

  double proj_defect = 0.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t mm = 0; mm < 2; ++mm)
      for (std::size_t o = 0; o < 2; ++o) {
        const Projector& p = ctx.qmodel.measurements.projector({r, mm, o});
        proj_defect = std::max(proj_defect, p.hermiticity_defect());
        proj_defect = std::max(proj_defect, p.idempotency_defect());
      }
  rep.add("quantum.projectors",
          proj_defect <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "max-defect=" + fmt(proj_defect));

  const double comp = ctx.qmodel.measurements.completeness_defect();
  rep.add("quantum.completeness",
          comp <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "max-defect=" + fmt(comp));

  for (const auto& e : verify_predictions(cfg.setup, ctx.table).entries)
    rep.add("quantum.prediction." + e.id,
            e.pass ? Verdict::Pass : Verdict::Fail, "value=" + fmt(e.value));

  const double ns = no_signaling_sweep(ctx.qmodel);
  rep.add("quantum.no-signaling", ns <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "max-deviation=" + fmt(ns) + ";pairs=16");

  const CommutatorSweep sweep = commutator_sweep(ctx.qmodel.measurements);
  rep.add("quantum.microcausality.cross",
          sweep.max_cross_region <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "max-norm=" + fmt(sweep.max_cross_region) + ";pairs=16");
  rep.add("quantum.microcausality.same-region",
          sweep.max_same_region > 0.01 ? Verdict::Pass : Verdict::Flag,
          "max-norm=" + fmt(sweep.max_same_region) +
              (sweep.max_same_region > 0.01 ? "" : ";degenerate-bases"));

  double reduce_dev = 0.0;
  const CMatrix density = ctx.qmodel.state.density();
  const double total = density.trace().real();
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t mm = 0; mm < 2; ++mm)
      for (std::size_t o = 0; o < 2; ++o) {
        const auto [yes, no] =
            reduce(density, ctx.qmodel.measurements.projector({r, mm, o}));
        reduce_dev = std::max(
            reduce_dev,
            std::abs(yes.trace().real() + no.trace().real() - total));
      }
  rep.add("quantum.reduce", reduce_dev <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "max-trace-dev=" + fmt(reduce_dev));
  return rep;
}

Report cmd_lemmas(const Config& cfg, const RunOptions& opt) {
  const Context ctx = make_context(cfg, opt);
  const Model& m = ctx.model;
  Report rep;
  FormulaGen gen(cfg.setup, opt.seed);

  {  // Import/export identity on random rudimentary triples.
    std::size_t n = 1000, ok = 0;
    for (std::size_t i = 0; i < n; ++i)
      ok += check_eq_2_1(m, gen.rudimentary(3), gen.rudimentary(3),
                         gen.rudimentary(3))
                ? 1
                : 0;
    rep.add("lemmas.eq21.fuzz", ok == n ? Verdict::Pass : Verdict::Fail,
            "agree=" + std::to_string(ok) + "/" + std::to_string(n) +
                ";seed=" + std::to_string(opt.seed));
  }

  {  // A incompatible with B makes the conditional empty of content.
    std::size_t n = 100, ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Formula b = gen.rudimentary(2);
      const Formula c = gen.rudimentary(3);
      ok += holds_strict(m, Formula::negation(b), Formula::material(b, c))
                ? 1
                : 0;
    }
    rep.add("lemmas.vacuity.negated-antecedent",
            ok == n ? Verdict::Pass : Verdict::Fail,
            "true=" + std::to_string(ok) + "/" + std::to_string(n));
  }

  {  // Mutually exclusive choices: R2 & ... => (R1 -> anything).
    const Formula r1 = Formula::atom(Atom::choice(cfg.setup, 1, 0));
    const Formula r2 = Formula::atom(Atom::choice(cfg.setup, 1, 1));
    std::size_t n = 100, ok = 0;
    for (std::size_t i = 0; i < n; ++i)
      ok += holds_strict(m, r2, Formula::material(r1, gen.rudimentary(3)))
                ? 1
                : 0;
    rep.add("lemmas.vacuity.exclusive-choices",
            ok == n ? Verdict::Pass : Verdict::Fail,
            "true=" + std::to_string(ok) + "/" + std::to_string(n));
  }

  {  // The two set readings of => agree.
    std::size_t n = 400, ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Formula a = gen.rudimentary(3), b = gen.rudimentary(3);
      const WorldSet ea = extension(m, a), eb = extension(m, b);
      const bool subset = ea.subset_of(eb);
      const bool empty_meet =
          !ea.intersects(m.physical().set_difference(eb));
      ok += subset == empty_meet ? 1 : 0;
    }
    rep.add("lemmas.strict-two-readings",
            ok == n ? Verdict::Pass : Verdict::Fail,
            "agree=" + std::to_string(ok) + "/" + std::to_string(n));
  }

  {  // Material conditional: world-wise clause and set identity.
    std::size_t n = 400, ok_world = 0, ok_set = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Formula a = gen.rudimentary(3), b = gen.rudimentary(3);
      const Formula mat = Formula::material(a, b);
      const auto phys_ids = m.physical().indices();
      const std::size_t w =
          phys_ids[gen.next_u64() % phys_ids.size()];
      const bool direct = truth_at(m, m.world(w), mat);
      const bool clause =
          !truth_at(m, m.world(w), a) || truth_at(m, m.world(w), b);
      ok_world += direct == clause ? 1 : 0;
      const WorldSet lhs = extension(m, mat);
      const WorldSet rhs = m.physical()
                               .set_difference(extension(m, a))
                               .set_union(extension(m, b));
      ok_set += lhs == rhs ? 1 : 0;
    }
    rep.add("lemmas.material-worldwise",
            ok_world == n ? Verdict::Pass : Verdict::Fail,
            "agree=" + std::to_string(ok_world) + "/" + std::to_string(n));
    rep.add("lemmas.material-set-form",
            ok_set == n ? Verdict::Pass : Verdict::Fail,
            "agree=" + std::to_string(ok_set) + "/" + std::to_string(n));
  }

  {  // Counterfactual: per-world evaluation versus the set reading.
    std::size_t n = 400, ok = 0;
    std::vector<Atom> choices;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t mm = 0; mm < 2; ++mm)
        choices.push_back(Atom::choice(cfg.setup, r, mm));
    for (std::size_t i = 0; i < n; ++i) {
      const Atom c = choices[gen.next_u64() % choices.size()];
      const Formula d = gen.rudimentary(3);
      const Formula cf = Formula::counterfactual(Formula::atom(c), d);
      const WorldSet via_extension = extension(m, cf);
      bool agree = true;
      for (std::size_t w : m.physical().indices())
        agree = agree && via_extension.test(w) ==
                             eval_counterfactual(m, m.world(w), c, d);
      ok += agree ? 1 : 0;
    }
    rep.add("lemmas.counterfactual-two-readings",
            ok == n ? Verdict::Pass : Verdict::Fail,
            "agree=" + std::to_string(ok) + "/" + std::to_string(n));
  }

  for (const auto& sweep : verify_loc1_lemmas(m, opt.seed)) {
    if (sweep.id == "loc1d-side-condition") {
      rep.add("lemmas.side-condition-detection",
              sweep.pass ? Verdict::Flag : Verdict::Fail,
              "rejected=" + std::to_string(sweep.side_condition_skips) + "/" +
                  std::to_string(sweep.checked));
      continue;
    }
    rep.add("lemmas." + sweep.id, sweep.pass ? Verdict::Pass : Verdict::Fail,
            "instances=" + std::to_string(sweep.checked) +
                (sweep.pass ? "" : ";first-failure=" + sweep.first_failure));
  }
  return rep;
}

Report cmd_proof(const Config& cfg, const RunOptions& opt) {
  const Context ctx = make_context(cfg, opt);
  const Model& m = ctx.model;
  const ProofScript script = select_script(cfg, opt);
  const ScriptReport sr = run_script(m, script, opt.search_bound);
  Report rep;

  for (std::size_t i = 0; i < sr.verdicts.size(); ++i) {
    const LineVerdict& v = sr.verdicts[i];
    char id[32];
    std::snprintf(id, sizeof id, "proof.line.%02zu", i + 1);
    Verdict verdict = v.status == LineStatus::Pass  ? Verdict::Pass
                      : v.status == LineStatus::Flag ? Verdict::Flag
                                                      : Verdict::Fail;
    std::string detail = v.reason;
    for (char& ch : detail)
      if (ch == ' ') ch = '-';
    if (v.witness) detail += ";witness=" + wlabel(m, *v.witness);
    if (v.contested) detail += ";contested";
    rep.add(id, verdict, detail, v.contested);
  }

  for (const auto& e : sr.line12.entries) {
    std::string detail;
    if (e.witness) detail = "witness=" + wlabel(m, *e.witness);
    const bool contested = e.id == "literal-empty" && !e.pass;
    if (contested) detail += ";contested";
    rep.add("proof.line12." + e.id, e.pass ? Verdict::Pass : Verdict::Fail,
            detail, contested);
  }
  rep.note("line-12 readings cross-reference: " + sr.line12.crossref);

  auto add_search = [&](const std::string& id, const SearchResult& res) {
    std::string detail = "searched=" + std::to_string(res.searched);
    if (res.sat) {
      detail += ";candidate=" + std::to_string(*res.sat_candidate);
    } else if (res.conflict_witness) {
      detail += ";witness=" + wlabel(m, *res.conflict_witness) +
                ";conflict=" + res.conflicting.first + "+" +
                res.conflicting.second;
    }
    rep.add(id, res.sat ? Verdict::Sat : Verdict::Unsat, detail);
  };
  add_search("proof.search.c11-c14", sr.contradiction.c11_c14);
  add_search("proof.search.loc2-c14", sr.contradiction.loc2_c14);
  add_search("proof.search.loc2-c11", sr.contradiction.loc2_c11);

  // Human-readable certificate: one violation per candidate for the primary
  // unsatisfiable pairing.
  const SearchResult& primary = sr.contradiction.c11_c14;
  if (!primary.sat) {
    rep.note("certificate {C-11, C-14, NE}: searched=" +
             std::to_string(primary.searched));
    for (const auto& vr : primary.violations)
      rep.note("  candidate " + std::to_string(vr.candidate) + " violates " +
               vr.constraint_id + " at " + wlabel(m, vr.world));
  }
  if (sr.contradiction.loc2_c11.sat) {
    const auto space = enumerate_candidates(m, opt.search_bound);
    std::string mapping;
    for (std::size_t k = 0; k < space.constrained_worlds.size(); ++k) {
      mapping += "  " + wlabel(m, space.constrained_worlds[k]) + " -> {";
      const auto& succ = sr.contradiction.loc2_c11.sat_successors[k];
      for (std::size_t j = 0; j < succ.size(); ++j)
        mapping += (j ? " " : "") + wlabel(m, succ[j]);
      mapping += "}";
    }
    rep.note("SAT witness {C-LOC2, C-11, NE}:" + mapping);
  }

  rep.add("proof.status",
          sr.status == "THEOREM-REPLAYED" ? Verdict::Pass : Verdict::Fail,
          sr.status);
  return rep;
}

Report cmd_histories(const Config& cfg, const RunOptions& opt) {
  const Context ctx = make_context(cfg, opt);
  const Model& m = ctx.model;
  Report rep;

  const HistoryFamily family = natural_family(ctx.qmodel);
  const double offdiag = check_consistency(family);
  rep.add("histories.consistency",
          offdiag <= 1e-10 ? Verdict::Pass : Verdict::Fail,
          "max-offdiag=" + fmt(offdiag));
  rep.add("histories.consistency-functional", Verdict::Flag,
          "standard-decoherence-functional;external-machinery");

  const ChoicePolicy default_policy;
  const BranchTree tree = build_family(m, ctx.table, default_policy);
  double leaf_sum = 0.0;
  for (const auto& lf : tree.leaves()) leaf_sum += lf.weight;
  rep.add("histories.leaf-sum",
          std::abs(leaf_sum - 1.0) <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "sum=" + fmt(leaf_sum));

  const HistoriesLine5Result l5 = verify_histories_line5(tree);
  rep.add("histories.line5", l5.forced ? Verdict::Pass : Verdict::Fail,
          std::string("start-within-L2plus=") +
              (l5.start_all_l2_plus ? "yes" : "no"));

  const ContradictionHistoriesReport c = verify_5_4_contradiction(tree);
  rep.add("histories.contradiction",
          c.verdict == "CONTRADICTION-REPRODUCED" ? Verdict::Pass
                                                  : Verdict::Fail,
          c.verdict + ";r1plus-conditional=" + fmt(c.r1_plus_conditional) +
              ";r1plus-weight=" + fmt(c.r1_plus_leaf_weight) +
              ";start-within-R2plus=" + (c.start_all_r2_plus ? "yes" : "no"));

  // The verdicts may not depend on how the free choices are weighted.
  FormulaGen gen(cfg.setup, opt.seed);
  bool invariant = true;
  const int kPolicies = 5;
  for (int i = 0; i < kPolicies; ++i) {
    auto draw = [&] {
      const double x = 0.05 + 0.9 * gen.next_unit();
      return std::array<double, 2>{x, 1.0 - x};
    };
    ChoicePolicy p;
    p.left = draw();
    p.right = draw();
    const BranchTree t2 = build_family(m, ctx.table, p);
    invariant = invariant &&
                verify_histories_line5(t2).forced == l5.forced &&
                (verify_5_4_contradiction(t2).verdict == c.verdict);
  }
  rep.add("histories.policy-invariance",
          invariant ? Verdict::Pass : Verdict::Fail,
          "policies=" + std::to_string(kPolicies) +
              ";seed=" + std::to_string(opt.seed));

  rep.note("branch tree (default policy):");
  rep.note(tree.indented_text());
  rep.note("leaf table:");
  rep.note(tree.leaf_table());
  return rep;
}

Report cmd_all(const Config& cfg, const RunOptions& opt) {
  Report rep;
  rep.append(cmd_worlds(cfg, opt));
  rep.append(cmd_quantum(cfg, opt));
  rep.append(cmd_lemmas(cfg, opt));
  rep.append(cmd_proof(cfg, opt));
  rep.append(cmd_histories(cfg, opt));
  return rep;
}

}  // namespace cfw
