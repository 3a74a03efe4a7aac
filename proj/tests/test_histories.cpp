#include <doctest.h>

#include <cmath>

#include "cfw/histories.hpp"
#include "cfw/proofcheck.hpp"
#include "test_helpers.hpp"

using namespace cfw;

namespace {

struct Fixture {
  QuantumModel qm = build_hardy_model(HardyMode::PresetOptimal);
  JointTable table = joint_table(qm);
  Model model = Model::from_table(Setup::hardy(),
                                  CausalStructure::all_spacelike(2), table);
  ChoicePolicy policy;
  BranchTree tree{Setup::hardy(), table, ChoicePolicy{}};
};

const Fixture& fix() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("tree weights reproduce the table exactly") {
  const auto& f = fix();
  REQUIRE(f.tree.leaves().size() == 16);
  double sum = 0.0;
  std::size_t null_leaves = 0;
  for (const auto& lf : f.tree.leaves()) {
    const double expected =
        0.25 * f.table.at(lf.l_choice, lf.r_choice, lf.l_outcome, lf.r_outcome);
    CHECK(lf.weight == doctest::Approx(expected).epsilon(1e-14));
    sum += lf.weight;
    if (lf.weight <= 1e-9) ++null_leaves;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(null_leaves == 3);

  SUBCASE("children sum to their parent") {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t s = 0; s < 2; ++s) {
        double acc1 = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
          double acc2 = 0.0;
          for (std::size_t t = 0; t < 2; ++t)
            acc2 += f.tree.leaf(i, s, j, t).weight;
          CHECK(acc2 ==
                doctest::Approx(f.tree.level2_weight(i, s, j)).epsilon(1e-12));
          acc1 += acc2;
        }
        CHECK(acc1 ==
              doctest::Approx(f.tree.level1_weight(i, s)).epsilon(1e-12));
      }
  }

  SUBCASE("one-sided policy zeroes the other subtree") {
    ChoicePolicy p;
    p.left = {1.0, 0.0};
    p.right = {1.0, 0.0};
    const BranchTree t(Setup::hardy(), f.table, p);
    for (const auto& lf : t.leaves())
      if (lf.l_choice != 0 || lf.r_choice != 0) CHECK(lf.weight == 0.0);
  }
}

TEST_CASE("natural family is consistent") {
  const auto& f = fix();
  const HistoryFamily fam = natural_family(f.qm);
  CHECK(check_consistency(fam) <= 1e-10);

  SUBCASE("diagonal equals the leaf weights up to the policy factor") {
    const auto diag = consistency_diagonal(fam);
    REQUIRE(diag.size() == 16);
    std::size_t k = 0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t t = 0; t < 2; ++t)
            CHECK(diag[k++] ==
                  doctest::Approx(f.table.at(i, j, s, t)).epsilon(1e-12));
  }

  SUBCASE("non-commuting same-slot projectors break consistency") {
    HistoryFamily broken = natural_family(f.qm);
    // Replace one chain's L projector with one from the other L basis: the
    // slot no longer holds an orthogonal decomposition.
    broken.chains[0][0][0] = f.qm.measurements.projector({1, 0, 0}).matrix *
                             f.qm.measurements.projector({0, 1, 1}).matrix;
    CHECK(check_consistency(broken) > 0.01);
  }
}

TEST_CASE("pivot path tracing") {
  const auto& f = fix();

  SUBCASE("the forcing path from L2 & R2 & R2+") {
    const auto reached = trace_pivot_path(
        f.tree,
        [](const BranchTree::Leaf& lf) {
          return lf.l_choice == 1 && lf.r_choice == 1 && lf.r_outcome == 0;
        },
        0);
    REQUIRE(!reached.empty());
    for (const auto& lf : reached) {
      CHECK(lf.l_outcome == 0);  // carried L2+ through the pivot
      CHECK(lf.r_choice == 0);
      CHECK(lf.r_outcome == 1);  // forced into R1-
    }
  }

  SUBCASE("re-descending the same branch returns the sibling set") {
    const auto reached = trace_pivot_path(
        f.tree,
        [](const BranchTree::Leaf& lf) {
          return lf.l_choice == 0 && lf.l_outcome == 0 && lf.r_choice == 0 &&
                 lf.r_outcome == 0;
        },
        0);
    REQUIRE(reached.size() == 2);  // both R1 outcomes have weight under L1+
    for (const auto& lf : reached) {
      CHECK(lf.l_choice == 0);
      CHECK(lf.l_outcome == 0);
      CHECK(lf.r_choice == 0);
    }
  }

  SUBCASE("the LOC2-style path keeps both R1 outcomes") {
    const auto reached = trace_pivot_path(
        f.tree,
        [](const BranchTree::Leaf& lf) {
          return lf.l_choice == 0 && lf.r_choice == 1 && lf.l_outcome == 1;
        },
        0);
    bool has_plus = false, has_minus = false;
    for (const auto& lf : reached) {
      has_plus = has_plus || lf.r_outcome == 0;
      has_minus = has_minus || lf.r_outcome == 1;
    }
    CHECK(has_plus);
    CHECK(has_minus);
  }

  SUBCASE("prefix preservation") {
    // Reached leaves keep the start leaf's pre-pivot assignment.
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t li = i, ls = s;
        try {
          const auto reached = trace_pivot_path(
              f.tree,
              [li, ls](const BranchTree::Leaf& lf) {
                return lf.l_choice == li && lf.l_outcome == ls &&
                       lf.r_choice == 1;
              },
              0);
          for (const auto& lf : reached) {
            CHECK(lf.l_choice == li);
            CHECK(lf.l_outcome == ls);
          }
        } catch (const EmptyStartError&) {
          // Physically impossible start; nothing to check.
        }
      }
  }

  SUBCASE("empty start throws") {
    CHECK_THROWS_AS(
        trace_pivot_path(
            f.tree, [](const BranchTree::Leaf&) { return false; }, 0),
        EmptyStartError);
  }
}

TEST_CASE("branch-tree reading of line 5") {
  const auto& f = fix();
  const auto res = verify_histories_line5(f.tree);
  CHECK(res.forced);
  CHECK(res.start_all_l2_plus);

  SUBCASE("lifting the 3.2 zero unforces the path") {
    JointTable t = f.table;
    t.at(1, 0, 0, 0) = 0.05;
    const auto r = verify_histories_line5(BranchTree(Setup::hardy(), t, {}));
    CHECK_FALSE(r.forced);
  }

  SUBCASE("lifting the 3.1 zero breaks the intermediate forcing") {
    JointTable t = f.table;
    t.at(1, 1, 1, 0) = 0.05;
    const auto r = verify_histories_line5(BranchTree(Setup::hardy(), t, {}));
    CHECK_FALSE(r.start_all_l2_plus);
  }
}

TEST_CASE("the 5.4-style clash inside the tree") {
  const auto& f = fix();
  const auto rep = verify_5_4_contradiction(f.tree);
  CHECK(rep.verdict == "CONTRADICTION-REPRODUCED");
  CHECK(rep.start_nonempty);
  CHECK(rep.start_all_r2_plus);
  CHECK(rep.r1_plus_conditional ==
        doctest::Approx(test::kParadoxOptimal).epsilon(1e-9));
  CHECK(rep.r1_plus_leaf_weight ==
        doctest::Approx(0.25 * test::kParadoxOptimal).epsilon(1e-9));

  SUBCASE("paradox-free model does not reproduce it") {
    JointTable t = f.table;
    t.at(0, 0, 1, 0) = 0.0;  // drop the L1- R1+ joint
    const auto r = verify_5_4_contradiction(BranchTree(Setup::hardy(), t, {}));
    CHECK(r.verdict == "NOT-REPRODUCED");
  }

  SUBCASE("start forcing: no R2- weight in the start set") {
    // The start set L1 & R2 & L1- has no R2- member (the 3.3 zero).
    CHECK(f.table.at(0, 1, 1, 1) <= 1e-9);
  }
}

TEST_CASE("verdicts are independent of the choice policy") {
  const auto& f = fix();
  const auto base5 = verify_histories_line5(f.tree);
  const auto base54 = verify_5_4_contradiction(f.tree);
  test::Rng rng(8);
  for (int i = 0; i < 5; ++i) {
    ChoicePolicy p;
    const double a = 0.05 + 0.9 * rng.unit();
    const double b = 0.05 + 0.9 * rng.unit();
    p.left = {a, 1 - a};
    p.right = {b, 1 - b};
    REQUIRE(p.full_support());
    const BranchTree t(Setup::hardy(), f.table, p);
    CHECK(verify_histories_line5(t).forced == base5.forced);
    CHECK(verify_5_4_contradiction(t).verdict == base54.verdict);
  }
}

TEST_CASE("worlds semantics and tree semantics agree on line 5") {
  test::Rng rng(4242);
  std::size_t forced_count = 0;
  for (int iter = 0; iter < 50; ++iter) {
    // Mix tables that keep the two zeros with fully random ones so both
    // verdicts occur.
    const JointTable t = test::random_table(rng, iter % 2 == 0);
    const Model m = test::model_from(t);
    const bool via_worlds = line5_constraint_forced(m);
    const bool via_tree =
        verify_histories_line5(BranchTree(Setup::hardy(), t, {})).forced;
    CHECK(via_worlds == via_tree);
    forced_count += via_worlds ? 1 : 0;
  }
  CHECK(forced_count > 0);
  CHECK(forced_count < 50);
}

TEST_CASE("tree rendering is stable") {
  const auto& f = fix();
  CHECK(f.tree.indented_text() == f.tree.indented_text());
  const std::string table = f.tree.leaf_table();
  CHECK(table.find("L1+ R1+") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 16);
}

TEST_CASE("invalid policies are rejected") {
  ChoicePolicy p;
  p.left = {0.7, 0.7};
  CHECK_FALSE(p.valid());
  CHECK_THROWS_AS(BranchTree(Setup::hardy(), fix().table, p), Error);
}
