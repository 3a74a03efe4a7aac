#include "cfw/histories.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfw {

bool ChoicePolicy::valid(double tol) const {
  return std::abs(left[0] + left[1] - 1.0) <= tol &&
         std::abs(right[0] + right[1] - 1.0) <= tol && left[0] >= 0 &&
         left[1] >= 0 && right[0] >= 0 && right[1] >= 0;
}

bool ChoicePolicy::full_support(double floor) const {
  return left[0] >= floor && left[1] >= floor && right[0] >= floor &&
         right[1] >= floor;
}

namespace {
std::string leaf_label(const Setup& s, std::size_t i, std::size_t so,
                       std::size_t j, std::size_t to) {
  const auto& lm = s.region(0).measurements[i];
  const auto& rm = s.region(1).measurements[j];
  return lm.label + lm.outcomes[so] + " " + rm.label + rm.outcomes[to];
}
}  // namespace

BranchTree::BranchTree(const Setup& setup, const JointTable& table,
                       const ChoicePolicy& policy)
    : policy_(policy), null_tol_(table.null_tolerance()) {
  if (!policy.valid()) throw Error("choice policy does not sum to one");
  // Level-1 weights use the L marginal, which no-signaling makes
  // independent of the R choice; compute with j = 0.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s)
      level1_[i * 2 + s] =
          policy.left[i] * (table.at(i, 0, s, 0) + table.at(i, 0, s, 1));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < 2; ++j)
        level2_[i * 4 + s * 2 + j] = level1_[i * 2 + s] * policy.right[j];
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t t = 0; t < 2; ++t)
          leaves_.push_back({i, s, j, t,
                             policy.left[i] * policy.right[j] *
                                 table.at(i, j, s, t),
                             table.at(i, j, s, t),
                             leaf_label(setup, i, s, j, t)});
}

const BranchTree::Leaf& BranchTree::leaf(std::size_t i, std::size_t s,
                                         std::size_t j, std::size_t t) const {
  return leaves_.at(i * 8 + s * 4 + j * 2 + t);
}

double BranchTree::level1_weight(std::size_t i, std::size_t s) const {
  return level1_.at(i * 2 + s);
}

double BranchTree::level2_weight(std::size_t i, std::size_t s,
                                 std::size_t j) const {
  return level2_.at(i * 4 + s * 2 + j);
}

std::string BranchTree::indented_text() const {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s) {
      const auto& first = leaf(i, s, 0, 0);
      const auto l1label = first.label.substr(0, first.label.find(' '));
      os << l1label << "  w=" << level1_weight(i, s) << "\n";
      for (std::size_t j = 0; j < 2; ++j) {
        os << "  R-choice " << j + 1 << "  w=" << level2_weight(i, s, j)
           << "\n";
        for (std::size_t t = 0; t < 2; ++t) {
          const auto& lf = leaf(i, s, j, t);
          os << "    " << lf.label << "  w=" << lf.weight << "\n";
        }
      }
    }
  return os.str();
}

std::string BranchTree::leaf_table() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& lf : leaves_) os << lf.label << " " << lf.weight << "\n";
  return os.str();
}

BranchTree build_family(const Model& m, const JointTable& table,
                        const ChoicePolicy& policy) {
  return BranchTree(m.setup(), table, policy);
}

HistoryFamily natural_family(const QuantumModel& model) {
  HistoryFamily fam;
  fam.state = model.state;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      fam.chains[i][j].resize(4);
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t)
          // L acts first, R later; the chain operator is built later-first.
          fam.chains[i][j][s * 2 + t] =
              model.measurements.projector({1, j, t}).matrix *
              model.measurements.projector({0, i, s}).matrix;
    }
  return fam;
}

double check_consistency(const HistoryFamily& family) {
  const CMatrix rho = family.state.density();
  double worst = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& chains = family.chains[i][j];
      for (std::size_t a = 0; a < chains.size(); ++a)
        for (std::size_t b = 0; b < chains.size(); ++b) {
          if (a == b) continue;
          const Complex d =
              (chains[a] * rho * chains[b].adjoint()).trace();
          worst = std::max(worst, std::abs(d.real()));
        }
    }
  return worst;
}

std::vector<double> consistency_diagonal(const HistoryFamily& family) {
  const CMatrix rho = family.state.density();
  std::vector<double> out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (const auto& chain : family.chains[i][j])
        out.push_back((chain * rho * chain.adjoint()).trace().real());
  return out;
}

std::vector<BranchTree::Leaf> trace_pivot_path(
    const BranchTree& tree,
    const std::function<bool(const BranchTree::Leaf&)>& start,
    std::size_t alternative_r_choice) {
  std::vector<BranchTree::Leaf> out;
  std::vector<bool> taken(16, false);
  bool any_start = false;
  for (const auto& lf : tree.leaves()) {
    if (lf.conditional <= tree.null_tolerance() || !start(lf)) continue;
    any_start = true;
    // Back to the node before the R choice (the level-1 node), then forward
    // along the alternative branch.
    for (std::size_t t = 0; t < 2; ++t) {
      const auto& reached =
          tree.leaf(lf.l_choice, lf.l_outcome, alternative_r_choice, t);
      const std::size_t key = lf.l_choice * 8 + lf.l_outcome * 4 +
                              alternative_r_choice * 2 + t;
      if (reached.conditional > tree.null_tolerance() && !taken[key]) {
        taken[key] = true;
        out.push_back(reached);
      }
    }
  }
  if (!any_start)
    throw EmptyStartError("no positive-weight leaf matches the start");
  return out;
}

HistoriesLine5Result verify_histories_line5(const BranchTree& tree) {
  HistoriesLine5Result res{true, true};
  // Start: L2 & R2 & R2+ (choice indices 1, 1; R outcome +).
  auto start = [](const BranchTree::Leaf& lf) {
    return lf.l_choice == 1 && lf.r_choice == 1 && lf.r_outcome == 0;
  };
  std::vector<BranchTree::Leaf> reached;
  try {
    reached = trace_pivot_path(tree, start, 0);
  } catch (const EmptyStartError&) {
    return res;  // vacuously forced
  }
  for (const auto& lf : tree.leaves())
    if (start(lf) && lf.conditional > tree.null_tolerance() &&
        lf.l_outcome != 0)
      res.start_all_l2_plus = false;
  for (const auto& lf : reached)
    if (lf.r_outcome != 1) res.forced = false;
  return res;
}

ContradictionHistoriesReport verify_5_4_contradiction(const BranchTree& tree) {
  ContradictionHistoriesReport rep{"NOT-REPRODUCED", false, true, 0.0, 0.0};
  // Start: L1 & R2 & L1-.
  auto start = [](const BranchTree::Leaf& lf) {
    return lf.l_choice == 0 && lf.r_choice == 1 && lf.l_outcome == 1;
  };
  std::vector<BranchTree::Leaf> reached;
  try {
    reached = trace_pivot_path(tree, start, 0);
  } catch (const EmptyStartError&) {
    return rep;
  }
  rep.start_nonempty = true;
  for (const auto& lf : tree.leaves())
    if (start(lf) && lf.conditional > tree.null_tolerance() &&
        lf.r_outcome != 0)
      rep.start_all_r2_plus = false;
  for (const auto& lf : reached)
    if (lf.r_outcome == 0 && lf.conditional > rep.r1_plus_conditional) {
      rep.r1_plus_leaf_weight = lf.weight;
      rep.r1_plus_conditional = lf.conditional;
    }
  if (rep.r1_plus_conditional > tree.null_tolerance())
    rep.verdict = "CONTRADICTION-REPRODUCED";
  return rep;
}

}  // namespace cfw
