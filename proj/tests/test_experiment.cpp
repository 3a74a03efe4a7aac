#include <doctest.h>

#include <algorithm>

#include "cfw/formula.hpp"
#include "cfw/setup.hpp"
#include "test_helpers.hpp"

using namespace cfw;

namespace {

Setup random_setup(test::Rng& rng) {
  const std::size_t regions = 1 + rng.below(3);
  std::vector<Region> rs;
  for (std::size_t r = 0; r < regions; ++r) {
    const std::size_t nm = 1 + rng.below(3);
    std::vector<Measurement> ms;
    for (std::size_t m = 0; m < nm; ++m) {
      const std::size_t no = 1 + rng.below(3);
      std::vector<std::string> outs;
      for (std::size_t o = 0; o < no; ++o) outs.push_back("o" + std::to_string(o));
      ms.push_back({"M" + std::to_string(r) + std::to_string(m), outs});
    }
    rs.push_back({"G" + std::to_string(r), ms});
  }
  return Setup(rs);
}

// Brute-force reference enumeration by plain recursion over regions.
void brute_force(const Setup& s, std::size_t r, std::string prefix,
                 std::vector<std::string>& out) {
  if (r == s.region_count()) {
    out.push_back(prefix);
    return;
  }
  for (const auto& m : s.region(r).measurements)
    for (const auto& o : m.outcomes)
      brute_force(s, r + 1, prefix + m.label + o + "|", out);
}

}  // namespace

TEST_CASE("hardy preset yields 16 worlds in lexicographic order") {
  const Setup s = Setup::hardy();
  const auto worlds = enumerate_logical_worlds(s);
  REQUIRE(worlds.size() == 16);
  CHECK(worlds.front().label(s) == "L1+ R1+");
  CHECK(worlds[1].label(s) == "L1+ R1-");
  CHECK(worlds[4].label(s) == "L1- R1+");
  CHECK(worlds.back().label(s) == "L2- R2-");
  for (std::size_t i = 0; i < worlds.size(); ++i)
    CHECK(worlds[i].index() == i);
}

TEST_CASE("degenerate setups") {
  const Setup one({{"A", {{"A1", {"x"}}}}});
  CHECK(enumerate_logical_worlds(one).size() == 1);

  const Setup six({{"A", {{"A1", {"x", "y", "z"}}, {"A2", {"x", "y", "z"}}}}});
  CHECK(enumerate_logical_worlds(six).size() == 6);
}

TEST_CASE("enumeration matches brute force on random setups") {
  test::Rng rng(2024);
  for (int iter = 0; iter < 20; ++iter) {
    const Setup s = random_setup(rng);
    std::size_t expected = 1;
    for (std::size_t r = 0; r < s.region_count(); ++r)
      expected *= s.region_branches(r);

    const auto worlds = enumerate_logical_worlds(s);
    CHECK(worlds.size() == expected);

    std::vector<std::string> reference;
    brute_force(s, 0, "", reference);
    REQUIRE(reference.size() == worlds.size());
    std::vector<std::string> labels;
    for (const auto& w : worlds) labels.push_back(w.label(s, "|") + "|");
    // Same set and same (lexicographic-by-declaration) order.
    CHECK(labels == reference);
  }
}

TEST_CASE("capacity bound") {
  std::vector<Region> rs;
  for (int r = 0; r < 8; ++r)
    rs.push_back({"G" + std::to_string(r),
                  {{"m" + std::to_string(r) + "a", {"0", "1", "2", "3"}},
                   {"m" + std::to_string(r) + "b", {"0", "1", "2", "3"}}}});
  const Setup big(rs);  // 8^8 = 16M worlds > 2^20
  CHECK_THROWS_AS(enumerate_logical_worlds(big), CapacityError);
}

TEST_CASE("setup validation") {
  CHECK_THROWS_AS(Setup({}), Error);
  CHECK_THROWS_AS(
      Setup({{"A", {{"M", {"+"}}}}, {"B", {{"M", {"+"}}}}}),  // dup label
      Error);
  CHECK_THROWS_AS(Setup({{"A", {}}}), Error);
}

TEST_CASE("atom truth with outcome entailment") {
  const Setup s = Setup::hardy();
  const auto worlds = enumerate_logical_worlds(s);
  // (L2,+,R1,-) is index 8*1 + 0*... : L2+ digit = (choice 1,outcome 0) -> 2,
  // R1- digit = (0,1) -> 1; index = 2*4 + 1 = 9.
  const World& w = worlds[9];
  REQUIRE(w.label(s) == "L2+ R1-");
  CHECK(atom_truth(w, Atom::outcome_atom(s, 0, 1, 0)));   // L2+
  CHECK_FALSE(atom_truth(w, Atom::outcome_atom(s, 0, 0, 0)));  // L1+
  CHECK(atom_truth(w, Atom::choice(s, 1, 0)));            // R1
  CHECK_FALSE(atom_truth(w, Atom::outcome_atom(s, 1, 0, 0)));  // R1+
}

TEST_CASE("conflict region") {
  const Setup s = Setup::hardy();
  const auto worlds = enumerate_logical_worlds(s);
  const World& w = worlds[9];  // L2+ R1-
  CHECK(conflict_region(w, Atom::choice(s, 1, 1)) == std::size_t{1});  // R2
  CHECK(conflict_region(w, Atom::choice(s, 1, 0)) == std::nullopt);    // R1
  CHECK(conflict_region(w, Atom::choice(s, 0, 0)) == std::size_t{0});  // L1
}

TEST_CASE("agreement outside the cone") {
  const Setup s = Setup::hardy();
  const CausalStructure cs = CausalStructure::all_spacelike(2);
  const auto worlds = enumerate_logical_worlds(s);

  const World& w = worlds[14];   // L2- R2+
  const World& v1 = worlds[13];  // L2- R1-  (same L part)
  const World& v2 = worlds[9];   // L2+ R1-  (different L part)
  CHECK(agrees_outside_cone(v1, w, 1, cs));
  CHECK_FALSE(agrees_outside_cone(v2, w, 1, cs));
  CHECK(agrees_outside_cone(w, w, 1, cs));
  CHECK(agrees_outside_cone(w, w, std::nullopt, cs));
  CHECK_FALSE(agrees_outside_cone(v1, w, std::nullopt, cs));

  SUBCASE("equivalence relation for fixed source") {
    test::Rng rng(5);
    for (int iter = 0; iter < 40; ++iter) {
      const auto src = rng.below(3) == 0
                           ? std::optional<std::size_t>{}
                           : std::optional<std::size_t>{rng.below(2)};
      const World& a = worlds[rng.below(16)];
      const World& b = worlds[rng.below(16)];
      const World& c = worlds[rng.below(16)];
      CHECK(agrees_outside_cone(a, a, src, cs));
      CHECK(agrees_outside_cone(a, b, src, cs) ==
            agrees_outside_cone(b, a, src, cs));
      if (agrees_outside_cone(a, b, src, cs) &&
          agrees_outside_cone(b, c, src, cs))
        CHECK(agrees_outside_cone(a, c, src, cs));
    }
  }
}

TEST_CASE("causal structure validation and frames") {
  CausalStructure cs(2);
  cs.set_spacelike(0, 1);
  cs.validate();
  CHECK(admissible_frames(cs).size() == 2);  // both orders realizable

  CausalStructure timelike(2);
  timelike.set_forward_cone(0, 1);  // region 1 after region 0
  timelike.validate();
  const auto frames = admissible_frames(timelike);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].order == std::vector<std::size_t>{0, 1});

  CausalStructure bad(2);
  bad.set_spacelike(0, 1);
  bad.set_forward_cone(0, 1);
  CHECK_THROWS_AS(bad.validate(), Error);
}
