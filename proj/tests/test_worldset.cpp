#include <doctest.h>

#include "cfw/worldset.hpp"
#include "test_helpers.hpp"

using namespace cfw;

namespace {
WorldSet random_set(test::Rng& rng, std::size_t n) {
  WorldSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.below(2)) s.set(i);
  return s;
}
}  // namespace

TEST_CASE("worldset basics") {
  WorldSet s(16);
  CHECK(s.empty());
  s.set(3);
  s.set(11);
  CHECK(s.count() == 2);
  CHECK(s.test(3));
  CHECK_FALSE(s.test(4));
  CHECK(s.first() == 3);
  s.reset(3);
  CHECK(s.first() == 11);
  CHECK(WorldSet::full(16).count() == 16);
  CHECK_THROWS(s.set(16));
}

TEST_CASE("worldset crosses word boundaries") {
  WorldSet s(130);
  s.set(0);
  s.set(64);
  s.set(129);
  CHECK(s.count() == 3);
  CHECK(s.complement().count() == 127);
  CHECK(s.indices() == std::vector<std::size_t>{0, 64, 129});
}

TEST_CASE("set algebra laws are exact") {
  test::Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 1 + rng.below(100);
    const WorldSet a = random_set(rng, n);
    const WorldSet b = random_set(rng, n);

    // De Morgan, both directions.
    CHECK(a.set_union(b).complement() ==
          a.complement().set_intersection(b.complement()));
    CHECK(a.set_intersection(b).complement() ==
          a.complement().set_union(b.complement()));
    // Difference as intersection with the complement.
    CHECK(a.set_difference(b) == a.set_intersection(b.complement()));
    // Double complement.
    CHECK(a.complement().complement() == a);
    // Subset iff difference empty.
    CHECK(a.subset_of(b) == a.set_difference(b).empty());
    // Intersection counts.
    CHECK(a.set_union(b).count() + a.set_intersection(b).count() ==
          a.count() + b.count());
  }
}

TEST_CASE("universe mismatch is rejected") {
  WorldSet a(8), b(9);
  CHECK_THROWS(a.set_union(b));
}
