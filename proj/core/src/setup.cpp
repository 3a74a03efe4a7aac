#include "cfw/setup.hpp"

#include <algorithm>
#include <set>

#include "cfw/formula.hpp"

namespace cfw {

Setup Setup::hardy() {
  return Setup({
      Region{"L", {{"L1", {"+", "-"}}, {"L2", {"+", "-"}}}},
      Region{"R", {{"R1", {"+", "-"}}, {"R2", {"+", "-"}}}},
  });
}

Setup::Setup(std::vector<Region> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw Error("setup needs at least one region");
  std::set<std::string> labels;
  std::set<std::string> names;
  for (const auto& r : regions_) {
    if (!names.insert(r.name).second)
      throw Error("duplicate region name '" + r.name + "'");
    if (r.measurements.empty())
      throw Error("region '" + r.name + "' declares no measurement");
    for (const auto& m : r.measurements) {
      if (!labels.insert(m.label).second)
        throw Error("duplicate measurement label '" + m.label + "'");
      if (m.outcomes.empty())
        throw Error("measurement '" + m.label + "' declares no outcome");
      std::set<std::string> outs(m.outcomes.begin(), m.outcomes.end());
      if (outs.size() != m.outcomes.size())
        throw Error("duplicate outcome label under '" + m.label + "'");
    }
  }
}

std::optional<std::size_t> Setup::region_index(const std::string& name) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (regions_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> Setup::find_measurement(
    const std::string& label) const {
  for (std::size_t r = 0; r < regions_.size(); ++r)
    for (std::size_t m = 0; m < regions_[r].measurements.size(); ++m)
      if (regions_[r].measurements[m].label == label) return {{r, m}};
  return std::nullopt;
}

std::size_t Setup::region_branches(std::size_t r) const {
  std::size_t n = 0;
  for (const auto& m : region(r).measurements) n += m.outcomes.size();
  return n;
}

std::size_t Setup::logical_world_count(std::size_t bound) const {
  std::size_t total = 1;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    const std::size_t b = region_branches(r);
    if (total > bound / b)
      throw CapacityError("logical world count exceeds bound " +
                          std::to_string(bound));
    total *= b;
  }
  return total;
}

CausalStructure::CausalStructure(std::size_t region_count)
    : n_(region_count), spacelike_(n_ * n_, 0), cone_(n_ * n_, 0) {
  for (std::size_t r = 0; r < n_; ++r) cone_[r * n_ + r] = 1;
}

CausalStructure CausalStructure::all_spacelike(std::size_t region_count) {
  CausalStructure cs(region_count);
  for (std::size_t a = 0; a < region_count; ++a)
    for (std::size_t b = a + 1; b < region_count; ++b) cs.set_spacelike(a, b);
  return cs;
}

void CausalStructure::set_spacelike(std::size_t a, std::size_t b) {
  spacelike_[a * n_ + b] = spacelike_[b * n_ + a] = 1;
}

void CausalStructure::set_forward_cone(std::size_t a, std::size_t b) {
  cone_[a * n_ + b] = 1;
}

bool CausalStructure::spacelike(std::size_t a, std::size_t b) const {
  return spacelike_.at(a * n_ + b) != 0;
}

bool CausalStructure::in_forward_cone(std::size_t a, std::size_t b) const {
  return cone_.at(a * n_ + b) != 0;
}

void CausalStructure::validate() const {
  for (std::size_t a = 0; a < n_; ++a) {
    if (spacelike(a, a)) throw Error("region cannot be spacelike to itself");
    if (!in_forward_cone(a, a)) throw Error("forward cone must be reflexive");
    for (std::size_t b = 0; b < n_; ++b) {
      if (a == b) continue;
      if (spacelike(a, b) && (in_forward_cone(a, b) || in_forward_cone(b, a)))
        throw Error("spacelike pair cannot be cone-related");
      if (in_forward_cone(a, b) && in_forward_cone(b, a))
        throw Error("forward cone must be antisymmetric across regions");
    }
  }
}

std::vector<Frame> admissible_frames(const CausalStructure& cs) {
  std::vector<std::size_t> order(cs.region_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<Frame> frames;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < order.size() && ok; ++i)
      for (std::size_t j = i + 1; j < order.size() && ok; ++j)
        // order[i] comes earlier; a cone pointing backwards is inadmissible
        if (cs.in_forward_cone(order[j], order[i]) && order[i] != order[j])
          ok = false;
    if (ok) frames.push_back(Frame{order});
  } while (std::next_permutation(order.begin(), order.end()));
  return frames;
}

std::string World::label(const Setup& setup, const std::string& sep) const {
  std::string out;
  for (std::size_t r = 0; r < rc_.size(); ++r) {
    if (r) out += sep;
    const auto& m = setup.region(r).measurements[rc_[r].first];
    out += m.label + m.outcomes[rc_[r].second];
  }
  return out;
}

std::vector<World> enumerate_logical_worlds(const Setup& setup,
                                            std::size_t bound) {
  const std::size_t total = setup.logical_world_count(bound);
  const std::size_t nr = setup.region_count();

  // Per-region branch tables in declaration order.
  std::vector<std::vector<std::pair<uint8_t, uint8_t>>> branches(nr);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t m = 0; m < setup.region(r).measurements.size(); ++m)
      for (std::size_t o = 0;
           o < setup.region(r).measurements[m].outcomes.size(); ++o)
        branches[r].push_back({uint8_t(m), uint8_t(o)});

  std::vector<World> worlds;
  worlds.reserve(total);
  std::vector<std::size_t> digit(nr, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<std::pair<uint8_t, uint8_t>> rc(nr);
    for (std::size_t r = 0; r < nr; ++r) rc[r] = branches[r][digit[r]];
    worlds.emplace_back(idx, std::move(rc));
    // Increment with the last region fastest: earlier regions vary slowest.
    for (std::size_t r = nr; r-- > 0;) {
      if (++digit[r] < branches[r].size()) break;
      digit[r] = 0;
    }
  }
  return worlds;
}

bool atom_truth(const World& w, const Atom& a) {
  if (w.choice(a.region) != a.measurement) return false;
  if (a.kind == AtomKind::Choice) return true;
  return w.outcome(a.region) == a.outcome;
}

std::optional<std::size_t> conflict_region(const World& w, const Atom& c) {
  if (atom_truth(w, c)) return std::nullopt;
  return c.region;
}

bool agrees_outside_cone(const World& v, const World& w,
                         std::optional<std::size_t> source,
                         const CausalStructure& cs) {
  for (std::size_t r = 0; r < w.region_count(); ++r) {
    if (source && cs.in_forward_cone(*source, r)) continue;
    if (v.choice(r) != w.choice(r) || v.outcome(r) != w.outcome(r))
      return false;
  }
  return true;
}

}  // namespace cfw
