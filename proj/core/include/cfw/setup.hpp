#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfw/errors.hpp"

namespace cfw {

struct Atom;  // formula.hpp

/// One measurement an experimenter may choose: a label plus the labels of
/// its possible outcomes ("+", "-" in the two-outcome case).
struct Measurement {
  std::string label;
  std::vector<std::string> outcomes;
};

struct Region {
  std::string name;
  std::vector<Measurement> measurements;
};

/// The experimental universe: which regions exist and which measurements
/// and outcomes are available in each. One experimenter per region.
class Setup {
public:
  static Setup hardy();  // two spacelike regions L, R; L1/L2, R1/R2; +/-

  Setup(std::vector<Region> regions);

  const std::vector<Region>& regions() const { return regions_; }
  std::size_t region_count() const { return regions_.size(); }
  const Region& region(std::size_t r) const { return regions_.at(r); }

  std::optional<std::size_t> region_index(const std::string& name) const;

  /// Measurement labels are unique across the whole setup so that an atom
  /// token identifies its region on its own. Returns (region, measurement).
  std::optional<std::pair<std::size_t, std::size_t>> find_measurement(
      const std::string& label) const;

  /// Branch count of one region: sum over measurements of outcome counts.
  std::size_t region_branches(std::size_t r) const;

  /// Number of logically possible worlds (product of region branch counts).
  /// Throws CapacityError if it exceeds `bound`.
  std::size_t logical_world_count(std::size_t bound = kDefaultWorldBound) const;

  static constexpr std::size_t kDefaultWorldBound = std::size_t{1} << 20;

private:
  std::vector<Region> regions_;
};

/// Region-level causal structure. `spacelike` is symmetric and irreflexive;
/// `in_forward_cone(a, b)` says region b lies in V+(a). Every region is in
/// its own forward cone; distinct cone-related regions are ordered one way
/// only.
class CausalStructure {
public:
  static CausalStructure all_spacelike(std::size_t region_count);

  explicit CausalStructure(std::size_t region_count);

  void set_spacelike(std::size_t a, std::size_t b);
  void set_forward_cone(std::size_t a, std::size_t b);  // b inside V+(a)

  bool spacelike(std::size_t a, std::size_t b) const;
  bool in_forward_cone(std::size_t a, std::size_t b) const;
  std::size_t region_count() const { return n_; }

  /// Throws Error if the relations are inconsistent (spacelike pair inside
  /// a cone, or a two-way cone between distinct regions).
  void validate() const;

private:
  std::size_t n_;
  std::vector<uint8_t> spacelike_;  // n*n
  std::vector<uint8_t> cone_;      // n*n, cone_[a*n+b] == b in V+(a)
};

/// A total order on regions realizable in some Lorentz frame: cone-related
/// regions keep their causal order, spacelike pairs may go either way.
struct Frame {
  std::vector<std::size_t> order;  // region indices, earliest first
};

/// All frames admitted by a causal structure, in lexicographic order.
std::vector<Frame> admissible_frames(const CausalStructure& cs);

/// One logically possible world: a choice of measurement and an outcome for
/// it in every region.
class World {
public:
  World() = default;
  World(std::size_t index, std::vector<std::pair<uint8_t, uint8_t>> rc)
      : index_(index), rc_(std::move(rc)) {}

  std::size_t index() const { return index_; }
  std::size_t choice(std::size_t region) const { return rc_.at(region).first; }
  std::size_t outcome(std::size_t region) const { return rc_.at(region).second; }
  std::size_t region_count() const { return rc_.size(); }

  bool same_assignment(const World& other) const { return rc_ == other.rc_; }

  /// "L2+ R1-" style label; the machine form uses `sep` = ",".
  std::string label(const Setup& setup, const std::string& sep = " ") const;

private:
  std::size_t index_ = 0;
  std::vector<std::pair<uint8_t, uint8_t>> rc_;  // (choice, outcome) per region
};

/// Every logically possible world in lexicographic order: earlier regions
/// vary slowest, and within a region the (measurement, outcome) pairs run in
/// declaration order. Deterministic; throws CapacityError above `bound`.
std::vector<World> enumerate_logical_worlds(
    const Setup& setup, std::size_t bound = Setup::kDefaultWorldBound);

/// Truth of an atom at a world. An outcome atom entails its choice atom:
/// "L2+" is true only where L2 is the chosen measurement and its outcome is +.
bool atom_truth(const World& w, const Atom& a);

/// The region in which imposing choice atom `c` would conflict with `w`,
/// i.e. c's region when `w` chose a different measurement there. No conflict
/// means an empty change cone.
std::optional<std::size_t> conflict_region(const World& w, const Atom& c);

/// True when `v` and `w` agree (choice and outcome) on every region outside
/// the forward cone of `source`. With no source region, they must agree
/// everywhere.
bool agrees_outside_cone(const World& v, const World& w,
                         std::optional<std::size_t> source,
                         const CausalStructure& cs);

}  // namespace cfw
