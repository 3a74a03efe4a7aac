#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace cfw {

/// A subset of the enumerated logical worlds, as a fixed-width bitmask.
/// All algebra is exact bitwise arithmetic.
class WorldSet {
public:
  WorldSet() = default;
  explicit WorldSet(std::size_t universe_size);

  static WorldSet full(std::size_t universe_size);

  std::size_t universe_size() const { return size_; }

  void set(std::size_t i);
  void reset(std::size_t i);
  bool test(std::size_t i) const;

  std::size_t count() const;
  bool empty() const;

  bool subset_of(const WorldSet& other) const;
  bool intersects(const WorldSet& other) const;

  WorldSet set_union(const WorldSet& other) const;
  WorldSet set_intersection(const WorldSet& other) const;
  WorldSet set_difference(const WorldSet& other) const;
  /// Complement within the universe of logical worlds.
  WorldSet complement() const;

  /// Lowest set index, or npos when empty.
  std::size_t first() const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<std::size_t> indices() const;

  friend bool operator==(const WorldSet& a, const WorldSet& b);

private:
  void check_same_universe(const WorldSet& other) const;

  std::size_t size_ = 0;
  std::vector<uint64_t> bits_;
};

}  // namespace cfw
