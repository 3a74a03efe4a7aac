#include "cfw/worldset.hpp"

#include <bit>
#include <stdexcept>

namespace cfw {

namespace {
constexpr std::size_t kBits = 64;
std::size_t word_count(std::size_t size) { return (size + kBits - 1) / kBits; }
}  // namespace

WorldSet::WorldSet(std::size_t universe_size)
    : size_(universe_size), bits_(word_count(universe_size), 0) {}

WorldSet WorldSet::full(std::size_t universe_size) {
  WorldSet s(universe_size);
  for (auto& w : s.bits_) w = ~uint64_t{0};
  // Clear the bits beyond the universe so algebra stays exact.
  if (universe_size % kBits != 0 && !s.bits_.empty())
    s.bits_.back() &= (uint64_t{1} << (universe_size % kBits)) - 1;
  return s;
}

void WorldSet::set(std::size_t i) {
  if (i >= size_) throw std::out_of_range("WorldSet::set");
  bits_[i / kBits] |= uint64_t{1} << (i % kBits);
}

void WorldSet::reset(std::size_t i) {
  if (i >= size_) throw std::out_of_range("WorldSet::reset");
  bits_[i / kBits] &= ~(uint64_t{1} << (i % kBits));
}

bool WorldSet::test(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("WorldSet::test");
  return (bits_[i / kBits] >> (i % kBits)) & 1;
}

std::size_t WorldSet::count() const {
  std::size_t n = 0;
  for (auto w : bits_) n += std::popcount(w);
  return n;
}

bool WorldSet::empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

void WorldSet::check_same_universe(const WorldSet& other) const {
  if (size_ != other.size_)
    throw std::invalid_argument("WorldSet universe mismatch");
}

bool WorldSet::subset_of(const WorldSet& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~other.bits_[i]) return false;
  return true;
}

bool WorldSet::intersects(const WorldSet& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & other.bits_[i]) return true;
  return false;
}

WorldSet WorldSet::set_union(const WorldSet& other) const {
  check_same_universe(other);
  WorldSet out(size_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] | other.bits_[i];
  return out;
}

WorldSet WorldSet::set_intersection(const WorldSet& other) const {
  check_same_universe(other);
  WorldSet out(size_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

WorldSet WorldSet::set_difference(const WorldSet& other) const {
  check_same_universe(other);
  WorldSet out(size_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] & ~other.bits_[i];
  return out;
}

WorldSet WorldSet::complement() const {
  return full(size_).set_difference(*this);
}

std::size_t WorldSet::first() const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) return i * kBits + std::countr_zero(bits_[i]);
  return npos;
}

std::vector<std::size_t> WorldSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

bool operator==(const WorldSet& a, const WorldSet& b) {
  return a.size_ == b.size_ && a.bits_ == b.bits_;
}

}  // namespace cfw
