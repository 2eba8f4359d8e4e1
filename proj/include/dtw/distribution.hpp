#pragma once

#include "dtw/fraction.hpp"
#include "dtw/walk.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace dtw {

/// Counts of walks by (transient, period), normalized by the number of walks.
/// Walks without an attractor land in the (transient, 0) bucket.
class JointDistribution {
public:
  using Key = std::pair<std::size_t, std::size_t>; // (transient, period)

  JointDistribution(std::size_t mu, Rule rule) : mu_(mu), rule_(rule) {}

  void add(std::size_t transient, std::size_t period, std::uint64_t n = 1);
  void add(const Trajectory& t) { add(t.transient, t.period); }
  /// Integer addition of counts; order of merges never matters.
  void merge(const JointDistribution& other);

  [[nodiscard]] std::size_t mu() const noexcept { return mu_; }
  [[nodiscard]] Rule rule() const noexcept { return rule_; }
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] const std::map<Key, std::uint64_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::uint64_t count(std::size_t transient, std::size_t period) const;
  /// count / total. Throws std::logic_error on an empty distribution.
  [[nodiscard]] Fraction mass(std::size_t transient, std::size_t period) const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

private:
  std::size_t mu_;
  Rule rule_;
  std::uint64_t total_ = 0;
  std::map<Key, std::uint64_t> counts_;
};

} // namespace dtw
