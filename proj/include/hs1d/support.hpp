#pragma once

#include <vector>

#include "hs1d/common.hpp"

namespace hs1d {

struct Interval {
  double l = 0, r = 0;
  double length() const { return r - l; }
};

struct MergeOutcome;

// Finite union of disjoint open intervals, sorted, each longer than the merge
// gap: the positivity set Omega(t).
class SupportSet {
 public:
  static constexpr double kMergeGap = 1e-9;

  SupportSet() = default;
  explicit SupportSet(std::vector<Interval> ivs, double gap = kMergeGap);

  const std::vector<Interval>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }
  std::size_t size() const { return iv_.size(); }
  double hull_min() const;
  double hull_max() const;
  double measure() const;
  bool contains_point(double x) const;

 private:
  struct NormalizedTag {};
  SupportSet(NormalizedTag, std::vector<Interval> ivs) : iv_(std::move(ivs)) {}
  friend MergeOutcome merge_with_groups(const std::vector<Interval>&, double);

  std::vector<Interval> iv_;
};

struct MergeOutcome {
  SupportSet set;
  // input-interval index groups that coalesced (only groups of size > 1)
  std::vector<std::vector<int>> groups;
};

MergeOutcome merge_with_groups(const std::vector<Interval>& ivs,
                               double gap = SupportSet::kMergeGap);
SupportSet merge(const SupportSet& s, double gap = SupportSet::kMergeGap);

// Hausdorff distance between the closures. EmptySupport when either is empty.
double hausdorff_distance(const SupportSet& s1, const SupportSet& s2);

// Set inclusion inner (subset of) outer up to slack.
bool is_subset(const SupportSet& inner, const SupportSet& outer, double slack = 0.0);

// Closure of inner contained in outer with a positive margin.
bool compactly_inside(const SupportSet& inner, const SupportSet& outer);

}  // namespace hs1d
