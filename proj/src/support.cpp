#include "hs1d/support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hs1d {

SupportSet::SupportSet(std::vector<Interval> ivs, double gap) {
  iv_ = merge_with_groups(ivs, gap).set.iv_;
}

double SupportSet::hull_min() const {
  if (empty()) fail(Errc::EmptySupport, "hull_min of empty support");
  return iv_.front().l;
}

double SupportSet::hull_max() const {
  if (empty()) fail(Errc::EmptySupport, "hull_max of empty support");
  return iv_.back().r;
}

double SupportSet::measure() const {
  double m = 0;
  for (const auto& iv : iv_) m += iv.length();
  return m;
}

bool SupportSet::contains_point(double x) const {
  for (const auto& iv : iv_) {
    if (x >= iv.l && x <= iv.r) return true;
    if (iv.l > x) break;
  }
  return false;
}

MergeOutcome merge_with_groups(const std::vector<Interval>& input, double gap) {
  MergeOutcome out;
  if (input.empty()) return out;
  std::vector<int> order(input.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&input](int a, int b) { return input[a].l < input[b].l; });

  std::vector<Interval> merged;
  std::vector<std::vector<int>> groups;
  for (int idx : order) {
    const Interval& iv = input[idx];
    if (!merged.empty() && iv.l <= merged.back().r + gap) {
      merged.back().r = std::max(merged.back().r, iv.r);
      groups.back().push_back(idx);
    } else {
      merged.push_back(iv);
      groups.push_back({idx});
    }
  }
  std::vector<Interval> kept;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].length() > gap) {
      kept.push_back(merged[i]);
      if (groups[i].size() > 1) out.groups.push_back(groups[i]);
    }
  }
  out.set = SupportSet(SupportSet::NormalizedTag{}, std::move(kept));
  return out;
}

SupportSet merge(const SupportSet& s, double gap) {
  return merge_with_groups(s.intervals(), gap).set;
}

namespace {

// distance from a point to a sorted union of closed intervals
double point_distance(double x, const std::vector<Interval>& ivs) {
  double best = 1e300;
  for (const auto& iv : ivs) {
    if (x < iv.l) {
      best = std::min(best, iv.l - x);
      break;  // sorted: later intervals are farther
    }
    if (x <= iv.r) return 0.0;
    best = std::min(best, x - iv.r);
  }
  return best;
}

double directed_hausdorff(const SupportSet& from, const SupportSet& to) {
  const auto& a = from.intervals();
  const auto& b = to.intervals();
  double worst = 0;
  for (const auto& iv : a) {
    worst = std::max(worst, point_distance(iv.l, b));
    worst = std::max(worst, point_distance(iv.r, b));
  }
  // interior maxima occur at midpoints of `to` gaps that lie inside `from`
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const double mid = 0.5 * (b[j].r + b[j + 1].l);
    if (from.contains_point(mid)) worst = std::max(worst, 0.5 * (b[j + 1].l - b[j].r));
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const SupportSet& s1, const SupportSet& s2) {
  if (s1.empty() || s2.empty())
    fail(Errc::EmptySupport, "hausdorff_distance: empty support");
  return std::max(directed_hausdorff(s1, s2), directed_hausdorff(s2, s1));
}

bool is_subset(const SupportSet& inner, const SupportSet& outer, double slack) {
  for (const auto& iv : inner.intervals()) {
    bool covered = false;
    for (const auto& ov : outer.intervals()) {
      if (iv.l >= ov.l - slack && iv.r <= ov.r + slack) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool compactly_inside(const SupportSet& inner, const SupportSet& outer) {
  if (inner.empty() || outer.empty()) return false;
  for (const auto& iv : inner.intervals()) {
    bool covered = false;
    for (const auto& ov : outer.intervals()) {
      if (iv.l > ov.l && iv.r < ov.r) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace hs1d
