#include "hs1d/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hs1d {

namespace {

std::vector<double> gather_breakpoints(const CoefficientField& cf, double l, double r) {
  std::vector<double> b;
  cf.append_breakpoints(l, r, b);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Uniform grid of n subintervals merged with jump positions; drops nodes
// closer than ~1e-13 * len to keep subintervals nondegenerate.
std::vector<double> make_nodes(double l, double r, std::size_t n, const std::vector<double>& bpts) {
  const double len = r - l;
  std::vector<double> nodes;
  nodes.reserve(n + 1 + bpts.size());
  for (std::size_t i = 0; i <= n; ++i)
    nodes.push_back(l + len * static_cast<double>(i) / static_cast<double>(n));
  nodes.back() = r;
  nodes.insert(nodes.end(), bpts.begin(), bpts.end());
  std::sort(nodes.begin(), nodes.end());
  const double min_gap = 1e-13 * std::max(len, 1.0);
  std::vector<double> out;
  out.reserve(nodes.size());
  out.push_back(l);
  for (double v : nodes) {
    if (v - out.back() > min_gap && v < r - min_gap) out.push_back(v);
  }
  out.push_back(r);
  return out;
}

std::size_t initial_subintervals(const CoefficientField& cf, double len) {
  const double h = cf.max_spacing();
  std::size_t n = 64;
  if (std::isfinite(h) && len / h > static_cast<double>(n)) {
    n = static_cast<std::size_t>(std::ceil(len / h));
    n = std::min(n, kQuadNodeCeiling / 2);
  }
  return n;
}

struct Triple {
  double inv_a, f, f_over_a;
};

Triple compute_cumulative(const CoefficientField& cf, const std::vector<double>& nodes,
                          std::vector<double>& I_invA, std::vector<double>& I_F,
                          std::vector<double>& I_FoverA, std::vector<double>& scratch_mid,
                          std::vector<double>& scratch_a, std::vector<double>& scratch_f) {
  const std::size_t m = nodes.size() - 1;
  scratch_mid.resize(m);
  scratch_a.resize(m);
  scratch_f.resize(m);
  for (std::size_t i = 0; i < m; ++i) scratch_mid[i] = 0.5 * (nodes[i] + nodes[i + 1]);
  cf.fill_af(scratch_mid.data(), m, scratch_a.data(), scratch_f.data());
  I_invA.assign(m + 1, 0.0);
  I_F.assign(m + 1, 0.0);
  I_FoverA.assign(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double h = nodes[i + 1] - nodes[i];
    const double fm = scratch_f[i];
    const double ia = 1.0 / scratch_a[i];
    I_F[i + 1] = I_F[i] + h * fm;
    I_invA[i + 1] = I_invA[i] + h * ia;
    I_FoverA[i + 1] = I_FoverA[i] + h * (I_F[i] + 0.5 * h * fm) * ia;
  }
  return {I_invA.back(), I_F.back(), I_FoverA.back()};
}

}  // namespace

double QuadCache::interp(const std::vector<double>& I, double xq) const {
  if (xq <= x.front()) return I.front();
  if (xq >= x.back()) return I.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double t = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return I[j - 1] + t * (I[j] - I[j - 1]);
}

QuadCache build_cache(const CoefficientField& cf, double l, double r, double tol) {
  if (!(l < r)) fail(Errc::OutOfDomain, "build_cache: requires l < r");
  if (!(tol > 0)) fail(Errc::OutOfDomain, "build_cache: requires tol > 0");
  QuadCache c;
  c.l = l;
  c.r = r;
  c.tol_eff = tol * std::max(1.0, r - l);
  const auto bpts = gather_breakpoints(cf, l, r);

  std::vector<double> mid, am, fm;
  Triple prev{0, 0, 0};
  bool have_prev = false;
  std::size_t n = initial_subintervals(cf, r - l);
  for (;; n *= 2) {
    auto nodes = make_nodes(l, r, n, bpts);
    if (nodes.size() > kQuadNodeCeiling) {
      fail(Errc::TolNotReached,
           "build_cache: node ceiling reached before endpoint values stabilized");
    }
    const Triple cur = compute_cumulative(cf, nodes, c.I_invA, c.I_F, c.I_FoverA, mid, am, fm);
    c.x = std::move(nodes);
    ++c.refinements;
    if (have_prev) {
      const double delta = std::max({std::abs(cur.inv_a - prev.inv_a), std::abs(cur.f - prev.f),
                                     std::abs(cur.f_over_a - prev.f_over_a)});
      if (delta <= c.tol_eff) break;
    }
    prev = cur;
    have_prev = true;
  }
  c.a_l = cf.a_at(l);
  c.a_r = cf.a_at(r);
  return c;
}

QuadCache build_cache(const FieldRealization& omega, double eps, double l, double r, double tol) {
  ScaledField cf(omega, eps);
  return build_cache(cf, l, r, tol);
}

QuadCache build_cache_frozen(const FieldRealization& omega, double x0, double l, double r,
                             double tol) {
  FrozenField cf(omega, x0);
  return build_cache(cf, l, r, tol);
}

double CumulativeIntegral::interp(double xq) const {
  if (xq <= x.front()) return I.front();
  if (xq >= x.back()) return I.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double t = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return I[j - 1] + t * (I[j] - I[j - 1]);
}

CumulativeIntegral build_cumulative(const FillFn& integrand, double l, double r, double tol,
                                    double max_spacing, const std::vector<double>& breakpoints) {
  if (!(l < r)) fail(Errc::OutOfDomain, "build_cumulative: requires l < r");
  CumulativeIntegral c;
  c.tol_eff = tol * std::max(1.0, r - l);
  std::vector<double> bpts = breakpoints;
  std::sort(bpts.begin(), bpts.end());
  bpts.erase(std::unique(bpts.begin(), bpts.end()), bpts.end());

  std::size_t n = 64;
  if (std::isfinite(max_spacing) && (r - l) / max_spacing > static_cast<double>(n)) {
    n = static_cast<std::size_t>(std::ceil((r - l) / max_spacing));
    n = std::min(n, kQuadNodeCeiling / 2);
  }
  std::vector<double> mid, vals;
  double prev_total = 0;
  bool have_prev = false;
  for (;; n *= 2) {
    auto nodes = make_nodes(l, r, n, bpts);
    if (nodes.size() > kQuadNodeCeiling) {
      fail(Errc::TolNotReached,
           "build_cumulative: node ceiling reached before the integral stabilized");
    }
    const std::size_t m = nodes.size() - 1;
    mid.resize(m);
    vals.resize(m);
    for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (nodes[i] + nodes[i + 1]);
    integrand(mid.data(), m, vals.data());
    c.I.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      c.I[i + 1] = c.I[i] + (nodes[i + 1] - nodes[i]) * vals[i];
    c.x = std::move(nodes);
    ++c.refinements;
    if (have_prev && std::abs(c.I.back() - prev_total) <= c.tol_eff) break;
    prev_total = c.I.back();
    have_prev = true;
  }
  return c;
}

}  // namespace hs1d
