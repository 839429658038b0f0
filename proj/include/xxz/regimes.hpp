#pragma once

// Ground-state regimes of a chain in a uniform field B: which magnetization
// sector holds the ground state, where the sector level crossings sit, and
// the boundary concurrence inside each regime.

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "xxz/entanglement.hpp"

namespace xxz {

/// Copy of `base` with every site field set to `field`.
inline ChainSpec with_uniform_field(ChainSpec base, double field) {
  base.fields.assign(static_cast<std::size_t>(base.n_sites), field);
  return base;
}

inline double sector_ground_energy(const ChainSpec& spec, int n_up, const Limits& limits = {}) {
  const auto basis = build_sector_basis(spec.n_sites, n_up, limits);
  return decompose(build_sector(spec, basis)).eigenvalues(0);
}

/// Sectors (by n_up, ascending) whose lowest level lies in the global ground manifold.
inline std::vector<int> ground_sectors(const ChainSpec& spec, const Limits& limits = {},
                                       double rel_tol = kDegeneracyTolerance) {
  std::vector<double> e(static_cast<std::size_t>(spec.n_sites + 1));
  for (int k = 0; k <= spec.n_sites; ++k) e[static_cast<std::size_t>(k)] = sector_ground_energy(spec, k, limits);
  const double e0 = *std::min_element(e.begin(), e.end());
  std::vector<int> out;
  for (int k = 0; k <= spec.n_sites; ++k) {
    if (near_equal_levels(e0, e[static_cast<std::size_t>(k)], rel_tol)) out.push_back(k);
  }
  return out;
}

/// Root of a sign change of `f` on [lo, hi] by bisection; f(lo) and f(hi)
/// must have opposite signs (or one of them be zero).
inline double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  const double f_hi = f(hi);
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw NumericError("bisection interval does not bracket a root");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Field at which the lowest levels of sectors `k_a` and `k_b` cross,
/// bracketed by [lo, hi].
inline double locate_level_crossing(const ChainSpec& base, int k_a, int k_b, double lo, double hi,
                                    double tol = 1e-9, const Limits& limits = {}) {
  auto gap = [&](double b) {
    const auto spec = with_uniform_field(base, b);
    return sector_ground_energy(spec, k_a, limits) - sector_ground_energy(spec, k_b, limits);
  };
  return bisect_sign_change(gap, lo, hi, tol);
}

struct FieldRegime {
  double b_low = 0.0;
  double b_high = std::numeric_limits<double>::infinity();
  int n_up = 0;                 // lowest ground sector inside the regime
  double energy_at_low = 0.0;   // ground energy at b_low
  double c_max = 0.0;           // max boundary concurrence sampled inside the regime
};

struct RegimeScanOptions {
  double b_min = 0.0;
  double b_max = 10.0;
  double scan_step = 0.01;
  double crossing_tol = 1e-9;
  int samples_per_regime = 11;
  int pair_i = 1;
  int pair_j = -1;  // -1: last site
  double tail_width = 1.0;  // sampled span of the final, unbounded regime
};

/// Boundary (or pair) concurrence of the equal-weight ground mixture.
inline double ground_pair_concurrence(const ChainSpec& spec, int i, int j, const Limits& limits = {}) {
  const auto gm = ground_manifold(spec, limits);
  return concurrence(reduce_pair(gm.ensemble, i, j)).value;
}

/// Splits [b_min, inf) into regimes of constant ground sector. Crossings are
/// detected on a grid of `scan_step` and refined by bisection on the sector
/// energy difference.
inline std::vector<FieldRegime> find_field_regimes(const ChainSpec& base,
                                                   const RegimeScanOptions& opt = {},
                                                   const Limits& limits = {}) {
  base.validate();
  const int pj = opt.pair_j < 0 ? base.n_sites : opt.pair_j;
  auto label_at = [&](double b) { return ground_sectors(with_uniform_field(base, b), limits).front(); };

  std::vector<FieldRegime> regimes;
  FieldRegime current;
  current.b_low = opt.b_min;
  current.n_up = label_at(opt.b_min);
  const auto steps = static_cast<long>(std::ceil((opt.b_max - opt.b_min) / opt.scan_step));
  double prev_b = opt.b_min;
  for (long s = 1; s <= steps; ++s) {
    const double b = std::min(opt.b_min + static_cast<double>(s) * opt.scan_step, opt.b_max);
    const int label = label_at(b);
    if (label != current.n_up) {
      const double cross =
          locate_level_crossing(base, current.n_up, label, prev_b, b, opt.crossing_tol, limits);
      current.b_high = cross;
      regimes.push_back(current);
      current = FieldRegime{};
      current.b_low = cross;
      current.n_up = label;
    }
    prev_b = b;
  }
  regimes.push_back(current);

  for (auto& r : regimes) {
    r.energy_at_low = sector_ground_energy(with_uniform_field(base, r.b_low), r.n_up, limits);
    const double hi = std::isfinite(r.b_high) ? r.b_high : r.b_low + opt.tail_width;
    const int n = std::max(opt.samples_per_regime, 1);
    double best = 0.0;
    for (int s = 0; s < n; ++s) {
      // interior points only, so crossings themselves are never sampled
      const double t = (static_cast<double>(s) + 0.5) / static_cast<double>(n);
      const double b = r.b_low + t * (hi - r.b_low);
      best = std::max(best, ground_pair_concurrence(with_uniform_field(base, b), opt.pair_i, pj, limits));
    }
    r.c_max = best;
  }
  return regimes;
}

}  // namespace xxz
