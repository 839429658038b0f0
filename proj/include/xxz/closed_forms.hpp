#pragma once

// Analytic results for short chains and for the bulk-field channel. These
// are evaluated independently of the numeric pipeline and used as its
// reference values.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xxz/errors.hpp"
#include "xxz/regimes.hpp"

namespace xxz::closed {

/// Boundary concurrence C_13 of the three-site ground state below the critical field.
inline double c13_ground(double delta, double coupling) {
  if (coupling == 0.0) throw DomainError("c13_ground needs a nonzero coupling");
  const double j2 = coupling * coupling;
  const double d = delta - std::sqrt(8.0 * j2 + delta * delta);
  return d * d / (8.0 * j2 + d * d);
}

struct PhaseBoundary3 {
  double delta;
  double coupling;
  double b_critical;
};

/// Field above which the three-site ground state is fully polarized.
inline PhaseBoundary3 critical_field_3(double delta, double coupling) {
  return {delta, coupling, (3.0 * delta + std::sqrt(8.0 * coupling * coupling + delta * delta)) / 4.0};
}

struct Level {
  int label;  // m in E_m
  int n_up;
  double energy;
};

/// Closed-form spectrum of the uniform three-site chain. The one-up levels
/// carry the Zeeman shift -B and the two-up levels +B.
inline std::array<Level, 8> spectrum_3(double delta, double coupling, double field) {
  const double root = std::sqrt(8.0 * coupling * coupling + delta * delta);
  const double d_plus = delta + root;
  const double d_minus = delta - root;
  return {{
      {0, 0, delta - 3.0 * field},
      {1, 1, -field},
      {2, 1, -d_plus / 2.0 - field},
      {3, 1, -d_minus / 2.0 - field},
      {4, 2, field},
      {5, 2, -d_plus / 2.0 + field},
      {6, 2, -d_minus / 2.0 + field},
      {7, 3, delta + 3.0 * field},
  }};
}

/// Lowest one-up level of the uniform four-site chain.
inline double e1_four(double delta, double coupling, double field) {
  return -0.5 * (4.0 * field + coupling +
                 std::sqrt(5.0 * coupling * coupling + 2.0 * coupling * delta + delta * delta));
}

/// Energy of the all-down four-site state.
inline double e0_four(double delta, double field) { return 1.5 * delta - 4.0 * field; }

struct RegimeRow {
  double b_low;
  double b_high;
  std::string ground_label;
  int n_up;
  double c14_max;
  std::optional<double> energy;  // quoted ground energy at B = 0, if any
};

/// Published four-site regimes, or nullopt when `delta` is not tabulated.
inline std::optional<std::vector<RegimeRow>> tabulated_c14_regimes(double delta) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double s5 = std::sqrt(5.0);
  if (delta == 0.0) {
    return std::vector<RegimeRow>{{0.0, (s5 - 1.0) / 4.0, "psi9", 2, 0.0472, -s5},
                                  {(s5 - 1.0) / 4.0, (s5 + 1.0) / 4.0, "psi1", 1, 0.2764, {}},
                                  {(s5 + 1.0) / 4.0, inf, "psi0", 0, 0.0, {}}};
  }
  if (delta == 0.5) {
    return std::vector<RegimeRow>{{0.0, 0.48, "psi9", 2, 0.0, -2.712},
                                  {0.48, 1.25, "psi1", 1, 0.2, {}},
                                  {1.25, inf, "psi0", 0, 0.0, {}}};
  }
  if (delta == 1.0) {
    return std::vector<RegimeRow>{{0.0, 0.66, "psi9", 2, 0.0, -3.232},
                                  {0.66, 1.70, "psi1", 1, 0.1464, {}},
                                  {1.70, inf, "psi0", 0, 0.0, {}}};
  }
  if (delta == 2.0) {
    return std::vector<RegimeRow>{{0.0, 1.04, "psi9", 2, 0.0149, -4.372},
                                  {1.04, 2.65, "psi1", 1, 0.084, {}},
                                  {2.65, inf, "psi0", 0, 0.0, {}}};
  }
  return std::nullopt;
}

inline std::string four_site_label(int n_up) {
  switch (n_up) {
    case 0: return "psi0";
    case 1: return "psi1";
    case 2: return "psi9";
    default: return "sector" + std::to_string(n_up);
  }
}

/// Four-site C_14 regimes: the published rows for tabulated Delta, numeric
/// regimes (uniform J = 1) otherwise.
inline std::vector<RegimeRow> c14_ground_regimes(double delta) {
  if (auto rows = tabulated_c14_regimes(delta)) return *rows;
  const auto spec = ChainSpec::uniform(4, 1.0, 0.0, delta);
  RegimeScanOptions opt;
  opt.b_max = 3.0 + 2.0 * std::abs(delta);
  std::vector<RegimeRow> out;
  for (const auto& r : find_field_regimes(spec, opt)) {
    out.push_back({r.b_low, r.b_high, four_site_label(r.n_up), r.n_up, r.c_max,
                   r.b_low == 0.0 ? std::optional<double>(r.energy_at_low) : std::nullopt});
  }
  return out;
}

/// C_14 of the one-up ground state of the chain [1, j_mid, 1].
inline double c14_impurity_one_up(double j_mid) {
  if (j_mid < 0.0) throw DomainError("j_mid must be nonnegative");
  const double root = std::sqrt(4.0 + j_mid * j_mid);
  // (j^2 - j*r + 2) / (j^2 - j*r + 4) with r = sqrt(4 + j^2), simplified
  return 2.0 / (root * (j_mid + root));
}

/// C_14 of the two-up ground state of the chain [1, j_mid, 1], clipped at 0.
inline double c14_impurity_two_up(double j_mid) {
  if (j_mid < 0.0) throw DomainError("j_mid must be nonnegative");
  const double raw = (j_mid * std::sqrt(j_mid * j_mid + 4.0) - 2.0) / (j_mid * j_mid + 4.0);
  return std::max(raw, 0.0);
}

/// C_15 of the one-up ground state of the chain [1, j, j, 1].
inline double c15_three_half(double j_mid) { return 1.0 / (2.0 + 4.0 * j_mid * j_mid); }

/// Exact C_14 of the four-site channel (bulk field B on sites 2 and 3).
inline double c14_channel(double field, double coupling) {
  if (!(coupling > 0.0)) throw DomainError("c14_channel needs J > 0");
  if (field < 0.0) throw DomainError("c14_channel needs B >= 0");
  const double x = 2.0 * field - coupling +
                   std::sqrt(4.0 * field * field - 4.0 * field * coupling + 5.0 * coupling * coupling);
  return x * x / (x * x + 4.0 * coupling * coupling);
}

/// C_1N for N = 2k assuming a geometric half-profile |c_i / c_{i+1}| = beta.
inline double c1n_channel(double beta, int k) {
  if (!(beta > 1.0)) throw DomainError("c1n_channel needs beta > 1");
  if (k < 2) throw DomainError("c1n_channel needs k >= 2");
  const double log_beta = std::log(beta);
  // (1 - beta^-2) / (1 - beta^-2k)
  return std::expm1(-2.0 * log_beta) / std::expm1(-2.0 * static_cast<double>(k) * log_beta);
}

inline constexpr double kBetaCap = 1e8;

/// Smallest beta with c1n_channel(beta, k) >= target, to 1e-10 relative.
/// Targets at or below the beta -> 1+ limit 1/k return a beta just above 1.
inline double beta_for_target(double target, int k) {
  if (!(target > 0.0 && target < 1.0)) throw DomainError("target must lie in (0, 1)");
  if (k < 2) throw DomainError("beta_for_target needs k >= 2");
  double lo = 1.0;
  double hi = 2.0;
  while (c1n_channel(hi, k) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBetaCap) {
      throw NumericError("target concurrence unreachable below beta = 1e8");
    }
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (c1n_channel(mid, k) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace xxz::closed
