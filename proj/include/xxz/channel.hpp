#pragma once

// Long-distance boundary channel: a uniform XX chain whose bulk sites
// 2..N-1 sit in a field B while the two end sites see none. In the
// single-excitation sector the mirror symmetry splits the N x N problem into
// two k x k tridiagonal blocks (N = 2k), symmetric (+) and antisymmetric (-).

#include <cmath>
#include <limits>
#include <vector>

#include "xxz/closed_forms.hpp"
#include "xxz/entanglement.hpp"

namespace xxz {

struct FoldedChannelMatrices {
  int k = 0;
  DenseSymmetricMatrix m_plus;
  DenseSymmetricMatrix m_minus;
};

inline void check_channel_size(int n_sites) {
  if (n_sites < 4 || n_sites % 2 != 0) {
    throw DomainError("folded channel needs an even chain length >= 4, got " +
                      std::to_string(n_sites));
  }
}

inline FoldedChannelMatrices fold(int n_sites, double coupling, double bulk_field) {
  check_channel_size(n_sites);
  const int k = n_sites / 2;
  const double x_edge = -static_cast<double>(2 * k - 2) * bulk_field;
  const double x_bulk = -static_cast<double>(2 * k - 4) * bulk_field;
  auto build = [&](double corner_sign) {
    DenseSymmetricMatrix m(k);
    for (int i = 0; i < k; ++i) m.add_diagonal(i, i == 0 ? x_edge : x_bulk);
    for (int i = 0; i + 1 < k; ++i) m.set(i, i + 1, coupling);
    m.add_diagonal(k - 1, corner_sign * coupling);
    return m;
  };
  return {k, build(+1.0), build(-1.0)};
}

/// Largest absolute difference between the sorted union of the folded
/// spectra and the one-up sector spectrum of the unfolded channel.
inline double fold_spectrum_deviation(int n_sites, double coupling, double bulk_field) {
  const auto folded = fold(n_sites, coupling, bulk_field);
  const auto plus = decompose(folded.m_plus).eigenvalues;
  const auto minus = decompose(folded.m_minus).eigenvalues;
  std::vector<double> joined(plus.data(), plus.data() + plus.size());
  joined.insert(joined.end(), minus.data(), minus.data() + minus.size());
  std::sort(joined.begin(), joined.end());

  const auto spec = build_channel(n_sites, coupling, bulk_field);
  Limits limits;
  limits.sector_dimension = std::max<std::size_t>(limits.sector_dimension, static_cast<std::size_t>(n_sites));
  const auto basis = build_sector_basis(n_sites, 1, limits);
  const auto full = decompose(build_sector(spec, basis)).eigenvalues;

  double worst = 0.0;
  for (std::size_t i = 0; i < joined.size(); ++i) {
    worst = std::max(worst, std::abs(joined[i] - full(static_cast<Eigen::Index>(i))));
  }
  return worst;
}

inline bool unfold_consistency(int n_sites, double coupling, double bulk_field, double tol = 1e-10) {
  return fold_spectrum_deviation(n_sites, coupling, bulk_field) <= tol;
}

/// Eigenvector of a folded block for a known eigenvalue, by the three-term
/// recurrence run from the chain center (row k-1) out to the boundary
/// (row 0). For beta > 1 that is the growing direction, so each component
/// keeps its relative accuracy even far below 1e-16 of the largest one.
inline Eigen::VectorXd tridiagonal_vector(const DenseSymmetricMatrix& m, double energy) {
  const Eigen::Index k = m.order();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
  v(k - 1) = 1.0;
  for (Eigen::Index i = k - 1; i >= 1; --i) {
    double num = (energy - m(i, i)) * v(i);
    if (i + 1 < k) num -= m(i, i + 1) * v(i + 1);
    v(i - 1) = num / m(i, i - 1);
    if (std::abs(v(i - 1)) > 1e100) v /= std::abs(v(i - 1));
  }
  v.normalize();
  canonicalize_sign(v);
  return v;
}

/// What to do when the two parity blocks have numerically equal ground levels.
enum class ParityTiePolicy {
  kReject,               // throw DegenerateGroundError
  kPreferAntisymmetric,  // take M-, the exact ground block for J > 0
};

struct ChannelDesign {
  int n_sites = 0;
  double coupling = 0.0;
  double bulk_field = 0.0;
  double beta = 0.0;
  double ground_energy = 0.0;
  std::vector<double> coefficients;  // c_1j, j = 1..k; each covers sites j and N+1-j
  double boundary_concurrence = 0.0;
  int parity = -1;
  double parity_gap = 0.0;  // E0(M+) - E0(M-)
  bool near_degenerate = false;
};

/// Ground state of the channel from the folded blocks.
///
/// For J > 0 the single-excitation ground state is antisymmetric under the
/// mirror (its sign alternates from site to site and N is even), but the
/// splitting between the two blocks closes like beta^-(N-2) and drops below
/// double precision on long chains. A split within the degeneracy tolerance
/// sets `near_degenerate` and is resolved per `policy`.
inline ChannelDesign design(int n_sites, double coupling, double bulk_field,
                            ParityTiePolicy policy = ParityTiePolicy::kPreferAntisymmetric) {
  if (!(coupling > 0.0)) throw DomainError("channel design needs J > 0");
  const auto folded = fold(n_sites, coupling, bulk_field);
  const auto plus = decompose(folded.m_plus);
  const auto minus = decompose(folded.m_minus);
  const double e_plus = plus.eigenvalues(0);
  const double e_minus = minus.eigenvalues(0);

  ChannelDesign out;
  out.n_sites = n_sites;
  out.coupling = coupling;
  out.bulk_field = bulk_field;
  out.beta = 2.0 * bulk_field / coupling;
  out.parity_gap = e_plus - e_minus;
  const double lower = std::min(e_plus, e_minus);
  out.near_degenerate = std::abs(out.parity_gap) <= kDegeneracyTolerance * (1.0 + std::abs(lower));

  bool take_minus = e_minus <= e_plus;
  if (out.near_degenerate) {
    if (policy == ParityTiePolicy::kReject) {
      throw DegenerateGroundError("parity blocks of the N=" + std::to_string(n_sites) +
                                  " channel are degenerate within tolerance (gap " +
                                  std::to_string(out.parity_gap) + ")");
    }
    take_minus = true;
  }
  const auto& win = take_minus ? minus : plus;
  out.parity = take_minus ? -1 : +1;
  out.ground_energy = win.eigenvalues(0);
  Eigen::VectorXd v = win.vector(0);
  // the recurrence is trusted only where it reproduces the dense vector
  const Eigen::VectorXd refined = tridiagonal_vector(take_minus ? folded.m_minus : folded.m_plus, out.ground_energy);
  if (refined.allFinite() && (refined - v).cwiseAbs().maxCoeff() <= 1e-8) v = refined;
  out.coefficients.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) out.coefficients[static_cast<std::size_t>(j)] = v(j) / std::sqrt(2.0);
  out.boundary_concurrence = v(0) * v(0);
  return out;
}

/// |c_1i| / |c_1,i+1| for i = 1..k-1; a zero denominator yields +inf.
inline std::vector<double> ratio_profile(const ChannelDesign& d) {
  if (d.coefficients.size() < 2) throw DomainError("ratio profile needs k >= 2");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < d.coefficients.size(); ++i) {
    const double den = std::abs(d.coefficients[i + 1]);
    out.push_back(den == 0.0 ? std::numeric_limits<double>::infinity()
                             : std::abs(d.coefficients[i]) / den);
  }
  return out;
}

/// max_i |ratio_i / beta - 1|.
inline double max_ratio_deviation(const ChannelDesign& d) {
  double worst = 0.0;
  for (double r : ratio_profile(d)) worst = std::max(worst, std::abs(r / d.beta - 1.0));
  return worst;
}

/// XX chain with couplings J_i = J_{N-i} = base^(i-1), zero fields.
inline ChainSpec impurity_profile_chain(int n_sites, double base) {
  if (n_sites < 3) throw DomainError("impurity profile needs at least 3 sites");
  if (!(base > 0.0)) throw DomainError("impurity profile needs base > 0");
  ChainSpec spec;
  spec.n_sites = n_sites;
  for (int i = 1; i < n_sites; ++i) spec.couplings.push_back(std::pow(base, std::min(i, n_sites - i) - 1));
  spec.fields.assign(static_cast<std::size_t>(n_sites), 0.0);
  spec.validate();
  return spec;
}

/// XX chain with couplings [1, j, ..., j, 1], zero fields.
inline ChainSpec uniform_bulk_chain(int n_sites, double j_bulk) {
  if (n_sites < 3) throw DomainError("bulk profile needs at least 3 sites");
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.couplings.assign(static_cast<std::size_t>(n_sites - 1), j_bulk);
  spec.couplings.front() = 1.0;
  spec.couplings.back() = 1.0;
  spec.fields.assign(static_cast<std::size_t>(n_sites), 0.0);
  spec.validate();
  return spec;
}

/// C_1N of the ground state within one magnetization sector.
inline double sector_boundary_concurrence(const ChainSpec& spec, int n_up, const Limits& limits = {}) {
  const auto gm = sector_ground_manifold(spec, n_up, limits);
  return concurrence(reduce_pair(gm.ensemble, 1, spec.n_sites)).value;
}

}  // namespace xxz
