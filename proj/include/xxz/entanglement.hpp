#pragma once

// Two-site reduced density matrices and Wootters concurrence.
//
// Every state here is real: the Hamiltonian is real symmetric, so its
// eigenvectors, thermal states and reduced states are real as well.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xxz/chain_model.hpp"
#include "xxz/eigensolver.hpp"
#include "xxz/errors.hpp"
#include "xxz/hamiltonian.hpp"

namespace xxz {

inline constexpr double kNormTolerance = 1e-12;

/// Real pure state, stored either on the full 2^N space or on one sector.
class PureState {
 public:
  static PureState full(int n_sites, Eigen::VectorXd amplitudes) {
    if (n_sites < 1 || n_sites > 30) throw DomainError("full-space state needs 1..30 sites");
    if (amplitudes.size() != (Eigen::Index{1} << n_sites)) {
      throw DomainError("full-space state must have 2^N amplitudes");
    }
    return PureState(n_sites, nullptr, std::move(amplitudes));
  }

  static PureState in_sector(std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd amplitudes) {
    if (!basis) throw DomainError("null sector basis");
    if (amplitudes.size() != static_cast<Eigen::Index>(basis->size())) {
      throw DomainError("sector state size does not match its basis");
    }
    const int n = basis->n_sites();
    return PureState(n, std::move(basis), std::move(amplitudes));
  }

  int n_sites() const { return n_sites_; }
  bool is_sector() const { return basis_ != nullptr; }
  const SectorBasis* basis() const { return basis_.get(); }
  const Eigen::VectorXd& amplitudes() const { return amplitudes_; }

  /// Amplitude of basis label `mask` (zero outside the stored sector).
  double amplitude(Mask mask) const {
    if (!basis_) return amplitudes_(static_cast<Eigen::Index>(mask));
    if (std::popcount(mask) != basis_->n_up()) return 0.0;
    const auto idx = basis_->index_of(mask);
    return idx ? amplitudes_(static_cast<Eigen::Index>(*idx)) : 0.0;
  }

  Mask label(Eigen::Index stored_index) const {
    return basis_ ? basis_->state(static_cast<std::size_t>(stored_index))
                  : static_cast<Mask>(stored_index);
  }

 private:
  PureState(int n, std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd amps)
      : n_sites_(n), basis_(std::move(basis)), amplitudes_(std::move(amps)) {
    if (!amplitudes_.allFinite()) throw DomainError("non-finite amplitudes");
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
      throw DomainError("state is not normalized");
    }
  }

  int n_sites_;
  std::shared_ptr<const SectorBasis> basis_;
  Eigen::VectorXd amplitudes_;
};

/// Dense density matrix over the full 2^N space.
struct DensityMatrix {
  int n_sites = 0;
  Eigen::MatrixXd rho;
};

/// Probabilistic mixture of pure states. Cheaper than a dense DensityMatrix
/// when only a few states carry weight.
struct StateEnsemble {
  std::vector<double> weights;
  std::vector<PureState> states;
};

/// Reduced state of (site_i, site_j) in the basis |00>, |01>, |10>, |11>,
/// first bit belonging to site_i.
struct TwoQubitDensityMatrix {
  int site_i = 1;
  int site_j = 2;
  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
};

struct ConcurrenceResult {
  double value = 0.0;
  std::array<double, 4> lambdas{};  // descending
};

namespace detail {

inline void check_pair(int n_sites, int i, int j) {
  if (i < 1 || i > n_sites || j < 1 || j > n_sites) {
    throw DomainError("site pair (" + std::to_string(i) + "," + std::to_string(j) +
                      ") outside 1.." + std::to_string(n_sites));
  }
  if (i == j) throw DomainError("pair sites must differ");
}

struct PairBits {
  Mask bit_i;
  Mask bit_j;

  int index(Mask x) const { return ((x & bit_i) ? 2 : 0) | ((x & bit_j) ? 1 : 0); }
  Mask with(Mask rest, int b) const { return rest | ((b & 2) ? bit_i : 0) | ((b & 1) ? bit_j : 0); }
  Mask rest(Mask x) const { return x & ~(bit_i | bit_j); }
};

inline void accumulate_pure(const PureState& psi, const PairBits& pb, double weight,
                            Eigen::Matrix4d& out) {
  const auto& amps = psi.amplitudes();
  for (Eigen::Index s = 0; s < amps.size(); ++s) {
    const double ax = amps(s);
    if (ax == 0.0) continue;
    const Mask x = psi.label(s);
    const int a = pb.index(x);
    const Mask rest = pb.rest(x);
    for (int b = 0; b < 4; ++b) {
      out(a, b) += weight * ax * psi.amplitude(pb.with(rest, b));
    }
  }
}

}  // namespace detail

inline TwoQubitDensityMatrix reduce_pair(const PureState& state, int i, int j) {
  detail::check_pair(state.n_sites(), i, j);
  const detail::PairBits pb{site_bit(state.n_sites(), i), site_bit(state.n_sites(), j)};
  TwoQubitDensityMatrix out{i, j, Eigen::Matrix4d::Zero()};
  detail::accumulate_pure(state, pb, 1.0, out.rho);
  return out;
}

inline TwoQubitDensityMatrix reduce_pair(const StateEnsemble& ensemble, int i, int j) {
  if (ensemble.states.empty() || ensemble.states.size() != ensemble.weights.size()) {
    throw DomainError("ensemble must have one weight per state");
  }
  const int n = ensemble.states.front().n_sites();
  detail::check_pair(n, i, j);
  const detail::PairBits pb{site_bit(n, i), site_bit(n, j)};
  TwoQubitDensityMatrix out{i, j, Eigen::Matrix4d::Zero()};
  for (std::size_t m = 0; m < ensemble.states.size(); ++m) {
    if (ensemble.states[m].n_sites() != n) throw DomainError("ensemble mixes chain lengths");
    detail::accumulate_pure(ensemble.states[m], pb, ensemble.weights[m], out.rho);
  }
  return out;
}

inline TwoQubitDensityMatrix reduce_pair_mixed(const DensityMatrix& state, int i, int j) {
  const int n = state.n_sites;
  detail::check_pair(n, i, j);
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (state.rho.rows() != dim || state.rho.cols() != dim) {
    throw DomainError("density matrix order does not match 2^n_sites");
  }
  const detail::PairBits pb{site_bit(n, i), site_bit(n, j)};
  TwoQubitDensityMatrix out{i, j, Eigen::Matrix4d::Zero()};
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Mask mx = static_cast<Mask>(x);
    const int a = pb.index(mx);
    const Mask rest = pb.rest(mx);
    for (int b = 0; b < 4; ++b) {
      out.rho(a, b) += state.rho(x, static_cast<Eigen::Index>(pb.with(rest, b)));
    }
  }
  return out;
}

namespace detail {

inline int sites_from_dimension(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw DomainError("decomposition order is not a power of two");
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

inline DensityMatrix mixture(const SpectralDecomposition& dec, const Eigen::VectorXd& weights) {
  DensityMatrix out;
  out.n_sites = sites_from_dimension(dec.size());
  out.rho = dec.eigenvectors * weights.asDiagonal() * dec.eigenvectors.transpose();
  return out;
}

}  // namespace detail

/// Boltzmann state at spec.temperature, energies shifted by the ground level.
inline DensityMatrix thermal_state(const ChainSpec& spec, const SpectralDecomposition& dec) {
  if (!(spec.temperature > 0.0)) {
    throw DomainError("thermal_state needs temperature > 0; use ground_state_density at T = 0");
  }
  const Eigen::Index dim = dec.size();
  if (dim != (Eigen::Index{1} << spec.n_sites)) {
    throw DomainError("decomposition is not over the full space of this chain");
  }
  Eigen::VectorXd w(dim);
  const double e0 = dec.eigenvalues(0);
  for (Eigen::Index m = 0; m < dim; ++m) w(m) = std::exp(-(dec.eigenvalues(m) - e0) / spec.temperature);
  w /= w.sum();
  return detail::mixture(dec, w);
}

/// Equal-weight mixture over the ground space (the T -> 0+ thermal limit).
inline DensityMatrix ground_state_density(const SpectralDecomposition& dec,
                                          double rel_tol = kDegeneracyTolerance) {
  const auto ground = ground_space(dec, rel_tol);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dec.size());
  for (auto m : ground) w(m) = 1.0 / static_cast<double>(ground.size());
  return detail::mixture(dec, w);
}

/// sigma^y (x) sigma^y for real two-qubit states.
inline Eigen::Matrix4d spin_flip() {
  Eigen::Matrix4d y = Eigen::Matrix4d::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

inline void validate_two_qubit(const Eigen::Matrix4d& rho) {
  if (!rho.allFinite()) throw DomainError("two-qubit state has non-finite entries");
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
    throw DomainError("two-qubit state is not symmetric");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-8) {
    throw DomainError("two-qubit state trace deviates from 1");
  }
}

/// Wootters concurrence of a real two-qubit state.
///
/// The lambdas are the square roots of the eigenvalues of the symmetric
/// matrix sqrt(rho) * rho~ * sqrt(rho) with rho~ = Y rho Y, which share their
/// spectrum with rho * rho~. For real rho that matrix is A^2 with
/// A = sqrt(rho) Y sqrt(rho), so the lambdas are read off as |eig(A)|; this
/// skips a square root that would amplify roundoff near zero to ~1e-8.
inline ConcurrenceResult concurrence(const TwoQubitDensityMatrix& state) {
  const Eigen::Matrix4d& rho = state.rho;
  validate_two_qubit(rho);

  const Eigen::Matrix4d sym = 0.5 * (rho + rho.transpose());
  const auto rho_dec = decompose(DenseSymmetricMatrix::from_dense(sym));
  if (rho_dec.eigenvalues(0) < -1e-8) {
    throw DomainError("two-qubit state is not positive semidefinite (min eigenvalue " +
                      std::to_string(rho_dec.eigenvalues(0)) + ")");
  }
  Eigen::Vector4d root = rho_dec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4d sqrt_rho =
      rho_dec.eigenvectors * root.asDiagonal() * rho_dec.eigenvectors.transpose();

  Eigen::Matrix4d a = sqrt_rho * spin_flip() * sqrt_rho;
  a = (0.5 * (a + a.transpose())).eval();
  Eigen::Vector4d mags = decompose(DenseSymmetricMatrix::from_dense(a)).eigenvalues.cwiseAbs();
  std::sort(mags.data(), mags.data() + 4, std::greater<>());

  ConcurrenceResult out;
  for (int k = 0; k < 4; ++k) out.lambdas[static_cast<std::size_t>(k)] = mags(k);
  const auto& l = out.lambdas;
  out.value = std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
  return out;
}

/// Global ground manifold of a chain, found sector by sector.
///
/// The Hamiltonian conserves total sigma^z, so every sector's lowest levels
/// are diagonalized independently and all levels within the degeneracy
/// tolerance of the global minimum are kept, with equal weights.
struct GroundManifold {
  struct Member {
    int n_up;
    Eigen::Index index_in_sector;
  };
  double energy = 0.0;
  std::vector<Member> members;
  StateEnsemble ensemble;

  std::size_t degeneracy() const { return members.size(); }
};

inline GroundManifold ground_manifold(const ChainSpec& spec, const Limits& limits = {},
                                      double rel_tol = kDegeneracyTolerance) {
  spec.validate();
  struct Candidate {
    int n_up;
    std::shared_ptr<const SectorBasis> basis;
    SpectralDecomposition dec;
  };
  std::vector<Candidate> sectors;
  double e_min = 0.0;
  for (int k = 0; k <= spec.n_sites; ++k) {
    auto basis = std::make_shared<const SectorBasis>(build_sector_basis(spec.n_sites, k, limits));
    auto dec = decompose(build_sector(spec, *basis));
    if (sectors.empty() || dec.eigenvalues(0) < e_min) e_min = dec.eigenvalues(0);
    sectors.push_back({k, std::move(basis), std::move(dec)});
  }
  GroundManifold out;
  out.energy = e_min;
  for (const auto& c : sectors) {
    for (Eigen::Index m = 0; m < c.dec.size(); ++m) {
      if (!near_equal_levels(e_min, c.dec.eigenvalues(m), rel_tol)) break;
      out.members.push_back({c.n_up, m});
      out.ensemble.states.push_back(PureState::in_sector(c.basis, c.dec.vector(m)));
    }
  }
  const double w = 1.0 / static_cast<double>(out.members.size());
  out.ensemble.weights.assign(out.members.size(), w);
  return out;
}

/// Ground manifold of a single sector, equal weights.
inline GroundManifold sector_ground_manifold(const ChainSpec& spec, int n_up,
                                             const Limits& limits = {},
                                             double rel_tol = kDegeneracyTolerance) {
  spec.validate();
  auto basis = std::make_shared<const SectorBasis>(build_sector_basis(spec.n_sites, n_up, limits));
  const auto dec = decompose(build_sector(spec, *basis));
  GroundManifold out;
  out.energy = dec.eigenvalues(0);
  for (auto m : ground_space(dec, rel_tol)) {
    out.members.push_back({n_up, m});
    out.ensemble.states.push_back(PureState::in_sector(basis, dec.vector(m)));
  }
  out.ensemble.weights.assign(out.members.size(), 1.0 / static_cast<double>(out.members.size()));
  return out;
}

}  // namespace xxz
