#pragma once

// Real symmetric XXZ open-chain Hamiltonian
//
//   H = sum_i J_i (s+_i s-_{i+1} + s+_{i+1} s-_i)
//     + (Delta/2) sum_i sz_i sz_{i+1} + sum_i B_i sz_i
//
// assembled from bit arithmetic, either on the full 2^N space or on a single
// magnetization sector.

#include <cstdio>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "xxz/chain_model.hpp"

namespace xxz {

/// Dense real symmetric matrix. Off-diagonal entries are always written in
/// mirrored pairs, so (i, j) and (j, i) are bitwise equal.
class DenseSymmetricMatrix {
 public:
  DenseSymmetricMatrix() = default;
  explicit DenseSymmetricMatrix(Eigen::Index order) : m_(Eigen::MatrixXd::Zero(order, order)) {}

  /// Wraps `m`; throws DomainError if it is not square and exactly symmetric.
  static DenseSymmetricMatrix from_dense(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw DomainError("matrix is not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        if (m(i, j) != m(j, i)) throw DomainError("matrix is not symmetric");
    DenseSymmetricMatrix out;
    out.m_ = m;
    return out;
  }

  Eigen::Index order() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  void set(Eigen::Index i, Eigen::Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add_diagonal(Eigen::Index i, double v) { m_(i, i) += v; }

  const Eigen::MatrixXd& dense() const { return m_; }

  /// One row per line, full square, 17 significant digits.
  void write_csv(std::ostream& os) const {
    char buf[32];
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", m_(i, j));
        if (j) os << ',';
        os << buf;
      }
      os << '\n';
    }
  }

 private:
  Eigen::MatrixXd m_;
};

/// Diagonal (Ising + Zeeman) energy of basis state `mask`.
inline double diagonal_energy(const ChainSpec& spec, Mask mask) {
  const int n = spec.n_sites;
  double zz = 0.0;
  for (int i = 1; i < n; ++i) zz += spin_at(mask, n, i) * spin_at(mask, n, i + 1);
  double zeeman = 0.0;
  for (int i = 1; i <= n; ++i) zeeman += spec.fields[static_cast<std::size_t>(i - 1)] * spin_at(mask, n, i);
  return 0.5 * spec.delta * zz + zeeman;
}

namespace detail {

// Fills `h` over the states enumerated by `label_of` / `index_of`.
template <typename LabelOf, typename IndexOf>
void assemble(const ChainSpec& spec, std::size_t dim, LabelOf label_of, IndexOf index_of,
              DenseSymmetricMatrix& h) {
  const int n = spec.n_sites;
  for (std::size_t a = 0; a < dim; ++a) {
    const Mask x = label_of(a);
    h.add_diagonal(static_cast<Eigen::Index>(a), diagonal_energy(spec, x));
    for (int i = 1; i < n; ++i) {
      const Mask pair = site_bit(n, i) | site_bit(n, i + 1);
      const Mask bits = x & pair;
      if (bits == 0 || bits == pair) continue;
      const Mask y = x ^ pair;
      if (y < x) continue;  // each hopping pair written once, mirrored by set()
      const auto b = index_of(y);
      h.set(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b),
            spec.couplings[static_cast<std::size_t>(i - 1)]);
    }
  }
}

}  // namespace detail

/// Full 2^N matrix; row/column index equals the basis label.
inline DenseSymmetricMatrix build_full(const ChainSpec& spec, const Limits& limits = {}) {
  spec.validate();
  if (spec.n_sites > limits.full_space_sites) {
    throw ResourceError("full space of " + std::to_string(spec.n_sites) +
                        " sites exceeds cap of " + std::to_string(limits.full_space_sites));
  }
  const std::size_t dim = std::size_t{1} << spec.n_sites;
  DenseSymmetricMatrix h(static_cast<Eigen::Index>(dim));
  detail::assemble(
      spec, dim, [](std::size_t a) { return static_cast<Mask>(a); },
      [](Mask y) { return static_cast<std::size_t>(y); }, h);
  return h;
}

/// The full Hamiltonian restricted to the rows and columns of `basis`.
inline DenseSymmetricMatrix build_sector(const ChainSpec& spec, const SectorBasis& basis) {
  spec.validate();
  if (basis.n_sites() != spec.n_sites) {
    throw DomainError("sector basis has " + std::to_string(basis.n_sites()) +
                      " sites but chain has " + std::to_string(spec.n_sites));
  }
  DenseSymmetricMatrix h(static_cast<Eigen::Index>(basis.size()));
  detail::assemble(
      spec, basis.size(), [&](std::size_t a) { return basis.state(a); },
      [&](Mask y) { return *basis.index_of(y); }, h);
  return h;
}

/// Uniform XX chain with a bulk field on sites 2..N-1 and none on the ends.
inline ChainSpec build_channel(int n_sites, double coupling, double bulk_field) {
  if (n_sites < 3) throw DomainError("channel needs at least 3 sites");
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.couplings.assign(static_cast<std::size_t>(n_sites - 1), coupling);
  spec.fields.assign(static_cast<std::size_t>(n_sites), bulk_field);
  spec.fields.front() = 0.0;
  spec.fields.back() = 0.0;
  spec.delta = 0.0;
  spec.validate();
  return spec;
}

}  // namespace xxz
