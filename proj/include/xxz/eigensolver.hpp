#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "xxz/errors.hpp"
#include "xxz/hamiltonian.hpp"

namespace xxz {

inline constexpr double kDegeneracyTolerance = 1e-9;

/// Eigenpairs of a real symmetric matrix. Eigenvalues ascend; column m of
/// `eigenvectors` belongs to eigenvalues[m] and has its largest-magnitude
/// entry positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<std::vector<Eigen::Index>> degeneracy_groups;

  Eigen::Index size() const { return eigenvalues.size(); }
  Eigen::VectorXd vector(Eigen::Index m) const { return eigenvectors.col(m); }
};

/// Flips the sign of `v` so that its first largest-magnitude entry is positive.
inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v.size() > 0 && v(arg) < 0.0) v = -v;
}

inline bool near_equal_levels(double reference, double other, double rel_tol) {
  return other - reference <= rel_tol * (1.0 + std::abs(reference));
}

inline SpectralDecomposition decompose(const DenseSymmetricMatrix& matrix,
                                       double degeneracy_tol = kDegeneracyTolerance) {
  const Eigen::MatrixXd& a = matrix.dense();
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");

  SpectralDecomposition out;
  if (a.rows() == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver failed to converge (order " +
                       std::to_string(a.rows()) + ")");
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index m = 0; m < out.eigenvectors.cols(); ++m) {
    canonicalize_sign(out.eigenvectors.col(m));
  }

  std::vector<Eigen::Index> group{0};
  for (Eigen::Index m = 1; m < out.eigenvalues.size(); ++m) {
    if (near_equal_levels(out.eigenvalues(group.front()), out.eigenvalues(m), degeneracy_tol)) {
      group.push_back(m);
    } else {
      out.degeneracy_groups.push_back(std::move(group));
      group = {m};
    }
  }
  out.degeneracy_groups.push_back(std::move(group));
  return out;
}

/// Indices m with lambda_m - lambda_0 <= rel_tol * (1 + |lambda_0|).
inline std::vector<Eigen::Index> ground_space(const SpectralDecomposition& dec,
                                              double rel_tol = kDegeneracyTolerance) {
  std::vector<Eigen::Index> out;
  if (dec.size() == 0) throw DomainError("empty decomposition");
  const double e0 = dec.eigenvalues(0);
  for (Eigen::Index m = 0; m < dec.size(); ++m) {
    if (!near_equal_levels(e0, dec.eigenvalues(m), rel_tol)) break;
    out.push_back(m);
  }
  return out;
}

}  // namespace xxz
