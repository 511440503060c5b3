#pragma once

// Kernels, diffusion operators and their spectra.
//
// Everything here is a free function templated on the scalar type of its
// Eigen argument, so expressions (blocks, maps, products) can be passed
// without materializing them first.

#include "nnmanifold/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

namespace nnmanifold {

/// Row-stochastic Markov operator P = Q^-1 W together with the degree
/// vector diag(Q). Keeping the degrees lets spectra be computed through
/// the symmetric conjugate Q^1/2 P Q^-1/2.
template <typename Scalar>
struct DiffusionOperator {
  Matrix<Scalar> matrix;
  Vector<Scalar> degree;

  Eigen::Index size() const { return matrix.rows(); }
};

/// Eigenvalues of a diffusion operator sorted by descending magnitude.
template <typename Scalar>
struct DiffusionSpectrum {
  Vector<Scalar> eigenvalues;
};

/// Threshold below which |lambda| counts as zero for the t = 0 convention.
inline constexpr double kNumericalRankCutoff = 1e-12;

/// Euclidean distances between rows.
template <typename Derived>
Matrix<typename Derived::Scalar> pairwise_distances(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  const Matrix<Scalar> x = points;
  Matrix<Scalar> d = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

/// W_ij = exp(-D_ij^2 / (2 sigma^2)), diagonal exactly 1.
template <typename Derived>
Matrix<typename Derived::Scalar> gaussian_affinity(const Eigen::MatrixBase<Derived>& distances,
                                                   typename Derived::Scalar sigma = 0.5) {
  using Scalar = typename Derived::Scalar;
  require(std::isfinite(static_cast<double>(sigma)) && sigma > Scalar(0), ErrorKind::InvalidSigma,
          "kernel bandwidth must be positive and finite");
  require(distances.rows() == distances.cols(), ErrorKind::ShapeMismatch,
          "distance matrix must be square");
  const Scalar denom = Scalar(2) * sigma * sigma;
  Matrix<Scalar> w = (-distances.array().square() / denom).exp().matrix();
  w.diagonal().setOnes();
  return w;
}

/// P = Q^-1 W with Q = diag(row sums of W).
template <typename Derived>
DiffusionOperator<typename Derived::Scalar> diffusion_operator(
    const Eigen::MatrixBase<Derived>& affinity) {
  using Scalar = typename Derived::Scalar;
  DiffusionOperator<Scalar> op;
  op.degree = affinity.rowwise().sum();
  for (Eigen::Index i = 0; i < op.degree.size(); ++i) {
    require(op.degree(i) > Scalar(0) && std::isfinite(static_cast<double>(op.degree(i))),
            ErrorKind::ZeroRow, "affinity row " + std::to_string(i) + " has no mass");
  }
  op.matrix = op.degree.cwiseInverse().asDiagonal() * affinity;
  return op;
}

/// P^t by binary exponentiation; t = 0 gives the identity. The degree
/// vector carries over because P^t stays reversible w.r.t. the same measure.
template <typename Scalar>
DiffusionOperator<Scalar> diffusion_power(const DiffusionOperator<Scalar>& op, int t) {
  require(t >= 0, ErrorKind::InvalidArgument, "diffusion time must be non-negative");
  const Eigen::Index n = op.size();
  Matrix<Scalar> result = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> base = op.matrix;
  for (int e = t; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return {std::move(result), op.degree};
}

/// pi_i = degree_i / sum(degree).
template <typename Scalar>
Vector<Scalar> stationary_distribution(const DiffusionOperator<Scalar>& op) {
  return op.degree / op.degree.sum();
}

/// All eigenvalues of P via the symmetric matrix Q^1/2 P Q^-1/2 (which
/// equals Q^-1/2 W Q^-1/2), sorted by descending |lambda|.
template <typename Scalar>
DiffusionSpectrum<Scalar> spectrum(const DiffusionOperator<Scalar>& op) {
  const Vector<Scalar> sq = op.degree.cwiseSqrt();
  Matrix<Scalar> sym = sq.asDiagonal() * op.matrix * sq.cwiseInverse().asDiagonal();
  sym = (Scalar(0.5) * (sym + sym.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::EigenFailure,
          "symmetric eigensolver did not converge");
  std::vector<Scalar> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::stable_sort(values.begin(), values.end(),
                   [](Scalar a, Scalar b) { return std::abs(a) > std::abs(b); });
  DiffusionSpectrum<Scalar> out;
  out.eigenvalues = Eigen::Map<Vector<Scalar>>(values.data(), static_cast<Eigen::Index>(values.size()));
  return out;
}

/// Entropy (nats) of alpha_i = |lambda_i|^t / sum_j |lambda_j|^t.
/// With t = 0, 0^0 is taken as 0, so the result is log(numerical rank).
template <typename Derived>
typename Derived::Scalar spectral_entropy(const Eigen::MatrixBase<Derived>& eigenvalues, int t) {
  using Scalar = typename Derived::Scalar;
  require(t >= 0, ErrorKind::InvalidArgument, "diffusion time must be non-negative");
  require(eigenvalues.size() > 0, ErrorKind::DegenerateSpectrum, "empty spectrum");
  Vector<Scalar> mass(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const Scalar a = std::abs(eigenvalues(i));
    if (t == 0) {
      mass(i) = a > Scalar(kNumericalRankCutoff) ? Scalar(1) : Scalar(0);
    } else {
      mass(i) = std::pow(a, t);
    }
  }
  const Scalar total = mass.sum();
  require(total > Scalar(0), ErrorKind::DegenerateSpectrum, "all eigenvalue powers vanish");
  Scalar h = 0;
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    const Scalar alpha = mass(i) / total;
    if (alpha > Scalar(0)) h -= alpha * std::log(alpha);
  }
  return h;
}

template <typename Scalar>
Scalar diffusion_spectral_entropy(const DiffusionSpectrum<Scalar>& s, int t) {
  return spectral_entropy(s.eigenvalues, t);
}

/// Kernel -> operator -> spectrum -> entropy for one point cloud.
template <typename Derived>
typename Derived::Scalar point_cloud_dse(const Eigen::MatrixBase<Derived>& points, int t,
                                         typename Derived::Scalar sigma) {
  const auto op = diffusion_operator(gaussian_affinity(pairwise_distances(points), sigma));
  return diffusion_spectral_entropy(spectrum(op), t);
}

/// I_D(Z;Y) = S_D(P_Z, t) - sum_y p(y) S_D(P_{Z|Y=y}, t). Each conditional
/// operator is rebuilt from the rows of its class.
template <typename Derived>
typename Derived::Scalar diffusion_spectral_mutual_information(
    const Eigen::MatrixBase<Derived>& points, std::span<const int> labels, int t,
    typename Derived::Scalar sigma = 0.5) {
  using Scalar = typename Derived::Scalar;
  require(static_cast<Eigen::Index>(labels.size()) == points.rows(), ErrorKind::LengthMismatch,
          "one label per point required");
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(static_cast<Eigen::Index>(i));
  }
  for (const auto& [label, rows] : members) {
    require(rows.size() >= 2, ErrorKind::DegenerateClass,
            "class " + std::to_string(label) + " has fewer than two points");
  }
  const Scalar whole = point_cloud_dse(points, t, sigma);
  if (members.size() == 1) return Scalar(0);
  const Scalar n = static_cast<Scalar>(labels.size());
  Scalar conditional = 0;
  for (const auto& [label, rows] : members) {
    Matrix<Scalar> subset(static_cast<Eigen::Index>(rows.size()), points.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) subset.row(r) = points.row(rows[r]);
    conditional += static_cast<Scalar>(rows.size()) / n * point_cloud_dse(subset, t, sigma);
  }
  return whole - conditional;
}

}  // namespace nnmanifold
