#pragma once

// Graph Fourier analysis of signals living on the network manifold.

#include "nnmanifold/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nnmanifold {

enum class LaplacianKind { RandomWalk, Symmetric };

/// Gaussian affinity over inter-network distances. No self loops.
template <typename Scalar>
struct ManifoldGraph {
  Matrix<Scalar> affinity;
  Vector<Scalar> degree;
  Scalar sigma = 0;

  /// L_rw = I - D^-1 W or L_sym = I - D^-1/2 W D^-1/2.
  Matrix<Scalar> laplacian(LaplacianKind kind = LaplacianKind::Symmetric) const {
    const Eigen::Index m = affinity.rows();
    if (kind == LaplacianKind::RandomWalk) {
      return Matrix<Scalar>::Identity(m, m) - degree.cwiseInverse().asDiagonal() * affinity;
    }
    const Vector<Scalar> s = degree.cwiseSqrt().cwiseInverse();
    Matrix<Scalar> l = Matrix<Scalar>::Identity(m, m) - s.asDiagonal() * affinity * s.asDiagonal();
    return (Scalar(0.5) * (l + l.transpose())).eval();
  }
};

template <typename Scalar>
struct GraphSignal {
  std::string name;
  Vector<Scalar> values;
};

/// Median of the strictly positive upper-triangle distances.
template <typename Derived>
typename Derived::Scalar median_distance(const Eigen::MatrixBase<Derived>& n) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> v;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < n.cols(); ++j) {
      if (n(i, j) > Scalar(0)) v.push_back(n(i, j));
    }
  }
  require(!v.empty(), ErrorKind::DegenerateDistances, "all inter-network distances are zero");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : Scalar(0.5) * (v[h - 1] + v[h]);
}

/// sigma = nullopt selects the median heuristic.
template <typename Derived>
ManifoldGraph<typename Derived::Scalar> manifold_graph(
    const Eigen::MatrixBase<Derived>& distances,
    std::optional<typename Derived::Scalar> sigma = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = distances.rows();
  require(distances.cols() == m, ErrorKind::ShapeMismatch, "distance matrix must be square");
  require(m >= 3, ErrorKind::TooFewNetworks, "manifold graph needs at least three networks");
  require(distances.cwiseAbs().maxCoeff() > Scalar(0), ErrorKind::DegenerateDistances,
          "all inter-network distances are zero");
  ManifoldGraph<Scalar> g;
  g.sigma = sigma ? *sigma : median_distance(distances);
  require(g.sigma > Scalar(0) && std::isfinite(static_cast<double>(g.sigma)), ErrorKind::InvalidSigma,
          "graph bandwidth must be positive");
  g.affinity = (-distances.array().square() / (Scalar(2) * g.sigma * g.sigma)).exp().matrix();
  g.affinity.diagonal().setZero();
  g.degree = g.affinity.rowwise().sum();
  for (Eigen::Index i = 0; i < m; ++i) {
    require(g.degree(i) > Scalar(0), ErrorKind::DegenerateDistances,
            "network " + std::to_string(i) + " is disconnected from the graph");
  }
  return g;
}

/// Orthonormal harmonics of L_sym in ascending eigenvalue order.
template <typename Scalar>
std::pair<Vector<Scalar>, Matrix<Scalar>> graph_harmonics(const ManifoldGraph<Scalar>& g) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(g.laplacian(LaplacianKind::Symmetric));
  require(solver.info() == Eigen::Success, ErrorKind::EigenFailure, "Laplacian eigensolve failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Mean-centred, unit-norm copy of a signal; the zero vector stays zero.
template <typename Derived>
Vector<typename Derived::Scalar> normalized_signal(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> c = s.array() - s.mean();
  const Scalar norm = c.norm();
  if (norm > Scalar(1e-300)) c /= norm;
  else c.setZero();
  return c;
}

/// |<s, phi_i>| for every harmonic including the trivial one.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> gft_coefficients(const ManifoldGraph<Scalar>& g,
                                                        const Vector<Scalar>& signal) {
  require(signal.size() == g.affinity.rows(), ErrorKind::LengthMismatch,
          "signal length must equal the number of networks");
  const auto [values, vectors] = graph_harmonics(g);
  const Vector<Scalar> coeff = vectors.transpose() * signal;
  std::vector<std::pair<Scalar, Scalar>> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) out.emplace_back(values(i), std::abs(coeff(i)));
  return out;
}

/// (lambda_i, |<s, phi_i>|) for i >= 2 with s mean-centred and unit-norm.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> gft_spectrum(const ManifoldGraph<Scalar>& g,
                                                    const GraphSignal<Scalar>& signal) {
  auto all = gft_coefficients(g, Vector<Scalar>(normalized_signal(signal.values)));
  all.erase(all.begin());
  return all;
}

/// s^T L s on the raw signal.
template <typename Scalar>
Scalar quadratic_smoothness(const ManifoldGraph<Scalar>& g, const GraphSignal<Scalar>& signal,
                            LaplacianKind kind = LaplacianKind::Symmetric) {
  require(signal.values.size() == g.affinity.rows(), ErrorKind::LengthMismatch,
          "signal length must equal the number of networks");
  return signal.values.dot(g.laplacian(kind) * signal.values);
}

/// s^T L s / s^T s on the mean-centred signal; 0 for constant signals.
template <typename Scalar>
Scalar normalized_smoothness(const ManifoldGraph<Scalar>& g, const GraphSignal<Scalar>& signal,
                             LaplacianKind kind = LaplacianKind::Symmetric) {
  const Vector<Scalar> c = normalized_signal(signal.values);
  return quadratic_smoothness(g, GraphSignal<Scalar>{signal.name, c}, kind);
}

}  // namespace nnmanifold
