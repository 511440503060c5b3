#pragma once

// Per-network signatures and the m x m distance matrix between networks.

#include "nnmanifold/corpus.hpp"
#include "nnmanifold/diffusion.hpp"
#include "nnmanifold/types.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nnmanifold {

struct SignatureMethod {
  enum class Kind { Diffusion, RawDistance, KnnAdjacency, WeightMatrix };

  Kind kind = Kind::Diffusion;
  int k = 5;      // KnnAdjacency only
  int layer = 0;  // WeightMatrix only; names the exported layer

  static SignatureMethod diffusion() { return {Kind::Diffusion}; }
  static SignatureMethod raw_distance() { return {Kind::RawDistance}; }
  static SignatureMethod knn(int k = 5) { return {Kind::KnnAdjacency, k}; }
  static SignatureMethod weights(int layer = 0) { return {Kind::WeightMatrix, 5, layer}; }

  bool operator==(const SignatureMethod&) const = default;
};

/// "diffusion" | "distance" | "knn" | "weights"
std::string to_string(const SignatureMethod& method);
SignatureMethod parse_signature_method(const std::string& name, int k = 5);

struct NetworkSignature {
  std::string network_id;
  SignatureMethod method;
  MatrixXd matrix;
};

struct ManifoldMatrix {
  MatrixXd matrix;
  SignatureMethod method;
  std::vector<std::string> network_ids;
};

/// Binary symmetric k-NN graph: i~j when either is among the other's k
/// nearest neighbours. Self excluded; equal distances prefer the lower index.
template <typename Derived>
Matrix<typename Derived::Scalar> knn_adjacency(const Eigen::MatrixBase<Derived>& distances, int k) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = distances.rows();
  require(k >= 1, ErrorKind::InvalidArgument, "k must be positive");
  require(k < n, ErrorKind::KTooLarge,
          "k = " + std::to_string(k) + " needs more than " + std::to_string(n) + " points");
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    order.erase(order.begin() + i);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return distances(i, x) < distances(i, y);
    });
    for (int r = 0; r < k; ++r) {
      a(i, order[r]) = Scalar(1);
      a(order[r], i) = Scalar(1);
    }
  }
  return a;
}

/// N_ij = ||S_i - S_j||_F for a list of equally-shaped matrices.
template <typename Scalar>
Matrix<Scalar> frobenius_distances(std::span<const Matrix<Scalar>> mats) {
  const auto m = static_cast<Eigen::Index>(mats.size());
  Matrix<Scalar> n = Matrix<Scalar>::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Scalar v = (mats[i] - mats[j]).norm();
      n(i, j) = v;
      n(j, i) = v;
    }
  }
  return n;
}

/// Ranking used wherever "the N most accurate networks" is needed:
/// accuracy descending, then id ascending (index ascending without ids).
std::vector<std::size_t> rank_by_accuracy(std::span<const double> accuracies,
                                          std::span<const std::string> ids = {});

/// Mean pairwise distance among the n_top most accurate networks'
/// coordinates divided by the mean pairwise distance over all networks.
template <typename Derived>
double topn_tightness(const Eigen::MatrixBase<Derived>& embedding,
                      std::span<const double> accuracies, int n_top,
                      std::span<const std::string> ids = {}) {
  const auto m = embedding.rows();
  require(n_top >= 2, ErrorKind::TooFewNetworks, "top-N needs at least two networks");
  require(n_top <= m, ErrorKind::TooFewNetworks, "top-N exceeds the number of networks");
  require(static_cast<Eigen::Index>(accuracies.size()) == m, ErrorKind::LengthMismatch,
          "one accuracy per embedded network required");
  auto mean_pairwise = [&](std::span<const std::size_t> rows) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        total += static_cast<double>(
            (embedding.row(static_cast<Eigen::Index>(rows[a])) -
             embedding.row(static_cast<Eigen::Index>(rows[b])))
                .norm());
        ++count;
      }
    }
    return total / static_cast<double>(count);
  };
  const auto ranked = rank_by_accuracy(accuracies, ids);
  std::vector<std::size_t> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double overall = mean_pairwise(all);
  require(overall > 0.0, ErrorKind::DegenerateDistances, "all embedded networks coincide");
  return mean_pairwise(std::span(ranked).first(static_cast<std::size_t>(n_top))) / overall;
}

NetworkSignature signature(const ActivationSet& activations, const SignatureMethod& method,
                           double sigma = 0.5);

/// Weight-matrix signature; `weights` is the raw layer matrix.
NetworkSignature weight_signature(const std::string& network_id, const MatrixXd& weights,
                                  const SignatureMethod& method = SignatureMethod::weights());

ManifoldMatrix manifold_matrix(std::span<const NetworkSignature> signatures);

}  // namespace nnmanifold
