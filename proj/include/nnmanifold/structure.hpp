#pragma once

// Class separation, Ward dendrograms, partition agreement and accuracy binning.

#include "nnmanifold/diffusion.hpp"
#include "nnmanifold/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nnmanifold {

template <typename Scalar>
struct ClassStructure {
  Matrix<Scalar> centroids;           // class_count x d
  Matrix<Scalar> centroid_distances;  // class_count x class_count
  Vector<Scalar> within_class_variance;  // mean distance of members to centroid
  Scalar mean_centroid_distance = 0;  // over distinct pairs
  Scalar mean_within_variance = 0;
};

template <typename Derived>
ClassStructure<typename Derived::Scalar> class_structure(const Eigen::MatrixBase<Derived>& points,
                                                         std::span<const int> labels,
                                                         int class_count) {
  using Scalar = typename Derived::Scalar;
  require(static_cast<Eigen::Index>(labels.size()) == points.rows(), ErrorKind::LengthMismatch,
          "one label per point required");
  require(class_count >= 1, ErrorKind::InvalidArgument, "class_count must be positive");
  ClassStructure<Scalar> cs;
  cs.centroids = Matrix<Scalar>::Zero(class_count, points.cols());
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(class_count), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < class_count, ErrorKind::InvalidArgument,
            "label out of range");
    cs.centroids.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    ++sizes[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < class_count; ++c) {
    require(sizes[c] > 0, ErrorKind::EmptyClass, "class " + std::to_string(c) + " has no members");
    cs.centroids.row(c) /= Scalar(sizes[c]);
  }
  cs.centroid_distances = pairwise_distances(cs.centroids);
  cs.within_class_variance = Vector<Scalar>::Zero(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    cs.within_class_variance(labels[i]) +=
        (points.row(static_cast<Eigen::Index>(i)) - cs.centroids.row(labels[i])).norm();
  }
  for (int c = 0; c < class_count; ++c) cs.within_class_variance(c) /= Scalar(sizes[c]);
  cs.mean_within_variance = cs.within_class_variance.mean();
  if (class_count > 1) {
    cs.mean_centroid_distance = cs.centroid_distances.sum() /
                                Scalar(class_count * (class_count - 1));
  }
  return cs;
}

/// One agglomeration step. Leaves are 0..n-1; the cluster created by merge
/// k gets id n + k. cluster_a < cluster_b.
struct Merge {
  int cluster_a = 0;
  int cluster_b = 0;
  double distance = 0.0;
  int size = 0;
};

struct Dendrogram {
  int n_leaves = 0;
  std::vector<Merge> merges;  // n_leaves - 1 entries, non-decreasing distance

  /// Leaves in the left-to-right order of the drawn tree.
  std::vector<int> leaf_order() const;
};

/// Ward linkage via Lance-Williams on squared distances. Heights are
/// sqrt(2 * increase in within-cluster SSE), so two singletons merge at
/// their Euclidean distance. Ties go to the smallest (a, b) id pair.
Dendrogram ward_dendrogram(const MatrixXd& points);

/// Labels after undoing the last k - 1 merges, canonicalized by first occurrence.
std::vector<int> cut_dendrogram(const Dendrogram& d, int k = 10);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

MatrixXd pairwise_ari_matrix(const std::vector<std::vector<int>>& partitions);

/// Squared Pearson correlation.
double r_squared(std::span<const double> x, std::span<const double> y);
double pearson_r(std::span<const double> x, std::span<const double> y);

struct NetworkStats {
  std::string id;
  double accuracy = 0.0;
  double mean_within_variance = 0.0;
  std::vector<int> partition;  // dendrogram cut; may be empty
};

struct AccuracyBin {
  double low = 0.0;
  double high = 0.0;
  std::vector<std::string> member_ids;
  double mean_within_variance = 0.0;
  double std_within_variance = 0.0;  // population standard deviation
  std::optional<double> mean_pairwise_ari;  // empty when the bin has no pair
};

/// Half-open bins [k w, (k+1) w) anchored at 0; empty bins are omitted.
std::vector<AccuracyBin> bin_by_accuracy(std::span<const NetworkStats> stats, double width = 0.03);

}  // namespace nnmanifold
