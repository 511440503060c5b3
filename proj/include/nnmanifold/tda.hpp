#pragma once

// Vietoris-Rips persistent homology over Z/2 and Wasserstein distances
// between persistence diagrams.

#include "nnmanifold/types.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nnmanifold {

struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;  // +inf for essential classes
  int dim = 0;

  double persistence() const { return death - birth; }
  bool operator==(const PersistencePoint&) const = default;
};

struct PersistenceDiagram {
  std::string network_id;
  std::vector<PersistencePoint> points;  // sorted by (dim, birth, death)

  std::vector<PersistencePoint> dimension(int dim) const;
};

struct RipsConfig {
  int max_dim = 2;
  std::optional<double> max_radius;  // nullopt: enclosing radius (largest distance)
  int max_points = 512;
};

/// Persistence of the Rips filtration up to homology dimension max_dim.
///
/// H0 comes from union-find over edges in filtration order. Higher
/// dimensions use the coboundary-matrix reduction of Z/2 cohomology with
/// clearing, which yields the same barcode as homology. Simplices are
/// ordered by diameter, then by decreasing combinatorial index. Zero-length
/// bars are dropped in dimensions >= 1; all n - 1 finite H0 bars are kept.
PersistenceDiagram rips_persistence(const MatrixXd& distances, const RipsConfig& config = {});

struct DiagramDistanceConfig {
  enum class InfinitePolicy { Drop, Cap };

  double p = 2.0;
  InfinitePolicy infinite_policy = InfinitePolicy::Drop;
  double cap = 0.0;  // replaces +inf deaths under InfinitePolicy::Cap
};

/// Optimal cost of an assignment problem; `assignment[i]` is the column
/// matched to row i. Square cost matrices only.
struct Assignment {
  double cost = 0.0;
  std::vector<int> assignment;
};
Assignment hungarian(const MatrixXd& cost);

/// W_p between two single-dimension diagrams with the L-infinity ground
/// metric; points may match the diagonal at cost (persistence / 2)^p.
double wasserstein_distance(std::span<const PersistencePoint> a,
                            std::span<const PersistencePoint> b,
                            const DiagramDistanceConfig& config = {});

struct DiagramDistance {
  double combined = 0.0;               // (sum_d W_p,d^p)^(1/p)
  std::vector<double> per_dimension;   // W_p for dims 0..max_dim
};

DiagramDistance diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 int max_dim, const DiagramDistanceConfig& config = {});

struct DiagramManifold {
  std::vector<std::string> network_ids;
  MatrixXd matrix;                       // combined distances
  std::vector<MatrixXd> per_dimension;
};

DiagramManifold diagram_manifold(std::span<const PersistenceDiagram> diagrams, int max_dim,
                                 const DiagramDistanceConfig& config = {});

/// CSV `dim,birth,death` with `inf` for essential classes.
std::string diagram_to_csv(const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(const std::filesystem::path& path, std::string network_id);

}  // namespace nnmanifold
