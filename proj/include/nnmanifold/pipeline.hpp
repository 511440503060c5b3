#pragma once

// End-to-end orchestration: corpus -> signatures -> manifold -> embedding,
// plus the characterization stages. Every artifact lands in output_dir.

#include "nnmanifold/network_metric.hpp"
#include "nnmanifold/phate.hpp"
#include "nnmanifold/tda.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nnmanifold {

enum class Stage { Signature, Manifold, Embed, Structure, Tda, Gft, Recommend, Report };

std::string to_string(Stage stage);
Stage parse_stage(const std::string& name);
const std::vector<Stage>& all_stages();

struct RunConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path output_dir;
  std::set<Stage> stages;

  SignatureMethod method = SignatureMethod::diffusion();
  double sigma = 0.5;
  PhateConfig phate;
  RipsConfig rips;
  DiagramDistanceConfig diagram;

  int top_n = 30;           // recommendation sample size
  int clusters = 10;        // dendrogram cut
  int dse_t = 1;
  double bin_width = 0.03;
  std::vector<int> tightness_n{10, 20, 30};
  bool save_signatures = false;
};

/// Throws Error(InvalidArgument) when a stage's input is neither scheduled
/// nor present in output_dir.
void validate(const RunConfig& config);

/// Runs the requested stages in dependency order. On failure a FAILED
/// marker is written to output_dir and the error is rethrown with the
/// stage name prepended.
void run(const RunConfig& config);

/// Number of worker threads: REPR_MANIFOLD_THREADS if set, else hardware.
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct LabeledEmbedding {
  std::vector<std::string> ids;
  MatrixXd coordinates;
};

/// CSV `id,x,y[,z]`.
void write_embedding_csv(const std::filesystem::path& path, const LabeledEmbedding& embedding);
LabeledEmbedding read_embedding_csv(const std::filesystem::path& path);

}  // namespace nnmanifold
