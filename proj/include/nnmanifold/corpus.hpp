#pragma once

#include "nnmanifold/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nnmanifold {

/// The registered test points shared by every network: row k of every
/// activation file refers to the same input, labelled labels[k].
struct TestSetSpec {
  int n_points = 0;
  int class_count = 0;
  std::vector<int> labels;
};

struct Hyperparameters {
  double learning_rate = 0.0;
  double momentum = 0.0;
  double weight_decay = 0.0;
};

struct NetworkRecord {
  std::string id;
  Hyperparameters hyperparameters;
  double accuracy = 0.0;
  nlohmann::json architecture;  // free-form, e.g. {"hidden": [50, 20]}
  std::filesystem::path activation_path;  // absolute after loading
  std::optional<std::filesystem::path> weights_path;
};

struct ActivationSet {
  std::string network_id;
  MatrixXd matrix;  // n_points x d

  Eigen::Index width() const { return matrix.cols(); }
};

struct Corpus {
  std::string dataset_name;
  TestSetSpec test_set;
  std::vector<NetworkRecord> networks;
  std::filesystem::path root;  // directory of the manifest

  const NetworkRecord& network(const std::string& id) const;
  std::vector<std::string> ids() const;
  VectorXd accuracies() const;
};

/// Parses and validates a manifest. Activation files are checked for
/// existence only.
Corpus load_corpus(const std::filesystem::path& manifest_path);

/// Validates a manifest already parsed from JSON; `root` resolves relative paths.
Corpus corpus_from_json(const nlohmann::json& manifest, const std::filesystem::path& root);

ActivationSet load_activations(const Corpus& corpus, const std::string& network_id);

/// The optional weight matrix used by the weight-comparison signature.
MatrixXd load_weights(const Corpus& corpus, const std::string& network_id);

/// Writes the manifest plus one activation CSV per network under `dir`
/// (activations/<id>.csv). Record paths are rewritten relative to `dir`.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus,
                  const std::vector<ActivationSet>& activations,
                  const std::vector<MatrixXd>& weights = {});

nlohmann::json to_json(const Corpus& corpus);

}  // namespace nnmanifold
