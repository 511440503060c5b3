#pragma once

#include "nnmanifold/corpus.hpp"

#include <string>
#include <vector>

namespace nnmanifold {

struct Recommendation {
  double learning_rate = 0.0;
  double weight_decay = 0.0;
  double momentum = 0.0;
  int n_top = 0;
  std::vector<std::string> provenance;  // ids of the top-N networks
  bool single_pair = false;  // only one (wd, momentum) pair under the modal lr
};

/// Hyperparameters sampled from the high-accuracy region:
///  1. the n_top most accurate networks (ties by id),
///  2. their modal learning rate (ties -> smaller lr),
///  3. the two most frequent (weight_decay, momentum) pairs under that lr
///     (ties -> lexicographically smaller pair),
///  4. the mean of those two pairs.
Recommendation recommend(const Corpus& corpus, int n_top = 30);

nlohmann::json to_json(const Recommendation& r);

}  // namespace nnmanifold
