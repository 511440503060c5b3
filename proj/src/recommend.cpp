#include "nnmanifold/recommend.hpp"

#include "nnmanifold/network_metric.hpp"

#include <algorithm>
#include <map>

namespace nnmanifold {

Recommendation recommend(const Corpus& corpus, int n_top) {
  const auto m = static_cast<int>(corpus.networks.size());
  require(n_top >= 1 && n_top <= m, ErrorKind::TooFewNetworks,
          "n_top = " + std::to_string(n_top) + " with " + std::to_string(m) + " networks");

  const VectorXd acc = corpus.accuracies();
  const auto ids = corpus.ids();
  const auto ranked = rank_by_accuracy(std::span(acc.data(), static_cast<std::size_t>(acc.size())), ids);

  Recommendation r;
  r.n_top = n_top;
  std::vector<const NetworkRecord*> top;
  for (int i = 0; i < n_top; ++i) {
    top.push_back(&corpus.networks[ranked[static_cast<std::size_t>(i)]]);
    r.provenance.push_back(top.back()->id);
  }

  std::map<double, int> lr_counts;  // ascending lr, so ties resolve to the smaller
  for (const auto* rec : top) ++lr_counts[rec->hyperparameters.learning_rate];
  int best = 0;
  for (const auto& [lr, count] : lr_counts) {
    if (count > best) {
      best = count;
      r.learning_rate = lr;
    }
  }

  std::map<std::pair<double, double>, int> pair_counts;
  for (const auto* rec : top) {
    if (rec->hyperparameters.learning_rate != r.learning_rate) continue;
    ++pair_counts[{rec->hyperparameters.weight_decay, rec->hyperparameters.momentum}];
  }
  std::vector<std::pair<std::pair<double, double>, int>> ranked_pairs(pair_counts.begin(),
                                                                      pair_counts.end());
  std::stable_sort(ranked_pairs.begin(), ranked_pairs.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  if (ranked_pairs.size() == 1) {
    r.single_pair = true;
    r.weight_decay = ranked_pairs[0].first.first;
    r.momentum = ranked_pairs[0].first.second;
    return r;
  }
  r.weight_decay = 0.5 * (ranked_pairs[0].first.first + ranked_pairs[1].first.first);
  r.momentum = 0.5 * (ranked_pairs[0].first.second + ranked_pairs[1].first.second);
  return r;
}

nlohmann::json to_json(const Recommendation& r) {
  return {{"learning_rate", r.learning_rate}, {"weight_decay", r.weight_decay},
          {"momentum", r.momentum},           {"n_top", r.n_top},
          {"provenance", r.provenance},       {"single_pair", r.single_pair}};
}

}  // namespace nnmanifold
