#include "nnmanifold/network_metric.hpp"

namespace nnmanifold {

std::string to_string(const SignatureMethod& method) {
  switch (method.kind) {
    case SignatureMethod::Kind::Diffusion: return "diffusion";
    case SignatureMethod::Kind::RawDistance: return "distance";
    case SignatureMethod::Kind::KnnAdjacency: return "knn";
    case SignatureMethod::Kind::WeightMatrix: return "weights";
  }
  return "unknown";
}

SignatureMethod parse_signature_method(const std::string& name, int k) {
  if (name == "diffusion") return SignatureMethod::diffusion();
  if (name == "distance") return SignatureMethod::raw_distance();
  if (name == "knn") return SignatureMethod::knn(k);
  if (name == "weights") return SignatureMethod::weights();
  throw Error(ErrorKind::InvalidArgument, "unknown signature method '" + name + "'");
}

std::vector<std::size_t> rank_by_accuracy(std::span<const double> accuracies,
                                          std::span<const std::string> ids) {
  require(ids.empty() || ids.size() == accuracies.size(), ErrorKind::LengthMismatch,
          "ids and accuracies differ in length");
  std::vector<std::size_t> order(accuracies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (accuracies[a] != accuracies[b]) return accuracies[a] > accuracies[b];
    if (!ids.empty()) return ids[a] < ids[b];
    return a < b;
  });
  return order;
}

NetworkSignature signature(const ActivationSet& activations, const SignatureMethod& method,
                           double sigma) {
  NetworkSignature out{activations.network_id, method, {}};
  switch (method.kind) {
    case SignatureMethod::Kind::Diffusion:
      out.matrix =
          diffusion_operator(gaussian_affinity(pairwise_distances(activations.matrix), sigma)).matrix;
      break;
    case SignatureMethod::Kind::RawDistance:
      out.matrix = pairwise_distances(activations.matrix);
      break;
    case SignatureMethod::Kind::KnnAdjacency:
      out.matrix = knn_adjacency(pairwise_distances(activations.matrix), method.k);
      break;
    case SignatureMethod::Kind::WeightMatrix:
      throw Error(ErrorKind::MissingWeights,
                  "weight signature for '" + activations.network_id + "' needs a weight matrix");
  }
  return out;
}

NetworkSignature weight_signature(const std::string& network_id, const MatrixXd& weights,
                                  const SignatureMethod& method) {
  require(method.kind == SignatureMethod::Kind::WeightMatrix, ErrorKind::MethodMismatch,
          "weight_signature requires the weights method");
  require(weights.size() > 0, ErrorKind::MissingWeights, "empty weight matrix for " + network_id);
  return {network_id, method, weights};
}

ManifoldMatrix manifold_matrix(std::span<const NetworkSignature> signatures) {
  require(signatures.size() >= 2, ErrorKind::TooFewNetworks, "need at least two signatures");
  const auto& first = signatures.front();
  std::vector<MatrixXd> mats;
  ManifoldMatrix out;
  out.method = first.method;
  for (const auto& s : signatures) {
    require(s.method == first.method, ErrorKind::MethodMismatch,
            "signature '" + s.network_id + "' uses a different method");
    require(s.matrix.rows() == first.matrix.rows() && s.matrix.cols() == first.matrix.cols(),
            ErrorKind::ShapeMismatch, "signature '" + s.network_id + "' has a different shape");
    mats.push_back(s.matrix);
    out.network_ids.push_back(s.network_id);
  }
  out.matrix = frobenius_distances<double>(mats);
  return out;
}

}  // namespace nnmanifold
