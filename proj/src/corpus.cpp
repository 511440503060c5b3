#include "nnmanifold/corpus.hpp"

#include "nnmanifold/io.hpp"

#include <cmath>
#include <set>

namespace nnmanifold {

namespace fs = std::filesystem;
using nlohmann::json;

const NetworkRecord& Corpus::network(const std::string& id) const {
  for (const auto& rec : networks) {
    if (rec.id == id) return rec;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown network id '" + id + "'");
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(networks.size());
  for (const auto& rec : networks) out.push_back(rec.id);
  return out;
}

VectorXd Corpus::accuracies() const {
  VectorXd acc(static_cast<Eigen::Index>(networks.size()));
  for (std::size_t i = 0; i < networks.size(); ++i) acc(i) = networks[i].accuracy;
  return acc;
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorKind::SchemaViolation, where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number()) {
    throw Error(ErrorKind::SchemaViolation, where + ": field '" + key + "' must be a number");
  }
  double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::SchemaViolation, where + ": field '" + key + "' must be finite");
  }
  return x;
}

int positive_int(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw Error(ErrorKind::SchemaViolation, where + ": field '" + key + "' must be a positive integer");
  }
  return v.get<int>();
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) {
    throw Error(ErrorKind::SchemaViolation, where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

Corpus corpus_from_json(const json& manifest, const fs::path& root) {
  const std::string where = "manifest";
  if (!manifest.is_object()) throw Error(ErrorKind::SchemaViolation, "manifest must be an object");

  Corpus corpus;
  corpus.root = root;
  corpus.dataset_name = string_field(manifest, "dataset", where);
  corpus.test_set.n_points = positive_int(manifest, "n_points", where);
  corpus.test_set.class_count = positive_int(manifest, "class_count", where);

  const auto& labels = field(manifest, "labels", where);
  if (!labels.is_array()) throw Error(ErrorKind::SchemaViolation, "labels must be an array");
  for (const auto& l : labels) {
    if (!l.is_number_integer() || l.get<long long>() < 0) {
      throw Error(ErrorKind::SchemaViolation, "labels must be non-negative integers");
    }
    if (l.get<long long>() >= corpus.test_set.class_count) {
      throw Error(ErrorKind::SchemaViolation, "label exceeds class_count");
    }
    corpus.test_set.labels.push_back(l.get<int>());
  }
  if (static_cast<int>(corpus.test_set.labels.size()) != corpus.test_set.n_points) {
    throw Error(ErrorKind::LabelMismatch,
                "labels has " + std::to_string(corpus.test_set.labels.size()) +
                    " entries, n_points is " + std::to_string(corpus.test_set.n_points));
  }

  const auto& nets = field(manifest, "networks", where);
  if (!nets.is_array()) throw Error(ErrorKind::SchemaViolation, "networks must be an array");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < nets.size(); ++k) {
    const auto& entry = nets[k];
    const std::string at = "networks[" + std::to_string(k) + "]";
    NetworkRecord rec;
    rec.id = string_field(entry, "id", at);
    if (!seen.insert(rec.id).second) {
      throw Error(ErrorKind::SchemaViolation, "duplicate network id '" + rec.id + "'");
    }
    rec.accuracy = number(entry, "accuracy", at);
    if (rec.accuracy < 0.0 || rec.accuracy > 1.0) {
      throw Error(ErrorKind::SchemaViolation, at + ": accuracy outside [0,1]");
    }
    const auto& hp = field(entry, "hyperparameters", at);
    rec.hyperparameters.learning_rate = number(hp, "learning_rate", at);
    rec.hyperparameters.momentum = number(hp, "momentum", at);
    rec.hyperparameters.weight_decay = number(hp, "weight_decay", at);
    if (rec.hyperparameters.learning_rate <= 0.0) {
      throw Error(ErrorKind::SchemaViolation, at + ": learning_rate must be positive");
    }
    if (rec.hyperparameters.momentum < 0.0 || rec.hyperparameters.momentum >= 1.0) {
      throw Error(ErrorKind::SchemaViolation, at + ": momentum must lie in [0,1)");
    }
    if (rec.hyperparameters.weight_decay < 0.0) {
      throw Error(ErrorKind::SchemaViolation, at + ": weight_decay must be non-negative");
    }
    rec.architecture = entry.contains("architecture") ? entry.at("architecture") : json::object();

    rec.activation_path = root / string_field(entry, "activations", at);
    if (!fs::exists(rec.activation_path)) {
      throw Error(ErrorKind::MissingFile, rec.activation_path.string());
    }
    if (entry.contains("weights") && !entry.at("weights").is_null()) {
      rec.weights_path = root / string_field(entry, "weights", at);
      if (!fs::exists(*rec.weights_path)) throw Error(ErrorKind::MissingFile, rec.weights_path->string());
    }
    corpus.networks.push_back(std::move(rec));
  }
  if (corpus.networks.size() < 2) {
    throw Error(ErrorKind::SchemaViolation, "a corpus needs at least two networks");
  }
  return corpus;
}

Corpus load_corpus(const fs::path& manifest_path) {
  if (!fs::exists(manifest_path)) throw Error(ErrorKind::MissingFile, manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(io::read_text(manifest_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaViolation, manifest_path.string() + ": " + e.what());
  }
  return corpus_from_json(manifest, manifest_path.parent_path());
}

namespace {

MatrixXd read_finite(const fs::path& path) {
  MatrixXd m = io::read_matrix_csv(path);
  if (!m.allFinite()) throw Error(ErrorKind::NonFiniteValue, path.string());
  return m;
}

}  // namespace

ActivationSet load_activations(const Corpus& corpus, const std::string& network_id) {
  const auto& rec = corpus.network(network_id);
  ActivationSet out{network_id, read_finite(rec.activation_path)};
  if (out.matrix.rows() != corpus.test_set.n_points) {
    throw Error(ErrorKind::RowCountMismatch,
                rec.activation_path.string() + " has " + std::to_string(out.matrix.rows()) +
                    " rows, expected " + std::to_string(corpus.test_set.n_points));
  }
  if (out.matrix.cols() == 0) throw Error(ErrorKind::ParseError, rec.activation_path.string());
  return out;
}

MatrixXd load_weights(const Corpus& corpus, const std::string& network_id) {
  const auto& rec = corpus.network(network_id);
  if (!rec.weights_path) {
    throw Error(ErrorKind::MissingWeights, "network '" + network_id + "' has no weights entry");
  }
  return read_finite(*rec.weights_path);
}

json to_json(const Corpus& corpus) {
  json j;
  j["dataset"] = corpus.dataset_name;
  j["n_points"] = corpus.test_set.n_points;
  j["class_count"] = corpus.test_set.class_count;
  j["labels"] = corpus.test_set.labels;
  j["networks"] = json::array();
  for (const auto& rec : corpus.networks) {
    json e;
    e["id"] = rec.id;
    e["activations"] = rec.activation_path.generic_string();
    e["accuracy"] = rec.accuracy;
    e["hyperparameters"] = {{"learning_rate", rec.hyperparameters.learning_rate},
                            {"momentum", rec.hyperparameters.momentum},
                            {"weight_decay", rec.hyperparameters.weight_decay}};
    e["architecture"] = rec.architecture;
    if (rec.weights_path) e["weights"] = rec.weights_path->generic_string();
    j["networks"].push_back(std::move(e));
  }
  return j;
}

void write_corpus(const fs::path& dir, const Corpus& corpus,
                  const std::vector<ActivationSet>& activations,
                  const std::vector<MatrixXd>& weights) {
  require(activations.size() == corpus.networks.size(), ErrorKind::LengthMismatch,
          "one activation set per network required");
  require(weights.empty() || weights.size() == corpus.networks.size(), ErrorKind::LengthMismatch,
          "weights must be empty or one per network");
  Corpus out = corpus;
  for (std::size_t i = 0; i < out.networks.size(); ++i) {
    auto& rec = out.networks[i];
    rec.activation_path = fs::path("activations") / (rec.id + ".csv");
    io::write_matrix_csv(dir / rec.activation_path, activations[i].matrix);
    if (!weights.empty()) {
      rec.weights_path = fs::path("weights") / (rec.id + ".csv");
      io::write_matrix_csv(dir / *rec.weights_path, weights[i]);
    } else {
      rec.weights_path.reset();
    }
  }
  io::write_text(dir / "manifest.json", to_json(out).dump(2) + "\n");
}

}  // namespace nnmanifold
