#include "nnmanifold/pipeline.hpp"

#include "nnmanifold/corpus.hpp"
#include "nnmanifold/diffusion.hpp"
#include "nnmanifold/graph_signal.hpp"
#include "nnmanifold/io.hpp"
#include "nnmanifold/recommend.hpp"
#include "nnmanifold/structure.hpp"
#include "nnmanifold/svg.hpp"
#include "nnmanifold/version.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace nnmanifold {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Signature: return "signature";
    case Stage::Manifold: return "manifold";
    case Stage::Embed: return "embed";
    case Stage::Structure: return "structure";
    case Stage::Tda: return "tda";
    case Stage::Gft: return "gft";
    case Stage::Recommend: return "recommend";
    case Stage::Report: return "report";
  }
  return "unknown";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages{Stage::Signature, Stage::Manifold,  Stage::Embed,
                                         Stage::Structure, Stage::Tda,       Stage::Gft,
                                         Stage::Recommend, Stage::Report};
  return stages;
}

Stage parse_stage(const std::string& name) {
  for (Stage s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown stage '" + name + "'");
}

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REPR_MANIFOLD_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void write_embedding_csv(const fs::path& path, const LabeledEmbedding& embedding) {
  static const char* axes[] = {"x", "y", "z"};
  std::string out = "id";
  for (Eigen::Index c = 0; c < embedding.coordinates.cols() && c < 3; ++c) {
    out += std::string(",") + axes[c];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < embedding.coordinates.rows(); ++i) {
    out += embedding.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < embedding.coordinates.cols(); ++c) {
      out += ',' + io::format_double(embedding.coordinates(i, c));
    }
    out += '\n';
  }
  io::write_text(path, out);
}

LabeledEmbedding read_embedding_csv(const fs::path& path) {
  std::istringstream in(io::read_text(path));
  std::string line;
  std::getline(in, line);
  const auto header = io::split(line, ',');
  require(header.size() >= 3 && header[0] == "id", ErrorKind::ParseError,
          path.string() + ": expected header id,x,y[,z]");
  LabeledEmbedding out;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = io::split(line, ',');
    require(cells.size() == header.size(), ErrorKind::ParseError, path.string() + ": ragged row");
    out.ids.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(io::parse_double(cells[c]));
    rows.push_back(std::move(row));
  }
  out.coordinates.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(header.size() - 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) out.coordinates(i, c) = rows[i][c];
  }
  return out;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

json correlation_entry(std::span<const double> x, std::span<const double> y) {
  try {
    const double r = pearson_r(x, y);
    return {{"r", r}, {"r2", r * r}, {"n", x.size()}};
  } catch (const Error&) {
    return nullptr;
  }
}

json phate_config_json(const PhateConfig& c) {
  return {{"knn", c.knn},
          {"decay_alpha", c.decay_alpha},
          {"t", c.t ? json(*c.t) : json("auto")},
          {"t_max", c.t_max},
          {"n_components", c.n_components},
          {"mds_max_iter", c.mds_max_iter},
          {"mds_tol", c.mds_tol},
          {"seed", c.seed}};
}

class Runner {
public:
  explicit Runner(const RunConfig& config) : config_(config), out_(config.output_dir) {}

  void execute() {
    fs::create_directories(out_);
    fs::remove(out_ / "FAILED");
    corpus_ = load_corpus(config_.manifest_path);
    for (Stage stage : config_.stages) {
      const auto start = std::chrono::steady_clock::now();
      try {
        dispatch(stage);
      } catch (const Error& e) {
        io::write_text(out_ / "FAILED", to_string(stage) + ": " + e.what() + "\n");
        throw Error(e.kind(), "stage " + to_string(stage) + ": " + e.detail());
      } catch (const std::exception& e) {
        io::write_text(out_ / "FAILED", to_string(stage) + ": " + e.what() + "\n");
        throw;
      }
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      timings_ << to_string(stage) << ' ' << took.count() << "s\n";
    }
    write_run_metadata();
  }

private:
  void dispatch(Stage stage) {
    switch (stage) {
      case Stage::Signature: stage_signature(); break;
      case Stage::Manifold: stage_manifold(); break;
      case Stage::Embed: stage_embed(); break;
      case Stage::Structure: stage_structure(); break;
      case Stage::Tda: stage_tda(); break;
      case Stage::Gft: stage_gft(); break;
      case Stage::Recommend: stage_recommend(); break;
      case Stage::Report: stage_report(); break;
    }
  }

  const std::vector<ActivationSet>& activations() {
    if (activations_.empty()) {
      const auto ids = corpus_.ids();
      activations_.resize(ids.size());
      parallel_for(ids.size(), [&](std::size_t i) { activations_[i] = load_activations(corpus_, ids[i]); });
    }
    return activations_;
  }

  void compute_signatures() {
    const auto ids = corpus_.ids();
    signatures_.resize(ids.size());
    if (config_.method.kind == SignatureMethod::Kind::WeightMatrix) {
      parallel_for(ids.size(), [&](std::size_t i) {
        signatures_[i] = weight_signature(ids[i], load_weights(corpus_, ids[i]), config_.method);
      });
      return;
    }
    const auto& acts = activations();
    parallel_for(ids.size(), [&](std::size_t i) {
      signatures_[i] = signature(acts[i], config_.method, config_.sigma);
    });
  }

  void stage_signature() {
    compute_signatures();
    const bool persist = config_.save_signatures || !config_.stages.count(Stage::Manifold);
    if (!persist) return;
    for (const auto& s : signatures_) {
      io::write_matrix_csv(out_ / "signatures" / (s.network_id + ".csv"), s.matrix);
    }
  }

  void stage_manifold() {
    if (signatures_.empty()) compute_signatures();
    manifold_ = manifold_matrix(signatures_);
    io::write_labeled_matrix_csv(out_ / "manifold.csv", manifold_->network_ids, manifold_->matrix);
    svg::emit_heatmap_svg(manifold_->matrix, out_ / "manifold.svg", "network distances");
  }

  // In-memory manifold from this run, else the persisted manifold.csv.
  const io::LabeledMatrix& manifold() {
    if (!manifold_csv_) {
      if (manifold_) {
        manifold_csv_ = io::LabeledMatrix{manifold_->network_ids, manifold_->matrix};
      } else {
        manifold_csv_ = io::read_labeled_matrix_csv(out_ / "manifold.csv");
      }
      require(manifold_csv_->ids == corpus_.ids(), ErrorKind::SchemaViolation,
              "manifold.csv ids do not match the manifest");
    }
    return *manifold_csv_;
  }

  PhateConfig effective_phate(Eigen::Index points) {
    PhateConfig c = config_.phate;
    c.knn = std::max(1, std::min<int>(c.knn, static_cast<int>(points) - 1));
    return c;
  }

  void stage_embed() {
    const auto& n = manifold();
    const auto cfg = effective_phate(n.matrix.rows());
    const auto emb = phate(n.matrix, cfg);
    effective_["embed"] = {{"knn", cfg.knn}, {"t_used", emb.t_used},
                           {"final_stress", emb.final_stress}, {"converged", emb.converged},
                           {"mds_iterations", emb.stress_history.size() - 1}};
    write_embedding_csv(out_ / "embedding.csv", {n.ids, emb.coordinates});
    std::string vne = "t,entropy\n";
    for (const auto& [t, h] : emb.vne_curve) vne += std::to_string(t) + ',' + io::format_double(h) + '\n';
    io::write_text(out_ / "vne.csv", vne);
    const VectorXd acc = corpus_.accuracies();
    svg::emit_scatter_svg(emb.coordinates, acc, out_ / "embedding.svg", "networks by accuracy");

    json tight = {{"method", to_string(config_.method)}};
    const auto ids = corpus_.ids();
    for (int k : config_.tightness_n) {
      if (k < 2 || k > n.matrix.rows()) continue;
      try {
        tight["top_" + std::to_string(k)] =
            topn_tightness(emb.coordinates, std::span(acc.data(), acc.size()), k, ids);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateDistances) throw;
        tight["top_" + std::to_string(k)] = nullptr;
      }
    }
    write_json(out_ / "tightness.json", tight);
  }

  void stage_structure() {
    const auto& acts = activations();
    const auto& labels = corpus_.test_set.labels;
    const int classes = corpus_.test_set.class_count;
    const int k = std::min(config_.clusters, corpus_.test_set.n_points);
    const std::size_t m = acts.size();

    std::vector<ClassStructure<double>> cs(m);
    std::vector<Dendrogram> dendrograms(m);
    std::vector<std::vector<int>> cuts(m);
    std::vector<double> dse(m), dsmi(m), truth_ari(m);
    parallel_for(m, [&](std::size_t i) {
      const auto& x = acts[i].matrix;
      cs[i] = class_structure(x, labels, classes);
      dendrograms[i] = ward_dendrogram(x);
      cuts[i] = cut_dendrogram(dendrograms[i], k);
      truth_ari[i] = adjusted_rand_index(cuts[i], labels);
      dse[i] = point_cloud_dse(x, config_.dse_t, config_.sigma);
      try {
        dsmi[i] = diffusion_spectral_mutual_information(x, labels, config_.dse_t, config_.sigma);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateClass) throw;
        dsmi[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });

    std::string table = "id,accuracy,mean_centroid_distance,mean_within_variance,dse,dsmi,ground_truth_ari\n";
    std::vector<NetworkStats> stats;
    std::vector<double> acc, centroid, variance;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& rec = corpus_.networks[i];
      json j = {{"network_id", rec.id},
                {"centroids", matrix_json(cs[i].centroids)},
                {"centroid_distances", matrix_json(cs[i].centroid_distances)},
                {"within_class_variance", to_std(cs[i].within_class_variance)},
                {"mean_centroid_distance", cs[i].mean_centroid_distance},
                {"mean_within_variance", cs[i].mean_within_variance}};
      write_json(out_ / "structure" / "class" / (rec.id + ".json"), j);

      std::string merges = "cluster_a,cluster_b,distance,size\n";
      for (const auto& mg : dendrograms[i].merges) {
        merges += std::to_string(mg.cluster_a) + ',' + std::to_string(mg.cluster_b) + ',' +
                  io::format_double(mg.distance) + ',' + std::to_string(mg.size) + '\n';
      }
      io::write_text(out_ / "structure" / "dendrograms" / (rec.id + ".csv"), merges);

      table += rec.id + ',' + io::format_double(rec.accuracy) + ',' +
               io::format_double(cs[i].mean_centroid_distance) + ',' +
               io::format_double(cs[i].mean_within_variance) + ',' + io::format_double(dse[i]) + ',' +
               io::format_double(dsmi[i]) + ',' + io::format_double(truth_ari[i]) + '\n';
      stats.push_back({rec.id, rec.accuracy, cs[i].mean_within_variance, cuts[i]});
      acc.push_back(rec.accuracy);
      centroid.push_back(cs[i].mean_centroid_distance);
      variance.push_back(cs[i].mean_within_variance);
    }
    io::write_text(out_ / "structure" / "networks.csv", table);

    const MatrixXd ari = pairwise_ari_matrix(cuts);
    io::write_labeled_matrix_csv(out_ / "structure" / "pairwise_ari.csv", corpus_.ids(), ari);
    svg::emit_heatmap_svg(ari, out_ / "structure" / "pairwise_ari.svg", "pairwise ARI");

    const auto bins = bin_by_accuracy(stats, config_.bin_width);
    json jb = json::array();
    std::vector<double> mid, bin_ari, bin_std;
    for (const auto& b : bins) {
      jb.push_back({{"low", b.low},
                    {"high", b.high},
                    {"member_ids", b.member_ids},
                    {"mean_within_variance", b.mean_within_variance},
                    {"std_within_variance", b.std_within_variance},
                    {"mean_pairwise_ari", b.mean_pairwise_ari ? json(*b.mean_pairwise_ari) : json(nullptr)}});
      if (b.mean_pairwise_ari) {
        mid.push_back(0.5 * (b.low + b.high));
        bin_ari.push_back(*b.mean_pairwise_ari);
      }
    }
    write_json(out_ / "structure" / "bins.json", jb);

    json corr = {{"accuracy_vs_mean_centroid_distance", correlation_entry(acc, centroid)},
                 {"accuracy_vs_mean_within_variance", correlation_entry(acc, variance)},
                 {"accuracy_vs_ground_truth_ari", correlation_entry(acc, truth_ari)},
                 {"accuracy_vs_dse", correlation_entry(acc, dse)},
                 {"bin_midpoint_vs_mean_pairwise_ari", correlation_entry(mid, bin_ari)},
                 {"dse_t", config_.dse_t}};
    write_json(out_ / "structure" / "correlations.json", corr);
  }

  void stage_tda() {
    const auto& acts = activations();
    const std::size_t m = acts.size();
    std::vector<PersistenceDiagram> diagrams(m);
    parallel_for(m, [&](std::size_t i) {
      diagrams[i] = rips_persistence(pairwise_distances(acts[i].matrix), config_.rips);
      diagrams[i].network_id = acts[i].network_id;
    });
    for (const auto& d : diagrams) {
      io::write_text(out_ / "tda" / "diagrams" / (d.network_id + ".csv"), diagram_to_csv(d));
    }
    const auto dm = diagram_manifold(diagrams, config_.rips.max_dim, config_.diagram);
    io::write_labeled_matrix_csv(out_ / "tda" / "wasserstein.csv", dm.network_ids, dm.matrix);
    for (std::size_t d = 0; d < dm.per_dimension.size(); ++d) {
      io::write_labeled_matrix_csv(out_ / "tda" / ("wasserstein_h" + std::to_string(d) + ".csv"),
                                   dm.network_ids, dm.per_dimension[d]);
    }
    svg::emit_heatmap_svg(dm.matrix, out_ / "tda" / "wasserstein.svg", "Wasserstein distances");
    const auto cfg = effective_phate(dm.matrix.rows());
    const auto emb = phate(dm.matrix, cfg);
    write_embedding_csv(out_ / "tda" / "embedding.csv", {dm.network_ids, emb.coordinates});
    svg::emit_scatter_svg(emb.coordinates, corpus_.accuracies(), out_ / "tda" / "embedding.svg",
                          "persistence landscape by accuracy");
  }

  void stage_gft() {
    const auto& n = manifold();
    const auto g = manifold_graph(n.matrix);
    std::vector<GraphSignal<double>> signals;
    const auto m = static_cast<Eigen::Index>(corpus_.networks.size());
    VectorXd lr(m), wd(m), mom(m), width(m);
    bool has_width = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& rec = corpus_.networks[static_cast<std::size_t>(i)];
      lr(i) = rec.hyperparameters.learning_rate;
      wd(i) = rec.hyperparameters.weight_decay;
      mom(i) = rec.hyperparameters.momentum;
      const auto& arch = rec.architecture;
      if (arch.is_object() && arch.contains("hidden") && arch["hidden"].is_array() &&
          arch["hidden"].size() >= 2 && arch["hidden"][1].is_number()) {
        width(i) = arch["hidden"][1].get<double>();
      } else {
        has_width = false;
      }
    }
    signals.push_back({"accuracy", corpus_.accuracies()});
    signals.push_back({"learning_rate", lr});
    signals.push_back({"weight_decay", wd});
    signals.push_back({"momentum", mom});
    if (has_width) signals.push_back({"hidden_layer_2_width", width});

    json smooth = {{"sigma", g.sigma}, {"signals", json::object()}};
    for (const auto& s : signals) {
      std::string csv = "eigenvalue,abs_inner_product\n";
      for (const auto& [lambda, ip] : gft_spectrum(g, s)) {
        csv += io::format_double(lambda) + ',' + io::format_double(ip) + '\n';
      }
      io::write_text(out_ / "gft" / ("spectrum_" + s.name + ".csv"), csv);
      smooth["signals"][s.name] = {
          {"raw_symmetric", quadratic_smoothness(g, s, LaplacianKind::Symmetric)},
          {"raw_random_walk", quadratic_smoothness(g, s, LaplacianKind::RandomWalk)},
          {"normalized_symmetric", normalized_smoothness(g, s, LaplacianKind::Symmetric)}};
    }
    const double a = smooth["signals"]["accuracy"]["normalized_symmetric"].get<double>();
    const double mo = smooth["signals"]["momentum"]["normalized_symmetric"].get<double>();
    smooth["accuracy_smoother_than_momentum"] = a < mo;
    write_json(out_ / "gft" / "smoothness.json", smooth);
  }

  void stage_recommend() {
    const int n_top = std::min<int>(config_.top_n, static_cast<int>(corpus_.networks.size()));
    write_json(out_ / "recommendation.json", to_json(recommend(corpus_, n_top)));
  }

  // Merges whatever stage summaries exist in the output directory.
  void stage_report() {
    json report = {{"dataset", corpus_.dataset_name},
                   {"networks", corpus_.networks.size()},
                   {"n_points", corpus_.test_set.n_points}};
    const std::pair<const char*, fs::path> parts[] = {
        {"tightness", out_ / "tightness.json"},
        {"correlations", out_ / "structure" / "correlations.json"},
        {"smoothness", out_ / "gft" / "smoothness.json"},
        {"recommendation", out_ / "recommendation.json"},
    };
    for (const auto& [key, path] : parts) {
      report[key] = fs::exists(path) ? json::parse(io::read_text(path)) : json(nullptr);
    }
    write_json(out_ / "report.json", report);
  }

  void write_run_metadata() {
    json stages = json::array();
    for (Stage s : config_.stages) stages.push_back(to_string(s));
    json cfg = {{"manifest", config_.manifest_path.generic_string()},
                {"stages", stages},
                {"method", to_string(config_.method)},
                {"knn_signature_k", config_.method.k},
                {"sigma", config_.sigma},
                {"phate", phate_config_json(config_.phate)},
                {"max_dim", config_.rips.max_dim},
                {"max_points", config_.rips.max_points},
                {"wasserstein_p", config_.diagram.p},
                {"top_n", config_.top_n},
                {"clusters", config_.clusters},
                {"dse_t", config_.dse_t},
                {"bin_width", config_.bin_width},
                {"tightness_n", config_.tightness_n}};
    json meta = {{"config", cfg},
                 {"effective", effective_},
                 {"versions", {{"nnmanifold", kVersion},
                               {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                             std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                             std::to_string(EIGEN_MINOR_VERSION)}}}};
    write_json(out_ / "run.json", meta);
    io::write_text(out_ / "timings.txt", timings_.str());
  }

  const RunConfig& config_;
  fs::path out_;
  Corpus corpus_;
  std::vector<ActivationSet> activations_;
  std::vector<NetworkSignature> signatures_;
  std::optional<ManifoldMatrix> manifold_;
  std::optional<io::LabeledMatrix> manifold_csv_;
  json effective_ = json::object();
  std::ostringstream timings_;
};

}  // namespace

void validate(const RunConfig& config) {
  require(!config.stages.empty(), ErrorKind::InvalidArgument, "no stages requested");
  require(!config.output_dir.empty(), ErrorKind::InvalidArgument, "output directory required");
  const bool manifold_available =
      config.stages.count(Stage::Manifold) || fs::exists(config.output_dir / "manifold.csv");
  for (Stage s : {Stage::Embed, Stage::Gft}) {
    if (config.stages.count(s) && !manifold_available) {
      throw Error(ErrorKind::InvalidArgument,
                  to_string(s) + " needs the manifold stage or an existing manifold.csv");
    }
  }
}

void run(const RunConfig& config) {
  validate(config);
  Runner(config).execute();
}

}  // namespace nnmanifold
