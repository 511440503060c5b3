// Acceptance suite: one PASS/FAIL line per criterion.
//
// Criteria 9, 10 and 12 need a trained corpus and run only when
// NNMANIFOLD_HARNESS_MANIFEST points at one; 11 and 13 need the training
// harness itself and always report SKIP.

#include "nnmanifold/diffusion.hpp"
#include "nnmanifold/graph_signal.hpp"
#include "nnmanifold/io.hpp"
#include "nnmanifold/network_metric.hpp"
#include "nnmanifold/phate.hpp"
#include "nnmanifold/pipeline.hpp"
#include "nnmanifold/structure.hpp"
#include "nnmanifold/tda.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace nnmanifold;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-22s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void skip(int id, const std::string& name, const std::string& why) {
  std::printf("[SKIP] %2d %-22s %s\n", id, name.c_str(), why.c_str());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <typename Fn>
void guarded(int id, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("threw: ") + e.what());
  }
}

bool metric_triple(const MatrixXd& d, int i, int j, int k, double tol) {
  return std::abs(d(i, i)) <= tol && d(i, j) >= 0 && std::abs(d(i, j) - d(j, i)) <= tol &&
         d(i, k) <= d(i, j) + d(j, k) + tol;
}

void diffusion_core() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> width(2, 40);
  double row_err = 0, pi_err = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ActivationSet a{"r", oracle::random_points(rng, 100, width(rng))};
    const auto op = diffusion_operator(gaussian_affinity(pairwise_distances(a.matrix), 0.5));
    row_err = std::max(row_err, (op.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff());
    const VectorXd pi = stationary_distribution(op);
    pi_err = std::max(pi_err, (pi.transpose() * op.matrix - pi.transpose()).cwiseAbs().maxCoeff());
  }
  const MatrixXd d = (MatrixXd(2, 2) << 0, 1, 1, 0).finished();
  const double kernel_err = std::abs(gaussian_affinity(d, 0.5)(0, 1) - std::exp(-2.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, "diffusion", row_err < 1e-10 && pi_err < 1e-8 && kernel_err <= 1e-12 && secs < 5.0,
         "row " + fmt(row_err) + ", pi " + fmt(pi_err) + ", kernel " + fmt(kernel_err) + ", " +
             fmt(secs) + " s");
}

void spectral_entropy_limits() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double limit_err = 0;
  for (int k : {2, 3, 5}) {
    const int size = 6;
    MatrixXd w = MatrixXd::Zero(k * size, k * size);
    for (int b = 0; b < k; ++b) {
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < i; ++j) w(b * size + i, b * size + j) = w(b * size + j, b * size + i) = u(rng);
        w(b * size + i, b * size + i) = 1.0;
      }
    }
    const auto s = spectrum(diffusion_operator(w));
    limit_err = std::max(limit_err, std::abs(diffusion_spectral_entropy(s, 512) - std::log(k)));
  }
  bool bounded = true;
  std::uniform_int_distribution<int> size(2, 40);
  const int times[] = {0, 1, 2, 5, 20, 512};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const auto op = diffusion_operator(
        gaussian_affinity(pairwise_distances(oracle::random_points(rng, n, 3)), 0.5 + trial * 0.01));
    const double h = diffusion_spectral_entropy(spectrum(op), times[trial % 6]);
    bounded = bounded && h >= -1e-12 && h <= std::log(n) + 1e-12;
  }
  report(2, "dse", limit_err < 1e-3 && bounded,
         "|S(512) - log k| max " + fmt(limit_err) + (bounded ? ", bounds hold" : ", bounds violated"));
}

void ward_and_ari() {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> size(2, 32);
  int tree_mismatch = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd x = oracle::random_points(rng, size(rng), 4);
    const auto got = ward_dendrogram(x), want = oracle::ward(x);
    for (std::size_t k = 0; k < want.merges.size(); ++k) {
      const auto &g = got.merges[k], &w = want.merges[k];
      if (g.cluster_a != w.cluster_a || g.cluster_b != w.cluster_b || g.size != w.size ||
          std::abs(g.distance - w.distance) > 1e-9 * (1.0 + w.distance)) {
        ++tree_mismatch;
        break;
      }
    }
  }
  std::uniform_int_distribution<int> label(0, 4);
  double ari_err = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(12), b(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = label(rng);
      b[i] = label(rng);
    }
    ari_err = std::max(ari_err, std::abs(adjusted_rand_index(a, b) - oracle::ari(a, b)));
  }
  const std::vector<int> p{0, 0, 1, 2, 2, 1, 3};
  const double self = adjusted_rand_index(p, p);
  report(3, "ward+ari", tree_mismatch == 0 && ari_err <= 1e-12 && self == 1.0,
         std::to_string(tree_mismatch) + " tree mismatches, ARI err " + fmt(ari_err) + ", self " + fmt(self));
}

void wasserstein_and_tda() {
  std::mt19937_64 rng(104);
  double match_err = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_diagram(rng, 4), b = oracle::random_diagram(rng, 4);
    match_err = std::max(match_err, std::abs(wasserstein_distance(a, b) - oracle::wasserstein(a, b, 2.0)));
  }
  MatrixXd sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const auto h1 = rips_persistence(pairwise_distances(sq)).dimension(1);
  const bool bar = h1.size() == 1 && h1[0].birth == 1.0 && h1[0].death == std::sqrt(2.0);
  bool axioms = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::vector<PersistencePoint>> t{oracle::random_diagram(rng, 4),
                                                       oracle::random_diagram(rng, 4),
                                                       oracle::random_diagram(rng, 4)};
    MatrixXd d(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) = wasserstein_distance(t[i], t[j]);
    axioms = axioms && metric_triple(d, 0, 1, 2, 1e-9);
  }
  report(4, "wasserstein+tda", match_err <= 1e-9 && bar && axioms,
         "brute-force err " + fmt(match_err) + (bar ? ", H1 (1, sqrt 2)" : ", H1 bar wrong") +
             (axioms ? ", axioms hold" : ", axioms violated"));
}

void phate_embedding() {
  MatrixXd tri(3, 3);
  tri << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  const double tri_err =
      (pairwise_distances(mds_embed(tri, PhateConfig{}).coordinates) - tri).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> size(6, 30);
  bool monotone = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = mds_embed(pairwise_distances(oracle::random_points(rng, size(rng), 5)), PhateConfig{});
    for (std::size_t i = 1; i < e.stress_history.size(); ++i) {
      monotone = monotone && e.stress_history[i] <= e.stress_history[i - 1];
    }
  }

  MatrixXd x = oracle::random_points(rng, 20, 3, 0.01);
  for (int i = 10; i < 20; ++i) x(i, 0) += 1.0;
  const MatrixXd d = pairwise_distances(phate(pairwise_distances(x), PhateConfig{}).coordinates);
  double intra = 0, inter = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    for (int j = i + 1; j < 20; ++j) {
      if ((i < 10) == (j < 10)) intra = std::max(intra, d(i, j));
      else inter = std::min(inter, d(i, j));
    }
  }
  report(5, "phate", tri_err < 1e-6 && monotone && inter > intra,
         "triangle err " + fmt(tri_err) + (monotone ? ", stress monotone" : ", stress increased") +
             ", blobs intra " + fmt(intra) + " < inter " + fmt(inter));
}

void manifold_metric() {
  std::mt19937_64 rng(106);
  std::uniform_int_distribution<int> width(2, 30);
  bool axioms = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<NetworkSignature> sigs;
    for (int i = 0; i < 3; ++i) {
      sigs.push_back(signature(ActivationSet{std::to_string(i), oracle::random_points(rng, 20, width(rng))},
                               SignatureMethod::diffusion()));
    }
    const MatrixXd n = manifold_matrix(sigs).matrix;
    axioms = axioms && metric_triple(n, 0, 1, 2, 1e-12) && metric_triple(n, 2, 0, 1, 1e-12) &&
             metric_triple(n, 1, 2, 0, 1e-12);
  }
  MatrixXd sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const std::vector<double> acc{0.9, 0.8, 0.1, 0.2};
  const double tight = topn_tightness(sq, acc, 2);
  report(6, "manifold-metric", axioms && std::abs(tight - 0.8787) < 1e-4,
         std::string(axioms ? "axioms hold" : "axioms violated") + ", tightness " + fmt(tight));
}

void graph_fourier() {
  std::mt19937_64 rng(107);
  double parseval = 0, lo = 0, hi = 0, constant = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = manifold_graph(pairwise_distances(oracle::random_points(rng, 15, 4)));
    const VectorXd s = oracle::random_points(rng, 15, 1).col(0);
    double energy = 0;
    for (const auto& [lambda, c] : gft_coefficients(g, s)) energy += c * c;
    parseval = std::max(parseval, std::abs(energy - s.squaredNorm()));
    const auto values = graph_harmonics(g).first;
    lo = std::min(lo, values.minCoeff());
    hi = std::max(hi, values.maxCoeff());
    const GraphSignal<double> flat{"c", VectorXd::Constant(15, 0.7)};
    constant = std::max(constant, std::abs(quadratic_smoothness(g, flat, LaplacianKind::RandomWalk)));
  }
  report(7, "gft", parseval < 1e-8 && lo >= -1e-8 && hi <= 2 + 1e-8 && constant < 1e-10,
         "Parseval err " + fmt(parseval) + ", L_sym spectrum [" + fmt(lo) + ", " + fmt(hi) +
             "], constant " + fmt(constant));
}

std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (ext == ".csv" || ext == ".json") out[fs::relative(e.path(), dir).string()] = io::read_text(e.path());
  }
  return out;
}

void determinism() {
  RunConfig c;
  c.manifest_path = fs::path(NNMANIFOLD_FIXTURE_DIR) / "manifest.json";
  c.output_dir = fs::temp_directory_path() / "nnmanifold_acceptance_determinism";
  c.stages = {all_stages().begin(), all_stages().end()};
  fs::remove_all(c.output_dir);
  run(c);
  const auto first = outputs(c.output_dir);
  run(c);
  const auto second = outputs(c.output_dir);
  int differing = 0;
  for (const auto& [name, text] : first) {
    auto it = second.find(name);
    if (it == second.end() || it->second != text) ++differing;
  }
  report(8, "determinism", differing == 0 && first.size() == second.size() && !first.empty(),
         std::to_string(first.size()) + " CSV/JSON files, " + std::to_string(differing) + " differ");
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(io::read_text(p)); }

void harness_criteria(const char* manifest) {
  const fs::path root = fs::temp_directory_path() / "nnmanifold_acceptance_harness";
  auto base = [&](const std::string& name) {
    RunConfig c;
    c.manifest_path = manifest;
    c.output_dir = root / name;
    return c;
  };

  guarded(9, "tightness-order", [&] {
    std::map<std::string, double> top10;
    for (const auto& m : {SignatureMethod::diffusion(), SignatureMethod::raw_distance(), SignatureMethod::knn()}) {
      auto c = base(to_string(m));
      c.method = m;
      c.stages = {Stage::Signature, Stage::Manifold, Stage::Embed};
      run(c);
      const auto t = read_json(c.output_dir / "tightness.json");
      top10[to_string(m)] = t.at("top_10").get<double>();
    }
    const double d = top10["diffusion"], r = top10["distance"], k = top10["knn"];
    report(9, "tightness-order", d < 1.0 && d <= r && d <= k,
           "top-10 diffusion " + fmt(d) + ", distance " + fmt(r) + ", knn " + fmt(k));
  });

  auto full = base("diffusion_full");
  full.stages = {Stage::Signature, Stage::Manifold, Stage::Structure, Stage::Gft};
  guarded(10, "correlation-signs", [&] {
    run(full);
    const auto corr = read_json(full.output_dir / "structure" / "correlations.json");
    const double a = corr["accuracy_vs_mean_centroid_distance"]["r"].get<double>();
    const double b = corr["accuracy_vs_ground_truth_ari"]["r"].get<double>();
    const double c = corr["accuracy_vs_dse"]["r"].get<double>();
    report(10, "correlation-signs", a > 0.3 && b > 0.3 && c > 0.3,
           "r centroid " + fmt(a) + ", ARI " + fmt(b) + ", DSE " + fmt(c));
  });
  skip(11, "recommendation", "needs retraining the recommended configuration");
  guarded(12, "accuracy-smoothness", [&] {
    const auto s = read_json(full.output_dir / "gft" / "smoothness.json");
    const double acc = s["signals"]["accuracy"]["normalized_symmetric"].get<double>();
    const double mom = s["signals"]["momentum"]["normalized_symmetric"].get<double>();
    if (acc < mom) {
      report(12, "accuracy-smoothness", true, "accuracy " + fmt(acc) + " < momentum " + fmt(mom));
    } else {
      std::printf("[WARN] 12 %-22s accuracy %s >= momentum %s (soft)\n", "accuracy-smoothness",
                  fmt(acc).c_str(), fmt(mom).c_str());
    }
  });
}

}  // namespace

int main() {
  guarded(1, "diffusion", diffusion_core);
  guarded(2, "dse", spectral_entropy_limits);
  guarded(3, "ward+ari", ward_and_ari);
  guarded(4, "wasserstein+tda", wasserstein_and_tda);
  guarded(5, "phate", phate_embedding);
  guarded(6, "manifold-metric", manifold_metric);
  guarded(7, "gft", graph_fourier);
  guarded(8, "determinism", determinism);

  if (const char* manifest = std::getenv("NNMANIFOLD_HARNESS_MANIFEST")) {
    harness_criteria(manifest);
  } else {
    for (int id : {9, 10, 11, 12}) skip(id, "harness corpus", "set NNMANIFOLD_HARNESS_MANIFEST");
  }
  skip(13, "harness contract", "checked by the training harness");
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
