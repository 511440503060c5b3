// Command-line driver. Subcommands mirror pipeline stages; `run` executes
// several at once.
//
//   nnmanifold run --manifest corpus/manifest.json --out results
//   nnmanifold embed --manifest corpus/manifest.json --out results --t 5

#include "nnmanifold/pipeline.hpp"
#include "nnmanifold/version.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string manifest;
  std::string out = "nnmanifold-out";
  std::string method = "diffusion";
  double sigma = 0.5;
  int knn = 5;
  int signature_k = 5;
  int top_n = 30;
  int clusters = 10;
  int max_dim = 2;
  int max_points = 512;
  double wasserstein_p = 2.0;
  std::string t = "auto";
  std::uint64_t seed = 0;
  int dse_t = 1;
  double decay = 40.0;
  int components = 2;
  bool save_signatures = false;
  std::vector<std::string> stages;
};

void add_global_flags(CLI::App& app, Options& o) {
  app.add_option("--manifest", o.manifest, "Corpus manifest (JSON)")->required();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--method", o.method, "Network signature")
      ->check(CLI::IsMember({"diffusion", "distance", "knn", "weights"}))
      ->capture_default_str();
  app.add_option("--sigma", o.sigma, "Gaussian kernel bandwidth")->capture_default_str();
  app.add_option("--knn", o.knn, "PHATE kernel neighbours")->capture_default_str();
  app.add_option("--signature-k", o.signature_k, "Neighbours for the knn signature")
      ->capture_default_str();
  app.add_option("--decay", o.decay, "PHATE alpha-decay exponent")->capture_default_str();
  app.add_option("--components", o.components, "Embedding dimension (2 or 3)")
      ->check(CLI::Range(2, 3))
      ->capture_default_str();
  app.add_option("--top-n", o.top_n, "Networks sampled for the recommendation")
      ->capture_default_str();
  app.add_option("--clusters", o.clusters, "Dendrogram cut size")->capture_default_str();
  app.add_option("--max-dim", o.max_dim, "Highest homology dimension")
      ->check(CLI::Range(0, 2))
      ->capture_default_str();
  app.add_option("--max-points", o.max_points, "Point cap for Rips persistence")
      ->capture_default_str();
  app.add_option("--wasserstein-p", o.wasserstein_p, "Wasserstein order")->capture_default_str();
  app.add_option("--t", o.t, "PHATE diffusion time: auto or an integer")->capture_default_str();
  app.add_option("--dse-t", o.dse_t, "Diffusion time for spectral entropy")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for MDS jitter")->capture_default_str();
  app.add_flag("--save-signatures", o.save_signatures, "Persist per-network signatures");
}

nnmanifold::RunConfig to_config(const Options& o) {
  using namespace nnmanifold;
  RunConfig c;
  c.manifest_path = o.manifest;
  c.output_dir = o.out;
  c.method = parse_signature_method(o.method, o.signature_k);
  c.sigma = o.sigma;
  c.phate.knn = o.knn;
  c.phate.decay_alpha = o.decay;
  c.phate.n_components = o.components;
  c.phate.seed = o.seed;
  if (o.t != "auto") {
    try {
      c.phate.t = std::stoi(o.t);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--t must be 'auto' or an integer");
    }
    require(*c.phate.t >= 1, ErrorKind::InvalidArgument, "--t must be at least 1");
  }
  c.rips.max_dim = o.max_dim;
  c.rips.max_points = o.max_points;
  c.diagram.p = o.wasserstein_p;
  c.top_n = o.top_n;
  c.clusters = o.clusters;
  c.dse_t = o.dse_t;
  c.save_signatures = o.save_signatures;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nnmanifold;
  CLI::App app{"Manifolds of neural networks from hidden-layer diffusion geometry"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opts;
  std::string selected;
  auto* run_cmd = app.add_subcommand("run", "Run several stages (default: all)");
  add_global_flags(*run_cmd, opts);
  run_cmd->add_option("--stages", opts.stages, "Stages to run")->delimiter(',');
  run_cmd->callback([&] { selected = "run"; });

  const std::pair<const char*, const char*> stage_help[] = {
      {"signature", "Compute per-network signatures"},
      {"manifold", "Network-to-network distance matrix"},
      {"embed", "PHATE embedding of the manifold"},
      {"structure", "Class structure, dendrograms, ARI, correlations"},
      {"tda", "Persistence diagrams and Wasserstein manifold"},
      {"gft", "Graph Fourier analysis of manifold signals"},
      {"recommend", "Hyperparameter recommendation"},
      {"report", "Merge stage summaries into report.json"},
  };
  for (const auto& [name, help] : stage_help) {
    auto* sub = app.add_subcommand(name, help);
    add_global_flags(*sub, opts);
    const std::string stage = name;
    sub->callback([&selected, stage] { selected = stage; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig config = to_config(opts);
    if (selected == "run") {
      if (opts.stages.empty()) {
        config.stages.insert(all_stages().begin(), all_stages().end());
      } else {
        for (const auto& s : opts.stages) config.stages.insert(parse_stage(s));
      }
    } else {
      config.stages.insert(parse_stage(selected));
    }
    run(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::InvalidArgument) return kExitUsage;
    return is_numerical(e.kind()) ? kExitNumerical : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
