#include "nnmanifold/corpus.hpp"
#include "nnmanifold/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using namespace nnmanifold;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nnmanifold_corpus_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json manifest(int networks) {
  nlohmann::json j = {{"dataset", "toy"}, {"n_points", 4}, {"class_count", 2},
                      {"labels", {0, 0, 1, 1}}, {"networks", nlohmann::json::array()}};
  for (int i = 0; i < networks; ++i) {
    j["networks"].push_back({{"id", "n" + std::to_string(i)},
                             {"activations", "activations/n" + std::to_string(i) + ".csv"},
                             {"accuracy", 0.5 + 0.1 * i},
                             {"hyperparameters",
                              {{"learning_rate", 0.1}, {"momentum", 0.9}, {"weight_decay", 1e-4}}},
                             {"architecture", {{"hidden", {50, 20}}}}});
  }
  return j;
}

void write_activations(const fs::path& dir, int networks, int rows = 4) {
  for (int i = 0; i < networks; ++i) {
    MatrixXd m = MatrixXd::Constant(rows, 2, 0.25 * i);
    m(0, 0) = 1.5;
    io::write_matrix_csv(dir / "activations" / ("n" + std::to_string(i) + ".csv"), m);
  }
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("manifest loads") {
  const auto dir = scratch("load");
  write_activations(dir, 3);
  const auto c = corpus_from_json(manifest(3), dir);
  CHECK(c.networks.size() == 3);
  CHECK(c.test_set.n_points == 4);
  CHECK(c.network("n1").accuracy == doctest::Approx(0.6));
  const auto a = load_activations(c, "n2");
  CHECK(a.matrix.rows() == 4);
  CHECK(a.width() == 2);
  CHECK(a.matrix(0, 0) == 1.5);
}

TEST_CASE("manifest validation errors") {
  const auto dir = scratch("invalid");
  write_activations(dir, 3);
  auto dup = manifest(3);
  dup["networks"][2]["id"] = "n0";
  CHECK(kind_of([&] { corpus_from_json(dup, dir); }) == ErrorKind::SchemaViolation);

  auto missing = manifest(3);
  missing["networks"][1]["activations"] = "activations/nope.csv";
  CHECK(kind_of([&] { corpus_from_json(missing, dir); }) == ErrorKind::MissingFile);

  auto labels = manifest(3);
  labels["labels"] = {0, 1, 1};
  CHECK(kind_of([&] { corpus_from_json(labels, dir); }) == ErrorKind::LabelMismatch);

  CHECK(kind_of([&] { load_corpus(dir / "absent.json"); }) == ErrorKind::MissingFile);
}

TEST_CASE("activation rows and values are checked") {
  const auto dir = scratch("rows");
  write_activations(dir, 2);
  io::write_matrix_csv(dir / "activations" / "n1.csv", MatrixXd::Ones(3, 2));
  const auto c = corpus_from_json(manifest(2), dir);
  CHECK(kind_of([&] { load_activations(c, "n1"); }) == ErrorKind::RowCountMismatch);

  std::ofstream(dir / "activations" / "n0.csv") << "1,2\nnan,3\n4,5\n6,7\n";
  CHECK(kind_of([&] { load_activations(c, "n0"); }) == ErrorKind::NonFiniteValue);
}

TEST_CASE("corpus round trip") {
  const auto src = scratch("rt_src");
  write_activations(src, 3);
  const auto c = corpus_from_json(manifest(3), src);
  std::vector<ActivationSet> acts;
  for (const auto& id : c.ids()) acts.push_back(load_activations(c, id));

  const auto dst = scratch("rt_dst");
  write_corpus(dst, c, acts);
  const auto back = load_corpus(dst / "manifest.json");
  CHECK(back.ids() == c.ids());
  CHECK(back.test_set.labels == c.test_set.labels);
  for (const auto& id : c.ids()) {
    CHECK(load_activations(back, id).matrix == load_activations(c, id).matrix);
  }
}

TEST_CASE("doubles round trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(std::isinf(io::parse_double("inf")));
}
