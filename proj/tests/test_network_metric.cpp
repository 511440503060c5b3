#include "nnmanifold/network_metric.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace nnmanifold;

TEST_CASE("signatures") {
  std::mt19937_64 rng(10);
  const ActivationSet a{"a", oracle::random_points(rng, 8, 3)};
  const auto diff = signature(a, SignatureMethod::diffusion());
  CHECK(diff.matrix.rowwise().sum().isApproxToConstant(1.0, 1e-12));
  CHECK(signature(a, SignatureMethod::raw_distance()).matrix == pairwise_distances(a.matrix));
  CHECK_THROWS_AS(signature(a, SignatureMethod::weights()), Error);
}

TEST_CASE("knn on a line") {
  MatrixXd x(3, 1);
  x << 0, 1, 3;
  const MatrixXd adj = knn_adjacency(pairwise_distances(x), 1);
  MatrixXd expected(3, 3);
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(adj == expected);
}

TEST_CASE("frobenius distances") {
  std::vector<MatrixXd> s{MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2)};
  const MatrixXd n = frobenius_distances<double>(s);
  CHECK(n(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(n(0, 2) == 0.0);

  std::vector<NetworkSignature> sigs{{"a", SignatureMethod::diffusion(), MatrixXd::Zero(2, 2)},
                                     {"b", SignatureMethod::diffusion(), MatrixXd::Zero(3, 3)}};
  CHECK_THROWS_AS(manifold_matrix(sigs), Error);
  sigs[1].matrix = MatrixXd::Zero(2, 2);
  sigs[1].method = SignatureMethod::raw_distance();
  CHECK_THROWS_AS(manifold_matrix(sigs), Error);
}

TEST_CASE("manifold metric axioms and width independence") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> width(2, 30);
  std::vector<NetworkSignature> sigs;
  for (int i = 0; i < 6; ++i) {
    const ActivationSet a{"n" + std::to_string(i), oracle::random_points(rng, 10, width(rng))};
    sigs.push_back(signature(a, SignatureMethod::diffusion()));
  }
  const MatrixXd n = manifold_matrix(sigs).matrix;
  CHECK(n.rows() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(n(i, i) == 0.0);
    for (int j = 0; j < 6; ++j) {
      CHECK(n(i, j) == n(j, i));
      CHECK(n(i, j) >= 0.0);
      for (int k = 0; k < 6; ++k) CHECK(n(i, k) <= n(i, j) + n(j, k) + 1e-12);
    }
  }
}

TEST_CASE("top-n tightness") {
  MatrixXd sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const std::vector<double> acc{0.9, 0.8, 0.1, 0.2};
  CHECK(topn_tightness(sq, acc, 2) == doctest::Approx(0.8787).epsilon(1e-4));
  CHECK(topn_tightness(sq, acc, 2) == doctest::Approx(6.0 / (4.0 + 2.0 * std::sqrt(2.0))));

  MatrixXd clumped(4, 2);
  clumped << 0, 0, 0, 0, 5, 1, -3, 2;
  CHECK(topn_tightness(clumped, acc, 2) == 0.0);
  CHECK_THROWS_AS(topn_tightness(sq, acc, 1), Error);
}

TEST_CASE("ranking breaks ties by id") {
  const std::vector<double> acc{0.5, 0.9, 0.9};
  const std::vector<std::string> ids{"c", "b", "a"};
  const auto r = rank_by_accuracy(acc, ids);
  CHECK(r == std::vector<std::size_t>{2, 1, 0});
}
