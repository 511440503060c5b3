#include "nnmanifold/phate.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace nnmanifold;

namespace {

MatrixXd triangle() {
  MatrixXd u(3, 3);
  u << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  return u;
}

}  // namespace

TEST_CASE("alpha decay kernel") {
  // Three points equidistant at r: every bandwidth equals r.
  const MatrixXd d = MatrixXd::Constant(3, 3, 2.0) - 2.0 * MatrixXd::Identity(3, 3);
  const MatrixXd k = alpha_decay_kernel(d, 1, 40.0);
  CHECK(k(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(k(1, 2) == doctest::Approx(0.3679).epsilon(1e-4));
  CHECK(k(0, 0) == 1.0);
  CHECK_THROWS_AS(alpha_decay_kernel(d, 3, 40.0), Error);
}

TEST_CASE("von Neumann entropy knee") {
  DiffusionSpectrum<double> flat{VectorXd::Ones(5)};
  CHECK(knee_point(vne_curve(flat, 100)) == 1);
  CHECK(knee_point(vne_curve(flat, 1)) == 1);

  DiffusionSpectrum<double> geo{VectorXd(6)};
  for (int i = 0; i < 6; ++i) geo.eigenvalues(i) = std::pow(0.5, i);
  const auto curve = vne_curve(geo, 40);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second <= curve[i - 1].second + 1e-15);
  // Brute-force distance-to-chord scan.
  const double x1 = 1, y1 = curve.front().second, x2 = 40, y2 = curve.back().second;
  int best_t = 1;
  double best = -1;
  for (const auto& [t, h] : curve) {
    const double dist = std::abs((y2 - y1) * t - (x2 - x1) * h + x2 * y1 - y2 * x1) /
                        std::sqrt((y2 - y1) * (y2 - y1) + (x2 - x1) * (x2 - x1));
    if (dist > best) {
      best = dist;
      best_t = t;
    }
  }
  CHECK(knee_point(curve) == best_t);
}

TEST_CASE("potential distances") {
  DiffusionOperator<double> op;
  op.matrix = (MatrixXd(2, 2) << 0.9, 0.1, 0.5, 0.5).finished();
  op.degree = VectorXd::Ones(2);
  const double expected = std::hypot(std::log(0.9) - std::log(0.5), std::log(0.1) - std::log(0.5));
  CHECK(potential_distances(op, 1)(0, 1) == doctest::Approx(expected).epsilon(1e-14));

  op.matrix = (MatrixXd(2, 2) << 1.0, 0.0, 0.0, 1.0).finished();
  CHECK(std::isfinite(potential_distances(op, 1)(0, 1)));
  op.matrix = (MatrixXd(2, 2) << 0.5, 0.5, 0.5, 0.5).finished();
  CHECK(potential_distances(op, 2)(0, 1) == 0.0);
}

TEST_CASE("metric MDS") {
  const auto e = mds_embed(triangle(), PhateConfig{});
  const MatrixXd d = pairwise_distances(e.coordinates);
  CHECK((d - triangle()).cwiseAbs().maxCoeff() < 1e-6);

  const auto z = mds_embed(MatrixXd::Zero(4, 4), PhateConfig{});
  CHECK(z.final_stress == 0.0);
  CHECK(pairwise_distances(z.coordinates).maxCoeff() == 0.0);

  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 5; ++trial) {
    const auto e2 = mds_embed(pairwise_distances(oracle::random_points(rng, 15, 6)), PhateConfig{});
    for (std::size_t i = 1; i < e2.stress_history.size(); ++i) {
      CHECK(e2.stress_history[i] <= e2.stress_history[i - 1]);
    }
  }
}

TEST_CASE("phate separates blobs") {
  std::mt19937_64 rng(21);
  MatrixXd x = oracle::random_points(rng, 20, 3, 0.01);
  for (int i = 10; i < 20; ++i) x(i, 0) += 1.0;
  const auto e = phate(pairwise_distances(x), PhateConfig{});
  const MatrixXd d = pairwise_distances(e.coordinates);
  double intra = 0, inter = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    for (int j = i + 1; j < 20; ++j) {
      if ((i < 10) == (j < 10)) intra = std::max(intra, d(i, j));
      else inter = std::min(inter, d(i, j));
    }
  }
  CHECK(intra < inter);
}

TEST_CASE("phate options and invariances") {
  const auto same = phate(MatrixXd::Zero(7, 7), PhateConfig{});
  CHECK(pairwise_distances(same.coordinates).maxCoeff() < 1e-6);

  std::mt19937_64 rng(22);
  const MatrixXd x = oracle::random_points(rng, 12, 4);
  PhateConfig fixed;
  fixed.t = 3;
  const auto e = phate(pairwise_distances(x), fixed);
  CHECK(e.t_used == 3);
  CHECK(e.vne_curve.empty());

  // Rotating the input leaves distances, hence the embedding, unchanged.
  const Eigen::HouseholderQR<MatrixXd> qr(oracle::random_points(rng, 4, 4));
  const MatrixXd q = qr.householderQ();
  const auto rotated = phate(pairwise_distances(MatrixXd(x * q)), fixed);
  CHECK((pairwise_distances(rotated.coordinates) - pairwise_distances(e.coordinates)).cwiseAbs().maxCoeff() <
        1e-6);
}
