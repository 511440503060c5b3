#pragma once

// PHATE on a precomputed distance matrix: alpha-decay kernel, diffusion,
// von Neumann entropy knee for t, log-potential distances and metric MDS.

#include "nnmanifold/diffusion.hpp"
#include "nnmanifold/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace nnmanifold {

struct PhateConfig {
  int knn = 5;
  double decay_alpha = 40.0;
  std::optional<int> t;  // nullopt = pick by VNE knee
  int t_max = 100;
  int n_components = 2;
  int mds_max_iter = 500;
  double mds_tol = 1e-6;
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct PhateEmbedding {
  Matrix<Scalar> coordinates;
  int t_used = 1;
  std::vector<std::pair<int, Scalar>> vne_curve;
  Scalar final_stress = 0;
  std::vector<Scalar> stress_history;  // initial configuration first
  bool converged = true;
};

/// Potential distances are floored here before taking logs, which bounds
/// the largest possible potential distance.
inline constexpr double kPotentialLogFloor = 1e-12;

/// K_ij = (exp(-(d_ij/eps_i)^a) + exp(-(d_ij/eps_j)^a)) / 2 with eps_i the
/// distance from i to its knn-th nearest other point. A zero bandwidth
/// (knn exact duplicates) falls back to the smallest positive bandwidth,
/// then to the smallest positive distance.
template <typename Derived>
Matrix<typename Derived::Scalar> alpha_decay_kernel(const Eigen::MatrixBase<Derived>& d, int knn,
                                                    typename Derived::Scalar alpha) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = d.rows();
  require(d.cols() == n, ErrorKind::ShapeMismatch, "distance matrix must be square");
  require(knn >= 1, ErrorKind::InvalidArgument, "knn must be positive");
  require(knn < n, ErrorKind::KTooLarge, "knn must be smaller than the number of points");
  require(alpha > Scalar(0), ErrorKind::InvalidArgument, "decay must be positive");

  Vector<Scalar> eps(n);
  std::vector<Scalar> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row.push_back(d(i, j));
    }
    std::nth_element(row.begin(), row.begin() + (knn - 1), row.end());
    eps(i) = row[static_cast<std::size_t>(knn - 1)];
  }
  if ((eps.array() <= Scalar(0)).any()) {
    Scalar fallback = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (eps(i) > Scalar(0)) fallback = std::min(fallback, eps(i));
    }
    if (!std::isfinite(static_cast<double>(fallback))) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (d(i, j) > Scalar(0)) fallback = std::min(fallback, Scalar(d(i, j)));
        }
      }
    }
    require(std::isfinite(static_cast<double>(fallback)), ErrorKind::DegenerateBandwidth,
            "every point coincides; no bandwidth can be chosen");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (eps(i) <= Scalar(0)) eps(i) = fallback;
    }
  }

  Matrix<Scalar> k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar a = std::exp(-std::pow(d(i, j) / eps(i), alpha));
      const Scalar b = std::exp(-std::pow(d(i, j) / eps(j), alpha));
      k(i, j) = Scalar(0.5) * (a + b);
    }
  }
  k.diagonal().setOnes();
  return k;
}

/// (t, H(t)) for t = 1..t_max where H is the entropy of normalized |lambda|^t.
template <typename Scalar>
std::vector<std::pair<int, Scalar>> vne_curve(const DiffusionSpectrum<Scalar>& s, int t_max) {
  require(t_max >= 1, ErrorKind::InvalidArgument, "t_max must be positive");
  std::vector<std::pair<int, Scalar>> curve;
  curve.reserve(static_cast<std::size_t>(t_max));
  for (int t = 1; t <= t_max; ++t) curve.emplace_back(t, diffusion_spectral_entropy(s, t));
  return curve;
}

/// The t maximizing the perpendicular distance to the chord joining the
/// curve's endpoints. A flat curve (or a single point) yields t = 1.
template <typename Scalar>
int knee_point(const std::vector<std::pair<int, Scalar>>& curve) {
  if (curve.size() < 3) return curve.empty() ? 1 : curve.front().first;
  const double x1 = curve.front().first, y1 = static_cast<double>(curve.front().second);
  const double x2 = curve.back().first, y2 = static_cast<double>(curve.back().second);
  const double norm = std::hypot(y2 - y1, x2 - x1);
  int best_t = curve.front().first;
  double best = 0.0;
  for (const auto& [t, h] : curve) {
    const double dist =
        std::abs((y2 - y1) * t - (x2 - x1) * static_cast<double>(h) + x2 * y1 - y2 * x1) / norm;
    if (dist > best + 1e-15) {
      best = dist;
      best_t = t;
    }
  }
  return best_t;
}

template <typename Scalar>
int select_t_vne(const DiffusionOperator<Scalar>& op, int t_max = 100) {
  return knee_point(vne_curve(spectrum(op), t_max));
}

/// U_ij = || log(P^t)_i. - log(P^t)_j. ||_2 with entries floored at 1e-12.
template <typename Scalar>
Matrix<Scalar> potential_distances(const DiffusionOperator<Scalar>& op, int t) {
  require(t >= 1, ErrorKind::InvalidArgument, "diffusion time must be at least 1");
  const Matrix<Scalar> pt = diffusion_power(op, t).matrix;
  const Matrix<Scalar> logs = pt.cwiseMax(Scalar(kPotentialLogFloor)).array().log().matrix();
  return pairwise_distances(logs);
}

/// Raw stress sum_{i<j} (u_ij - ||x_i - x_j||)^2.
template <typename DerivedU, typename DerivedX>
typename DerivedU::Scalar raw_stress(const Eigen::MatrixBase<DerivedU>& u,
                                     const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedU::Scalar;
  Scalar s = 0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < u.rows(); ++j) {
      const Scalar r = u(i, j) - (x.row(i) - x.row(j)).norm();
      s += r * r;
    }
  }
  return s;
}

/// Torgerson MDS. Eigenvector signs are fixed so the entry of largest
/// magnitude is positive.
template <typename Derived>
std::pair<Matrix<typename Derived::Scalar>, Vector<typename Derived::Scalar>> classical_mds(
    const Eigen::MatrixBase<Derived>& u, int n_components) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = u.rows();
  const Matrix<Scalar> j =
      Matrix<Scalar>::Identity(n, n) - Matrix<Scalar>::Constant(n, n, Scalar(1) / Scalar(n));
  Matrix<Scalar> b = Scalar(-0.5) * j * u.array().square().matrix() * j;
  b = (Scalar(0.5) * (b + b.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(b);
  require(solver.info() == Eigen::Success, ErrorKind::EigenFailure, "classical MDS eigensolve failed");
  const Eigen::Index k = std::min<Eigen::Index>(n_components, n);
  Matrix<Scalar> x = Matrix<Scalar>::Zero(n, n_components);
  Vector<Scalar> values = Vector<Scalar>::Zero(n_components);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = n - 1 - c;  // ascending order from the solver
    Vector<Scalar> v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < Scalar(0)) v = -v;
    values(c) = solver.eigenvalues()(src);
    x.col(c) = v * std::sqrt(std::max(values(c), Scalar(0)));
  }
  return {x, values};
}

/// Classical MDS start refined by SMACOF (Guttman transform, unit weights).
template <typename Derived>
PhateEmbedding<typename Derived::Scalar> mds_embed(const Eigen::MatrixBase<Derived>& u,
                                                   const PhateConfig& config) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = u.rows();
  require(u.cols() == n, ErrorKind::ShapeMismatch, "distance matrix must be square");
  require(config.n_components == 2 || config.n_components == 3, ErrorKind::InvalidArgument,
          "n_components must be 2 or 3");
  PhateEmbedding<Scalar> out;
  auto [x, values] = classical_mds(u, config.n_components);

  Scalar stress = raw_stress(u, x);
  const Scalar scale = u.cwiseAbs().maxCoeff();
  const Scalar lead = values.cwiseAbs().maxCoeff();
  if (stress > Scalar(1e-12) * (scale * scale + Scalar(1))) {
    // Rank-deficient start: a zero column can never move under the Guttman
    // transform, so seed it with a small deterministic perturbation.
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (values(c) <= Scalar(1e-12) * lead) {
        for (Eigen::Index i = 0; i < n; ++i) x(i, c) = Scalar(1e-6) * scale * Scalar(normal(rng));
      }
    }
    stress = raw_stress(u, x);
  }
  out.stress_history.push_back(stress);

  out.converged = false;
  for (int iter = 0; iter < config.mds_max_iter && stress > Scalar(0); ++iter) {
    Matrix<Scalar> b = Matrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const Scalar dij = (x.row(i) - x.row(j)).norm();
        if (dij > Scalar(0)) b(i, j) = -u(i, j) / dij;
      }
      b(i, i) = -b.row(i).sum();
    }
    Matrix<Scalar> next = (b * x) / Scalar(n);
    const Scalar next_stress = raw_stress(u, next);
    if (next_stress > stress) break;  // majorization guarantees this only from rounding
    const Scalar change = stress - next_stress;
    x = std::move(next);
    stress = next_stress;
    out.stress_history.push_back(stress);
    if (change <= Scalar(config.mds_tol) * out.stress_history[out.stress_history.size() - 2]) {
      out.converged = true;
      break;
    }
  }
  if (stress == Scalar(0)) out.converged = true;
  out.coordinates = std::move(x);
  out.final_stress = stress;
  return out;
}

/// Kernel -> operator -> t selection -> potential distances -> MDS.
template <typename Derived>
PhateEmbedding<typename Derived::Scalar> phate(const Eigen::MatrixBase<Derived>& d,
                                               const PhateConfig& config) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = d.rows();
  require(d.cols() == n, ErrorKind::ShapeMismatch, "distance matrix must be square");
  require(n >= config.knn + 1, ErrorKind::KTooLarge,
          "PHATE needs at least knn + 1 points (knn = " + std::to_string(config.knn) + ")");
  if (!(d.cwiseAbs().maxCoeff() > Scalar(0))) {
    PhateEmbedding<Scalar> same;
    same.coordinates = Matrix<Scalar>::Zero(n, config.n_components);
    same.t_used = config.t.value_or(1);
    same.stress_history.push_back(Scalar(0));
    return same;
  }
  const auto op = diffusion_operator(alpha_decay_kernel(d, config.knn, Scalar(config.decay_alpha)));
  std::vector<std::pair<int, Scalar>> curve;
  int t = 0;
  if (config.t) {
    t = *config.t;
  } else {
    curve = vne_curve(spectrum(op), config.t_max);
    t = knee_point(curve);
  }
  auto out = mds_embed(potential_distances(op, t), config);
  out.t_used = t;
  out.vne_curve = std::move(curve);
  return out;
}

}  // namespace nnmanifold
