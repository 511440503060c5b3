#include "nnmanifold/structure.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace nnmanifold {

std::vector<int> Dendrogram::leaf_order() const {
  std::vector<int> order;
  if (n_leaves == 0) return order;
  if (merges.empty()) return {0};
  std::vector<int> stack{n_leaves + static_cast<int>(merges.size()) - 1};
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    if (c < n_leaves) {
      order.push_back(c);
    } else {
      const auto& m = merges[static_cast<std::size_t>(c - n_leaves)];
      stack.push_back(m.cluster_b);
      stack.push_back(m.cluster_a);
    }
  }
  return order;
}

Dendrogram ward_dendrogram(const MatrixXd& points) {
  const auto n = static_cast<int>(points.rows());
  require(n >= 2, ErrorKind::InvalidArgument, "Ward clustering needs at least two points");

  // Squared Ward distances between active clusters, indexed by slot.
  MatrixXd d2 = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d2(i, j) = d2(j, i) = (points.row(i) - points.row(j)).squaredNorm();
    }
  }
  std::vector<int> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<bool> active(static_cast<std::size_t>(n), true);

  Dendrogram out;
  out.n_leaves = n;
  for (int step = 0; step < n - 1; ++step) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_ids{std::numeric_limits<int>::max(), 0};
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const std::pair<int, int> ids{std::min(id[i], id[j]), std::max(id[i], id[j])};
        if (d2(i, j) < best || (d2(i, j) == best && ids < best_ids)) {
          best = d2(i, j);
          best_ids = ids;
          bi = i;
          bj = j;
        }
      }
    }
    const int ni = size[bi], nj = size[bj];
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double nk = size[k];
      const double v = ((ni + nk) * d2(k, bi) + (nj + nk) * d2(k, bj) - nk * d2(bi, bj)) /
                       (ni + nj + nk);
      d2(k, bi) = d2(bi, k) = v;
    }
    out.merges.push_back({best_ids.first, best_ids.second, std::sqrt(std::max(best, 0.0)), ni + nj});
    id[bi] = n + step;
    size[bi] = ni + nj;
    active[bj] = false;
  }
  return out;
}

std::vector<int> cut_dendrogram(const Dendrogram& d, int k) {
  const int n = d.n_leaves;
  require(k >= 1 && k <= n, ErrorKind::BadK,
          "cut needs 1 <= k <= " + std::to_string(n) + ", got " + std::to_string(k));
  std::vector<int> parent(static_cast<std::size_t>(2 * n - 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    const auto& merge = d.merges[static_cast<std::size_t>(m)];
    parent[find(merge.cluster_a)] = n + m;
    parent[find(merge.cluster_b)] = n + m;
  }
  std::map<int, int> canonical;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto [it, inserted] = canonical.try_emplace(find(i), static_cast<int>(canonical.size()));
    labels[i] = it->second;
  }
  return labels;
}

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

std::vector<int> canonicalize(std::span<const int> labels) {
  std::map<int, int> seen;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = seen.try_emplace(l, static_cast<int>(seen.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  require(a.size() == b.size(), ErrorKind::LengthMismatch, "partitions differ in length");
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, c] : cells) index += choose2(c);
  for (const auto& [key, c] : rows) sum_a += choose2(c);
  for (const auto& [key, c] : cols) sum_b += choose2(c);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return canonicalize(a) == canonicalize(b) ? 1.0 : 0.0;
  return (index - expected) / denom;
}

MatrixXd pairwise_ari_matrix(const std::vector<std::vector<int>>& partitions) {
  const auto m = static_cast<Eigen::Index>(partitions.size());
  MatrixXd out = MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      out(i, j) = out(j, i) = adjusted_rand_index(partitions[i], partitions[j]);
    }
  }
  return out;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::LengthMismatch, "correlation inputs differ in length");
  require(x.size() >= 2, ErrorKind::DegenerateInput, "correlation needs at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0 && syy > 0.0, ErrorKind::DegenerateInput, "constant input to correlation");
  return sxy / std::sqrt(sxx * syy);
}

double r_squared(std::span<const double> x, std::span<const double> y) {
  const double r = pearson_r(x, y);
  return r * r;
}

std::vector<AccuracyBin> bin_by_accuracy(std::span<const NetworkStats> stats, double width) {
  require(width > 0.0, ErrorKind::InvalidArgument, "bin width must be positive");
  std::map<long long, std::vector<const NetworkStats*>> bins;
  for (const auto& s : stats) {
    // Relative slack so that e.g. 0.09 lands in [0.09, 0.12) despite rounding.
    const auto k = static_cast<long long>(std::floor(s.accuracy / width + 1e-9));
    bins[k].push_back(&s);
  }
  std::vector<AccuracyBin> out;
  for (const auto& [k, members] : bins) {
    AccuracyBin bin;
    bin.low = static_cast<double>(k) * width;
    bin.high = static_cast<double>(k + 1) * width;
    double sum = 0.0;
    for (const auto* s : members) {
      bin.member_ids.push_back(s->id);
      sum += s->mean_within_variance;
    }
    const double count = static_cast<double>(members.size());
    bin.mean_within_variance = sum / count;
    double sq = 0.0;
    for (const auto* s : members) {
      sq += (s->mean_within_variance - bin.mean_within_variance) *
            (s->mean_within_variance - bin.mean_within_variance);
    }
    bin.std_within_variance = std::sqrt(sq / count);

    double ari = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        if (members[a]->partition.empty() || members[b]->partition.empty()) continue;
        ari += adjusted_rand_index(members[a]->partition, members[b]->partition);
        ++pairs;
      }
    }
    if (pairs > 0) bin.mean_pairwise_ari = ari / static_cast<double>(pairs);
    out.push_back(std::move(bin));
  }
  return out;
}

}  // namespace nnmanifold
