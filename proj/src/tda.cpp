#include "nnmanifold/tda.hpp"

#include "nnmanifold/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace nnmanifold {

std::vector<PersistencePoint> PersistenceDiagram::dimension(int dim) const {
  std::vector<PersistencePoint> out;
  for (const auto& p : points) {
    if (p.dim == dim) out.push_back(p);
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SimplexIndex = std::int64_t;

class BinomialTable {
public:
  BinomialTable(int n, int k) : n_(n), table_((k + 1) * (n + 1), 0) {
    for (int v = 0; v <= n; ++v) {
      at(0, v) = 1;
      for (int j = 1; j <= std::min(v, k); ++j) {
        at(j, v) = (j == v) ? 1 : at(j - 1, v - 1) + at(j, v - 1);
      }
    }
  }
  SimplexIndex operator()(int v, int k) const { return v < k ? 0 : table_[k * (n_ + 1) + v]; }

private:
  SimplexIndex& at(int k, int v) { return table_[k * (n_ + 1) + v]; }
  int n_;
  std::vector<SimplexIndex> table_;
};

struct Entry {
  double diameter;
  SimplexIndex index;
};

// Filtration order: smaller diameter first, then larger index first.
bool earlier(const Entry& a, const Entry& b) {
  return a.diameter < b.diameter || (a.diameter == b.diameter && a.index > b.index);
}

struct LaterFirst {
  bool operator()(const Entry& a, const Entry& b) const { return earlier(b, a); }
};

using CoboundaryHeap = std::priority_queue<Entry, std::vector<Entry>, LaterFirst>;

// Simplices have at most four vertices (max_dim <= 2, cofaces one higher).
using Vertices = std::array<int, 4>;

class RipsComplex {
public:
  RipsComplex(const MatrixXd& d, double threshold, int max_dim)
      : d_(d), n_(static_cast<int>(d.rows())), threshold_(threshold), binom_(n_, max_dim + 2) {}

  int size() const { return n_; }

  // The dim + 1 vertices in decreasing order.
  Vertices vertices(SimplexIndex idx, int dim) const {
    Vertices out{};
    int v = n_ - 1;
    for (int k = dim + 1; k >= 1; --k) {
      while (binom_(v, k) > idx) --v;
      out[static_cast<std::size_t>(dim + 1 - k)] = v;
      idx -= binom_(v, k);
    }
    return out;
  }

  SimplexIndex index(const Vertices& desc, int dim) const {
    SimplexIndex idx = 0;
    for (int i = 0; i <= dim; ++i) idx += binom_(desc[static_cast<std::size_t>(i)], dim + 1 - i);
    return idx;
  }

  SimplexIndex count(int dim) const { return binom_(n_, dim + 1); }

  double diameter(const Vertices& verts, int dim) const {
    double diam = 0.0;
    for (int i = 0; i <= dim; ++i) {
      for (int j = i + 1; j <= dim; ++j) diam = std::max(diam, d_(verts[i], verts[j]));
    }
    return diam;
  }

  // Calls fn(Entry) for every coface within the threshold.
  template <typename Fn>
  void for_each_coface(SimplexIndex idx, int dim, Fn&& fn) const {
    const Vertices verts = vertices(idx, dim);
    const double base = diameter(verts, dim);
    // Walking w downwards, the coface index is prefix (vertices above w,
    // shifted up one binomial level) + C(w, dim + 2 - pos) + suffix (vertices
    // below w).
    SimplexIndex suffix = index(verts, dim);
    SimplexIndex prefix = 0;
    int pos = 0;  // number of vertices greater than w
    for (int w = n_ - 1; w >= 0; --w) {
      if (pos <= dim && verts[static_cast<std::size_t>(pos)] == w) {
        suffix -= binom_(w, dim + 1 - pos);
        prefix += binom_(w, dim + 2 - pos);
        ++pos;
        continue;
      }
      double diam = base;
      for (int i = 0; i <= dim; ++i) diam = std::max(diam, d_(w, verts[static_cast<std::size_t>(i)]));
      if (diam > threshold_) continue;
      fn(Entry{diam, prefix + binom_(w, dim + 2 - pos) + suffix});
    }
  }

  void push_coboundary(SimplexIndex idx, int dim, CoboundaryHeap& heap) const {
    for_each_coface(idx, dim, [&](const Entry& e) { heap.push(e); });
  }

  double threshold() const { return threshold_; }
  double distance(int i, int j) const { return d_(i, j); }

private:
  const MatrixXd& d_;
  int n_;
  double threshold_;
  BinomialTable binom_;
};

std::optional<Entry> pivot_of(CoboundaryHeap& heap) {
  while (!heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    if (!heap.empty() && heap.top().index == top.index) {
      heap.pop();  // Z/2: equal entries cancel
      continue;
    }
    heap.push(top);
    return top;
  }
  return std::nullopt;
}

// Union-find H0; returns the edges that did not merge components, which
// are the only edge columns left for the degree-1 reduction.
std::vector<Entry> zero_dim_pairs(const RipsComplex& rc, std::vector<PersistencePoint>& out) {
  const int n = rc.size();
  std::vector<Entry> edges;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double diam = rc.distance(i, j);
      if (diam <= rc.threshold()) edges.push_back({diam, rc.index({i, j, 0, 0}, 1)});
    }
  }
  std::sort(edges.begin(), edges.end(), earlier);

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<Entry> remaining;
  for (const auto& e : edges) {
    const auto v = rc.vertices(e.index, 1);
    const int a = find(v[0]), b = find(v[1]);
    if (a == b) {
      remaining.push_back(e);
      continue;
    }
    parent[std::max(a, b)] = std::min(a, b);
    out.push_back({0.0, e.diameter, 0});
  }
  for (int i = 0; i < n; ++i) {
    if (find(i) == i) out.push_back({0.0, kInf, 0});
  }
  // Columns for the next degree are processed latest-first.
  std::reverse(remaining.begin(), remaining.end());
  return remaining;
}

// Reduces the coboundary columns of one degree. Pivots found here are
// cleared from the next degree's columns.
std::unordered_set<SimplexIndex> reduce_degree(const RipsComplex& rc, int dim,
                                               const std::vector<Entry>& columns,
                                               std::vector<PersistencePoint>& out) {
  std::unordered_map<SimplexIndex, std::size_t> pivot_owner;
  std::vector<std::vector<SimplexIndex>> reductions;
  std::unordered_set<SimplexIndex> pivots;

  for (const auto& column : columns) {
    // Unreduced pivot is the earliest coface; without a collision the
    // column is already reduced and no heap is needed.
    std::optional<Entry> first;
    rc.for_each_coface(column.index, dim, [&](const Entry& e) {
      if (!first || earlier(e, *first)) first = e;
    });
    if (!first) {
      out.push_back({column.diameter, kInf, dim});
      continue;
    }
    if (!pivot_owner.count(first->index)) {
      pivot_owner.emplace(first->index, reductions.size());
      reductions.push_back({column.index});
      pivots.insert(first->index);
      if (first->diameter > column.diameter) out.push_back({column.diameter, first->diameter, dim});
      continue;
    }

    CoboundaryHeap heap;
    std::vector<SimplexIndex> reduction{column.index};
    rc.push_coboundary(column.index, dim, heap);
    auto pivot = pivot_of(heap);
    while (pivot) {
      auto it = pivot_owner.find(pivot->index);
      if (it == pivot_owner.end()) break;
      for (SimplexIndex s : reductions[it->second]) {
        rc.push_coboundary(s, dim, heap);
        reduction.push_back(s);
      }
      pivot = pivot_of(heap);
    }
    if (!pivot) {
      out.push_back({column.diameter, kInf, dim});
      continue;
    }
    // Keep the reduction column mod 2.
    std::sort(reduction.begin(), reduction.end());
    std::vector<SimplexIndex> reduced;
    for (std::size_t i = 0; i < reduction.size();) {
      std::size_t j = i;
      while (j < reduction.size() && reduction[j] == reduction[i]) ++j;
      if ((j - i) % 2 == 1) reduced.push_back(reduction[i]);
      i = j;
    }
    pivot_owner.emplace(pivot->index, reductions.size());
    reductions.push_back(std::move(reduced));
    pivots.insert(pivot->index);
    if (pivot->diameter > column.diameter) out.push_back({column.diameter, pivot->diameter, dim});
  }
  return pivots;
}

std::vector<Entry> columns_for(const RipsComplex& rc, int dim,
                               const std::unordered_set<SimplexIndex>& cleared) {
  std::vector<Entry> cols;
  const SimplexIndex total = rc.count(dim);
  for (SimplexIndex idx = 0; idx < total; ++idx) {
    if (cleared.count(idx)) continue;
    const double diam = rc.diameter(rc.vertices(idx, dim), dim);
    if (diam <= rc.threshold()) cols.push_back({diam, idx});
  }
  std::sort(cols.begin(), cols.end(), [](const Entry& a, const Entry& b) { return earlier(b, a); });
  return cols;
}

}  // namespace

PersistenceDiagram rips_persistence(const MatrixXd& distances, const RipsConfig& config) {
  const auto n = static_cast<int>(distances.rows());
  require(distances.cols() == n, ErrorKind::ShapeMismatch, "distance matrix must be square");
  require(n <= config.max_points, ErrorKind::TooManyPoints,
          std::to_string(n) + " points exceed the cap of " + std::to_string(config.max_points));
  require(config.max_dim >= 0 && config.max_dim <= 2, ErrorKind::InvalidArgument,
          "max_dim must be 0, 1 or 2");
  double threshold = n > 0 ? distances.maxCoeff() : 0.0;
  if (config.max_radius) {
    require(*config.max_radius >= 0.0, ErrorKind::BadRadius, "negative filtration radius");
    threshold = *config.max_radius;
  }

  PersistenceDiagram out;
  if (n == 0) return out;
  RipsComplex rc(distances, threshold, config.max_dim);
  auto columns = zero_dim_pairs(rc, out.points);
  for (int dim = 1; dim <= config.max_dim; ++dim) {
    const auto pivots = reduce_degree(rc, dim, columns, out.points);
    if (dim < config.max_dim) columns = columns_for(rc, dim + 1, pivots);
  }
  std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
  });
  return out;
}

Assignment hungarian(const MatrixXd& cost) {
  const auto n = static_cast<int>(cost.rows());
  require(cost.cols() == n, ErrorKind::ShapeMismatch, "assignment cost must be square");
  // Shortest augmenting paths with row/column potentials (1-based).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  Assignment out;
  out.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j]) out.assignment[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  }
  for (int i = 0; i < n; ++i) out.cost += cost(i, out.assignment[static_cast<std::size_t>(i)]);
  return out;
}

namespace {

std::vector<PersistencePoint> apply_policy(std::span<const PersistencePoint> pts,
                                           const DiagramDistanceConfig& config) {
  std::vector<PersistencePoint> out;
  for (auto p : pts) {
    if (std::isinf(p.death)) {
      if (config.infinite_policy == DiagramDistanceConfig::InfinitePolicy::Drop) continue;
      require(config.cap >= p.birth, ErrorKind::InfinitePointMismatch,
              "cap value lies below an essential class birth");
      p.death = config.cap;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

double wasserstein_distance(std::span<const PersistencePoint> a_in,
                            std::span<const PersistencePoint> b_in,
                            const DiagramDistanceConfig& config) {
  require(config.p >= 1.0, ErrorKind::InvalidArgument, "Wasserstein order must be >= 1");
  const auto a = apply_policy(a_in, config);
  const auto b = apply_policy(b_in, config);
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  if (na + nb == 0) return 0.0;
  const double p = config.p;
  auto to_diag = [&](const PersistencePoint& x) { return std::pow(x.persistence() / 2.0, p); };

  // Rows: a points then one diagonal slot per b point. Columns: b points
  // then one diagonal slot per a point.
  MatrixXd cost = MatrixXd::Zero(na + nb, na + nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double linf = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
      cost(i, j) = std::pow(linf, p);
    }
    for (int j = nb; j < nb + na; ++j) cost(i, j) = to_diag(a[i]);
  }
  for (int i = na; i < na + nb; ++i) {
    for (int j = 0; j < nb; ++j) cost(i, j) = to_diag(b[j]);
  }
  return std::pow(std::max(hungarian(cost).cost, 0.0), 1.0 / p);
}

DiagramDistance diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 int max_dim, const DiagramDistanceConfig& config) {
  DiagramDistance out;
  double total = 0.0;
  for (int dim = 0; dim <= max_dim; ++dim) {
    const double w = wasserstein_distance(a.dimension(dim), b.dimension(dim), config);
    out.per_dimension.push_back(w);
    total += std::pow(w, config.p);
  }
  out.combined = std::pow(total, 1.0 / config.p);
  return out;
}

DiagramManifold diagram_manifold(std::span<const PersistenceDiagram> diagrams, int max_dim,
                                 const DiagramDistanceConfig& config) {
  require(diagrams.size() >= 2, ErrorKind::TooFewNetworks, "need at least two diagrams");
  const auto m = static_cast<Eigen::Index>(diagrams.size());
  DiagramManifold out;
  out.matrix = MatrixXd::Zero(m, m);
  out.per_dimension.assign(static_cast<std::size_t>(max_dim + 1), MatrixXd::Zero(m, m));
  for (const auto& d : diagrams) out.network_ids.push_back(d.network_id);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto dd = diagram_distance(diagrams[i], diagrams[j], max_dim, config);
      out.matrix(i, j) = out.matrix(j, i) = dd.combined;
      for (int dim = 0; dim <= max_dim; ++dim) {
        out.per_dimension[dim](i, j) = out.per_dimension[dim](j, i) = dd.per_dimension[dim];
      }
    }
  }
  return out;
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
  std::string out = "dim,birth,death\n";
  for (const auto& p : diagram.points) {
    out += std::to_string(p.dim) + ',' + io::format_double(p.birth) + ',' +
           io::format_double(p.death) + '\n';
  }
  return out;
}

PersistenceDiagram read_diagram_csv(const std::filesystem::path& path, std::string network_id) {
  std::istringstream in(io::read_text(path));
  std::string line;
  std::getline(in, line);  // header
  PersistenceDiagram out;
  out.network_id = std::move(network_id);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = io::split(line, ',');
    require(cells.size() == 3, ErrorKind::ParseError, path.string() + ": expected dim,birth,death");
    out.points.push_back({io::parse_double(cells[1]), io::parse_double(cells[2]),
                          static_cast<int>(io::parse_double(cells[0]))});
  }
  return out;
}

}  // namespace nnmanifold
