#include "reclab/kmeans.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>

#include "reclab/random.hpp"

namespace reclab {

namespace {

constexpr std::uint64_t kInitStream = 0;

std::vector<double> dense_rows(const RatingsMatrix& m) {
  std::vector<double> rows(m.n_users() * m.n_articles());
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const auto r = m.row(u);
    double* out = rows.data() + u * m.n_articles();
    for (std::size_t a = 0; a < r.size(); ++a) {
      out[a] = r[a] == RatingsMatrix::kMissing ? std::nan("") : r[a] / 10.0;
    }
  }
  return rows;
}

std::string row_key(std::span<const std::int32_t> row) {
  return std::string(reinterpret_cast<const char*>(row.data()), row.size_bytes());
}

std::vector<std::size_t> init_random_rows(const RatingsMatrix& m, std::size_t k, Rng& rng) {
  std::vector<std::size_t> order(m.n_users());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.index(i)]);
  }
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> duplicates;
  std::unordered_set<std::string> seen;
  for (const std::size_t u : order) {
    if (chosen.size() == k) break;
    if (seen.insert(row_key(m.row(u))).second) {
      chosen.push_back(u);
    } else {
      duplicates.push_back(u);
    }
  }
  for (std::size_t i = 0; chosen.size() < k; ++i) chosen.push_back(duplicates[i]);
  return chosen;
}

std::vector<std::size_t> init_plus_plus(const std::vector<double>& rows, std::size_t n_users,
                                        std::size_t n_articles, std::size_t k, Rng& rng) {
  auto row_of = [&](std::size_t u) {
    return std::span<const double>(rows.data() + u * n_articles, n_articles);
  };
  std::vector<std::size_t> chosen{rng.index(n_users)};
  std::vector<bool> taken(n_users, false);
  taken[chosen[0]] = true;
  std::vector<double> nearest(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    nearest[u] = partial_distance_raw(row_of(u), row_of(chosen[0]));
  }
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t u = 0; u < n_users; ++u) {
      if (!taken[u]) total += nearest[u];
    }
    std::size_t pick = n_users;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (std::size_t u = 0; u < n_users; ++u) {
        if (taken[u] || nearest[u] <= 0.0) continue;
        pick = u;
        target -= nearest[u];
        if (target < 0.0) break;
      }
    } else {
      std::vector<std::size_t> free;
      for (std::size_t u = 0; u < n_users; ++u) {
        if (!taken[u]) free.push_back(u);
      }
      pick = free[rng.index(free.size())];
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t u = 0; u < n_users; ++u) {
      nearest[u] = std::min(nearest[u], partial_distance_raw(row_of(u), row_of(pick)));
    }
  }
  return chosen;
}

std::size_t nearest_centroid(const std::vector<Centroid>& centroids, std::span<const double> v) {
  std::size_t best = 0;
  double best_distance = partial_distance_raw(v, centroids[0].raw());
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = partial_distance_raw(v, centroids[c].raw());
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

std::vector<Centroid> member_means(const RatingsMatrix& m, const std::vector<std::size_t>& assign,
                                   std::size_t k) {
  const std::size_t n = m.n_articles();
  std::vector<std::int64_t> sums(k * n, 0);
  std::vector<std::size_t> counts(k * n, 0);
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const auto r = m.row(u);
    const std::size_t base = assign[u] * n;
    for (std::size_t a = 0; a < n; ++a) {
      if (r[a] == RatingsMatrix::kMissing) continue;
      sums[base + a] += r[a];
      ++counts[base + a];
    }
  }
  std::vector<Centroid> centroids;
  centroids.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> values(n);
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t i = c * n + a;
      values[a] = counts[i] == 0
                      ? std::nan("")
                      : static_cast<double>(sums[i]) / (10.0 * static_cast<double>(counts[i]));
    }
    centroids.emplace_back(std::move(values));
  }
  return centroids;
}

double total_distance(const std::vector<double>& rows, std::size_t n_articles,
                      const std::vector<Centroid>& centroids,
                      const std::vector<std::size_t>& assignment) {
  double total = 0.0;
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    total += partial_distance_raw(std::span<const double>(rows.data() + u * n_articles, n_articles),
                                  centroids[assignment[u]].raw());
  }
  return total;
}

}  // namespace

Centroid Centroid::from_optional(const OptionalVector& coordinates) {
  std::vector<double> values(coordinates.size());
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    values[i] = coordinates[i] ? *coordinates[i] : std::nan("");
  }
  return Centroid(std::move(values));
}

std::optional<double> Centroid::coordinate(std::size_t article) const {
  const double v = values_.at(article);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

OptionalVector Centroid::coordinates() const {
  OptionalVector out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isnan(values_[i])) out[i] = values_[i];
  }
  return out;
}

bool operator==(const Centroid& a, const Centroid& b) {
  if (a.values_.size() != b.values_.size()) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    const bool na = std::isnan(a.values_[i]);
    const bool nb = std::isnan(b.values_[i]);
    if (na != nb || (!na && a.values_[i] != b.values_[i])) return false;
  }
  return true;
}

double partial_distance_raw(std::span<const double> v, std::span<const double> c) {
  double sum = 0.0;
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // NaN on either side makes the difference NaN.
    const double diff = v[i] - c[i];
    if (diff == diff) {
      sum += diff * diff;
      ++overlap;
    }
  }
  return overlap == 0 ? kNoOverlapDistance : sum / static_cast<double>(overlap);
}

double partial_distance(const OptionalVector& v, const Centroid& c) {
  if (v.size() != c.size()) {
    throw Error(Errc::DimensionMismatch, "vector has " + std::to_string(v.size()) +
                                             " coordinates, centroid has " +
                                             std::to_string(c.size()));
  }
  return partial_distance_raw(Centroid::from_optional(v).raw(), c.raw());
}

std::vector<std::size_t> ClusterModel::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    if (assignment[u] == cluster) out.push_back(u);
  }
  return out;
}

ClusterModel fit(const RatingsMatrix& m, const KMeansOptions& options) {
  if (m.n_users() == 0 || m.n_articles() == 0) {
    throw Error(Errc::EmptyMatrix, "cannot cluster an empty matrix");
  }
  if (options.k < 1 || options.k > m.n_users()) {
    throw Error(Errc::InvalidK, "k = " + std::to_string(options.k) + " must lie in [1, " +
                                    std::to_string(m.n_users()) + "]");
  }
  if (options.max_iter < 1) throw Error(Errc::InvalidConfig, "max_iter must be at least 1");

  const std::size_t n_users = m.n_users();
  const std::size_t n_articles = m.n_articles();
  const std::size_t k = options.k;
  const std::vector<double> rows = dense_rows(m);
  auto row_of = [&](std::size_t u) {
    return std::span<const double>(rows.data() + u * n_articles, n_articles);
  };

  Rng rng(options.seed, kInitStream);
  const std::vector<std::size_t> seeds =
      options.init == InitMethod::KMeansPlusPlus
          ? init_plus_plus(rows, n_users, n_articles, k, rng)
          : init_random_rows(m, k, rng);

  ClusterModel model;
  model.k = k;
  model.n_articles = n_articles;
  for (const std::size_t u : seeds) {
    model.centroids.emplace_back(std::vector<double>(row_of(u).begin(), row_of(u).end()));
  }

  std::vector<std::size_t> next(n_users);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t u = 0; u < n_users; ++u) next[u] = nearest_centroid(model.centroids, row_of(u));

    const std::vector<Centroid>& centroids_before = model.centroids;
    std::vector<std::size_t> reseeded;
    std::fill(counts.begin(), counts.end(), 0);
    for (const std::size_t c : next) ++counts[c];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = n_users;
      double farthest_distance = -1.0;
      for (std::size_t u = 0; u < n_users; ++u) {
        if (counts[next[u]] < 2) continue;
        const double d = partial_distance_raw(row_of(u), centroids_before[next[u]].raw());
        if (d > farthest_distance) {
          farthest_distance = d;
          farthest = u;
        }
      }
      --counts[next[farthest]];
      next[farthest] = c;
      counts[c] = 1;
      reseeded.push_back(c);
    }
    if (next == model.assignment) break;

    std::vector<Centroid> centroids = member_means(m, next, k);
    const double cost = total_distance(rows, n_articles, centroids, next);
    if (!model.inertia_history.empty() && cost > model.inertia_history.back()) {
      model.stopped_on_increase = true;
      break;
    }
    model.centroids = std::move(centroids);
    model.assignment = next;
    model.inertia_history.push_back(cost);
    model.reseeded.insert(model.reseeded.end(), reseeded.begin(), reseeded.end());
    model.iterations_run = iter;
  }
  return model;
}

ClusterModel fit(const RatingsMatrix& m, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
  KMeansOptions options;
  options.k = k;
  options.seed = seed;
  options.max_iter = max_iter;
  return fit(m, options);
}

std::size_t assign_raw(const ClusterModel& model, std::span<const double> v) {
  if (v.size() != model.n_articles) {
    throw Error(Errc::DimensionMismatch, "vector has " + std::to_string(v.size()) +
                                             " coordinates, model expects " +
                                             std::to_string(model.n_articles));
  }
  return nearest_centroid(model.centroids, v);
}

std::size_t assign(const ClusterModel& model, const OptionalVector& v) {
  if (v.size() != model.n_articles) {
    throw Error(Errc::DimensionMismatch, "vector has " + std::to_string(v.size()) +
                                             " coordinates, model expects " +
                                             std::to_string(model.n_articles));
  }
  return nearest_centroid(model.centroids, Centroid::from_optional(v).raw());
}

double inertia(const ClusterModel& model, const RatingsMatrix& m) {
  if (m.n_articles() != model.n_articles || m.n_users() != model.assignment.size()) {
    throw Error(Errc::DimensionMismatch, "model was fitted on a " +
                                             std::to_string(model.assignment.size()) + "x" +
                                             std::to_string(model.n_articles) + " matrix");
  }
  return total_distance(dense_rows(m), m.n_articles(), model.centroids, model.assignment);
}

void dump_model(const ClusterModel& model, std::ostream& out) {
  char buf[64];
  for (const Centroid& c : model.centroids) {
    std::string line;
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (a > 0) line += ',';
      if (const auto v = c.coordinate(a)) {
        const auto res = std::to_chars(buf, buf + sizeof buf, *v);
        line.append(buf, res.ptr);
      }
    }
    out << line << '\n';
  }
  for (std::size_t u = 0; u < model.assignment.size(); ++u) {
    out << "assignment," << u << ',' << model.assignment[u] << '\n';
  }
}

}  // namespace reclab
