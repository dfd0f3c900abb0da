#include "reclab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reclab {

void ThresholdConfig::validate() const {
  if (!theta.in_range()) {
    throw Error(Errc::InvalidConfig, "theta " + theta.to_string() + " outside [-10.0, 10.0]");
  }
}

RecommendationList threshold_recommend(const RatingsMatrix& m, const Transaction& txn,
                                       const ThresholdConfig& cfg) {
  cfg.validate();
  txn.check_against(m.n_articles());
  const std::int32_t theta = cfg.theta.tenths();

  std::vector<std::size_t> support(m.n_articles(), 0);
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const auto row = m.row(u);
    bool supporter = false;
    for (const std::size_t t : txn.articles()) {
      // kMissing is INT32_MIN, never above any theta.
      if (row[t] > theta) {
        supporter = true;
        break;
      }
    }
    if (!supporter) continue;
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (row[b] > theta) ++support[b];
    }
  }

  RecommendationList out;
  for (std::size_t b = 0; b < support.size(); ++b) {
    if (support[b] > 0 && !txn.contains(b)) {
      out.push_back({b, static_cast<double>(support[b])});
    }
  }
  sort_recommendations(out);
  return out;
}

void KmeansRecConfig::validate() const {
  if (top_n < 1) throw Error(Errc::InvalidConfig, "top_n must be at least 1");
  if (!pseudo_rating.in_range()) {
    throw Error(Errc::InvalidConfig,
                "pseudo rating " + pseudo_rating.to_string() + " outside [-10.0, 10.0]");
  }
}

RecommendationList kmeans_recommend(const ClusterModel& model, const RatingsMatrix& m,
                                    const Transaction& txn, const KmeansRecConfig& cfg) {
  cfg.validate();
  if (model.n_articles != m.n_articles() || model.assignment.size() != m.n_users()) {
    throw Error(Errc::ModelMatrixMismatch,
                "model fitted on " + std::to_string(model.assignment.size()) + "x" +
                    std::to_string(model.n_articles) + ", matrix is " +
                    std::to_string(m.n_users()) + "x" + std::to_string(m.n_articles()));
  }
  txn.check_against(m.n_articles());

  std::vector<double> pseudo_user(m.n_articles(), std::numeric_limits<double>::quiet_NaN());
  for (const std::size_t t : txn.articles()) pseudo_user[t] = cfg.pseudo_rating.value();
  const std::size_t cluster = assign_raw(model, pseudo_user);

  std::vector<std::int64_t> sums(m.n_articles(), 0);
  std::vector<std::size_t> counts(m.n_articles(), 0);
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    if (model.assignment[u] != cluster) continue;
    const auto row = m.row(u);
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (row[b] == RatingsMatrix::kMissing) continue;
      sums[b] += row[b];
      ++counts[b];
    }
  }

  RecommendationList out;
  for (std::size_t b = 0; b < m.n_articles(); ++b) {
    if (txn.contains(b)) continue;
    double score = 0.0;
    if (counts[b] > 0) {
      score = static_cast<double>(sums[b]) / (10.0 * static_cast<double>(counts[b]));
    } else if (const auto mean = article_mean(m, b)) {
      score = *mean;
    }
    out.push_back({b, score});
  }
  sort_recommendations(out);
  if (out.size() > cfg.top_n) out.resize(cfg.top_n);
  return out;
}

std::vector<std::size_t> ContentGroups::members(std::int64_t group) const {
  std::vector<std::size_t> out;
  if (group == kUngrouped) return out;
  for (std::size_t a = 0; a < group_of.size(); ++a) {
    if (group_of[a] == group) out.push_back(a);
  }
  return out;
}

double default_content_x(const RatingsMatrix& m) {
  double sum = 0.0;
  std::size_t count = 0;
  const auto means = article_means(m);
  for (const auto& mean : means) {
    if (!mean) continue;
    sum += *mean;
    ++count;
  }
  if (count == 0) return 1.0;
  const double avg = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& mean : means) {
    if (mean) sq += (*mean - avg) * (*mean - avg);
  }
  const double stddev = std::sqrt(sq / static_cast<double>(count));
  return stddev > 0.0 ? stddev / 4.0 : 1.0;
}

ContentGroups build_content_groups(const RatingsMatrix& m, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(Errc::NonPositiveX, "x must be positive and finite, got " + std::to_string(x));
  }
  ContentGroups groups;
  groups.x = x;
  groups.means = article_means(m);

  bool any = false;
  for (const auto& mean : groups.means) {
    if (!mean) continue;
    groups.mu_min = any ? std::min(groups.mu_min, *mean) : *mean;
    any = true;
  }
  if (!any) throw Error(Errc::AllColumnsEmpty, "no article has a rating");

  groups.group_of.assign(m.n_articles(), ContentGroups::kUngrouped);
  const double width = 2.0 * x;
  for (std::size_t a = 0; a < m.n_articles(); ++a) {
    if (!groups.means[a]) continue;
    groups.group_of[a] = static_cast<std::int64_t>(std::floor((*groups.means[a] - groups.mu_min) / width));
  }
  return groups;
}

RecommendationList content_recommend(const ContentGroups& groups, const RatingsMatrix& m,
                                     const Transaction& txn) {
  if (groups.group_of.size() != m.n_articles() || groups.means.size() != m.n_articles()) {
    throw Error(Errc::GroupsMatrixMismatch,
                "groups cover " + std::to_string(groups.group_of.size()) +
                    " articles, matrix has " + std::to_string(m.n_articles()));
  }
  txn.check_against(m.n_articles());

  RecommendationList out;
  for (std::size_t b = 0; b < m.n_articles(); ++b) {
    const std::int64_t group = groups.group_of[b];
    if (group == ContentGroups::kUngrouped || txn.contains(b)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const std::size_t t : txn.articles()) {
      if (groups.group_of[t] != group) continue;
      best = std::min(best, std::abs(*groups.means[b] - *groups.means[t]));
    }
    if (std::isfinite(best)) out.push_back({b, 0.0 - best});
  }
  sort_recommendations(out);
  return out;
}

}  // namespace reclab
