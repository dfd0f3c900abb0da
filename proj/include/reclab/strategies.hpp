#pragma once

// The three recommendation strategies: threshold collaborative filtering,
// k-means collaborative filtering and content (article-mean) filtering.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "reclab/kmeans.hpp"
#include "reclab/ratings.hpp"

namespace reclab {

struct ThresholdConfig {
  Rating theta = Rating::from_tenths(93);

  void validate() const;
};

/// Supporters are users rating any transaction article strictly above theta.
/// Each other article scores the number of supporters rating it above theta;
/// articles with no such supporter are left out, so the list may be empty.
RecommendationList threshold_recommend(const RatingsMatrix& m, const Transaction& txn,
                                       const ThresholdConfig& cfg);

struct KmeansRecConfig {
  std::size_t top_n = 8;
  Rating pseudo_rating = Rating::from_tenths(100);

  void validate() const;
};

/// Places a pseudo-user holding pseudo_rating on each transaction article into
/// its nearest cluster and ranks the remaining articles by the cluster
/// members' mean rating (falling back to the global article mean, then 0).
/// Returns min(top_n, n_articles - |txn|) entries.
RecommendationList kmeans_recommend(const ClusterModel& model, const RatingsMatrix& m,
                                    const Transaction& txn, const KmeansRecConfig& cfg);

struct ContentGroups {
  static constexpr std::int64_t kUngrouped = -1;

  std::vector<std::int64_t> group_of;          // per article; kUngrouped without a mean
  std::vector<std::optional<double>> means;    // per article
  double x = 0.0;
  double mu_min = 0.0;

  /// Articles sharing `group` (ascending); empty for kUngrouped.
  std::vector<std::size_t> members(std::int64_t group) const;
};

/// stddev(article means) / 4, or 1.0 when the means have no spread.
double default_content_x(const RatingsMatrix& m);

/// Bins article means into fixed-width bins of width 2x anchored at the
/// smallest mean: group = floor((mean - mu_min) / 2x).
ContentGroups build_content_groups(const RatingsMatrix& m, double x);

/// Candidates are group-mates of transaction articles; each scores minus its
/// smallest mean distance to a transaction article in the same group.
RecommendationList content_recommend(const ContentGroups& groups, const RatingsMatrix& m,
                                     const Transaction& txn);

}  // namespace reclab
