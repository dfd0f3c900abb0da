#pragma once

// Lloyd-style k-means over user rating rows with missing-value-aware
// distance.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reclab/ratings.hpp"

namespace reclab {

using OptionalVector = std::vector<std::optional<double>>;

/// Squared-difference ceiling for ratings in [-10, 10]; returned when two
/// vectors share no observed coordinate.
inline constexpr double kNoOverlapDistance = 400.0;

/// Cluster center. A coordinate is absent when no member rated the article.
class Centroid {
 public:
  Centroid() = default;
  explicit Centroid(std::vector<double> nan_encoded) : values_(std::move(nan_encoded)) {}
  static Centroid from_optional(const OptionalVector& coordinates);

  std::size_t size() const { return values_.size(); }
  std::optional<double> coordinate(std::size_t article) const;
  OptionalVector coordinates() const;
  /// NaN marks absent coordinates.
  std::span<const double> raw() const { return values_; }

  friend bool operator==(const Centroid& a, const Centroid& b);

 private:
  std::vector<double> values_;
};

/// Mean squared difference over coordinates present in both inputs, or
/// kNoOverlapDistance when there are none. Throws DimensionMismatch.
double partial_distance(const OptionalVector& v, const Centroid& c);
/// NaN-encoded fast path; the spans must have equal length.
double partial_distance_raw(std::span<const double> v, std::span<const double> c);

enum class InitMethod { RandomRows, KMeansPlusPlus };

struct KMeansOptions {
  std::size_t k = 100;
  std::uint64_t seed = 1;
  std::size_t max_iter = 50;
  InitMethod init = InitMethod::RandomRows;
};

struct ClusterModel {
  std::size_t k = 0;
  std::size_t n_articles = 0;
  std::vector<Centroid> centroids;
  std::vector<std::size_t> assignment;   // per user
  std::size_t iterations_run = 0;
  std::vector<double> inertia_history;   // one entry per completed iteration
  std::vector<std::size_t> reseeded;     // clusters re-seeded after emptying
  bool stopped_on_increase = false;

  /// Users assigned to `cluster`, ascending.
  std::vector<std::size_t> members(std::size_t cluster) const;
};

/// Initial centroids are k users drawn at random whose rows are pairwise
/// distinct (duplicates only fill in when fewer distinct rows exist).
/// Each iteration assigns every user to its nearest centroid (lowest index on
/// ties), moves the farthest user into any empty cluster, then sets each
/// centroid coordinate to the members' mean. Stops at an assignment fixpoint
/// or after max_iter iterations. An iteration that would raise inertia is
/// discarded and ends the fit, so inertia_history never increases.
ClusterModel fit(const RatingsMatrix& m, const KMeansOptions& options);
ClusterModel fit(const RatingsMatrix& m, std::size_t k, std::uint64_t seed,
                 std::size_t max_iter = 50);

std::size_t assign(const ClusterModel& model, const OptionalVector& v);
std::size_t assign_raw(const ClusterModel& model, std::span<const double> v);

double inertia(const ClusterModel& model, const RatingsMatrix& m);

/// One line per centroid, comma-separated coordinates with empty fields for
/// absent ones, then one `assignment,<user>,<cluster>` line per user.
void dump_model(const ClusterModel& model, std::ostream& out);

}  // namespace reclab
