#pragma once

// Benchmark harness: replays random fixed-length transactions against a
// strategy and summarises result-set lengths, timings and query dependency.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reclab/kmeans.hpp"
#include "reclab/random.hpp"
#include "reclab/ratings.hpp"
#include "reclab/strategies.hpp"

namespace reclab {

inline constexpr std::size_t kDefaultIterations = 1000;
inline constexpr std::uint64_t kDefaultBenchSeed = 7;

/// Uniformly random subset of `length` distinct articles, in draw order.
Transaction random_transaction(Rng& rng, std::size_t n_articles, std::size_t length);

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string name() const = 0;
  /// One-off precomputation (clustering, grouping). Timed as setup.
  virtual void prepare(const RatingsMatrix& m) = 0;
  virtual RecommendationList recommend(const RatingsMatrix& m, const Transaction& txn) const = 0;
  virtual ConfigEcho config() const = 0;
};

class ThresholdStrategy final : public Strategy {
 public:
  explicit ThresholdStrategy(ThresholdConfig cfg = {});
  std::string name() const override { return "threshold"; }
  void prepare(const RatingsMatrix&) override {}
  RecommendationList recommend(const RatingsMatrix& m, const Transaction& txn) const override;
  ConfigEcho config() const override;

 private:
  ThresholdConfig cfg_;
};

class KmeansStrategy final : public Strategy {
 public:
  KmeansStrategy(KMeansOptions options = {}, KmeansRecConfig rec = {});
  std::string name() const override { return "kmeans"; }
  void prepare(const RatingsMatrix& m) override;
  RecommendationList recommend(const RatingsMatrix& m, const Transaction& txn) const override;
  ConfigEcho config() const override;

  const ClusterModel& model() const;

 private:
  KMeansOptions options_;
  KmeansRecConfig rec_;
  std::optional<ClusterModel> model_;
};

class ContentStrategy final : public Strategy {
 public:
  /// Without an explicit x the data-driven default_content_x() is used.
  explicit ContentStrategy(std::optional<double> x = std::nullopt);
  std::string name() const override { return "content"; }
  void prepare(const RatingsMatrix& m) override;
  RecommendationList recommend(const RatingsMatrix& m, const Transaction& txn) const override;
  ConfigEcho config() const override;

  const ContentGroups& groups() const;

 private:
  std::optional<double> requested_x_;
  std::optional<ContentGroups> groups_;
};

struct RunRecord {
  Transaction transaction;
  std::size_t result_length = 0;
  std::int64_t elapsed_ns = 0;
};

struct RunResult {
  std::vector<RunRecord> records;
  std::int64_t setup_ns = 0;

  std::vector<std::size_t> lengths() const;
};

/// Transaction i is drawn from the stream (seed, i). Strategy errors are
/// rethrown as StrategyFailure naming the iteration and transaction.
RunResult run(const RatingsMatrix& m, Strategy& strategy, std::size_t iterations,
              std::uint64_t seed, std::size_t txn_length = Transaction::kDefaultLength);

class BinScheme {
 public:
  enum class Kind { Content, Labeled };

  /// {0}, {1}, {2-3}, {4-9}, {>=10}.
  static BinScheme content();
  /// Empty {0}, very short {1..e0}, short {e0+1..e1}, normal {e1+1..e2},
  /// long {>e2}. Edges must be strictly increasing and start at 1 or more.
  static BinScheme labeled(std::vector<std::size_t> upper_edges = {2, 5, 24});
  /// "content" or "labeled"; anything else throws UnknownScheme.
  static BinScheme parse(std::string_view name,
                         std::vector<std::size_t> upper_edges = {2, 5, 24});

  Kind kind() const { return kind_; }
  std::string id() const;
  std::vector<std::string> labels() const;
  std::size_t bin_of(std::size_t length) const;
  const std::vector<std::size_t>& upper_edges() const { return edges_; }

 private:
  BinScheme(Kind kind, std::vector<std::size_t> edges) : kind_(kind), edges_(std::move(edges)) {}
  Kind kind_;
  std::vector<std::size_t> edges_;
};

struct HistogramBin {
  std::string label;
  std::size_t count = 0;
};

struct Histogram {
  std::string scheme;
  std::vector<HistogramBin> bins;
  std::size_t total = 0;
};

Histogram bin_lengths(std::span<const std::size_t> lengths, const BinScheme& scheme);
Histogram histogram_from_counts(const BinScheme& scheme, std::span<const std::size_t> counts);

/// Per-bin percentages at one decimal. Each value is 100*count/total rounded
/// to a tenth; when rounding would leave the row off 100.0 the largest
/// remainders absorb the difference.
std::vector<double> proportions(const Histogram& h);
std::string format_tenth(double value);

enum class Level { Low, Medium, High };
std::string_view level_name(Level level);

struct QdCutoffs {
  double low = 0.2;
  double high = 0.6;

  void validate() const;
};

struct QueryDependencyReport {
  double empty_rate = 0.0;
  double length_cv = 0.0;
  double score = 0.0;
  Level label = Level::Low;
};

/// score = empty_rate + min(cv, 1), cv = population stddev / mean (0 when
/// the mean is 0).
QueryDependencyReport query_dependency(std::span<const std::size_t> lengths,
                                       const QdCutoffs& cutoffs = {});

struct TimingStats {
  std::int64_t setup_ns = 0;
  std::int64_t query_total_ns = 0;
  std::int64_t total_ns = 0;  // setup + queries
  double mean_ns = 0.0;       // per query, setup excluded
  std::int64_t p50_ns = 0;
  std::int64_t p95_ns = 0;

  /// Total time spread over the iterations, setup included.
  double amortized_ns(std::size_t iterations) const;
};

TimingStats timing_stats(const RunResult& result);

struct BenchmarkSummary {
  std::string strategy;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::size_t txn_length = Transaction::kDefaultLength;
  ConfigEcho config;
  Histogram histogram;
  std::vector<double> proportions;
  TimingStats timing;
  QueryDependencyReport qd;
};

BenchmarkSummary summarize(const Strategy& strategy, const RunResult& result,
                           const BinScheme& scheme, std::uint64_t seed,
                           std::size_t txn_length = Transaction::kDefaultLength,
                           const QdCutoffs& cutoffs = {});

/// run() followed by summarize().
BenchmarkSummary benchmark(const RatingsMatrix& m, Strategy& strategy, std::size_t iterations,
                           std::uint64_t seed, const BinScheme& scheme,
                           std::size_t txn_length = Transaction::kDefaultLength,
                           const QdCutoffs& cutoffs = {});

}  // namespace reclab
