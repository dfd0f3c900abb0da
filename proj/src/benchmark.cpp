#include "reclab/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace reclab {

Transaction random_transaction(Rng& rng, std::size_t n_articles, std::size_t length) {
  if (length > n_articles) {
    throw Error(Errc::LengthExceedsArticles, "transaction length " + std::to_string(length) +
                                                 " exceeds " + std::to_string(n_articles) +
                                                 " articles");
  }
  std::vector<std::size_t> pool(n_articles);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < length; ++i) {
    std::swap(pool[i], pool[i + rng.index(n_articles - i)]);
  }
  pool.resize(length);
  return Transaction::make(std::move(pool), n_articles);
}

namespace {

std::string format_real(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

ThresholdStrategy::ThresholdStrategy(ThresholdConfig cfg) : cfg_(cfg) { cfg_.validate(); }

RecommendationList ThresholdStrategy::recommend(const RatingsMatrix& m,
                                                const Transaction& txn) const {
  return threshold_recommend(m, txn, cfg_);
}

ConfigEcho ThresholdStrategy::config() const { return {{"theta", cfg_.theta.to_string()}}; }

KmeansStrategy::KmeansStrategy(KMeansOptions options, KmeansRecConfig rec)
    : options_(options), rec_(rec) {
  rec_.validate();
}

void KmeansStrategy::prepare(const RatingsMatrix& m) { model_ = fit(m, options_); }

const ClusterModel& KmeansStrategy::model() const {
  if (!model_) throw Error(Errc::StrategyFailure, "k-means strategy used before prepare()");
  return *model_;
}

RecommendationList KmeansStrategy::recommend(const RatingsMatrix& m, const Transaction& txn) const {
  return kmeans_recommend(model(), m, txn, rec_);
}

ConfigEcho KmeansStrategy::config() const {
  return {{"k", std::to_string(options_.k)},
          {"seed", std::to_string(options_.seed)},
          {"max_iter", std::to_string(options_.max_iter)},
          {"init", options_.init == InitMethod::KMeansPlusPlus ? "kmeans++" : "random-rows"},
          {"top_n", std::to_string(rec_.top_n)},
          {"pseudo_rating", rec_.pseudo_rating.to_string()}};
}

ContentStrategy::ContentStrategy(std::optional<double> x) : requested_x_(x) {
  if (x && !(*x > 0.0)) throw Error(Errc::NonPositiveX, "x must be positive");
}

void ContentStrategy::prepare(const RatingsMatrix& m) {
  groups_ = build_content_groups(m, requested_x_ ? *requested_x_ : default_content_x(m));
}

const ContentGroups& ContentStrategy::groups() const {
  if (!groups_) throw Error(Errc::StrategyFailure, "content strategy used before prepare()");
  return *groups_;
}

RecommendationList ContentStrategy::recommend(const RatingsMatrix& m,
                                              const Transaction& txn) const {
  return content_recommend(groups(), m, txn);
}

ConfigEcho ContentStrategy::config() const {
  ConfigEcho echo{{"x", requested_x_ ? format_real(*requested_x_) : "auto"}};
  if (groups_) echo.emplace_back("x_effective", format_real(groups_->x));
  return echo;
}

std::vector<std::size_t> RunResult::lengths() const {
  std::vector<std::size_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.result_length);
  return out;
}

RunResult run(const RatingsMatrix& m, Strategy& strategy, std::size_t iterations,
              std::uint64_t seed, std::size_t txn_length) {
  using Clock = std::chrono::steady_clock;
  if (iterations < 1) throw Error(Errc::InvalidConfig, "iterations must be at least 1");
  if (txn_length > m.n_articles()) {
    throw Error(Errc::LengthExceedsArticles, "transaction length " + std::to_string(txn_length) +
                                                 " exceeds " + std::to_string(m.n_articles()) +
                                                 " articles");
  }

  RunResult result;
  const auto setup_start = Clock::now();
  strategy.prepare(m);
  result.setup_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - setup_start).count();

  result.records.reserve(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    Rng rng(seed, i);
    Transaction txn = random_transaction(rng, m.n_articles(), txn_length);
    const auto start = Clock::now();
    RecommendationList list;
    try {
      list = strategy.recommend(m, txn);
    } catch (const Error& e) {
      std::string ids;
      for (const std::size_t a : txn.articles()) ids += (ids.empty() ? "" : ",") + std::to_string(a);
      throw Error(Errc::StrategyFailure, strategy.name() + " failed at iteration " +
                                             std::to_string(i) + " (transaction {" + ids +
                                             "}): " + e.what());
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    result.records.push_back({std::move(txn), list.size(), elapsed});
  }
  return result;
}

BinScheme BinScheme::content() { return BinScheme(Kind::Content, {1, 3, 9}); }

BinScheme BinScheme::labeled(std::vector<std::size_t> upper_edges) {
  if (upper_edges.size() != 3 || upper_edges[0] < 1 || upper_edges[0] >= upper_edges[1] ||
      upper_edges[1] >= upper_edges[2]) {
    throw Error(Errc::InvalidConfig,
                "labeled bin edges must be three strictly increasing values starting at 1 or more");
  }
  return BinScheme(Kind::Labeled, std::move(upper_edges));
}

BinScheme BinScheme::parse(std::string_view name, std::vector<std::size_t> upper_edges) {
  if (name == "content") return content();
  if (name == "labeled") return labeled(std::move(upper_edges));
  throw Error(Errc::UnknownScheme, "unknown bin scheme '" + std::string(name) + "'");
}

std::string BinScheme::id() const { return kind_ == Kind::Content ? "content" : "labeled"; }

std::vector<std::string> BinScheme::labels() const {
  if (kind_ == Kind::Content) return {"Empty set", "1", "2-3", "4-9", "10>"};
  return {"Empty set", "Very Short", "Short", "Normal", "Long"};
}

std::size_t BinScheme::bin_of(std::size_t length) const {
  if (length == 0) return 0;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (length <= edges_[i]) return i + 1;
  }
  return edges_.size() + 1;
}

Histogram histogram_from_counts(const BinScheme& scheme, std::span<const std::size_t> counts) {
  const auto labels = scheme.labels();
  if (counts.size() != labels.size()) {
    throw Error(Errc::DimensionMismatch, "scheme '" + scheme.id() + "' has " +
                                             std::to_string(labels.size()) + " bins, got " +
                                             std::to_string(counts.size()) + " counts");
  }
  Histogram h;
  h.scheme = scheme.id();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    h.bins.push_back({labels[i], counts[i]});
    h.total += counts[i];
  }
  return h;
}

Histogram bin_lengths(std::span<const std::size_t> lengths, const BinScheme& scheme) {
  std::vector<std::size_t> counts(scheme.labels().size(), 0);
  for (const std::size_t len : lengths) ++counts[scheme.bin_of(len)];
  return histogram_from_counts(scheme, counts);
}

std::vector<double> proportions(const Histogram& h) {
  if (h.total == 0) throw Error(Errc::EmptyHistogram, "histogram has no observations");
  // Work in integer tenths of a percent: count * 1000 / total.
  const std::size_t n = h.bins.size();
  std::vector<std::uint64_t> floors(n);
  std::vector<std::uint64_t> remainders(n);
  std::vector<std::uint64_t> rounded(n);
  std::uint64_t rounded_sum = 0;
  std::uint64_t floor_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(h.bins[i].count) * 1000;
    floors[i] = scaled / h.total;
    remainders[i] = scaled % h.total;
    rounded[i] = floors[i] + (2 * remainders[i] >= h.total ? 1 : 0);
    rounded_sum += rounded[i];
    floor_sum += floors[i];
  }
  if (rounded_sum != 1000) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return remainders[a] > remainders[b];
    });
    rounded = floors;
    for (std::uint64_t i = 0; i < 1000 - floor_sum; ++i) ++rounded[order[i]];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(rounded[i]) / 10.0;
  return out;
}

std::string format_tenth(double value) {
  const long long tenths = std::llround(value * 10.0);
  const long long mag = tenths < 0 ? -tenths : tenths;
  return (tenths < 0 ? "-" : "") + std::to_string(mag / 10) + "." + std::to_string(mag % 10);
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Low: return "Low";
    case Level::Medium: return "Medium";
    case Level::High: return "High";
  }
  return "Unknown";
}

void QdCutoffs::validate() const {
  if (!(low >= 0.0 && low <= high)) {
    throw Error(Errc::InvalidConfig, "query-dependency cutoffs must satisfy 0 <= low <= high");
  }
}

QueryDependencyReport query_dependency(std::span<const std::size_t> lengths,
                                       const QdCutoffs& cutoffs) {
  if (lengths.empty()) throw Error(Errc::EmptyInput, "no result lengths");
  cutoffs.validate();
  const double n = static_cast<double>(lengths.size());
  double sum = 0.0;
  std::size_t empty = 0;
  for (const std::size_t len : lengths) {
    sum += static_cast<double>(len);
    if (len == 0) ++empty;
  }
  const double mean = sum / n;
  double sq = 0.0;
  for (const std::size_t len : lengths) {
    const double d = static_cast<double>(len) - mean;
    sq += d * d;
  }
  QueryDependencyReport r;
  r.empty_rate = static_cast<double>(empty) / n;
  r.length_cv = mean > 0.0 ? std::sqrt(sq / n) / mean : 0.0;
  r.score = r.empty_rate + std::min(r.length_cv, 1.0);
  r.label = r.score < cutoffs.low ? Level::Low : r.score < cutoffs.high ? Level::Medium : Level::High;
  return r;
}

double TimingStats::amortized_ns(std::size_t iterations) const {
  return iterations == 0 ? static_cast<double>(total_ns)
                         : static_cast<double>(total_ns) / static_cast<double>(iterations);
}

TimingStats timing_stats(const RunResult& result) {
  TimingStats t;
  t.setup_ns = result.setup_ns;
  std::vector<std::int64_t> elapsed;
  elapsed.reserve(result.records.size());
  for (const auto& r : result.records) {
    elapsed.push_back(r.elapsed_ns);
    t.query_total_ns += r.elapsed_ns;
  }
  t.total_ns = t.setup_ns + t.query_total_ns;
  if (elapsed.empty()) return t;
  std::sort(elapsed.begin(), elapsed.end());
  // Nearest-rank percentiles.
  auto rank = [&](double p) {
    const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(elapsed.size())));
    return elapsed[std::max<std::size_t>(idx, 1) - 1];
  };
  t.mean_ns = static_cast<double>(t.query_total_ns) / static_cast<double>(elapsed.size());
  t.p50_ns = rank(0.50);
  t.p95_ns = rank(0.95);
  return t;
}

BenchmarkSummary summarize(const Strategy& strategy, const RunResult& result,
                           const BinScheme& scheme, std::uint64_t seed, std::size_t txn_length,
                           const QdCutoffs& cutoffs) {
  BenchmarkSummary s;
  s.strategy = strategy.name();
  s.iterations = result.records.size();
  s.seed = seed;
  s.txn_length = txn_length;
  s.config = strategy.config();
  const auto lengths = result.lengths();
  s.histogram = bin_lengths(lengths, scheme);
  s.proportions = proportions(s.histogram);
  s.timing = timing_stats(result);
  s.qd = query_dependency(lengths, cutoffs);
  return s;
}

BenchmarkSummary benchmark(const RatingsMatrix& m, Strategy& strategy, std::size_t iterations,
                           std::uint64_t seed, const BinScheme& scheme, std::size_t txn_length,
                           const QdCutoffs& cutoffs) {
  cutoffs.validate();
  const RunResult result = run(m, strategy, iterations, seed, txn_length);
  return summarize(strategy, result, scheme, seed, txn_length, cutoffs);
}

}  // namespace reclab
