// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reclab/benchmark.hpp"
#include "reclab/kmeans.hpp"
#include "reclab/report.hpp"
#include "reclab/synth_data.hpp"
#include "support/oracles.hpp"

using namespace reclab;

namespace {

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

const RatingsMatrix& default_matrix() {
  static const RatingsMatrix m = generate(GeneratorConfig{});
  return m;
}

RatingsMatrix random_matrix(std::mt19937& gen, std::size_t users, std::size_t articles,
                            double missing) {
  std::uniform_int_distribution<int> tenths(-100, 100);
  std::bernoulli_distribution drop(missing);
  MatrixBuilder b(users, articles);
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t a = 0; a < articles; ++a) {
      if (!drop(gen)) b.set(u, a, Rating::from_tenths(tenths(gen)));
    }
  }
  return std::move(b).build();
}

// Every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool same_list(const RecommendationList& got, const std::vector<oracle::Entry>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].article != want[i].first) return false;
    if (std::fabs(got[i].score - want[i].second) > 1e-9) return false;
  }
  return true;
}

std::string criterion1() {
  const std::vector<std::size_t> t2{1, 8, 80, 782, 129};
  const std::vector<std::size_t> t3{8, 16, 54, 824, 98};
  const auto p2 = proportions(histogram_from_counts(BinScheme::content(), t2));
  const auto p3 = proportions(histogram_from_counts(BinScheme::labeled(), t3));
  const std::vector<std::string> want2{"0.1", "0.8", "8.0", "78.2", "12.9"};
  const std::vector<std::string> want3{"0.8", "1.6", "5.4", "82.4", "9.8"};
  for (std::size_t i = 0; i < 5; ++i) {
    require(format_tenth(p2[i]) == want2[i], "content row bin " + std::to_string(i));
    require(format_tenth(p3[i]) == want3[i], "labeled row bin " + std::to_string(i));
  }
  return "(0.1, 0.8, 8.0, 78.2, 12.9) and (0.8, 1.6, 5.4, 82.4, 9.8)";
}

std::string criterion2() {
  KMeansOptions options;
  options.k = 100;
  KmeansStrategy strategy(options, KmeansRecConfig{8, Rating::from_tenths(100)});
  const auto summary = benchmark(default_matrix(), strategy, 1000, kDefaultBenchSeed,
                                 BinScheme::content());
  require(summary.histogram.total == 1000, "histogram total");
  const auto run_again = run(default_matrix(), strategy, 1000, kDefaultBenchSeed);
  for (const auto len : run_again.lengths()) require(len == 8, "a result length differs from 8");
  require(summary.qd.empty_rate == 0.0, "empty_rate is not 0");
  require(summary.qd.label == Level::Low, "label is not Low");
  std::ostringstream s;
  s << "1000/1000 lengths = 8, empty_rate 0, label Low, "
    << strategy.model().iterations_run << " Lloyd iterations";
  return s.str();
}

std::string criterion3() {
  const auto& m = default_matrix();
  std::vector<Transaction> txns;
  for (std::size_t i = 0; i < 1000; ++i) {
    Rng rng(kDefaultBenchSeed, i);
    txns.push_back(random_transaction(rng, m.n_articles(), 4));
  }
  std::ostringstream s;
  double previous = INFINITY;
  double last_empty_rate = 0.0;
  for (const int theta : {70, 80, 90, 93, 97, 100}) {
    const ThresholdConfig cfg{Rating::from_tenths(theta)};
    std::vector<std::size_t> lengths;
    for (const auto& t : txns) lengths.push_back(threshold_recommend(m, t, cfg).size());
    double mean = 0.0;
    for (const auto len : lengths) mean += static_cast<double>(len);
    mean /= static_cast<double>(lengths.size());
    require(mean <= previous, "mean length increased at theta " + std::to_string(theta));
    previous = mean;
    last_empty_rate = query_dependency(lengths).empty_rate;
    s << Rating::from_tenths(theta).to_string() << ":" << mean << " ";
  }
  require(last_empty_rate == 1.0, "theta 10.0 empty_rate is not 1.0");
  s << "| empty_rate(10.0)=1";
  return s.str();
}

std::string criterion4() {
  std::mt19937 gen(20240601);
  std::size_t compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t articles = 4 + gen() % 9;  // 4..12
    const std::size_t users = 1 + gen() % 30;    // 1..30
    const double missing = 0.1 * static_cast<double>(gen() % 8);
    const auto m = random_matrix(gen, users, articles, missing);
    const double theta = static_cast<double>(static_cast<int>(gen() % 201) - 100) / 10.0;
    const ThresholdConfig tcfg{Rating::from_value(theta)};
    std::optional<ContentGroups> groups;
    double x = 0.0;
    if (article_means(m) != std::vector<std::optional<double>>(articles)) {
      x = trial % 2 ? default_content_x(m) : 0.25 + 0.25 * static_cast<double>(gen() % 12);
      groups = build_content_groups(m, x);
    }
    for_each_subset(articles, 4, [&](const std::vector<std::size_t>& ids) {
      const auto txn = make_transaction(ids, m);
      require(same_list(threshold_recommend(m, txn, tcfg), oracle::threshold(m, ids, theta)),
              "threshold mismatch in matrix " + std::to_string(trial));
      if (groups) {
        require(same_list(content_recommend(*groups, m, txn), oracle::content(m, ids, x)),
                "content mismatch in matrix " + std::to_string(trial));
      }
      ++compared;
    });
  }
  return std::to_string(compared) + " transactions over 50 matrices";
}

std::string criterion5() {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = random_matrix(gen, 40 + gen() % 160, 5 + gen() % 20, 0.5);
    KMeansOptions options;
    options.k = 2 + gen() % 12;
    options.seed = trial;
    const auto model = fit(m, options);
    for (std::size_t i = 1; i < model.inertia_history.size(); ++i) {
      require(model.inertia_history[i] <= model.inertia_history[i - 1],
              "inertia increased in fit " + std::to_string(trial));
    }
  }

  GeneratorConfig cfg;
  cfg.n_users = 400;
  cfg.n_articles = 20;
  const auto m = generate(cfg);
  const auto model = fit(m, 12, 5);
  std::vector<OptionalVector> centroids;
  for (const auto& c : model.centroids) centroids.push_back(c.coordinates());
  std::uniform_int_distribution<int> tenths(-100, 100);
  std::bernoulli_distribution drop(0.4);
  for (int trial = 0; trial < 1000; ++trial) {
    OptionalVector v(cfg.n_articles);
    for (auto& x : v) {
      if (!drop(gen)) x = tenths(gen) / 10.0;
    }
    require(assign(model, v) == oracle::nearest(centroids, v), "assign differs from brute force");
  }

  GeneratorConfig clean;
  clean.n_users = 150;
  clean.n_articles = 20;
  clean.n_archetypes = 3;
  clean.noise_sigma = 0.0;
  clean.missing_low = clean.missing_high = 0.0;
  const auto data = generate_with_labels(clean);
  const auto clean_model = fit(data.matrix, 3, 1);
  std::map<std::size_t, std::size_t> a2c, c2a;
  for (std::size_t u = 0; u < clean.n_users; ++u) {
    const auto a = data.archetype_of[u];
    const auto c = clean_model.assignment[u];
    require(a2c.emplace(a, c).first->second == c, "archetype split across clusters");
    require(c2a.emplace(c, a).first->second == a, "cluster mixes archetypes");
  }
  require(a2c.size() == 3, "fewer than 3 archetypes present");
  return "25 monotone fits, 1000 assigns, 3 archetypes recovered";
}

std::string criterion6() {
  const auto& m = default_matrix();
  ContentStrategy content;
  ThresholdStrategy threshold;
  KMeansOptions options;
  options.k = 100;
  KmeansStrategy kmeans(options);
  std::vector<BenchmarkSummary> summaries;
  summaries.push_back(benchmark(m, content, 1000, kDefaultBenchSeed, BinScheme::content()));
  summaries.push_back(benchmark(m, threshold, 1000, kDefaultBenchSeed, BinScheme::labeled()));
  summaries.push_back(benchmark(m, kmeans, 1000, kDefaultBenchSeed, BinScheme::content()));
  const auto report = compare_report(summaries);
  const auto tc = summaries[0].timing.total_ns;
  const auto tt = summaries[1].timing.total_ns;
  const auto tk = summaries[2].timing.total_ns;
  std::ostringstream s;
  s << "content " << tc / 1e6 << " ms < threshold " << tt / 1e6 << " ms < kmeans " << tk / 1e6
    << " ms";
  require(tc < tt && tt < tk, "ordering violated: " + s.str());
  require(report.rows[0].performance == Level::High &&
              report.rows[1].performance == Level::Medium &&
              report.rows[2].performance == Level::Low,
          "performance labels disagree with the ordering");
  return s.str();
}

std::string criterion7() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig cfg;
    cfg.n_users = 10 + seed * 7;
    cfg.n_articles = 2 + seed % 13;
    cfg.noise_sigma = 3.0;
    cfg.seed = seed;
    const auto m = generate(cfg);
    require(m == generate(cfg), "generator not reproducible for seed " + std::to_string(seed));
    require(from_csv(to_csv(m)) == m, "CSV round trip failed for seed " + std::to_string(seed));
  }
  const auto path = "reclab_acceptance_roundtrip.csv";
  save_csv(default_matrix(), std::string(path));
  require(load_csv(std::string(path)) == default_matrix(), "file round trip failed");
  std::remove(path);

  GeneratorConfig cfg;
  cfg.n_users = 500;
  cfg.n_articles = 30;
  const auto m = generate(cfg);
  auto histograms = [&] {
    ThresholdStrategy t;
    ContentStrategy c;
    KMeansOptions o;
    o.k = 10;
    KmeansStrategy k(o);
    std::vector<std::vector<std::size_t>> out;
    for (Strategy* s : std::vector<Strategy*>{&t, &c, &k}) {
      const auto h = benchmark(m, *s, 300, 13, BinScheme::content()).histogram;
      std::vector<std::size_t> counts;
      for (const auto& b : h.bins) counts.push_back(b.count);
      out.push_back(counts);
    }
    return out;
  };
  require(histograms() == histograms(), "benchmark histograms differ between runs");
  return "20 round trips, seeded generation and histograms reproducible";
}

std::string criterion8() {
  std::mt19937 gen(8080);
  std::size_t txn_cases = 0;
  std::size_t partition_cases = 0;
  std::size_t histogram_cases = 0;

  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t articles = 4 + gen() % 30;
    const std::size_t users = 2 + gen() % 60;
    const auto m = random_matrix(gen, users, articles, 0.1 * static_cast<double>(gen() % 10));
    ThresholdStrategy threshold({Rating::from_tenths(static_cast<int>(gen() % 201) - 100)});
    ContentStrategy content;
    KMeansOptions options;
    options.k = 1 + gen() % std::min<std::size_t>(users, 8);
    options.seed = trial;
    KmeansStrategy kmeans(options);
    const bool has_mean = article_means(m) != std::vector<std::optional<double>>(articles);
    std::vector<Strategy*> strategies{&threshold, &kmeans};
    if (has_mean) strategies.push_back(&content);
    for (Strategy* s : strategies) s->prepare(m);
    for (int q = 0; q < 10; ++q) {
      Rng rng(trial, 1000 + q);
      const auto txn = random_transaction(rng, articles, 1 + gen() % 4);
      for (Strategy* s : strategies) {
        for (const auto& r : s->recommend(m, txn)) {
          require(!txn.contains(r.article), s->name() + " returned a transaction article");
        }
      }
      ++txn_cases;
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::size_t> lengths(1 + gen() % 300);
    for (auto& len : lengths) len = gen() % 40;
    const auto scheme = trial % 2 ? BinScheme::content() : BinScheme::labeled();
    const auto h = bin_lengths(lengths, scheme);
    std::size_t sum = 0;
    for (const auto& b : h.bins) sum += b.count;
    require(sum == lengths.size() && h.total == lengths.size(), "histogram does not sum");
    ++histogram_cases;
  }
  {
    GeneratorConfig cfg;
    cfg.n_users = 80;
    cfg.n_articles = 15;
    const auto m = generate(cfg);
    ContentStrategy content;
    for (std::size_t iterations : {1u, 2u, 7u, 64u, 333u}) {
      require(benchmark(m, content, iterations, 5, BinScheme::content()).histogram.total ==
                  iterations,
              "benchmark histogram total differs from iterations");
    }
  }

  for (int trial = 0; partition_cases < 1000; ++trial) {
    const std::size_t articles = 1 + gen() % 40;
    const auto m = random_matrix(gen, 1 + gen() % 20, articles, 0.1 * static_cast<double>(gen() % 10));
    const auto means = article_means(m);
    if (std::none_of(means.begin(), means.end(), [](const auto& mu) { return mu.has_value(); })) {
      continue;
    }
    const double x = trial % 3 ? 0.05 + 0.05 * static_cast<double>(gen() % 100) : default_content_x(m);
    const auto groups = build_content_groups(m, x);
    std::multiset<std::size_t> covered;
    std::set<std::int64_t> ids;
    for (std::size_t a = 0; a < articles; ++a) {
      require((groups.group_of[a] == ContentGroups::kUngrouped) == !means[a].has_value(),
              "grouping does not track mean availability");
      if (groups.group_of[a] != ContentGroups::kUngrouped) ids.insert(groups.group_of[a]);
    }
    for (const auto g : ids) {
      for (const auto a : groups.members(g)) covered.insert(a);
    }
    std::multiset<std::size_t> expected;
    for (std::size_t a = 0; a < articles; ++a) {
      if (means[a]) expected.insert(a);
    }
    require(covered == expected, "groups do not partition the mean-bearing articles");
    ++partition_cases;
  }
  require(txn_cases >= 1000 && histogram_cases >= 1000 && partition_cases >= 1000,
          "too few randomized cases");
  return std::to_string(txn_cases) + " transaction, " + std::to_string(histogram_cases) +
         " histogram, " + std::to_string(partition_cases) + " partition cases";
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::string (*body)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "proportion arithmetic", 1.0, criterion1},
      {2, "k-means query independence", 120.0, criterion2},
      {3, "threshold monotonicity and query dependency", 60.0, criterion3},
      {4, "oracle equivalence", 120.0, criterion4},
      {5, "k-means engine soundness", 60.0, criterion5},
      {6, "run-time ordering", 180.0, criterion6},
      {7, "determinism and persistence", 30.0, criterion7},
      {8, "invariant suite", 60.0, criterion8},
  };
  // The default matrix is shared; build it outside the timed sections.
  default_matrix();

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.why;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.limit_s) {
      ok = false;
      detail += " (over time limit)";
    }
    std::printf("%s criterion %d: %s [%.2fs / %.0fs] %s\n", ok ? "PASS" : "FAIL", c.id, c.title,
                secs, c.limit_s, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
