#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "reclab/benchmark.hpp"
#include "reclab/kmeans.hpp"
#include "reclab/ratings.hpp"
#include "reclab/report.hpp"
#include "reclab/strategies.hpp"
#include "reclab/synth_data.hpp"

namespace py = pybind11;
using namespace reclab;

namespace {

using Rows = std::vector<std::vector<std::optional<double>>>;
using Pairs = std::vector<std::pair<std::size_t, double>>;

Rows to_rows(const RatingsMatrix& m) {
  Rows rows;
  rows.reserve(m.n_users());
  for (std::size_t u = 0; u < m.n_users(); ++u) rows.push_back(m.row_optional(u));
  return rows;
}

Pairs to_pairs(const RecommendationList& list) {
  Pairs out;
  out.reserve(list.size());
  for (const auto& r : list) out.emplace_back(r.article, r.score);
  return out;
}

Rating rating_of(double value) {
  const Rating r = Rating::from_value(value);
  if (!r.in_range()) throw Error(Errc::InvalidConfig, "rating must lie in [-10.0, 10.0]");
  return r;
}

py::dict histogram_dict(const Histogram& h) {
  py::dict d;
  py::list labels, counts;
  for (const auto& b : h.bins) {
    labels.append(b.label);
    counts.append(b.count);
  }
  d["scheme"] = h.scheme;
  d["labels"] = labels;
  d["counts"] = counts;
  d["total"] = h.total;
  return d;
}

std::unique_ptr<Strategy> strategy_named(const std::string& name, double theta, std::size_t k,
                                         std::size_t top_n, std::optional<double> x,
                                         std::uint64_t seed, std::size_t max_iter) {
  if (name == "threshold") return std::make_unique<ThresholdStrategy>(ThresholdConfig{rating_of(theta)});
  if (name == "kmeans") {
    KMeansOptions options;
    options.k = k;
    options.seed = seed;
    options.max_iter = max_iter;
    KmeansRecConfig rec;
    rec.top_n = top_n;
    return std::make_unique<KmeansStrategy>(options, rec);
  }
  if (name == "content") return std::make_unique<ContentStrategy>(x);
  throw Error(Errc::InvalidConfig, "unknown strategy '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(reclab, m) {
  m.doc() = "Threshold, k-means and content-based recommendation strategies with a benchmark harness";

  static py::exception<Error> error_type(m, "ReclabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message = "[" + std::string(errc_name(e.code())) + "] " + e.what();
      PyErr_SetString(error_type.ptr(), message.c_str());
    }
  });

  py::class_<RatingsMatrix>(m, "RatingsMatrix")
      .def(py::init([](const Rows& rows) { return RatingsMatrix::from_rows(rows); }),
           py::arg("rows"), "Build from rows of floats, None marking a missing rating.")
      .def_property_readonly("n_users", &RatingsMatrix::n_users)
      .def_property_readonly("n_articles", &RatingsMatrix::n_articles)
      .def("at",
           [](const RatingsMatrix& self, std::size_t u, std::size_t a) -> std::optional<double> {
             const Cell c = self.at(u, a);
             if (!c) return std::nullopt;
             return c->value();
           })
      .def("rows", &to_rows)
      .def("__eq__", [](const RatingsMatrix& a, const RatingsMatrix& b) { return a == b; })
      .def("__repr__", [](const RatingsMatrix& self) {
        return "<RatingsMatrix " + std::to_string(self.n_users()) + " users x " +
               std::to_string(self.n_articles()) + " articles>";
      });

  m.def("validate_matrix", [](const RatingsMatrix& mat) {
    const auto v = validate_matrix(mat);
    py::dict d;
    d["accepted"] = v.accepted;
    if (!v.accepted) {
      d["error"] = std::string(errc_name(v.code));
      d["user"] = v.user == kNoPosition ? py::object(py::none()) : py::cast(v.user);
      d["article"] = v.article == kNoPosition ? py::object(py::none()) : py::cast(v.article);
      d["message"] = v.message;
    }
    return d;
  });
  m.def("article_mean", &article_mean, py::arg("matrix"), py::arg("article"));
  m.def("missing_ratio", &missing_ratio, py::arg("matrix"), py::arg("article"));
  m.def(
      "make_transaction",
      [](std::vector<std::size_t> ids, const RatingsMatrix& mat) {
        const auto txn = make_transaction(std::move(ids), mat);
        return std::vector<std::size_t>(txn.articles().begin(), txn.articles().end());
      },
      py::arg("ids"), py::arg("matrix"), "Validate a transaction; returns its article list.");

  m.def(
      "generate",
      [](std::size_t n_users, std::size_t n_articles, std::size_t n_archetypes,
         double noise_sigma, double missing_low, double missing_high, std::uint64_t seed) {
        GeneratorConfig cfg{n_users, n_articles, n_archetypes, noise_sigma,
                            missing_low, missing_high, seed};
        return generate(cfg);
      },
      py::arg("n_users") = 5000, py::arg("n_articles") = 100, py::arg("n_archetypes") = 8,
      py::arg("noise_sigma") = 1.5, py::arg("missing_low") = 0.18,
      py::arg("missing_high") = 0.70, py::arg("seed") = 42);
  m.def("save_csv", py::overload_cast<const RatingsMatrix&, const std::string&>(&save_csv),
        py::arg("matrix"), py::arg("path"));
  m.def("load_csv", py::overload_cast<const std::string&>(&load_csv), py::arg("path"));
  m.def("to_csv", &to_csv, py::arg("matrix"));
  m.def("from_csv", &from_csv, py::arg("text"));

  py::class_<ClusterModel>(m, "ClusterModel")
      .def_readonly("k", &ClusterModel::k)
      .def_readonly("assignment", &ClusterModel::assignment)
      .def_readonly("iterations_run", &ClusterModel::iterations_run)
      .def_readonly("inertia_history", &ClusterModel::inertia_history)
      .def_readonly("reseeded", &ClusterModel::reseeded)
      .def_property_readonly("centroids", [](const ClusterModel& self) {
        std::vector<OptionalVector> out;
        for (const auto& c : self.centroids) out.push_back(c.coordinates());
        return out;
      });

  m.def(
      "fit",
      [](const RatingsMatrix& mat, std::size_t k, std::uint64_t seed, std::size_t max_iter,
         bool plus_plus) {
        KMeansOptions options{k, seed, max_iter,
                              plus_plus ? InitMethod::KMeansPlusPlus : InitMethod::RandomRows};
        py::gil_scoped_release release;
        return fit(mat, options);
      },
      py::arg("matrix"), py::arg("k"), py::arg("seed") = 1, py::arg("max_iter") = 50,
      py::arg("kmeans_plus_plus") = false);
  m.def("assign", &assign, py::arg("model"), py::arg("vector"));
  m.def("inertia", &inertia, py::arg("model"), py::arg("matrix"));
  m.def(
      "partial_distance",
      [](const OptionalVector& v, const OptionalVector& c) {
        return partial_distance(v, Centroid::from_optional(c));
      },
      py::arg("vector"), py::arg("centroid"));

  m.def(
      "threshold_recommend",
      [](const RatingsMatrix& mat, std::vector<std::size_t> txn, double theta) {
        return to_pairs(threshold_recommend(mat, make_transaction(std::move(txn), mat),
                                            ThresholdConfig{rating_of(theta)}));
      },
      py::arg("matrix"), py::arg("txn"), py::arg("theta") = 9.3);
  m.def(
      "kmeans_recommend",
      [](const ClusterModel& model, const RatingsMatrix& mat, std::vector<std::size_t> txn,
         std::size_t top_n, double pseudo_rating) {
        KmeansRecConfig cfg{top_n, rating_of(pseudo_rating)};
        return to_pairs(kmeans_recommend(model, mat, make_transaction(std::move(txn), mat), cfg));
      },
      py::arg("model"), py::arg("matrix"), py::arg("txn"), py::arg("top_n") = 8,
      py::arg("pseudo_rating") = 10.0);

  py::class_<ContentGroups>(m, "ContentGroups")
      .def_readonly("group_of", &ContentGroups::group_of)
      .def_readonly("means", &ContentGroups::means)
      .def_readonly("x", &ContentGroups::x)
      .def_readonly("mu_min", &ContentGroups::mu_min)
      .def("members", &ContentGroups::members);
  m.def(
      "build_content_groups",
      [](const RatingsMatrix& mat, std::optional<double> x) {
        return build_content_groups(mat, x ? *x : default_content_x(mat));
      },
      py::arg("matrix"), py::arg("x") = py::none());
  m.def("default_content_x", &default_content_x, py::arg("matrix"));
  m.def(
      "content_recommend",
      [](const ContentGroups& groups, const RatingsMatrix& mat, std::vector<std::size_t> txn) {
        return to_pairs(content_recommend(groups, mat, make_transaction(std::move(txn), mat)));
      },
      py::arg("groups"), py::arg("matrix"), py::arg("txn"));

  m.def(
      "bin_lengths",
      [](const std::vector<std::size_t>& lengths, const std::string& scheme,
         std::vector<std::size_t> edges) {
        return histogram_dict(bin_lengths(lengths, BinScheme::parse(scheme, std::move(edges))));
      },
      py::arg("lengths"), py::arg("scheme") = "content",
      py::arg("edges") = std::vector<std::size_t>{2, 5, 24});
  m.def(
      "proportions",
      [](const std::vector<std::size_t>& counts, const std::string& scheme) {
        return proportions(histogram_from_counts(BinScheme::parse(scheme), counts));
      },
      py::arg("counts"), py::arg("scheme") = "content",
      "Percentages at one decimal for a five-bin count row.");
  m.def(
      "query_dependency",
      [](const std::vector<std::size_t>& lengths, double low, double high) {
        const auto r = query_dependency(lengths, QdCutoffs{low, high});
        py::dict d;
        d["empty_rate"] = r.empty_rate;
        d["length_cv"] = r.length_cv;
        d["score"] = r.score;
        d["label"] = std::string(level_name(r.label));
        return d;
      },
      py::arg("lengths"), py::arg("low") = 0.2, py::arg("high") = 0.6);
  m.def(
      "run_lengths",
      [](const RatingsMatrix& mat, const std::string& strategy, std::size_t iterations,
         std::uint64_t seed, double theta, std::size_t k, std::size_t top_n,
         std::optional<double> x, std::size_t txn_length) {
        auto s = strategy_named(strategy, theta, k, top_n, x, seed, 50);
        py::gil_scoped_release release;
        return run(mat, *s, iterations, seed, txn_length).lengths();
      },
      py::arg("matrix"), py::arg("strategy"), py::arg("iterations") = kDefaultIterations,
      py::arg("seed") = kDefaultBenchSeed, py::arg("theta") = 9.3, py::arg("k") = 100,
      py::arg("top_n") = 8, py::arg("x") = py::none(), py::arg("txn_length") = 4,
      "Result-set length of each benchmark query.");
  m.def(
      "bench_report",
      [](const RatingsMatrix& mat, const std::vector<std::string>& strategies,
         std::size_t iterations, std::uint64_t seed, double theta, std::size_t k,
         std::size_t top_n, std::optional<double> x, bool include_timing) {
        std::vector<BenchmarkSummary> summaries;
        for (const auto& name : strategies) {
          auto s = strategy_named(name, theta, k, top_n, x, seed, 50);
          const auto scheme = name == "threshold" ? BinScheme::labeled() : BinScheme::content();
          summaries.push_back(benchmark(mat, *s, iterations, seed, scheme));
        }
        return compare_report(std::move(summaries), {"python", mat.n_users(), mat.n_articles()})
            .to_json(include_timing);
      },
      py::arg("matrix"), py::arg("strategies") = std::vector<std::string>{"content", "threshold", "kmeans"},
      py::arg("iterations") = kDefaultIterations, py::arg("seed") = kDefaultBenchSeed,
      py::arg("theta") = 9.3, py::arg("k") = 100, py::arg("top_n") = 8, py::arg("x") = py::none(),
      py::arg("include_timing") = true, "Run the benchmark and return the JSON report.");
}
