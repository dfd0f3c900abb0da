#pragma once

// Synthetic rating matrices and the flat CSV persistence format.
//
// CSV layout:
//   user_id,a0,a1,...,a{n-1}
//   u0,9.5,,-3.2,...
// Ratings carry exactly one decimal digit, missing cells are empty fields,
// lines end in LF.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reclab/ratings.hpp"

namespace reclab {

struct GeneratorConfig {
  std::size_t n_users = 5000;
  std::size_t n_articles = 100;
  std::size_t n_archetypes = 8;
  double noise_sigma = 1.5;
  double missing_low = 0.18;
  double missing_high = 0.70;
  std::uint64_t seed = 42;

  /// Throws Errc::InvalidConfig naming the first violated bound.
  void validate() const;
};

struct GeneratedData {
  RatingsMatrix matrix;
  std::vector<std::size_t> archetype_of;         // per user
  std::vector<double> missing_probability;       // per article
};

/// Each article gets a missing probability uniform in [missing_low,
/// missing_high]; each user an archetype whose per-article preference is
/// uniform in [-10, 10]. Present ratings are preference plus N(0, sigma)
/// noise, clipped and rounded to a tenth. Users draw from independent
/// streams keyed by (seed, user index).
GeneratedData generate_with_labels(const GeneratorConfig& cfg);
RatingsMatrix generate(const GeneratorConfig& cfg);

void save_csv(const RatingsMatrix& m, std::ostream& out);
void save_csv(const RatingsMatrix& m, const std::string& path);
std::string to_csv(const RatingsMatrix& m);

RatingsMatrix load_csv(std::istream& in);
RatingsMatrix load_csv(const std::string& path);
RatingsMatrix from_csv(const std::string& text);

}  // namespace reclab
