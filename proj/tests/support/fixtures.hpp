#pragma once

#include <optional>
#include <vector>

#include "reclab/ratings.hpp"

namespace reclab::testing {

// Four users by five articles, the shared desk-scale fixture.
//   u0: 9.5  8.0   -   2.0  9.4
//   u1: 9.4   -   7.0   -   9.6
//   u2: 1.0  2.0  3.0  4.0  5.0
//   u3:  -   9.9  9.8   -    -
inline RatingsMatrix f1() {
  constexpr auto none = std::nullopt;
  return RatingsMatrix::from_rows({
      {9.5, 8.0, none, 2.0, 9.4},
      {9.4, none, 7.0, none, 9.6},
      {1.0, 2.0, 3.0, 4.0, 5.0},
      {none, 9.9, 9.8, none, none},
  });
}

}  // namespace reclab::testing
