#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle/oracle.hpp"
#include "support/synthetic.hpp"
#include "tscanon/features.hpp"

namespace {

bool close(double lib, double ref, bool integer) {
  if (integer) return lib == ref;
  return std::abs(lib - ref) <= 1e-6 * std::max(std::abs(ref), 1e-6);
}

bool integer_valued(std::size_t i) {
  static const bool mask[22] = {false, false, true, false, false, false, true, false, false, false, false,
                                false, true, false, true, false, false, false, false, false, false, true};
  return mask[i];
}

}  // namespace

TEST_CASE("every feature agrees with the brute-force oracle") {
  const auto names = tscanon::feature_names();
  for (std::size_t length : {128u, 500u, 1024u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto x = support::random_series(length, seed + 1000 * length);
      const auto lib = tscanon::extract_all(support::ts(x));
      const auto ref = oracle::all(x);
      for (std::size_t i = 0; i < 22; ++i) {
        INFO(names[i] << " length " << length << " seed " << seed);
        REQUIRE(lib[i].has_value() == ref[i].has_value());
        if (ref[i]) CHECK(close(lib[i].value(), *ref[i], integer_valued(i)));
      }
    }
  }
}

TEST_CASE("oracle agrees on short and awkward inputs") {
  const std::vector<support::Vec> inputs{
      support::alternating(64), support::ramp(70),      support::sine(200, 7),
      support::sine(90, 45),    {0.3, 1.9, 2.2, 4.7, 5.1, 6.6, 7.0}, {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3},
  };
  for (const auto& x : inputs) {
    const auto lib = tscanon::extract_all(support::ts(x));
    const auto ref = oracle::all(x);
    for (std::size_t i = 0; i < 22; ++i) {
      INFO(tscanon::feature_names()[i] << " length " << x.size());
      REQUIRE(lib[i].has_value() == ref[i].has_value());
      if (ref[i]) CHECK(close(lib[i].value(), *ref[i], integer_valued(i)));
    }
  }
}
