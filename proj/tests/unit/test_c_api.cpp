#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "support/synthetic.hpp"
#include "tscanon/features.hpp"
#include "tscanon/tscanon_c.h"

namespace {

constexpr std::size_t kF = tscanon::kFeatureCount;

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("names match the catalog in order") {
  REQUIRE(tscanon_feature_count() == kF);
  const auto names = tscanon::feature_names();
  for (std::size_t i = 0; i < kF; ++i) CHECK(std::string(tscanon_feature_name(i)) == names[i]);
  CHECK(tscanon_feature_name(kF) == nullptr);
}

TEST_CASE("single extraction agrees with the library and uses NaN plus flags") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = support::random_series(200 + seed * 13, seed);
    double values[kF];
    std::uint8_t flags[kF];
    REQUIRE(tscanon_extract(x.data(), x.size(), values, flags, nullptr) == TSCANON_OK);
    const auto ref = tscanon::extract_all(support::ts(x));
    for (std::size_t i = 0; i < kF; ++i) {
      if (ref[i].has_value()) {
        CHECK(flags[i] == TSCANON_FLAG_NONE);
        CHECK(same_bits(values[i], ref[i].value()));
      } else {
        CHECK(std::isnan(values[i]));
        CHECK(flags[i] == (ref[i].marker() == tscanon::Marker::NotComputable ? TSCANON_FLAG_NOT_COMPUTABLE
                                                                            : TSCANON_FLAG_DEGENERATE_INPUT));
      }
    }
  }
}

TEST_CASE("constant series gives 22 flagged NaNs") {
  const std::vector<double> x(100, 3.0);
  double values[kF];
  std::uint8_t flags[kF];
  REQUIRE(tscanon_extract(x.data(), x.size(), values, flags, nullptr) == TSCANON_OK);
  for (std::size_t i = 0; i < kF; ++i) {
    CHECK(std::isnan(values[i]));
    CHECK(flags[i] == TSCANON_FLAG_DEGENERATE_INPUT);
  }
  // flags may be omitted
  CHECK(tscanon_extract(x.data(), x.size(), values, nullptr, nullptr) == TSCANON_OK);
}

TEST_CASE("invalid inputs return status codes") {
  double values[kF];
  std::size_t bad = 999;
  CHECK(tscanon_extract(nullptr, 0, values, nullptr, &bad) == TSCANON_EMPTY_INPUT);

  std::vector<double> x{1, 2, 3, std::numeric_limits<double>::quiet_NaN(), 5};
  CHECK(tscanon_extract(x.data(), x.size(), values, nullptr, &bad) == TSCANON_NON_FINITE_SAMPLE);
  CHECK(bad == 3);
  x[3] = 4;
  x[1] = std::numeric_limits<double>::infinity();
  CHECK(tscanon_extract(x.data(), x.size(), values, nullptr, &bad) == TSCANON_NON_FINITE_SAMPLE);
  CHECK(bad == 1);

  CHECK(tscanon_extract(x.data(), x.size(), nullptr, nullptr, nullptr) == TSCANON_INVALID_ARGUMENT);
}

TEST_CASE("batch equals single calls and ignores thread count") {
  const std::size_t count = 1000;
  std::vector<std::vector<double>> data;
  for (std::size_t k = 0; k < count; ++k) data.push_back(support::random_series(20 + (k * 37) % 300, k));
  data[17].clear();
  data[500][4] = std::numeric_limits<double>::infinity();

  std::vector<const double*> ptrs;
  std::vector<std::size_t> lengths;
  for (const auto& d : data) {
    ptrs.push_back(d.data());
    lengths.push_back(d.size());
  }

  auto run = [&](unsigned threads, std::vector<double>& values, std::vector<std::uint8_t>& flags,
                 std::vector<int>& statuses, std::vector<std::size_t>& bad) {
    values.assign(count * kF, 0.0);
    flags.assign(count * kF, 0);
    statuses.assign(count, -1);
    bad.assign(count, 0);
    return tscanon_extract_batch(ptrs.data(), lengths.data(), count, threads, values.data(), flags.data(),
                                 statuses.data(), bad.data());
  };

  std::vector<double> v1, v4;
  std::vector<std::uint8_t> f1, f4;
  std::vector<int> s1, s4;
  std::vector<std::size_t> b1, b4;
  REQUIRE(run(1, v1, f1, s1, b1) == TSCANON_OK);
  REQUIRE(run(4, v4, f4, s4, b4) == TSCANON_OK);
  CHECK(std::memcmp(v1.data(), v4.data(), v1.size() * sizeof(double)) == 0);
  CHECK(f1 == f4);
  CHECK(s1 == s4);

  CHECK(s1[17] == TSCANON_EMPTY_INPUT);
  CHECK(s1[500] == TSCANON_NON_FINITE_SAMPLE);
  CHECK(b1[500] == 4);

  for (std::size_t k = 0; k < count; ++k) {
    double values[kF];
    std::uint8_t flags[kF];
    const int status = tscanon_extract(ptrs[k], lengths[k], values, flags, nullptr);
    REQUIRE(status == s1[k]);
    if (status != TSCANON_OK) continue;
    for (std::size_t i = 0; i < kF; ++i) {
      CHECK(same_bits(values[i], v1[k * kF + i]));
      CHECK(flags[i] == f1[k * kF + i]);
    }
  }
}

TEST_CASE("batch rejects missing buffers") {
  const double x[] = {1, 2, 3, 4, 5};
  const double* ptrs[] = {x};
  const std::size_t lengths[] = {5};
  double values[kF];
  CHECK(tscanon_extract_batch(ptrs, lengths, 1, 1, nullptr, nullptr, nullptr, nullptr) == TSCANON_INVALID_ARGUMENT);
  CHECK(tscanon_extract_batch(nullptr, lengths, 1, 1, values, nullptr, nullptr, nullptr) == TSCANON_INVALID_ARGUMENT);
  CHECK(tscanon_extract_batch(ptrs, lengths, 0, 1, values, nullptr, nullptr, nullptr) == TSCANON_OK);
}
