#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "support/synthetic.hpp"
#include "tscanon/bench.hpp"

using Catch::Approx;
using tscanon::ErrorKind;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const tscanon::Error& e) {
    return e.kind();
  }
  FAIL("expected tscanon::Error");
  return ErrorKind::InvalidArgument;
}

std::vector<tscanon::BenchRecord> synthetic_records(double c, double power) {
  std::vector<tscanon::BenchRecord> records;
  for (std::size_t n : {100, 200, 400, 800, 1600, 3200}) {
    for (int k = 0; k < 3; ++k) {
      records.push_back({"s" + std::to_string(k), n, c * std::pow(static_cast<double>(n), power)});
    }
  }
  return records;
}

}  // namespace

TEST_CASE("resample truncates when shortening") {
  const auto x = support::ts({1, 2, 3, 4, 5, 6, 7, 8});
  const auto y = tscanon::resample_to_length(x, 5);
  CHECK(y.vector() == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("resample to the same length is the identity") {
  const auto x = support::ts(support::white_noise(50, 1));
  CHECK(tscanon::resample_to_length(x, 50).vector() == x.vector());
}

TEST_CASE("resample interpolates linearly when lengthening") {
  const auto y = tscanon::resample_to_length(support::ts({0, 1}), 5);
  const std::vector<double> expected{0, 0.25, 0.5, 0.75, 1};
  REQUIRE(y.length() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(y[i] == Approx(expected[i]).margin(1e-15));

  // Interpolated points lie on the segment between their neighbours.
  const auto src = support::ts(support::white_noise(30, 4));
  const auto up = tscanon::resample_to_length(src, 117);
  CHECK(up[0] == src[0]);
  CHECK(up[116] == src[29]);
  for (std::size_t i = 0; i < 117; ++i) {
    const double pos = static_cast<double>(i) * 29.0 / 116.0;
    const auto lo = std::min<std::size_t>(static_cast<std::size_t>(pos), 28);
    const double a = std::min(src[lo], src[lo + 1]);
    const double b = std::max(src[lo], src[lo + 1]);
    CHECK(up[i] >= a - 1e-12);
    CHECK(up[i] <= b + 1e-12);
  }
}

TEST_CASE("resample rejects tiny targets") {
  CHECK(kind_of([] { tscanon::resample_to_length(support::ts({1, 2, 3}), 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("scaling fit recovers exact power laws") {
  const auto linear = tscanon::fit_scaling(synthetic_records(2e-6, 1.0));
  CHECK(linear.exponent == Approx(1.0).margin(1e-9));
  CHECK(linear.prefactor == Approx(2e-6).epsilon(1e-9));
  CHECK(linear.r_squared == Approx(1.0).margin(1e-12));

  const auto quadratic = tscanon::fit_scaling(synthetic_records(3e-9, 2.0));
  CHECK(quadratic.exponent == Approx(2.0).margin(1e-9));
  CHECK(quadratic.prefactor == Approx(3e-9).epsilon(1e-9));
}

TEST_CASE("scaling fit uses the median per length") {
  auto records = synthetic_records(1e-6, 1.0);
  // One slow outlier per length must not move the fit.
  for (std::size_t n : {100, 200, 400, 800, 1600, 3200}) records.push_back({"slow", n, 1.0});
  records.push_back({"slow2", 100, 2.0});
  records.push_back({"fast", 100, 1e-12});
  CHECK(tscanon::fit_scaling(records).exponent == Approx(1.0).margin(1e-9));
}

TEST_CASE("scaling fit needs five lengths") {
  std::vector<tscanon::BenchRecord> records;
  for (std::size_t n : {100, 200, 400, 800}) records.push_back({"s", n, 1e-6 * static_cast<double>(n)});
  CHECK(kind_of([&] { tscanon::fit_scaling(records); }) == ErrorKind::DegenerateInput);
}

TEST_CASE("time_extract emits one record per series and length") {
  std::vector<tscanon::NamedSeries> series;
  series.push_back({"a", support::ts(support::white_noise(300, 1))});
  series.push_back({"b", support::ts(support::sine(300, 20.0, 0.0))});
  const std::vector<std::size_t> lengths{50, 100, 200};
  const auto records = tscanon::time_extract(series, lengths, 2);
  REQUIRE(records.size() == 6);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].series_id == (i < 3 ? "a" : "b"));
    CHECK(records[i].length == lengths[i % 3]);
    CHECK(records[i].seconds > 0.0);
  }
  CHECK(kind_of([&] { tscanon::time_extract(series, lengths, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("bench corpus has forty distinct reproducible series") {
  const auto corpus = tscanon::synthetic_bench_corpus(500, 3);
  REQUIRE(corpus.size() == 40);
  std::set<std::string> ids;
  for (const auto& s : corpus) {
    ids.insert(s.id);
    CHECK(s.series.length() == 500);
  }
  CHECK(ids.size() == 40);
  const auto again = tscanon::synthetic_bench_corpus(500, 3);
  for (std::size_t i = 0; i < 40; ++i) CHECK(again[i].series.vector() == corpus[i].series.vector());
}
