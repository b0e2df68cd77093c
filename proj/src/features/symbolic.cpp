#include <array>

#include "internal.hpp"

namespace tscanon {
namespace detail {

double motif_three_hh(Prepared& p) {
  const std::vector<int> sym = quantile_symbolize(p.z(), 3);
  std::array<double, 9> pairs{};
  for (std::size_t t = 0; t + 1 < sym.size(); ++t) pairs[static_cast<std::size_t>(sym[t] * 3 + sym[t + 1])] += 1.0;
  return entropy_nats(pairs, static_cast<double>(sym.size() - 1));
}

double transition_matrix_sumdiagcov(Prepared& p) {
  const auto z = p.z();
  const std::size_t stride = p.first_zero();
  const std::size_t n_down = (z.size() - 1) / stride + 1;
  if (n_down < 4) raise(ErrorKind::DegenerateInput, "fewer than 4 samples after downsampling");
  std::vector<double> down(n_down);
  for (std::size_t i = 0; i < n_down; ++i) down[i] = z[i * stride];
  const std::vector<int> sym = quantile_symbolize(down, 3);

  // counts[next][current]; columns are normalised to conditional probabilities.
  std::array<std::array<double, 3>, 3> t{};
  for (std::size_t i = 0; i + 1 < n_down; ++i) {
    t[static_cast<std::size_t>(sym[i + 1])][static_cast<std::size_t>(sym[i])] += 1.0;
  }
  for (std::size_t c = 0; c < 3; ++c) {
    const double col = t[0][c] + t[1][c] + t[2][c];
    if (col > 0.0) {
      for (std::size_t r = 0; r < 3; ++r) t[r][c] /= col;
    }
  }

  // Columns are three observations of a 3-vector; the trace of their sample
  // covariance is the summed variance of each coordinate across columns.
  double trace = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    const double m = (t[r][0] + t[r][1] + t[r][2]) / 3.0;
    double ss = 0.0;
    for (std::size_t c = 0; c < 3; ++c) ss += (t[r][c] - m) * (t[r][c] - m);
    trace += ss / 2.0;
  }
  return trace;
}

}  // namespace detail

double motif_three_hh(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::motif_three_hh(p);
}

double transition_matrix_sumdiagcov(const TimeSeries& series) {
  detail::require_length(series.length(), 5);
  detail::Prepared p(series.samples());
  return detail::transition_matrix_sumdiagcov(p);
}

}  // namespace tscanon
