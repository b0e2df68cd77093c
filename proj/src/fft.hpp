#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tscanon::detail {

std::size_t next_pow2(std::size_t n) noexcept;

/// In-place radix-2 transform; size must be a power of two.
void fft(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace tscanon::detail
