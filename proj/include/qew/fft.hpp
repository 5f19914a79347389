#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qew::fft {

using cplx = std::complex<double>;

// In-place unnormalized DFTs backed by FFTW. Plans are cached per length and
// created under a lock; execution is safe from any thread.
void forward(std::span<cplx> data);   // X_k = sum_j x_j exp(-2 pi i jk/N)
void backward(std::span<cplx> data);  // x_j = sum_k X_k exp(+2 pi i jk/N)

// Index of the signed frequency bin: 0..N/2-1 -> itself, N/2..N-1 -> k-N.
inline std::ptrdiff_t signed_bin(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<std::ptrdiff_t>(k)
                   : static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n);
}

}  // namespace qew::fft
