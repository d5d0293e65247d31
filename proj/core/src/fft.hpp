#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin FFTW wrapper. Plans are created once per length under a lock and
// executed through the new-array interface, which FFTW documents as
// thread-safe.
namespace kljn::detail {

// Forward real-to-complex transform; returns n/2 + 1 bins (unnormalized).
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Inverse complex-to-real transform of a Hermitian half spectrum with
// n/2 + 1 bins; unnormalized (x[n] = sum_k X_k e^{+2 pi i k n / N}).
std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t n);

}  // namespace kljn::detail
