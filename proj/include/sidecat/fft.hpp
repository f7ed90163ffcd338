#pragma once

#include <complex>
#include <vector>

namespace sidecat::fft {

// Real-to-complex FFT of `in` zero-padded/truncated to length nfft
// (returns nfft/2+1 bins). Thread-safe; FFTW plans are cached per size.
std::vector<std::complex<double>> rfft(const std::vector<double>& in, std::size_t nfft);

// Inverse of rfft, returns nfft real samples (normalized so irfft(rfft(x)) == x).
std::vector<double> irfft(const std::vector<std::complex<double>>& in, std::size_t nfft);

// Linear convolution of a and b via FFT with zero padding, length a+b-1,
// exact to grid resolution.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

std::size_t next_pow2(std::size_t n);

}  // namespace sidecat::fft
