#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace trf {

// Iterative radix-2 FFT plan with precomputed bit-reversal and twiddle
// tables.  Every transform length in this project is a power of two by
// construction (circulant embedding doubles to the next power of two), so
// a mixed-radix implementation would buy nothing.
class Fft {
  public:
    explicit Fft(std::size_t n); // n must be a power of two, n >= 1

    std::size_t size() const { return n_; }

    // In-place transform: data[k] <- sum_j data[j] * exp(sign*2*pi*i*j*k/n).
    // sign = -1 is the analysis convention, sign = +1 synthesis.  No 1/n
    // factor is applied; callers scale as their formulas require.
    void transform(std::complex<double>* data, int sign) const;

    void transform(std::vector<std::complex<double>>& data, int sign) const;

    static bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }
    static std::size_t next_power_of_two(std::size_t n);

  private:
    std::size_t n_ = 0;
    int log2n_ = 0;
    std::vector<std::size_t> bitrev_;
    // Twiddles for the largest stage; smaller stages stride through it.
    std::vector<std::complex<double>> w_; // w_[j] = exp(-2*pi*i*j/n), j < n/2
};

} // namespace trf
