#include "trf/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trf {

std::size_t Fft::next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Fft: length " + std::to_string(n) +
                                    " is not a power of two");
    }
    while ((std::size_t{1} << log2n_) < n_) ++log2n_;

    bitrev_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t r = 0;
        std::size_t x = i;
        for (int b = 0; b < log2n_; ++b) {
            r = (r << 1) | (x & 1);
            x >>= 1;
        }
        bitrev_[i] = r;
    }

    w_.resize(n_ / 2);
    for (std::size_t j = 0; j < n_ / 2; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n_);
        w_[j] = {std::cos(ang), std::sin(ang)};
    }
}

void Fft::transform(std::complex<double>* data, int sign) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t base = 0; base < n_; base += len) {
            std::size_t tw = 0;
            for (std::size_t k = 0; k < half; ++k, tw += stride) {
                std::complex<double> w = w_[tw];
                if (sign > 0) w = std::conj(w);
                const std::complex<double> u = data[base + k];
                const std::complex<double> v = data[base + k + half] * w;
                data[base + k] = u + v;
                data[base + k + half] = u - v;
            }
        }
    }
}

void Fft::transform(std::vector<std::complex<double>>& data, int sign) const {
    if (data.size() != n_) throw std::invalid_argument("Fft: data length mismatch");
    transform(data.data(), sign);
}

} // namespace trf
