#pragma once

#include "levysmooth/common.hpp"

#include <complex>
#include <vector>

namespace levysmooth {

using cdouble = std::complex<double>;

namespace detail {

// In-place iterative radix-2 FFT; sign = -1 forward, +1 inverse (unscaled).
inline void fft_inplace(cdouble* a, std::size_t n, int sign) {
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * kPi / double(len);
        cdouble wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cdouble u = a[i + k];
                cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace detail

inline void fft_forward(std::vector<cdouble>& a) { detail::fft_inplace(a.data(), a.size(), -1); }

inline void fft_inverse(std::vector<cdouble>& a) {
    detail::fft_inplace(a.data(), a.size(), +1);
    double s = 1.0 / double(a.size());
    for (auto& x : a) x *= s;
}

// Row-column 2-D transform on an n x n row-major array.
inline void fft2_forward(std::vector<cdouble>& a, std::size_t n) {
    if (a.size() != n * n) throw ConfigError("fft2: size mismatch");
    for (std::size_t row = 0; row < n; ++row) detail::fft_inplace(a.data() + row * n, n, -1);
    std::vector<cdouble> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = a[r * n + c];
        detail::fft_inplace(col.data(), n, -1);
        for (std::size_t r = 0; r < n; ++r) a[r * n + c] = col[r];
    }
}

inline void fft2_inverse(std::vector<cdouble>& a, std::size_t n) {
    if (a.size() != n * n) throw ConfigError("fft2: size mismatch");
    for (std::size_t row = 0; row < n; ++row) detail::fft_inplace(a.data() + row * n, n, +1);
    std::vector<cdouble> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = a[r * n + c];
        detail::fft_inplace(col.data(), n, +1);
        for (std::size_t r = 0; r < n; ++r) a[r * n + c] = col[r];
    }
    double s = 1.0 / double(n * n);
    for (auto& x : a) x *= s;
}

}  // namespace levysmooth
