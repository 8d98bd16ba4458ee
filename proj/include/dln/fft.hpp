#pragma once

// Radix-2 complex FFT, enough for the periodic testbed's power-of-two grids.

#include <complex>
#include <stdexcept>
#include <vector>

namespace dln {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

namespace fft_detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Twiddle table for one transform size, built once per size.
inline const CVec& twiddles(int n) {
    static std::vector<CVec> cache;  // cache[log2(n)]
    int lg = 0;
    while ((1 << lg) < n) lg++;
    if (static_cast<int>(cache.size()) <= lg) cache.resize(lg + 1);
    CVec& tw = cache[lg];
    if (tw.empty()) {
        tw.resize(n / 2);
        for (int i = 0; i < n / 2; i++) {
            const double ang = -2.0 * M_PI * i / n;
            tw[i] = {std::cos(ang), std::sin(ang)};
        }
    }
    return tw;
}

// In-place iterative Cooley-Tukey, forward (sign -1); inverse via conjugation.
inline void transform(Cplx* data, int n, bool inverse) {
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (int i = 1, j = 0; i < n; i++) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const CVec& tw = twiddles(n);
    for (int len = 2; len <= n; len <<= 1) {
        const int stride = n / len;
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; j++) {
                Cplx w = tw[j * stride];
                if (inverse) w = std::conj(w);
                const Cplx u = data[i + j];
                const Cplx v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / n;
        for (int i = 0; i < n; i++) data[i] *= s;
    }
}

}  // namespace fft_detail

// 2D transforms on row-major n x n data.  Forward is unnormalized; inverse
// carries the 1/n^2.
inline void fft2(CVec& data, int n, bool inverse = false) {
    if (static_cast<int>(data.size()) != n * n) throw std::invalid_argument("fft2: bad size");
    for (int row = 0; row < n; row++) fft_detail::transform(data.data() + row * n, n, inverse);
    CVec col(n);
    for (int c = 0; c < n; c++) {
        for (int r = 0; r < n; r++) col[r] = data[r * n + c];
        fft_detail::transform(col.data(), n, inverse);
        for (int r = 0; r < n; r++) data[r * n + c] = col[r];
    }
}

inline void ifft2(CVec& data, int n) { fft2(data, n, true); }

}  // namespace dln
