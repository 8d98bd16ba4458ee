#pragma once

// Periodic n x n spectral grid with 2/3-rule dealiasing.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dln/fft.hpp"

namespace dln {

class SpectralGrid {
  public:
    explicit SpectralGrid(int n, double length = 2.0 * M_PI) : n_(n), length_(length) {
        if (n < 8 || !fft_detail::is_pow2(n))
            throw std::invalid_argument("SpectralGrid: n must be a power of two >= 8");
        if (!(length > 0.0)) throw std::invalid_argument("SpectralGrid: length must be positive");
        wave_.resize(n);
        const double scale = 2.0 * M_PI / length;
        for (int i = 0; i < n; i++) {
            const int m = (i <= n / 2) ? i : i - n;
            wave_[i] = scale * m;
        }
        // Keep |m_i| <= floor(n/3); triple products then stay below the
        // grid's Nyquist wrap, so quadratic terms are alias-free.
        const int cut = n / 3;
        mask_.resize(static_cast<std::size_t>(n) * n);
        k2_.resize(mask_.size());
        for (int i = 0; i < n; i++) {
            const int mi = (i <= n / 2) ? i : i - n;
            for (int j = 0; j < n; j++) {
                const int mj = (j <= n / 2) ? j : j - n;
                const std::size_t idx = static_cast<std::size_t>(i) * n + j;
                mask_[idx] = (std::abs(mi) <= cut && std::abs(mj) <= cut) ? 1 : 0;
                k2_[idx] = wave_[i] * wave_[i] + wave_[j] * wave_[j];
            }
        }
    }

    int n() const { return n_; }
    double length() const { return length_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    double kx(int i) const { return wave_[i]; }
    double ky(int j) const { return wave_[j]; }
    double k2(std::size_t idx) const { return k2_[idx]; }
    bool dealias_keep(std::size_t idx) const { return mask_[idx] != 0; }

    void apply_dealias(CVec& field) const {
        for (std::size_t i = 0; i < field.size(); i++)
            if (!mask_[i]) field[i] = 0.0;
    }

    bool same_as(const SpectralGrid& other) const {
        return n_ == other.n_ && length_ == other.length_;
    }

    // Spectral coefficients are true Fourier coefficients: u(x) = sum uh_k e^{ik.x}.
    CVec to_spectral(const std::vector<double>& physical) const {
        if (physical.size() != size()) throw std::invalid_argument("to_spectral: bad field size");
        CVec out(size());
        for (std::size_t i = 0; i < size(); i++) out[i] = physical[i];
        fft2(out, n_);
        const double s = 1.0 / static_cast<double>(size());
        for (auto& c : out) c *= s;
        return out;
    }

    std::vector<double> to_physical(const CVec& spectral) const {
        if (spectral.size() != size()) throw std::invalid_argument("to_physical: bad field size");
        CVec tmp = spectral;
        fft2(tmp, n_, true);
        // inverse carried 1/n^2; undo it against the coefficient convention
        std::vector<double> out(size());
        const double s = static_cast<double>(size());
        for (std::size_t i = 0; i < size(); i++) out[i] = tmp[i].real() * s;
        return out;
    }

    double x(int i) const { return length_ * i / n_; }
    double y(int j) const { return length_ * j / n_; }

  private:
    int n_;
    double length_;
    std::vector<double> wave_;
    std::vector<char> mask_;
    std::vector<double> k2_;
};

}  // namespace dln
