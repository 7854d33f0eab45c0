#include "dischull/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace dischull {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / double(len) * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= double(n);
    }
}

std::vector<cplx> fourier_coeffs(std::vector<cplx> samples) {
    fft(samples, false);
    for (auto& c : samples) c /= double(samples.size());
    return samples;
}

cplx fourier_eval(const std::vector<cplx>& coeffs, double theta) {
    const std::size_t n = coeffs.size();
    cplx s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // modes [0, n/2) positive, [n/2, n) negative
        double m = (k < n / 2) ? double(k) : double(k) - double(n);
        s += coeffs[k] * std::polar(1.0, m * theta);
    }
    return s;
}

}  // namespace dischull
