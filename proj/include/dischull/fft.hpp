#ifndef DISCHULL_FFT_HPP
#define DISCHULL_FFT_HPP

#include <complex>
#include <vector>

namespace dischull {

using cplx = std::complex<double>;

// In-place radix-2 FFT. Size must be a power of two.
void fft(std::vector<cplx>& a, bool inverse = false);

// Forward transform of samples f_j = f(e^{2*pi*i*j/n}); returns Fourier
// coefficients c_k (index k in [0, n), wrapped so that c[n-1] is mode -1).
std::vector<cplx> fourier_coeffs(std::vector<cplx> samples);

// Evaluate sum_k c_k e^{i k theta} with wrapped negative modes.
cplx fourier_eval(const std::vector<cplx>& coeffs, double theta);

bool is_pow2(std::size_t n);

}  // namespace dischull

#endif
