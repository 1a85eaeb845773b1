#include "kzlab/numeric.hpp"

#include <algorithm>

namespace kzlab {

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw validation_error("fft_pow2: size must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv_n;
    }
}

std::vector<cplx> convolve_direct(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    // Below ~2^12 output points the quadratic loop wins and avoids FFT noise.
    if (out_len < 4096) return convolve_direct(a, b);
    const std::size_t n = next_pow2(out_len);
    std::vector<cplx> fa(n, cplx(0, 0)), fb(n, cplx(0, 0));
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_pow2(fa, true);
    fa.resize(out_len);
    return fa;
}

}  // namespace kzlab
