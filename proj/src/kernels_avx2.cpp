#include "edcp/kernels.hpp"

#if defined(EDCP_HAVE_AVX2_KERNELS)

#include <immintrin.h>

// AVX2 variants. One __m256d holds two interleaved complex<double> values.
// Complex products use the fmaddsub idiom: with b_re/b_im the broadcast real
// and imaginary parts and a_sw the swapped lanes of a,
//   fmaddsub(a, b_re, a_sw*b_im) = (ar*br - ai*bi, ai*br + ar*bi).
// Compiled with function-level target attributes so the rest of the library
// can be built for the baseline ISA; dispatch happens at runtime.

#define EDCP_AVX2_FN __attribute__((target("avx2,fma")))

namespace edcp::kernels::avx2 {

namespace {

EDCP_AVX2_FN inline __m256d cmul2(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// (conj(a0)*b0, conj(a1)*b1)
EDCP_AVX2_FN inline __m256d cmulc2(__m256d a, __m256d b) {
    __m256d a_re = _mm256_movedup_pd(a);
    __m256d a_im = _mm256_permute_pd(a, 0xF);
    __m256d b_sw = _mm256_permute_pd(b, 0x5);
    // even: ar*br + ai*bi, odd: ar*bi - ai*br
    return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

EDCP_AVX2_FN inline cd reduce_c(__m256d acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return {lanes[0] + lanes[2], lanes[1] + lanes[3]};
}

}  // namespace

EDCP_AVX2_FN void cmul(cd* a, const cd* b, std::size_t n) {
    double* pa = reinterpret_cast<double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        _mm256_storeu_pd(pa + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) a[i] *= b[i];
}

EDCP_AVX2_FN void scale_real(cd* a, double s, std::size_t n) {
    double* pa = reinterpret_cast<double*>(a);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(pa + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i), vs));
    }
    for (; i < n; ++i) a[i] *= s;
}

EDCP_AVX2_FN void scale(cd* a, cd s, std::size_t n) {
    double* pa = reinterpret_cast<double*>(a);
    const __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        _mm256_storeu_pd(pa + 2 * i, cmul2(va, vs));
    }
    for (; i < n; ++i) a[i] *= s;
}

EDCP_AVX2_FN double norm_sq(const cd* a, std::size_t n) {
    const double* d = reinterpret_cast<const double*>(a);
    const std::size_t total = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= total; i += 4) {
        __m256d v = _mm256_loadu_pd(d + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double out = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < total; ++i) out += d[i] * d[i];
    return out;
}

EDCP_AVX2_FN cd dotu(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc = _mm256_add_pd(acc, cmul2(va, vb));
    }
    cd out = reduce_c(acc);
    for (; i < n; ++i) out += a[i] * b[i];
    return out;
}

EDCP_AVX2_FN cd dotc(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc = _mm256_add_pd(acc, cmulc2(va, vb));
    }
    cd out = reduce_c(acc);
    for (; i < n; ++i) out += std::conj(a[i]) * b[i];
    return out;
}

EDCP_AVX2_FN void axpy(cd alpha, const cd* x, cd* y, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        __m256d vy = _mm256_loadu_pd(py + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul2(vx, va)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace edcp::kernels::avx2

#endif  // EDCP_HAVE_AVX2_KERNELS
