#include "edcp/kernels.hpp"

namespace edcp::kernels::scalar {

void cmul(cd* a, const cd* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
}

void scale_real(cd* a, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void scale(cd* a, cd s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

double norm_sq(const cd* a, std::size_t n) {
    double acc = 0.0;
    const double* d = reinterpret_cast<const double*>(a);
    for (std::size_t i = 0; i < 2 * n; ++i) acc += d[i] * d[i];
    return acc;
}

cd dotu(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    }
    return {re, im};
}

cd dotc(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void axpy(cd alpha, const cd* x, cd* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace edcp::kernels::scalar
