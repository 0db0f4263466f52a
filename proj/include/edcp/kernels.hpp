#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace edcp::kernels {

// Arithmetic kernels for the dense amplitude arrays. Each operation has a
// scalar reference implementation and, on x86-64, an AVX2 variant compiled
// with a function-level target attribute. The front functions dispatch once
// at startup based on CPUID; tests cross-check the variants against the
// scalar reference.
//
// std::complex<double> arrays are addressed as interleaved re/im doubles,
// which the standard guarantees for std::complex.

using cd = std::complex<double>;

enum class Backend { Scalar, Avx2 };

Backend active_backend();
std::string backend_name();
// Force a backend (throws edcp::Error if unsupported on this CPU).
void set_backend(Backend b);

// a[i] *= b[i]
void cmul(cd* a, const cd* b, std::size_t n);
// a[i] *= s
void scale_real(cd* a, double s, std::size_t n);
void scale(cd* a, cd s, std::size_t n);
// sum |a[i]|^2
double norm_sq(const cd* a, std::size_t n);
// sum a[i]*b[i]   (unconjugated)
cd dotu(const cd* a, const cd* b, std::size_t n);
// sum conj(a[i])*b[i]
cd dotc(const cd* a, const cd* b, std::size_t n);
// y[i] += alpha*x[i]
void axpy(cd alpha, const cd* x, cd* y, std::size_t n);

namespace scalar {
void cmul(cd* a, const cd* b, std::size_t n);
void scale_real(cd* a, double s, std::size_t n);
void scale(cd* a, cd s, std::size_t n);
double norm_sq(const cd* a, std::size_t n);
cd dotu(const cd* a, const cd* b, std::size_t n);
cd dotc(const cd* a, const cd* b, std::size_t n);
void axpy(cd alpha, const cd* x, cd* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define EDCP_HAVE_AVX2_KERNELS 1
namespace avx2 {
void cmul(cd* a, const cd* b, std::size_t n);
void scale_real(cd* a, double s, std::size_t n);
void scale(cd* a, cd s, std::size_t n);
double norm_sq(const cd* a, std::size_t n);
cd dotu(const cd* a, const cd* b, std::size_t n);
cd dotc(const cd* a, const cd* b, std::size_t n);
void axpy(cd alpha, const cd* x, cd* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace edcp::kernels
