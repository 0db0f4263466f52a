#include "edcp/kernels.hpp"

#include "edcp/errors.hpp"

namespace edcp::kernels {

namespace {

bool avx2_supported() {
#if defined(EDCP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() { return avx2_supported() ? Backend::Avx2 : Backend::Scalar; }

Backend g_backend = detect();

}  // namespace

Backend active_backend() { return g_backend; }

std::string backend_name() { return g_backend == Backend::Avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported())
        throw Error("avx2 backend not supported on this CPU");
    g_backend = b;
}

#if defined(EDCP_HAVE_AVX2_KERNELS)
#define EDCP_DISPATCH(fn, ...) \
    return g_backend == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define EDCP_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void cmul(cd* a, const cd* b, std::size_t n) { EDCP_DISPATCH(cmul, a, b, n); }
void scale_real(cd* a, double s, std::size_t n) { EDCP_DISPATCH(scale_real, a, s, n); }
void scale(cd* a, cd s, std::size_t n) { EDCP_DISPATCH(scale, a, s, n); }
double norm_sq(const cd* a, std::size_t n) { EDCP_DISPATCH(norm_sq, a, n); }
cd dotu(const cd* a, const cd* b, std::size_t n) { EDCP_DISPATCH(dotu, a, b, n); }
cd dotc(const cd* a, const cd* b, std::size_t n) { EDCP_DISPATCH(dotc, a, b, n); }
void axpy(cd alpha, const cd* x, cd* y, std::size_t n) { EDCP_DISPATCH(axpy, alpha, x, y, n); }

}  // namespace edcp::kernels
