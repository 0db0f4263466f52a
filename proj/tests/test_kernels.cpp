#include <doctest.h>

#include <complex>
#include <vector>

#include "edcp/kernels.hpp"
#include "edcp/rng.hpp"

using edcp::Rng;
using edcp::kernels::cd;

namespace {

std::vector<cd> random_vec(Rng& rng, std::size_t n) {
    std::vector<cd> out(n);
    for (auto& v : out) v = {rng.uniform_real() * 2.0 - 1.0, rng.uniform_real() * 2.0 - 1.0};
    return out;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 7, 8, 15, 16, 33, 64, 65, 129};

bool close(cd a, cd b, double tol = 1e-12) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

}  // namespace

#if defined(EDCP_HAVE_AVX2_KERNELS)

TEST_CASE("avx2 kernels match the scalar reference") {
    if (edcp::kernels::active_backend() != edcp::kernels::Backend::Avx2) return;
    Rng rng(42);
    for (std::size_t n : kSizes) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);

        auto a1 = a;
        auto a2 = a;
        edcp::kernels::scalar::cmul(a1.data(), b.data(), n);
        edcp::kernels::avx2::cmul(a2.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a1[i], a2[i]));

        a1 = a;
        a2 = a;
        edcp::kernels::scalar::scale_real(a1.data(), 0.37, n);
        edcp::kernels::avx2::scale_real(a2.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a1[i], a2[i]));

        a1 = a;
        a2 = a;
        const cd s{0.3, -1.1};
        edcp::kernels::scalar::scale(a1.data(), s, n);
        edcp::kernels::avx2::scale(a2.data(), s, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a1[i], a2[i]));

        CHECK(edcp::kernels::scalar::norm_sq(a.data(), n) ==
              doctest::Approx(edcp::kernels::avx2::norm_sq(a.data(), n)).epsilon(1e-12));
        CHECK(close(edcp::kernels::scalar::dotu(a.data(), b.data(), n),
                    edcp::kernels::avx2::dotu(a.data(), b.data(), n)));
        CHECK(close(edcp::kernels::scalar::dotc(a.data(), b.data(), n),
                    edcp::kernels::avx2::dotc(a.data(), b.data(), n)));

        a1 = a;
        a2 = a;
        edcp::kernels::scalar::axpy(s, b.data(), a1.data(), n);
        edcp::kernels::avx2::axpy(s, b.data(), a2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a1[i], a2[i]));
    }
}

#endif

TEST_CASE("dispatched kernels agree with the scalar reference") {
    Rng rng(7);
    for (std::size_t n : {5u, 32u, 63u}) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        auto a1 = a;
        edcp::kernels::cmul(a1.data(), b.data(), n);
        auto a2 = a;
        edcp::kernels::scalar::cmul(a2.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a1[i], a2[i]));
        CHECK(close(edcp::kernels::dotc(a.data(), b.data(), n),
                    edcp::kernels::scalar::dotc(a.data(), b.data(), n)));
    }
}

TEST_CASE("backend selection") {
    const auto original = edcp::kernels::active_backend();
    CHECK((edcp::kernels::backend_name() == "avx2" || edcp::kernels::backend_name() == "scalar"));
    edcp::kernels::set_backend(edcp::kernels::Backend::Scalar);
    CHECK(edcp::kernels::backend_name() == "scalar");
    edcp::kernels::set_backend(original);
}
