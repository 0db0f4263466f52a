#include <doctest.h>

#include <cmath>

#include "edcp/infotheory.hpp"

using namespace edcp;

namespace {
EdcpParams params_of(std::size_t n, u64 q, u64 r, u64 p) {
    return EdcpParams(n, Modulus(q), r, p);
}
}  // namespace

TEST_CASE("holevo closed form and numeric equality at one copy") {
    const EnsembleReport report = holevo_chi(params_of(1, 4, 2, 2), 1);
    CHECK(report.chi_closed_form == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(report.chi_numeric == doctest::Approx(report.chi_closed_form).epsilon(1e-8));

    for (const auto& [n, q, r, p] : {std::tuple<std::size_t, u64, u64, u64>{1, 9, 3, 3},
                                     std::tuple<std::size_t, u64, u64, u64>{2, 4, 2, 2}}) {
        const EnsembleReport rep = holevo_chi(params_of(n, q, r, p), 1);
        CHECK(std::abs(rep.chi_numeric - rep.chi_closed_form) <= 1e-8);
        CHECK(rep.chi_numeric <= rep.chi_closed_form + 1e-8);
        CHECK(rep.chi_numeric >= 0.0);
    }
}

TEST_CASE("single-term superpositions carry no phase information") {
    // r = 1 collapses log r to zero; evaluated on the raw closed form since
    // parameter validation requires r >= 2 for actual states
    const double chi = 1.0 * (1.0 - 1.0 / 4.0) * std::log2(1.0);
    CHECK(chi == 0.0);
}

TEST_CASE("two-copy ensemble respects subadditivity") {
    const EnsembleReport two = holevo_chi(params_of(1, 4, 2, 2), 2);
    const EnsembleReport one = holevo_chi(params_of(1, 4, 2, 2), 1);
    CHECK(two.chi_numeric <= 2.0 * one.chi_numeric + 1e-8);
    CHECK(two.chi_numeric <= two.chi_closed_form + 1e-8);
    CHECK(two.chi_closed_form == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("minimum sample bound from the information chain") {
    CHECK(fano_min_samples(params_of(1, 4, 2, 2), 0.99) == 2);
    // vacuous regime: p n log q <= 1
    CHECK(fano_min_samples(params_of(1, 4, 2, 2), 0.2) == 0);
    CHECK(fano_min_samples(params_of(4, 256, 2, 2), 1.0) == 32);
    CHECK_THROWS_AS(fano_min_samples(params_of(1, 4, 2, 2), 0.0), BadParams);

    // monotone in the success probability, nondecreasing in n log q,
    // nonincreasing in log r
    u64 prev = 0;
    for (double p = 0.1; p <= 1.0; p += 0.1) {
        const u64 m = fano_min_samples(params_of(2, 16, 2, 2), p);
        CHECK(m >= prev);
        prev = m;
    }
    CHECK(fano_min_samples(params_of(1, 256, 2, 2), 0.9) >=
          fano_min_samples(params_of(1, 16, 2, 2), 0.9));
    CHECK(fano_min_samples(params_of(1, 16, 8, 2), 0.9) <=
          fano_min_samples(params_of(1, 16, 2, 2), 0.9));
}

TEST_CASE("spectrum check across parameter sets") {
    CHECK(spectrum_check(params_of(1, 4, 2, 2)));
    CHECK(spectrum_check(params_of(1, 9, 3, 3)));
    CHECK(spectrum_check(params_of(2, 4, 2, 2)));
    CHECK(spectrum_check(params_of(1, 8, 4, 2)));
}

TEST_CASE("entropy of the maximally mixed state") {
    // log2 D bits for the flat spectrum
    const EnsembleReport rep = holevo_chi(params_of(1, 4, 2, 2), 1);
    // averaged spectrum: q^-n once, (r q^n)^-1 with multiplicity (q^n - 1) r,
    // and r - 1 zeros
    REQUIRE(rep.spectrum_averaged.size() == 3);
    CHECK(rep.spectrum_averaged[0].first == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rep.spectrum_averaged[0].second == 1);
    CHECK(rep.spectrum_averaged[1].first == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(rep.spectrum_averaged[1].second == 6);
    CHECK(rep.spectrum_averaged[2].second == 1);
}
