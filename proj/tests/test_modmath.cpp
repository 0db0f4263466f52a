#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "edcp/modmath.hpp"
#include "edcp/rng.hpp"

using namespace edcp;

namespace {

// Brute-force oracle: all solutions of the system over Z_q^n.
std::vector<std::vector<u64>> enumerate_solutions(const std::vector<LinearEquation>& eqs, u64 q,
                                                  std::size_t n) {
    std::vector<std::vector<u64>> out;
    u64 total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= q;
    for (u64 e = 0; e < total; ++e) {
        std::vector<u64> s(n);
        u64 rest = e;
        for (std::size_t c = 0; c < n; ++c) {
            s[c] = rest % q;
            rest /= q;
        }
        bool ok = true;
        for (const auto& eq : eqs) {
            u64 acc = 0;
            for (std::size_t c = 0; c < n; ++c) acc = (acc + eq.y.coords[c] * s[c]) % q;
            if (acc != eq.value % q) ok = false;
        }
        if (ok) out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("factorize") {
    CHECK(factorize(36) == std::vector<std::pair<u64, int>>{{2, 2}, {3, 2}});
    CHECK(factorize(8) == std::vector<std::pair<u64, int>>{{2, 3}});
    CHECK(factorize(97) == std::vector<std::pair<u64, int>>{{97, 1}});
    CHECK_THROWS_AS(factorize(2 * 1048583ull, 1 << 20), PrimeBoundExceeded);
}

TEST_CASE("crt_reconstruct on the worked examples") {
    {
        // exhaustive oracle over Z_36
        u64 expected = 0;
        for (u64 v = 0; v < 36; ++v)
            if (v % 4 == 3 && v % 9 == 7) expected = v;
        CHECK(expected == 7);
        ZqVector out = crt_reconstruct({{4, ZqVector(4, {3})}, {9, ZqVector(9, {7})}});
        CHECK(out.q == 36);
        CHECK(out.coords == std::vector<u64>{expected});
    }
    {
        u64 expected = 0;
        for (u64 v = 0; v < 6; ++v)
            if (v % 2 == 1 && v % 3 == 2) expected = v;
        CHECK(expected == 5);
        ZqVector out = crt_reconstruct({{2, ZqVector(2, {1})}, {3, ZqVector(3, {2})}});
        CHECK(out.coords == std::vector<u64>{expected});
    }
    // single modulus is the identity
    ZqVector single = crt_reconstruct({{7, ZqVector(7, {4})}});
    CHECK(single.q == 7);
    CHECK(single.coords == std::vector<u64>{4});
    CHECK_THROWS_AS(crt_reconstruct({{4, ZqVector(4, {1})}, {6, ZqVector(6, {1})}}),
                    NonCoprimeModuli);
}

TEST_CASE("crt_reconstruct round-trips random instances up to 10^6") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const u64 q = 2 + rng.uniform_below(1000000 - 2);
        Modulus m(q);
        const std::size_t n = 1 + rng.uniform_below(3);
        std::vector<u64> target(n);
        for (auto& c : target) c = rng.uniform_below(q);
        std::vector<std::pair<u64, ZqVector>> residues;
        for (const auto& [p, e] : m.factors) {
            u64 pe = 1;
            for (int i = 0; i < e; ++i) pe *= p;
            std::vector<u64> res(n);
            for (std::size_t c = 0; c < n; ++c) res[c] = target[c] % pe;
            residues.emplace_back(pe, ZqVector(pe, res));
        }
        ZqVector out = crt_reconstruct(residues);
        REQUIRE(out.q == q);
        for (std::size_t c = 0; c < n; ++c) CHECK(out.coords[c] == target[c]);
    }
}

TEST_CASE("solve_linear_mod worked examples") {
    {
        Modulus q(4);
        auto s = solve_linear_mod({{ZqVector(4, {1}), 3}}, q);
        REQUIRE(s.has_value());
        CHECK(s->coords == std::vector<u64>{3});
    }
    {
        // 2s = 2 mod 4 has the two solutions 1 and 3
        Modulus q(4);
        const auto all = enumerate_solutions({{ZqVector(4, {2}), 2}}, 4, 1);
        CHECK(all.size() == 2);
        CHECK_FALSE(solve_linear_mod({{ZqVector(4, {2}), 2}}, q).has_value());
    }
    {
        // n = 2, q = 5, true secret (2, 3)
        Modulus q(5);
        Rng rng(3);
        std::vector<LinearEquation> eqs;
        for (int i = 0; i < 6; ++i) {
            ZqVector y(5, {rng.uniform_below(5), rng.uniform_below(5)});
            const u64 v = (y.coords[0] * 2 + y.coords[1] * 3) % 5;
            eqs.push_back({y, v});
        }
        const auto all = enumerate_solutions(eqs, 5, 2);
        REQUIRE(all.size() == 1);
        CHECK(all[0] == std::vector<u64>{2, 3});
        auto s = solve_linear_mod(eqs, q);
        REQUIRE(s.has_value());
        CHECK(s->coords == std::vector<u64>{2, 3});
    }
}

TEST_CASE("solve_linear_mod agrees with exhaustive search") {
    Rng rng(19);
    int unique_count = 0, ambiguous_count = 0, inconsistent_count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(2);
        const u64 q = 4 + rng.uniform_below(6);  // 4..9
        Modulus qm(q);
        const std::size_t rows = 1 + rng.uniform_below(4);
        std::vector<LinearEquation> eqs;
        for (std::size_t i = 0; i < rows; ++i) {
            std::vector<u64> y(n);
            for (auto& c : y) c = rng.uniform_below(q);
            eqs.push_back({ZqVector(q, y), rng.uniform_below(q)});
        }
        const auto all = enumerate_solutions(eqs, q, n);
        if (all.empty()) {
            CHECK_THROWS_AS(solve_linear_mod(eqs, qm), InconsistentSystem);
            ++inconsistent_count;
        } else if (all.size() == 1) {
            auto s = solve_linear_mod(eqs, qm);
            REQUIRE(s.has_value());
            CHECK(s->coords == all[0]);
            ++unique_count;
        } else {
            CHECK_FALSE(solve_linear_mod(eqs, qm).has_value());
            ++ambiguous_count;
        }
    }
    // make sure the sweep exercised all three verdicts
    CHECK(unique_count > 0);
    CHECK(ambiguous_count > 0);
    CHECK(inconsistent_count > 0);
}

TEST_CASE("discrete gaussian pmf") {
    // peak and symmetry
    const double peak = discrete_gaussian_pmf(3.0, 0);
    for (long long x = -8; x <= 8; ++x) {
        CHECK(discrete_gaussian_pmf(3.0, x) <= peak + 1e-15);
        CHECK(discrete_gaussian_pmf(3.0, x) ==
              doctest::Approx(discrete_gaussian_pmf(3.0, -x)).epsilon(1e-13));
    }
    // sums to one over the truncated support
    const long long bound = gaussian_support_bound(2.0, 100.0);
    double total = 0.0;
    for (long long x = -bound; x <= bound; ++x) total += discrete_gaussian_pmf(2.0, x, 100.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // outside the truncation the mass is exactly zero
    CHECK(discrete_gaussian_pmf(2.0, bound + 1, 100.0) == 0.0);

    // wrapped variant sums to one as well
    const auto wrapped = wrapped_gaussian_pmf(97.0 / 9.0, 97);
    double wrapped_total = 0.0;
    for (double v : wrapped) wrapped_total += v;
    CHECK(wrapped_total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("root of unity multiplication is additive in the exponent") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const u64 m = 2 + rng.uniform_below(96);
        const u64 a = rng.uniform_below(m);
        const u64 b = rng.uniform_below(m);
        const auto lhs = RootOfUnity(m, a).value() * RootOfUnity(m, b).value();
        const auto rhs = RootOfUnity(m, a + b).value();
        CHECK(std::abs(lhs - rhs) < 1e-12);
        CHECK(std::abs(std::abs(RootOfUnity(m, a).value()) - 1.0) < 1e-12);
    }
    // composition across moduli lands on the lcm
    const RootOfUnity prod = RootOfUnity(4, 1) * RootOfUnity(6, 1);
    CHECK(prod.modulus == 12);
    CHECK(std::abs(prod.value() - RootOfUnity(12, 5).value()) < 1e-12);
}
