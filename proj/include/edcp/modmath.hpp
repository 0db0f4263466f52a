#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "edcp/errors.hpp"

namespace edcp {

using u64 = std::uint64_t;

// ---------------------------------------------------------------------------
// Modular scalar helpers (all moduli < 2^31, values reduced).
// ---------------------------------------------------------------------------

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 a, u64 e, u64 m);
u64 gcd_u64(u64 a, u64 b);
u64 lcm_u64(u64 a, u64 b);
// Inverse of a mod m; throws NonCoprimeModuli if gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);

// Default bound on acceptable prime factors; configurable per call.
inline constexpr u64 kDefaultPrimeBound = 1ull << 20;

// Complete sorted prime factorization of q >= 2. Throws PrimeBoundExceeded if
// any prime factor exceeds the bound.
std::vector<std::pair<u64, int>> factorize(u64 q, u64 prime_bound = kDefaultPrimeBound);

// A modulus together with its factorization.
struct Modulus {
    u64 q = 2;
    std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing

    Modulus() = default;
    explicit Modulus(u64 value, u64 prime_bound = kDefaultPrimeBound)
        : q(value), factors(factorize(value, prime_bound)) {}
};

// An element of Z_q^n with all coordinates reduced.
struct ZqVector {
    u64 q = 2;
    std::vector<u64> coords;

    ZqVector() = default;
    ZqVector(u64 modulus, std::vector<u64> values);
    static ZqVector zero(u64 modulus, std::size_t n) {
        return ZqVector(modulus, std::vector<u64>(n, 0));
    }

    std::size_t dim() const { return coords.size(); }
    u64 operator[](std::size_t i) const { return coords[i]; }

    ZqVector reduced(u64 new_modulus) const;

    bool operator==(const ZqVector& o) const = default;
};

ZqVector add(const ZqVector& a, const ZqVector& b);
ZqVector sub(const ZqVector& a, const ZqVector& b);
ZqVector scalar_mul(u64 k, const ZqVector& a);
u64 inner_product(const ZqVector& a, const ZqVector& b);

// exp(2*pi*i*k/M), tracked exactly as the pair (M, k).
struct RootOfUnity {
    u64 modulus = 1;
    u64 exponent = 0;

    RootOfUnity() = default;
    RootOfUnity(u64 m, u64 k) : modulus(m), exponent(k % m) {}

    std::complex<double> value() const;
    RootOfUnity operator*(const RootOfUnity& o) const;
};

// ---------------------------------------------------------------------------
// CRT and linear solving
// ---------------------------------------------------------------------------

// Combine residue vectors under pairwise coprime moduli into a vector modulo
// the product. Throws NonCoprimeModuli.
ZqVector crt_reconstruct(const std::vector<std::pair<u64, ZqVector>>& residues);
u64 crt_reconstruct_scalar(const std::vector<std::pair<u64, u64>>& residues);

// One linear equation <y, s> = value (mod q).
struct LinearEquation {
    ZqVector y;
    u64 value = 0;
};

// Solves for s in Z_q^n given inner-product equations. Works per prime-power
// factor of q (Gaussian elimination, pivots restricted to units mod p) and
// recombines with the CRT. Returns nullopt when the equations do not pin s
// uniquely; throws InconsistentSystem when they admit no solution at all.
std::optional<ZqVector> solve_linear_mod(const std::vector<LinearEquation>& equations,
                                         const Modulus& q);

// ---------------------------------------------------------------------------
// Discrete Gaussians
// ---------------------------------------------------------------------------

// Width-parameter convention: g_sigma(x) = exp(-pi x^2 / sigma^2).
double gaussian_weight(double sigma, double x);

// Probability of integer x under the discrete Gaussian of parameter sigma,
// truncated to |x| <= sqrt(kappa)*sigma and renormalized. The truncated tail
// carries mass 2^{-Omega(kappa)}, so kappa = 40 makes truncation invisible at
// double precision.
double discrete_gaussian_pmf(double sigma, long long x, double kappa = 40.0);

// Support bound of the truncated Gaussian: floor(sqrt(kappa)*sigma).
long long gaussian_support_bound(double sigma, double kappa = 40.0);

// The same distribution folded into Z_q.
std::vector<double> wrapped_gaussian_pmf(double sigma, u64 q, double kappa = 40.0);

}  // namespace edcp
