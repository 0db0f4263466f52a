#include "edcp/modmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace edcp {

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 out = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) out = mul_mod(out, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return out;
}

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

u64 lcm_u64(u64 a, u64 b) { return a / gcd_u64(a, b) * b; }

u64 inv_mod(u64 a, u64 m) {
    // extended Euclid on signed 128-bit intermediates
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        __int128 quot = r / new_r;
        t -= quot * new_t;
        std::swap(t, new_t);
        r -= quot * new_r;
        std::swap(r, new_r);
    }
    if (r != 1)
        throw NonCoprimeModuli("inv_mod: " + std::to_string(a) + " not invertible mod " +
                               std::to_string(m));
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

std::vector<std::pair<u64, int>> factorize(u64 q, u64 prime_bound) {
    if (q < 2) throw BadParams("factorize: q must be >= 2");
    std::vector<std::pair<u64, int>> out;
    u64 rest = q;
    for (u64 p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (p > prime_bound)
            throw PrimeBoundExceeded("factorize: prime factor " + std::to_string(p) +
                                     " exceeds bound " + std::to_string(prime_bound));
        out.emplace_back(p, e);
    }
    if (rest > 1) {
        if (rest > prime_bound)
            throw PrimeBoundExceeded("factorize: prime factor " + std::to_string(rest) +
                                     " exceeds bound " + std::to_string(prime_bound));
        out.emplace_back(rest, 1);
    }
    return out;
}

ZqVector::ZqVector(u64 modulus, std::vector<u64> values) : q(modulus), coords(std::move(values)) {
    if (q < 2) throw BadParams("ZqVector: modulus must be >= 2");
    for (auto& c : coords) c %= q;
}

ZqVector ZqVector::reduced(u64 new_modulus) const {
    ZqVector out(new_modulus, coords);
    return out;
}

ZqVector add(const ZqVector& a, const ZqVector& b) {
    if (a.q != b.q || a.dim() != b.dim()) throw BadParams("ZqVector add: shape mismatch");
    ZqVector out = a;
    for (std::size_t i = 0; i < out.dim(); ++i) out.coords[i] = (a.coords[i] + b.coords[i]) % a.q;
    return out;
}

ZqVector sub(const ZqVector& a, const ZqVector& b) {
    if (a.q != b.q || a.dim() != b.dim()) throw BadParams("ZqVector sub: shape mismatch");
    ZqVector out = a;
    for (std::size_t i = 0; i < out.dim(); ++i)
        out.coords[i] = (a.coords[i] + a.q - b.coords[i]) % a.q;
    return out;
}

ZqVector scalar_mul(u64 k, const ZqVector& a) {
    ZqVector out = a;
    for (auto& c : out.coords) c = mul_mod(c, k % a.q, a.q);
    return out;
}

u64 inner_product(const ZqVector& a, const ZqVector& b) {
    if (a.q != b.q || a.dim() != b.dim()) throw BadParams("inner_product: shape mismatch");
    u64 acc = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc = (acc + mul_mod(a.coords[i], b.coords[i], a.q)) % a.q;
    return acc;
}

std::complex<double> RootOfUnity::value() const {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) /
                         static_cast<double>(modulus);
    return {std::cos(angle), std::sin(angle)};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    const u64 m = lcm_u64(modulus, o.modulus);
    const u64 k = (mul_mod(exponent, m / modulus, m) + mul_mod(o.exponent, m / o.modulus, m)) % m;
    return {m, k};
}

u64 crt_reconstruct_scalar(const std::vector<std::pair<u64, u64>>& residues) {
    u64 m_all = 1, x = 0;
    for (const auto& [m, v] : residues) {
        if (gcd_u64(m_all, m) != 1) throw NonCoprimeModuli("crt: moduli not pairwise coprime");
        // combine x (mod m_all) with v (mod m)
        const u64 m_new = m_all * m;
        const u64 diff = (v % m + m - x % m) % m;
        const u64 step = mul_mod(diff, inv_mod(m_all % m, m), m);
        x = (x + m_all * step) % m_new;
        m_all = m_new;
    }
    return x;
}

ZqVector crt_reconstruct(const std::vector<std::pair<u64, ZqVector>>& residues) {
    if (residues.empty()) throw BadParams("crt_reconstruct: empty input");
    const std::size_t n = residues.front().second.dim();
    u64 m_all = 1;
    for (const auto& [m, vec] : residues) {
        if (vec.dim() != n) throw BadParams("crt_reconstruct: dimension mismatch");
        if (vec.q != m) throw BadParams("crt_reconstruct: vector modulus mismatch");
        m_all *= m;
    }
    std::vector<u64> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<u64, u64>> scalar;
        scalar.reserve(residues.size());
        for (const auto& [m, vec] : residues) scalar.emplace_back(m, vec.coords[i]);
        out[i] = crt_reconstruct_scalar(scalar);
    }
    return ZqVector(m_all, std::move(out));
}

// ---------------------------------------------------------------------------
// solve_linear_mod
// ---------------------------------------------------------------------------

namespace {

struct Row {
    std::vector<u64> a;
    u64 b;
};

// Existence check for A s = b (mod p^e), used on the residual system after
// elimination stalls. At a stall every remaining coefficient is divisible by
// p, so the system either has no solution (some rhs is not divisible) or
// divides through to a smaller-exponent system.
bool system_has_solution(std::vector<Row> rows, u64 p, int e, u64 P) {
    if (e == 0) return true;
    const std::size_t n = rows.empty() ? 0 : rows.front().a.size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot].a[col] % p == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const u64 inv = inv_mod(rows[rank].a[col] % P, P);
        for (auto& c : rows[rank].a) c = mul_mod(c, inv, P);
        rows[rank].b = mul_mod(rows[rank].b, inv, P);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r].a[col] == 0) continue;
            const u64 f = rows[r].a[col];
            for (std::size_t c = 0; c < n; ++c)
                rows[r].a[c] = (rows[r].a[c] + P - mul_mod(f, rows[rank].a[c], P)) % P;
            rows[r].b = (rows[r].b + P - mul_mod(f, rows[rank].b, P)) % P;
        }
        ++rank;
    }
    // residual rows: all coefficients divisible by p
    std::vector<Row> residual;
    for (std::size_t r = rank; r < rows.size(); ++r) {
        bool all_zero = true;
        for (u64 c : rows[r].a)
            if (c != 0) all_zero = false;
        if (all_zero) {
            if (rows[r].b != 0) return false;
            continue;
        }
        if (rows[r].b % p != 0) return false;
        Row divided;
        divided.a.reserve(n);
        for (u64 c : rows[r].a) divided.a.push_back(c / p);
        divided.b = rows[r].b / p;
        residual.push_back(std::move(divided));
    }
    if (residual.empty()) return true;
    return system_has_solution(std::move(residual), p, e - 1, P / p);
}

// Solve modulo a prime power p^e. Returns the unique solution, nullopt when
// underdetermined; throws InconsistentSystem when no solution exists.
std::optional<std::vector<u64>> solve_prime_power(const std::vector<LinearEquation>& equations,
                                                  std::size_t n, u64 p, int e) {
    u64 P = 1;
    for (int i = 0; i < e; ++i) P *= p;
    std::vector<Row> rows;
    rows.reserve(equations.size());
    for (const auto& eq : equations) {
        Row r;
        r.a.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.a.push_back(eq.y.coords[i] % P);
        r.b = eq.value % P;
        rows.push_back(std::move(r));
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot].a[col] % p == 0) ++pivot;
        if (pivot == rows.size()) continue;  // no unit pivot for this column
        std::swap(rows[rank], rows[pivot]);
        const u64 inv = inv_mod(rows[rank].a[col] % P, P);
        for (auto& c : rows[rank].a) c = mul_mod(c, inv, P);
        rows[rank].b = mul_mod(rows[rank].b, inv, P);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r].a[col] == 0) continue;
            const u64 f = rows[r].a[col];
            for (std::size_t c = 0; c < n; ++c)
                rows[r].a[c] = (rows[r].a[c] + P - mul_mod(f, rows[rank].a[c], P)) % P;
            rows[r].b = (rows[r].b + P - mul_mod(f, rows[rank].b, P)) % P;
        }
        pivot_col.push_back(col);
        ++rank;
    }

    if (rank == n) {
        std::vector<u64> s(n);
        for (std::size_t r = 0; r < rank; ++r) s[pivot_col[r]] = rows[r].b;
        // leftover rows are fully eliminated; inconsistent rhs means corrupted input
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (rows[r].b != 0)
                throw InconsistentSystem("solve_linear_mod: contradictory equations mod " +
                                         std::to_string(P));
        return s;
    }

    // The solution cannot be unique (the coefficient matrix lacks full column
    // rank mod p). Distinguish underdetermined from inconsistent by dividing
    // the residual system through by p and recursing on existence.
    std::vector<Row> residual(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end());
    if (!system_has_solution(std::move(residual), p, e, P))
        throw InconsistentSystem("solve_linear_mod: no solution mod " + std::to_string(P));
    return std::nullopt;
}

}  // namespace

std::optional<ZqVector> solve_linear_mod(const std::vector<LinearEquation>& equations,
                                         const Modulus& q) {
    if (equations.empty()) throw BadParams("solve_linear_mod: no equations");
    const std::size_t n = equations.front().y.dim();
    for (const auto& eq : equations)
        if (eq.y.dim() != n || eq.y.q != q.q)
            throw BadParams("solve_linear_mod: equation shape mismatch");

    std::vector<std::pair<u64, ZqVector>> parts;
    for (const auto& [p, e] : q.factors) {
        u64 P = 1;
        for (int i = 0; i < e; ++i) P *= p;
        auto sol = solve_prime_power(equations, n, p, e);
        if (!sol) return std::nullopt;
        parts.emplace_back(P, ZqVector(P, *sol));
    }
    return crt_reconstruct(parts);
}

// ---------------------------------------------------------------------------
// Discrete Gaussians
// ---------------------------------------------------------------------------

double gaussian_weight(double sigma, double x) {
    return std::exp(-std::numbers::pi * x * x / (sigma * sigma));
}

long long gaussian_support_bound(double sigma, double kappa) {
    return static_cast<long long>(std::floor(std::sqrt(kappa) * sigma));
}

double discrete_gaussian_pmf(double sigma, long long x, double kappa) {
    if (sigma <= 0.0) throw BadParams("discrete_gaussian_pmf: sigma must be positive");
    const long long bound = gaussian_support_bound(sigma, kappa);
    if (x < -bound || x > bound) return 0.0;
    double z = 0.0;
    for (long long k = -bound; k <= bound; ++k) z += gaussian_weight(sigma, static_cast<double>(k));
    return gaussian_weight(sigma, static_cast<double>(x)) / z;
}

std::vector<double> wrapped_gaussian_pmf(double sigma, u64 q, double kappa) {
    if (sigma <= 0.0) throw BadParams("wrapped_gaussian_pmf: sigma must be positive");
    const long long bound = gaussian_support_bound(sigma, kappa);
    double z = 0.0;
    for (long long k = -bound; k <= bound; ++k) z += gaussian_weight(sigma, static_cast<double>(k));
    std::vector<double> out(q, 0.0);
    for (long long k = -bound; k <= bound; ++k) {
        long long idx = k % static_cast<long long>(q);
        if (idx < 0) idx += static_cast<long long>(q);
        out[static_cast<std::size_t>(idx)] += gaussian_weight(sigma, static_cast<double>(k)) / z;
    }
    return out;
}

}  // namespace edcp
