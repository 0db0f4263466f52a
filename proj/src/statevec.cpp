#include "edcp/statevec.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "edcp/kernels.hpp"

namespace edcp {

namespace {
constexpr double kNormTol = 1e-9;
}

// ---------------------------------------------------------------------------
// IndexSpace
// ---------------------------------------------------------------------------

IndexSpace::IndexSpace(std::vector<u64> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw BadParams("IndexSpace: no registers");
    dim_ = 1;
    for (u64 f : factors_) {
        if (f < 1) throw BadParams("IndexSpace: register size must be >= 1");
        if (dim_ > kDimensionCap / f)
            throw DimensionCap("IndexSpace: dimension exceeds cap 2^22");
        dim_ *= f;
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t i = factors_.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * factors_[i];
}

IndexSpace IndexSpace::coset_space(u64 r, u64 q, std::size_t n) {
    std::vector<u64> f;
    f.reserve(n + 1);
    f.push_back(r);
    for (std::size_t i = 0; i < n; ++i) f.push_back(q);
    return IndexSpace(std::move(f));
}

u64 IndexSpace::index_of(const std::vector<u64>& digits) const {
    if (digits.size() != factors_.size()) throw BadParams("index_of: digit count mismatch");
    u64 idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= factors_[i]) throw BadParams("index_of: digit out of range");
        idx += digits[i] * strides_[i];
    }
    return idx;
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

StateVector::StateVector(IndexSpace space, std::vector<cd> amps)
    : space_(std::move(space)), amps_(std::move(amps)) {
    if (amps_.size() != space_.dim()) throw BadParams("StateVector: amplitude count mismatch");
    check_norm();
}

StateVector StateVector::basis(IndexSpace space, const std::vector<u64>& digits) {
    std::vector<cd> amps(space.dim(), cd{0.0, 0.0});
    amps[space.index_of(digits)] = 1.0;
    return StateVector(std::move(space), std::move(amps));
}

void StateVector::check_norm() const {
    const double n = kernels::norm_sq(amps_.data(), amps_.size());
    if (std::abs(n - 1.0) > kNormTol)
        throw BadParams("StateVector: norm " + std::to_string(n) + " not 1");
}

double StateVector::norm() const { return std::sqrt(kernels::norm_sq(amps_.data(), amps_.size())); }

void StateVector::renormalize() {
    const double n = norm();
    if (n <= 0.0) throw ZeroProbabilityBranch("renormalize: zero vector");
    kernels::scale_real(amps_.data(), 1.0 / n, amps_.size());
}

void StateVector::apply_qft(std::size_t reg, Direction dir) {
    const u64 L = space_.factor(reg);
    const u64 stride = space_.stride(reg);
    const double sign = dir == Direction::Forward ? 1.0 : -1.0;
    // DFT matrix, row-major: F[y][x] = w^{sign*x*y}/sqrt(L)
    std::vector<cd> F(L * L);
    const double norm = 1.0 / std::sqrt(static_cast<double>(L));
    for (u64 y = 0; y < L; ++y)
        for (u64 x = 0; x < L; ++x) {
            const double ang =
                sign * 2.0 * std::numbers::pi * static_cast<double>((x * y) % L) / static_cast<double>(L);
            F[y * L + x] = cd{std::cos(ang) * norm, std::sin(ang) * norm};
        }

    const u64 block = stride * L;
    std::vector<cd> in(L), out(L);
    for (u64 base = 0; base < space_.dim(); base += block) {
        for (u64 off = 0; off < stride; ++off) {
            for (u64 t = 0; t < L; ++t) in[t] = amps_[base + off + t * stride];
            for (u64 y = 0; y < L; ++y) out[y] = kernels::dotu(&F[y * L], in.data(), L);
            for (u64 t = 0; t < L; ++t) amps_[base + off + t * stride] = out[t];
        }
    }
}

void StateVector::apply_qft_second_block(Direction dir) {
    for (std::size_t reg = 1; reg < space_.num_registers(); ++reg) apply_qft(reg, dir);
}

void StateVector::apply_multiply_add(const ZqVector& s, int sign) {
    const std::size_t n = s.dim();
    if (space_.num_registers() != n + 1) throw SpaceMismatch("multiply_add: register count");
    for (std::size_t i = 1; i <= n; ++i)
        if (space_.factor(i) != s.q) throw SpaceMismatch("multiply_add: modulus mismatch");
    const u64 q = s.q;

    std::vector<cd> out(amps_.size(), cd{0.0, 0.0});
    std::vector<u64> digits(n + 1);
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        if (amps_[idx] == cd{0.0, 0.0}) continue;
        const u64 j = space_.digit(idx, 0);
        digits[0] = j;
        for (std::size_t i = 0; i < n; ++i) {
            const u64 x = space_.digit(idx, i + 1);
            const u64 js = mul_mod(j % q, s.coords[i], q);
            digits[i + 1] = sign > 0 ? (x + js) % q : (x + q - js) % q;
        }
        out[space_.index_of(digits)] = amps_[idx];
    }
    amps_ = std::move(out);
}

void StateVector::apply_diagonal_phase(const std::function<RootOfUnity(u64)>& phase) {
    for (u64 idx = 0; idx < space_.dim(); ++idx) amps_[idx] *= phase(idx).value();
}

void StateVector::apply_diagonal_phase(const std::vector<cd>& phase) {
    if (phase.size() != amps_.size()) throw BadParams("diagonal phase: size mismatch");
    kernels::cmul(amps_.data(), phase.data(), amps_.size());
}

void StateVector::shift_register(std::size_t reg, long long delta) {
    const u64 L = space_.factor(reg);
    const u64 stride = space_.stride(reg);
    const u64 d = static_cast<u64>(((delta % static_cast<long long>(L)) + static_cast<long long>(L)) %
                                   static_cast<long long>(L));
    if (d == 0) return;
    const u64 block = stride * L;
    std::vector<cd> scratch(L);
    for (u64 base = 0; base < space_.dim(); base += block) {
        for (u64 off = 0; off < stride; ++off) {
            for (u64 t = 0; t < L; ++t) scratch[(t + d) % L] = amps_[base + off + t * stride];
            for (u64 t = 0; t < L; ++t) amps_[base + off + t * stride] = scratch[t];
        }
    }
}

void StateVector::embed_register(std::size_t reg, u64 new_size) {
    const u64 L = space_.factor(reg);
    if (new_size == L) return;
    std::vector<u64> new_factors = space_.factors();
    new_factors[reg] = new_size;
    IndexSpace new_space(new_factors);
    std::vector<cd> out(new_space.dim(), cd{0.0, 0.0});
    std::vector<u64> digits(space_.num_registers());
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        if (amps_[idx] == cd{0.0, 0.0}) continue;
        const u64 v = space_.digit(idx, reg);
        if (v >= new_size) {
            if (std::abs(amps_[idx]) > 1e-12)
                throw BadParams("embed_register: nonzero amplitude outside target range");
            continue;
        }
        for (std::size_t r2 = 0; r2 < space_.num_registers(); ++r2) digits[r2] = space_.digit(idx, r2);
        out[new_space.index_of(digits)] = amps_[idx];
    }
    space_ = std::move(new_space);
    amps_ = std::move(out);
}

std::vector<double> StateVector::register_distribution(std::size_t reg) const {
    std::vector<double> probs(space_.factor(reg), 0.0);
    for (u64 idx = 0; idx < space_.dim(); ++idx) probs[space_.digit(idx, reg)] += std::norm(amps_[idx]);
    return probs;
}

double StateVector::collapse_register(std::size_t reg, u64 outcome) {
    double p = 0.0;
    for (u64 idx = 0; idx < space_.dim(); ++idx)
        if (space_.digit(idx, reg) == outcome) p += std::norm(amps_[idx]);
    if (p <= 1e-300) throw ZeroProbabilityBranch("collapse_register: zero-probability outcome");
    const double inv = 1.0 / std::sqrt(p);
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        if (space_.digit(idx, reg) == outcome)
            amps_[idx] *= inv;
        else
            amps_[idx] = 0.0;
    }
    return p;
}

std::pair<u64, double> StateVector::measure_register(std::size_t reg, Rng& rng) {
    const std::vector<double> probs = register_distribution(reg);
    double roll = rng.uniform_real();
    u64 outcome = probs.size() - 1;
    for (u64 v = 0; v < probs.size(); ++v) {
        if (roll < probs[v]) {
            outcome = v;
            break;
        }
        roll -= probs[v];
    }
    const double p = collapse_register(reg, outcome);
    return {outcome, p};
}

std::vector<std::pair<u64, double>> StateVector::function_distribution(
    const std::function<u64(u64)>& fn) const {
    std::map<u64, double> acc;
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        const double w = std::norm(amps_[idx]);
        if (w > 0.0) acc[fn(idx)] += w;
    }
    return {acc.begin(), acc.end()};
}

double StateVector::collapse_function(const std::function<u64(u64)>& fn, u64 outcome) {
    double p = 0.0;
    for (u64 idx = 0; idx < space_.dim(); ++idx)
        if (fn(idx) == outcome) p += std::norm(amps_[idx]);
    if (p <= 1e-300) throw ZeroProbabilityBranch("collapse_function: zero-probability outcome");
    const double inv = 1.0 / std::sqrt(p);
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        if (fn(idx) == outcome)
            amps_[idx] *= inv;
        else
            amps_[idx] = 0.0;
    }
    return p;
}

u64 StateVector::measure_function(const std::function<u64(u64)>& fn, Rng& rng) {
    const auto dist = function_distribution(fn);
    double roll = rng.uniform_real();
    u64 outcome = dist.back().first;
    for (const auto& [v, p] : dist) {
        if (roll < p) {
            outcome = v;
            break;
        }
        roll -= p;
    }
    collapse_function(fn, outcome);
    return outcome;
}

double StateVector::rejection_accept_probability(const std::vector<double>& eps) const {
    if (eps.size() != space_.factor(0)) throw BadParams("rejection: eps indexed by first register");
    double p = 0.0;
    for (double e : eps) {
        if (e < 0.0) throw BadParams("rejection: negative target weight");
        p += e * e;
    }
    return p;
}

bool StateVector::rejection_resample(const std::vector<double>& eps, Rng& rng) {
    const double p_acc = rejection_accept_probability(eps);
    const std::vector<double> pi_sq = register_distribution(0);
    for (u64 k = 0; k < eps.size(); ++k) {
        const double pi_k = std::sqrt(pi_sq[k]);
        if (eps[k] > pi_k + 1e-12)
            throw WeightExceedsAmplitude("rejection: target weight " + std::to_string(eps[k]) +
                                         " exceeds amplitude " + std::to_string(pi_k) +
                                         " at first-register value " + std::to_string(k));
    }
    const bool success = rng.bernoulli(p_acc);
    // per-block scaling: success branch has profile eps, failure branch the
    // complementary sqrt(pi^2 - eps^2)
    for (u64 idx = 0; idx < space_.dim(); ++idx) {
        const u64 k = space_.digit(idx, 0);
        const double pi_k = std::sqrt(pi_sq[k]);
        if (pi_k <= 1e-300) continue;
        const double target =
            success ? eps[k] : std::sqrt(std::max(0.0, pi_k * pi_k - eps[k] * eps[k]));
        amps_[idx] *= target / pi_k;
    }
    renormalize();
    return success;
}

DensityOperator StateVector::to_density() const {
    DensityOperator rho = DensityOperator::zero(space_);
    rho.accumulate(1.0, *this);
    return rho;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch("fidelity: spaces differ");
    return std::norm(kernels::dotc(a.amps().data(), b.amps().data(), a.dim()));
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(IndexSpace space, std::vector<cd> matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.size() != space_.dim() * space_.dim())
        throw BadParams("DensityOperator: matrix size mismatch");
}

DensityOperator DensityOperator::zero(IndexSpace space) {
    const u64 d = space.dim();
    if (d > (1ull << 11))
        throw DimensionCap("DensityOperator: dense matrices limited to D <= 2^11");
    return DensityOperator(std::move(space), std::vector<cd>(d * d, cd{0.0, 0.0}));
}

void DensityOperator::accumulate(double weight, const StateVector& psi) {
    if (!(psi.space() == space_)) throw SpaceMismatch("accumulate: spaces differ");
    const u64 d = space_.dim();
    const cd* v = psi.amps().data();
    for (u64 row = 0; row < d; ++row) {
        if (v[row] == cd{0.0, 0.0}) continue;
        const cd alpha = weight * v[row];
        // rho[row][col] += alpha * conj(v[col])
        cd* out = &matrix_[row * d];
        for (u64 col = 0; col < d; ++col) out[col] += alpha * std::conj(v[col]);
    }
}

double DensityOperator::trace() const {
    double t = 0.0;
    for (u64 i = 0; i < space_.dim(); ++i) t += matrix_[i * space_.dim() + i].real();
    return t;
}

DensityOperator density_from_ensemble(
    const std::vector<std::pair<double, StateVector>>& members) {
    if (members.empty()) throw BadDistribution("density_from_ensemble: empty ensemble");
    double total = 0.0;
    for (const auto& [p, psi] : members) {
        if (p < -1e-12) throw BadDistribution("density_from_ensemble: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw BadDistribution("density_from_ensemble: probabilities sum to " + std::to_string(total));
    DensityOperator rho = DensityOperator::zero(members.front().second.space());
    for (const auto& [p, psi] : members) rho.accumulate(p, psi);
    return rho;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    std::vector<u64> factors = a.space().factors();
    for (u64 f : b.space().factors()) factors.push_back(f);
    IndexSpace space(factors);
    const u64 da = a.dim(), db = b.dim();
    DensityOperator out = DensityOperator::zero(space);
    std::vector<cd>& m = const_cast<std::vector<cd>&>(out.matrix());
    for (u64 r1 = 0; r1 < da; ++r1)
        for (u64 c1 = 0; c1 < da; ++c1) {
            const cd v1 = a.entry(r1, c1);
            if (v1 == cd{0.0, 0.0}) continue;
            for (u64 r2 = 0; r2 < db; ++r2)
                for (u64 c2 = 0; c2 < db; ++c2)
                    m[(r1 * db + r2) * da * db + (c1 * db + c2)] += v1 * b.entry(r2, c2);
        }
    return out;
}

namespace {

Eigen::MatrixXcd to_eigen(const DensityOperator& rho) {
    const u64 d = rho.dim();
    Eigen::MatrixXcd m(d, d);
    for (u64 r = 0; r < d; ++r)
        for (u64 c = 0; c < d; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho.entry(r, c);
    // enforce Hermiticity before the solver; inputs are checked to 1e-9
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) throw BadParams("eigen: operator not Hermitian (deviation " + std::to_string(asym) + ")");
    return (m + m.adjoint()) / 2.0;
}

}  // namespace

std::vector<double> eigenvalues(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(rho),
                                                           Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

std::vector<std::pair<double, u64>> eigen_spectrum(const DensityOperator& rho) {
    const std::vector<double> ev = eigenvalues(rho);
    constexpr double kClusterTol = 1e-7;
    std::vector<std::pair<double, u64>> out;
    for (double v : ev) {
        if (v < -1e-9) throw BadParams("eigen_spectrum: negative eigenvalue " + std::to_string(v));
        if (!out.empty() && std::abs(out.back().first - v) <= kClusterTol) {
            // running mean keeps the cluster representative stable
            auto& [rep, count] = out.back();
            rep = (rep * static_cast<double>(count) + v) / static_cast<double>(count + 1);
            ++count;
        } else {
            out.emplace_back(v, 1);
        }
    }
    double weighted = 0.0;
    for (const auto& [v, c] : out) weighted += v * static_cast<double>(c);
    if (std::abs(weighted - rho.trace()) > 1e-8)
        throw BadParams("eigen_spectrum: weighted sum deviates from trace");
    return out;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch("trace_distance: spaces differ");
    const u64 d = a.dim();
    std::vector<cd> diff(d * d);
    for (u64 i = 0; i < d * d; ++i) diff[i] = a.matrix()[i] - b.matrix()[i];
    Eigen::MatrixXcd m(d, d);
    for (u64 r = 0; r < d; ++r)
        for (u64 c = 0; c < d; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = diff[r * d + c];
    m = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    double out = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        out += std::abs(solver.eigenvalues()[i]);
    return out;
}

}  // namespace edcp
