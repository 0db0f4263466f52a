#include "edcp/dense_oracle.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace edcp::dense_oracle {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cd unit_phase(u64 num, u64 den) {
    const double ang = kTwoPi * static_cast<double>(num % den) / static_cast<double>(den);
    return {std::cos(ang), std::sin(ang)};
}
}  // namespace

StateVector sample_state(const EdcpParams& params, const ZqVector& secret, const ZqVector& x,
                         std::optional<u64> phase_t) {
    IndexSpace space = IndexSpace::coset_space(params.r, params.q.q, params.n);
    std::vector<cd> amps(space.dim(), cd{0.0, 0.0});
    const double norm = 1.0 / std::sqrt(static_cast<double>(params.r));
    const u64 t = phase_t.value_or(0);
    std::vector<u64> digits(params.n + 1);
    for (u64 j = 0; j < params.r; ++j) {
        digits[0] = j;
        for (std::size_t c = 0; c < params.n; ++c)
            digits[c + 1] = (x.coords[c] + mul_mod(j % params.q.q, secret.coords[c], params.q.q)) %
                            params.q.q;
        amps[space.index_of(digits)] = norm * unit_phase(mul_mod(j, t, params.p), params.p);
    }
    return StateVector(std::move(space), std::move(amps));
}

DensityOperator ensemble_density(const EdcpParams& params, const ZqVector& secret,
                                 std::optional<u64> phase_t) {
    const u64 q = params.q.q;
    u64 total = 1;
    for (std::size_t i = 0; i < params.n; ++i) total *= q;
    DensityOperator rho =
        DensityOperator::zero(IndexSpace::coset_space(params.r, q, params.n));
    std::vector<u64> coords(params.n, 0);
    const double w = 1.0 / static_cast<double>(total);
    for (u64 e = 0; e < total; ++e) {
        u64 rest = e;
        for (std::size_t c = 0; c < params.n; ++c) {
            coords[c] = rest % q;
            rest /= q;
        }
        rho.accumulate(w, sample_state(params, secret, ZqVector(q, coords), phase_t));
    }
    return rho;
}

ForcedOutcome reduce_r_forced(StateVector& state, u64 r_target, bool success, u64 block) {
    const u64 r = state.space().factor(0);
    if (r_target == r) return {1.0};
    if (2 * r_target > r) {
        // indicator f(j) = [j < r_target]
        auto fn = [&](u64 idx) { return state.space().digit(idx, 0) < r_target ? 1ull : 0ull; };
        const double p = state.collapse_function(fn, success ? 1 : 0);
        if (success) state.embed_register(0, r_target);
        return {p};
    }
    const u64 full_blocks = r / r_target;
    auto fn = [&](u64 idx) {
        const u64 j = state.space().digit(idx, 0);
        return std::min(j / r_target, full_blocks);
    };
    const u64 outcome = success ? block : full_blocks;
    const double p = state.collapse_function(fn, outcome);
    if (success) {
        state.shift_register(0, -static_cast<long long>(outcome * r_target));
        state.embed_register(0, r_target);
    }
    return {p};
}

ForcedOutcome project_forced(StateVector& state, u64 p, int k, u64 outcome) {
    if (k == 0) return {1.0};
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    auto fn = [&](u64 idx) { return state.space().digit(idx, 0) % pk; };
    return {state.collapse_function(fn, outcome)};
}

ForcedOutcome aux_forced(StateVector& state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 outcome) {
    auto fn = [&](u64 idx) {
        const u64 j = state.space().digit(idx, 0);
        const u64 y = state.space().digit(idx, coord + 1);
        return (y % modulus + modulus - mul_mod(j % modulus, subtract % modulus, modulus)) % modulus;
    };
    return {state.collapse_function(fn, outcome)};
}

ForcedOutcome second_fourier_forced(StateVector& state, const ZqVector& u) {
    state.apply_qft_second_block(StateVector::Direction::Forward);
    double p = 1.0;
    for (std::size_t c = 0; c < u.dim(); ++c) p *= state.collapse_register(c + 1, u.coords[c]);
    // measured registers hold a basis value; drop them
    for (std::size_t c = u.dim(); c-- > 0;) {
        state.shift_register(c + 1, -static_cast<long long>(u.coords[c]));
        state.embed_register(c + 1, 1);
    }
    IndexSpace first({state.space().factor(0)});
    StateVector out(first, state.amps());
    state = std::move(out);
    return {p};
}

std::vector<double> first_qft_inv_distribution(const StateVector& state) {
    // Discard every register but the first (measure-and-discard is equivalent
    // for the surviving statistics), then inverse-QFT it and read the Born
    // distribution.
    const u64 r = state.space().factor(0);
    const u64 stride = state.space().stride(0);  // size of the discarded block
    const double norm = 1.0 / std::sqrt(static_cast<double>(r));
    std::vector<double> probs(r, 0.0);
    std::vector<cd> sub(r);
    for (u64 rest = 0; rest < stride; ++rest) {
        for (u64 j = 0; j < r; ++j) sub[j] = state.amp(j * stride + rest);
        for (u64 k = 0; k < r; ++k) {
            cd acc{0.0, 0.0};
            for (u64 j = 0; j < r; ++j) acc += sub[j] * unit_phase(r - mul_mod(j, k, r) % r, r);
            probs[k] += std::norm(acc * norm);
        }
    }
    return probs;
}

ForcedOutcome first_qft_inv_forced(const StateVector& state, u64 outcome) {
    return {first_qft_inv_distribution(state)[outcome]};
}

ForcedOutcome full_forced(StateVector& state, u64 j, const ZqVector& y) {
    double p = state.collapse_register(0, j);
    for (std::size_t c = 0; c < y.dim(); ++c) p *= state.collapse_register(c + 1, y.coords[c]);
    return {p};
}

void apply_first_register_phase(StateVector& state, u64 modulus, u64 slope, u64 intercept) {
    const u64 dim = state.dim();
    std::vector<cd> phase(dim);
    for (u64 idx = 0; idx < dim; ++idx) {
        const u64 j = state.space().digit(idx, 0);
        phase[idx] = unit_phase(mul_mod(slope % modulus, j % modulus, modulus) + intercept % modulus,
                                modulus);
    }
    state.apply_diagonal_phase(phase);
}

void apply_content_phase(StateVector& state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 scale) {
    const u64 dim = state.dim();
    std::vector<cd> phase(dim);
    for (u64 idx = 0; idx < dim; ++idx) {
        const u64 j = state.space().digit(idx, 0);
        const u64 y = state.space().digit(idx, coord + 1);
        const u64 value =
            (y % modulus + modulus - mul_mod(j % modulus, subtract % modulus, modulus)) % modulus;
        phase[idx] = unit_phase(mul_mod(value, scale % modulus, modulus), modulus);
    }
    state.apply_diagonal_phase(phase);
}

void apply_secret_shift(StateVector& state, const ZqVector& w) { state.apply_multiply_add(w, -1); }

}  // namespace edcp::dense_oracle
