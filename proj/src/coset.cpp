#include "edcp/coset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

namespace edcp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CosetState::Phase canonical_phase(u64 modulus, u64 slope) {
    if (modulus == 0) throw BadParams("phase: zero modulus");
    slope %= modulus;
    if (slope == 0) return {1, 0};
    const u64 g = gcd_u64(slope, modulus);
    return {modulus / g, slope / g};
}

}  // namespace

// ---------------------------------------------------------------------------
// Params and challenger
// ---------------------------------------------------------------------------

EdcpParams::EdcpParams(std::size_t n_, Modulus q_, u64 r_, u64 p_)
    : n(n_), q(std::move(q_)), r(r_), p(p_) {
    validate();
}

bool EdcpParams::p_divides_q() const {
    for (const auto& [prime, exp] : q.factors)
        if (prime == p) return true;
    return false;
}

void EdcpParams::validate() const {
    if (n < 1) throw BadParams("params: n must be >= 1");
    if (r < 2) throw BadParams("params: r must be >= 2");
    if (r > q.q) throw BadParams("params: r must be <= q");
    if (!p_divides_q()) throw BadParams("params: p must be a prime divisor of q");
}

Challenger::Challenger(EdcpParams params, u64 seed) : rng_(seed) {
    params.validate();
    std::vector<u64> coords(params.n);
    for (auto& c : coords) c = rng_.uniform_below(params.q.q);
    ZqVector secret(params.q.q, std::move(coords));
    core_ = std::make_shared<const SecretCore>(SecretCore{std::move(params), std::move(secret)});
}

Challenger::Challenger(EdcpParams params, ZqVector secret, u64 seed) : rng_(seed) {
    params.validate();
    if (secret.q != params.q.q || secret.dim() != params.n)
        throw BadParams("challenger: secret shape mismatch");
    core_ = std::make_shared<const SecretCore>(SecretCore{std::move(params), std::move(secret)});
}

CosetState Challenger::sample(std::optional<u64> phase_t) {
    std::vector<u64> coords(params().n);
    for (auto& c : coords) c = rng_.uniform_below(params().q.q);
    return sample_with_offset(ZqVector(params().q.q, std::move(coords)), phase_t);
}

CosetState Challenger::sample_with_offset(ZqVector x, std::optional<u64> phase_t) {
    if (x.q != params().q.q || x.dim() != params().n)
        throw BadParams("sample: offset shape mismatch");
    if (phase_t && *phase_t >= params().p) throw BadParams("sample: phase t must be in [0, p)");
    CosetState st;
    st.core_ = core_;
    st.r_reg_ = params().r;
    st.offset_ = std::move(x);
    st.secret_shift_ = ZqVector::zero(params().q.q, params().n);
    st.support_ = {1, 0, params().r};
    st.phase_ = canonical_phase(params().p, phase_t.value_or(0));
    st.collapsed_ = false;
    st.valid_ = true;
    return st;
}

// ---------------------------------------------------------------------------
// CosetState basics
// ---------------------------------------------------------------------------

CosetState::CosetState(CosetState&& o) noexcept
    : core_(std::move(o.core_)),
      r_reg_(o.r_reg_),
      offset_(std::move(o.offset_)),
      secret_shift_(std::move(o.secret_shift_)),
      support_(o.support_),
      phase_(o.phase_),
      collapsed_(o.collapsed_),
      valid_(o.valid_) {
    o.valid_ = false;
}

CosetState& CosetState::operator=(CosetState&& o) noexcept {
    if (this != &o) {
        core_ = std::move(o.core_);
        r_reg_ = o.r_reg_;
        offset_ = std::move(o.offset_);
        secret_shift_ = std::move(o.secret_shift_);
        support_ = o.support_;
        phase_ = o.phase_;
        collapsed_ = o.collapsed_;
        valid_ = o.valid_;
        o.valid_ = false;
    }
    return *this;
}

void CosetState::require_valid() const {
    if (!valid_) throw StateAlreadyConsumed("coset state already consumed");
}

ZqVector CosetState::effective_secret() const { return sub(core_->secret, secret_shift_); }

// Internal access for the operation implementations.
struct CosetOps {
    static void require_valid(const CosetState& s) { s.require_valid(); }
    static void consume(CosetState& s) { s.valid_ = false; }
    static const ZqVector& offset(const CosetState& s) { return s.offset_; }
    static ZqVector eff_secret(const CosetState& s) { return s.effective_secret(); }
    static const std::shared_ptr<const SecretCore>& core(const CosetState& s) { return s.core_; }
    static u64 phase_cap(const CosetState& s) { return s.core_->params.q.q * s.core_->params.r; }

    static void compose_phase(CosetState& s, u64 modulus, u64 slope) {
        const CosetState::Phase add_p = canonical_phase(modulus, slope);
        if (add_p.modulus == 1) return;
        if (s.phase_.modulus == 1) {
            if (add_p.modulus > phase_cap(s))
                throw IncompatiblePhaseModulus("phase modulus exceeds q*r cap");
            s.phase_ = add_p;
            return;
        }
        const u64 m = lcm_u64(s.phase_.modulus, add_p.modulus);
        if (m > phase_cap(s)) throw IncompatiblePhaseModulus("phase modulus exceeds q*r cap");
        const u64 composed = (mul_mod(s.phase_.slope, m / s.phase_.modulus, m) +
                              mul_mod(add_p.slope, m / add_p.modulus, m)) %
                             m;
        s.phase_ = canonical_phase(m, composed);
    }

    static void set_support(CosetState& s, CosetState::Support sup) { s.support_ = sup; }
    static void set_register(CosetState& s, u64 r_reg) { s.r_reg_ = r_reg; }
    static void set_offset(CosetState& s, ZqVector x) { s.offset_ = std::move(x); }
    static void set_collapsed(CosetState& s) { s.collapsed_ = true; }
    static void add_shift(CosetState& s, const ZqVector& w) {
        s.secret_shift_ = add(s.secret_shift_, w);
    }

    // introspection-only duplication (adversary code cannot copy states)
    static CosetState clone(const CosetState& s) {
        CosetState out;
        out.core_ = s.core_;
        out.r_reg_ = s.r_reg_;
        out.offset_ = s.offset_;
        out.secret_shift_ = s.secret_shift_;
        out.support_ = s.support_;
        out.phase_ = s.phase_;
        out.collapsed_ = s.collapsed_;
        out.valid_ = true;
        return out;
    }

    static CosetState restore(std::shared_ptr<const SecretCore> core, u64 r_reg, ZqVector offset,
                              ZqVector shift, CosetState::Support sup, CosetState::Phase ph,
                              bool collapsed) {
        CosetState out;
        out.core_ = std::move(core);
        out.r_reg_ = r_reg;
        out.offset_ = std::move(offset);
        out.secret_shift_ = std::move(shift);
        out.support_ = sup;
        out.phase_ = ph;
        out.collapsed_ = collapsed;
        out.valid_ = true;
        return out;
    }

    // thin the support to indices i = i0 + period*i'
    static void thin_support(CosetState& s, u64 i0, u64 period, u64 new_count) {
        s.support_.base += s.support_.stride * i0;
        s.support_.stride *= period;
        s.support_.count = new_count;
        // the i0 part of the old phase becomes a global phase and is dropped
        s.phase_ = canonical_phase(
            s.phase_.modulus, mul_mod(s.phase_.slope, period % s.phase_.modulus, s.phase_.modulus));
    }
};

// ---------------------------------------------------------------------------
// Measurement of a linear function of the support index
// ---------------------------------------------------------------------------

namespace {

struct LinearOutcome {
    u64 value;
    u64 i0;
    u64 period;
    u64 count;
};

// Distribution of v(i) = (B + A*i) mod P over support indices i in [0, m).
// v is injective on [0, P/gcd(A, P)) and periodic after, so each outcome is a
// sub-progression of the support.
std::vector<LinearOutcome> linear_outcomes(u64 A, u64 B, u64 P, u64 m) {
    if (P == 0) throw BadParams("linear measurement: zero modulus");
    A %= P;
    B %= P;
    if (P == 1) return {{0, 0, 1, m}};
    const u64 g = A == 0 ? P : gcd_u64(A, P);
    const u64 period = P / g;
    std::vector<LinearOutcome> out;
    const u64 limit = std::min(m, period);
    out.reserve(limit);
    for (u64 i0 = 0; i0 < limit; ++i0) {
        const u64 value = (B + mul_mod(A, i0, P)) % P;
        const u64 count = (m - 1 - i0) / period + 1;
        out.push_back({value, i0, period, count});
    }
    return out;
}

const LinearOutcome& sample_outcome(const std::vector<LinearOutcome>& outcomes, u64 m, Rng& rng) {
    const u64 roll = rng.uniform_below(m);
    u64 acc = 0;
    for (const auto& o : outcomes) {
        acc += o.count;
        if (roll < acc) return o;
    }
    return outcomes.back();
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

StateVector to_dense(const CosetState& state) {
    CosetOps::require_valid(state);
    const EdcpParams& pr = state.params();
    const u64 m = state.support().count;
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    const CosetState::Phase ph = state.phase();

    auto amp_of = [&](u64 i) {
        const double ang = kTwoPi * static_cast<double>(mul_mod(ph.slope, i, ph.modulus)) /
                           static_cast<double>(ph.modulus);
        return cd{std::cos(ang) * norm, std::sin(ang) * norm};
    };

    if (state.second_collapsed()) {
        IndexSpace space({state.register_size()});
        std::vector<cd> amps(space.dim(), cd{0.0, 0.0});
        for (u64 i = 0; i < m; ++i) amps[state.support_j(i)] = amp_of(i);
        return StateVector(std::move(space), std::move(amps));
    }

    IndexSpace space = IndexSpace::coset_space(state.register_size(), pr.q.q, pr.n);
    std::vector<cd> amps(space.dim(), cd{0.0, 0.0});
    const ZqVector s_eff = CosetOps::eff_secret(state);
    const ZqVector& x = CosetOps::offset(state);
    std::vector<u64> digits(pr.n + 1);
    for (u64 i = 0; i < m; ++i) {
        const u64 j = state.support_j(i);
        digits[0] = j;
        for (std::size_t c = 0; c < pr.n; ++c)
            digits[c + 1] = (x.coords[c] + mul_mod(j % pr.q.q, s_eff.coords[c], pr.q.q)) % pr.q.q;
        amps[space.index_of(digits)] = amp_of(i);
    }
    return StateVector(std::move(space), std::move(amps));
}

namespace {

void check_reducible(const CosetState& state, u64 r_target) {
    CosetOps::require_valid(state);
    if (state.second_collapsed()) throw BadParams("reduce_r: second register already measured");
    const u64 r = state.register_size();
    const auto& sup = state.support();
    if (sup.stride != 1 || sup.base != 0 || sup.count != r)
        throw BadParams("reduce_r: requires a full-support state");
    if (r_target < 1 || r_target > r) throw BadParams("reduce_r: target out of range");
}

// Applies one measurement branch of the self-reduction. Indicator mode
// (r_target > r/2): branch 0 = projection onto j < r_target, branch 1 = the
// complement. Block mode: branch a < r/r_target = full block a (success),
// branch r/r_target = the short remainder.
ReduceOutcome apply_reduce_branch(CosetState state, u64 r_target, u64 branch) {
    const u64 r = state.register_size();
    if (r_target == r) return {true, 0, std::move(state)};

    if (2 * r_target > r) {
        if (branch == 0) {
            CosetOps::set_support(state, {1, 0, r_target});
            CosetOps::set_register(state, r_target);
            return {true, 0, std::move(state)};
        }
        CosetOps::set_support(state, {1, r_target, r - r_target});
        return {false, 0, std::move(state)};
    }

    const u64 full_blocks = r / r_target;
    if (branch < full_blocks) {
        const u64 shift = branch * r_target;
        // subtracting a*r' from the first register folds a*r'*s into the offset
        CosetOps::set_offset(
            state, add(CosetOps::offset(state), scalar_mul(shift, CosetOps::eff_secret(state))));
        CosetOps::set_support(state, {1, 0, r_target});
        CosetOps::set_register(state, r_target);
        return {true, branch, std::move(state)};
    }
    CosetOps::set_support(state, {1, full_blocks * r_target, r - full_blocks * r_target});
    return {false, full_blocks, std::move(state)};
}

}  // namespace

ReduceOutcome reduce_r(CosetState state, u64 r_target, Rng& rng) {
    check_reducible(state, r_target);
    const u64 r = state.register_size();
    if (r_target == r) return {true, 0, std::move(state)};
    u64 branch;
    if (2 * r_target > r) {
        branch = rng.bernoulli(static_cast<double>(r_target) / static_cast<double>(r)) ? 0 : 1;
    } else {
        branch = rng.uniform_below(r) / r_target;  // each full block has mass r'/r
    }
    return apply_reduce_branch(std::move(state), r_target, branch);
}

SampleStats sample_reduced(Challenger& challenger, u64 r_target, std::optional<u64> phase_t,
                           int max_attempts) {
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        ReduceOutcome out = reduce_r(challenger.sample(phase_t), r_target, challenger.rng());
        if (out.success) return {std::move(out.state), attempt};
    }
    throw ReductionFailed("sample_reduced: no success within attempt budget");
}

ProjectOutcome project_j_mod(CosetState state, u64 p, int k, Rng& rng) {
    CosetOps::require_valid(state);
    if (k < 0) throw BadParams("project_j_mod: negative exponent");
    if (k == 0) return {0, std::move(state)};
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    if (pk > state.register_size()) throw BadParams("project_j_mod: p^k exceeds register size");
    const auto& sup = state.support();
    const auto outcomes = linear_outcomes(sup.stride % pk, sup.base % pk, pk, sup.count);
    const LinearOutcome o = sample_outcome(outcomes, sup.count, rng);
    CosetOps::thin_support(state, o.i0, o.period, o.count);
    return {o.value, std::move(state)};
}

CosetState adversary_phase(CosetState state, u64 modulus, u64 slope, u64 /*intercept*/) {
    CosetOps::require_valid(state);
    // w_M^{a*j} with j = base + stride*i: the base part is a global phase
    CosetOps::compose_phase(
        state, modulus, mul_mod(slope % modulus, state.support().stride % modulus, modulus));
    return state;
}

CosetState content_phase(CosetState state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 scale) {
    CosetOps::require_valid(state);
    if (state.second_collapsed()) throw BadParams("content_phase: second register gone");
    if (coord >= state.params().n) throw BadParams("content_phase: coordinate out of range");
    const ZqVector s_eff = CosetOps::eff_secret(state);
    // (x_c + j*(s_c - u))*scale: the x_c part is global; the j-slope is (s_c - u)*scale
    const u64 delta = (s_eff.coords[coord] % modulus + modulus - subtract % modulus) % modulus;
    const u64 j_slope = mul_mod(delta, scale % modulus, modulus);
    CosetOps::compose_phase(state, modulus,
                            mul_mod(j_slope, state.support().stride % modulus, modulus));
    return state;
}

CosetState shift_secret(CosetState state, const ZqVector& w) {
    CosetOps::require_valid(state);
    if (state.second_collapsed()) throw BadParams("shift_secret: second register gone");
    if (w.q != state.params().q.q || w.dim() != state.params().n)
        throw BadParams("shift_secret: shape mismatch");
    CosetOps::add_shift(state, w);
    return state;
}

FullOutcome measure_full(CosetState state, Rng& rng) {
    CosetOps::require_valid(state);
    const u64 i = rng.uniform_below(state.support().count);
    const u64 j = state.support_j(i);
    FullOutcome out;
    out.j = j;
    if (!state.second_collapsed()) {
        const ZqVector s_eff = CosetOps::eff_secret(state);
        out.y = add(CosetOps::offset(state), scalar_mul(j, s_eff));
    }
    CosetOps::consume(state);
    return out;
}

AuxOutcome measure_linear_aux(CosetState state, std::size_t coord, u64 modulus, u64 subtract,
                              Rng& rng) {
    CosetOps::require_valid(state);
    if (state.second_collapsed()) throw BadParams("measure_linear_aux: second register gone");
    if (coord >= state.params().n) throw BadParams("measure_linear_aux: coordinate out of range");
    const ZqVector s_eff = CosetOps::eff_secret(state);
    const ZqVector& x = CosetOps::offset(state);
    const u64 P = modulus;
    // auxiliary register holds x_c + j*(s_c - u) over j = base + stride*i
    const u64 delta = (s_eff.coords[coord] % P + P - subtract % P) % P;
    const u64 A = mul_mod(state.support().stride % P, delta, P);
    const u64 B = (x.coords[coord] % P + mul_mod(state.support().base % P, delta, P)) % P;
    const auto outcomes = linear_outcomes(A, B, P, state.support().count);
    const LinearOutcome o = sample_outcome(outcomes, state.support().count, rng);
    CosetOps::thin_support(state, o.i0, o.period, o.count);
    return {o.value, std::move(state)};
}

SecondFourierOutcome measure_second_fourier(CosetState state, Rng& rng) {
    CosetOps::require_valid(state);
    if (state.second_collapsed()) throw BadParams("measure_second_fourier: already measured");
    const EdcpParams& pr = state.params();
    // Fourier-basis outcomes on the second register are exactly uniform: the
    // first register labels the support points, so their images never
    // interfere.
    std::vector<u64> coords(pr.n);
    for (auto& c : coords) c = rng.uniform_below(pr.q.q);
    ZqVector u(pr.q.q, std::move(coords));
    const u64 w = inner_product(u, CosetOps::eff_secret(state));
    CosetOps::compose_phase(state, pr.q.q, mul_mod(w, state.support().stride % pr.q.q, pr.q.q));
    CosetOps::set_collapsed(state);
    return {std::move(u), std::move(state)};
}

namespace inspect {

std::vector<std::pair<u64, double>> project_distribution(const CosetState& state, u64 p, int k) {
    CosetOps::require_valid(state);
    if (k == 0) return {{0, 1.0}};
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    const auto& sup = state.support();
    std::vector<std::pair<u64, double>> out;
    for (const auto& o : linear_outcomes(sup.stride % pk, sup.base % pk, pk, sup.count))
        out.emplace_back(o.value, static_cast<double>(o.count) / static_cast<double>(sup.count));
    return out;
}

std::vector<std::pair<u64, double>> aux_distribution(const CosetState& state, std::size_t coord,
                                                     u64 modulus, u64 subtract) {
    CosetOps::require_valid(state);
    const ZqVector s_eff = CosetOps::eff_secret(state);
    const ZqVector& x = CosetOps::offset(state);
    const u64 P = modulus;
    const u64 delta = (s_eff.coords[coord] % P + P - subtract % P) % P;
    const u64 A = mul_mod(state.support().stride % P, delta, P);
    const u64 B = (x.coords[coord] % P + mul_mod(state.support().base % P, delta, P)) % P;
    std::vector<std::pair<u64, double>> out;
    for (const auto& o : linear_outcomes(A, B, P, state.support().count))
        out.emplace_back(o.value,
                         static_cast<double>(o.count) / static_cast<double>(state.support().count));
    return out;
}

std::vector<double> first_qft_inv_distribution(const CosetState& state) {
    CosetOps::require_valid(state);
    const u64 r = state.register_size();
    const u64 m = state.support().count;
    const CosetState::Phase ph = state.phase();

    // Buckets of support indices entangled with the same second-register
    // value; distinct buckets add incoherently. A collapsed state is a single
    // coherent bucket.
    std::map<std::vector<u64>, std::vector<u64>> groups;
    if (state.second_collapsed()) {
        std::vector<u64> all(m);
        for (u64 i = 0; i < m; ++i) all[i] = i;
        groups[{}] = std::move(all);
    } else {
        const EdcpParams& pr = state.params();
        const ZqVector s_eff = CosetOps::eff_secret(state);
        const ZqVector& x = CosetOps::offset(state);
        for (u64 i = 0; i < m; ++i) {
            const u64 j = state.support_j(i);
            std::vector<u64> key(pr.n);
            for (std::size_t c = 0; c < pr.n; ++c)
                key[c] = (x.coords[c] + mul_mod(j % pr.q.q, s_eff.coords[c], pr.q.q)) % pr.q.q;
            groups[key].push_back(i);
        }
    }

    std::vector<double> probs(r, 0.0);
    for (u64 k = 0; k < r; ++k) {
        double total = 0.0;
        for (const auto& [key, members] : groups) {
            cd acc{0.0, 0.0};
            for (u64 i : members) {
                const u64 j = state.support_j(i);
                const double ang =
                    kTwoPi * (static_cast<double>(mul_mod(ph.slope, i, ph.modulus)) /
                                  static_cast<double>(ph.modulus) -
                              static_cast<double>(mul_mod(j % r, k, r)) / static_cast<double>(r));
                acc += cd{std::cos(ang), std::sin(ang)};
            }
            total += std::norm(acc);
        }
        probs[k] = total / (static_cast<double>(m) * static_cast<double>(r));
    }
    return probs;
}

std::vector<std::pair<FullOutcome, double>> full_distribution(const CosetState& state) {
    CosetOps::require_valid(state);
    const u64 m = state.support().count;
    std::vector<std::pair<FullOutcome, double>> out;
    const ZqVector s_eff = CosetOps::eff_secret(state);
    for (u64 i = 0; i < m; ++i) {
        FullOutcome fo;
        fo.j = state.support_j(i);
        if (!state.second_collapsed())
            fo.y = add(CosetOps::offset(state), scalar_mul(fo.j, s_eff));
        out.emplace_back(std::move(fo), 1.0 / static_cast<double>(m));
    }
    return out;
}

double reduce_success_probability(const CosetState& state, u64 r_target) {
    const u64 r = state.register_size();
    if (r_target > r) throw BadParams("reduce_success_probability: target out of range");
    if (2 * r_target > r) return static_cast<double>(r_target) / static_cast<double>(r);
    return static_cast<double>((r / r_target) * r_target) / static_cast<double>(r);
}

std::vector<ReduceBranch> reduce_branches(const CosetState& state, u64 r_target) {
    check_reducible(state, r_target);
    const u64 r = state.register_size();
    std::vector<ReduceBranch> out;
    if (r_target == r) {
        ReduceOutcome res = apply_reduce_branch(CosetOps::clone(state), r_target, 0);
        out.push_back({1.0, res.success, res.block, std::move(res.state)});
        return out;
    }
    const double rd = static_cast<double>(r);
    if (2 * r_target > r) {
        for (u64 b = 0; b < 2; ++b) {
            ReduceOutcome res = apply_reduce_branch(CosetOps::clone(state), r_target, b);
            const double prob =
                b == 0 ? static_cast<double>(r_target) / rd : static_cast<double>(r - r_target) / rd;
            out.push_back({prob, res.success, res.block, std::move(res.state)});
        }
        return out;
    }
    const u64 full_blocks = r / r_target;
    const u64 rem = r - full_blocks * r_target;
    for (u64 b = 0; b <= full_blocks; ++b) {
        if (b == full_blocks && rem == 0) break;
        ReduceOutcome res = apply_reduce_branch(CosetOps::clone(state), r_target, b);
        const double prob =
            (b < full_blocks ? static_cast<double>(r_target) : static_cast<double>(rem)) / rd;
        out.push_back({prob, res.success, res.block, std::move(res.state)});
    }
    return out;
}

}  // namespace inspect

const ZqVector& challenger_secret_of(const CosetState& state) {
    CosetOps::require_valid(state);
    return CosetOps::core(state)->secret;
}

CosetState restore_coset_state(const Challenger& challenger, u64 r_reg, ZqVector offset,
                               ZqVector secret_shift, CosetState::Support support,
                               CosetState::Phase phase, bool collapsed) {
    const EdcpParams& pr = challenger.params();
    if (offset.dim() != pr.n || offset.q != pr.q.q)
        throw BadParams("restore: offset shape mismatch");
    if (secret_shift.dim() != pr.n || secret_shift.q != pr.q.q)
        throw BadParams("restore: shift shape mismatch");
    if (support.count == 0 || support.base + support.stride * (support.count - 1) >= r_reg)
        throw BadParams("restore: support exceeds register");
    return CosetOps::restore(challenger.core(), r_reg, std::move(offset), std::move(secret_shift),
                             support, canonical_phase(phase.modulus, phase.slope), collapsed);
}

u64 measure_first_qft_inv(CosetState state, Rng& rng) {
    const std::vector<double> probs = inspect::first_qft_inv_distribution(state);
    double roll = rng.uniform_real();
    u64 outcome = probs.size() - 1;
    for (u64 k = 0; k < probs.size(); ++k) {
        if (roll < probs[k]) {
            outcome = k;
            break;
        }
        roll -= probs[k];
    }
    CosetOps::consume(state);
    return outcome;
}

}  // namespace edcp
