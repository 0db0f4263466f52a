#include "edcp/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edcp/dense_oracle.hpp"

namespace edcp {

namespace {

u64 ipow(u64 base, int e) {
    u64 out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

int valuation(u64 value, u64 p) {
    if (value == 0) return INT32_MAX;
    int v = 0;
    while (value % p == 0) {
        value /= p;
        ++v;
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

bool PerfectHybridOracle::classify_level(CosetState state, int t, Rng&) {
    charge_query();
    // the support stride of a level-k sample is a k-fold prime power; count
    // prime factors with multiplicity
    u64 stride = state.support().stride;
    int v = 0;
    for (u64 d = 2; d * d <= stride; ++d)
        while (stride % d == 0) {
            stride /= d;
            ++v;
        }
    if (stride > 1) ++v;
    return v >= t;
}

StatisticalHybridOracle::StatisticalHybridOracle(const EdcpParams& params, u64 r_reduced)
    : r_(r_reduced) {
    u64 rest = r_reduced;
    while (rest % params.p == 0) rest /= params.p;
    if (rest != 1)
        throw BadParams("statistical hybrid oracle: reduced r must be a power of p");
    double qn = 1.0;
    for (std::size_t i = 0; i < params.n; ++i) qn *= static_cast<double>(params.q.q);
    p_n_ = qn * static_cast<double>(params.p) / (static_cast<double>(params.p) - 1.0);
}

bool StatisticalHybridOracle::classify_level(CosetState state, int t, Rng& rng) {
    charge_query();
    const u64 p = state.params().p;
    const u64 grid = r_ / ipow(p, t - 1);  // level t-1 outcomes stay on this grid
    auto sf = measure_second_fourier(std::move(state), rng);
    bool u_zero = true;
    for (u64 c : sf.u.coords)
        if (c != 0) u_zero = false;
    const u64 k = measure_first_qft_inv(std::move(sf.state), rng);
    return u_zero && grid != 0 && (k % grid) != 0;
}

bool SyntheticLevelOracle::classify_level(CosetState state, int t, Rng& rng) {
    charge_query();
    const int v = valuation(state.support().stride, p_);
    if (t == only_) return v >= t;
    return rng.bernoulli(0.5);
}

bool PerfectPhaseOracle::classify_phased(CosetState state, Rng&) {
    charge_query();
    return state.phase().modulus != 1;
}

StatisticalPhaseOracle::StatisticalPhaseOracle(const EdcpParams& params) {
    if (params.r % params.p != 0)
        throw BadParams("statistical phase oracle: requires p | r");
    double qn = 1.0;
    for (std::size_t i = 0; i < params.n; ++i) qn *= static_cast<double>(params.q.q);
    p_n_ = qn;
}

bool StatisticalPhaseOracle::classify_phased(CosetState state, Rng& rng) {
    charge_query();
    auto sf = measure_second_fourier(std::move(state), rng);
    bool u_zero = true;
    for (u64 c : sf.u.coords)
        if (c != 0) u_zero = false;
    const u64 k = measure_first_qft_inv(std::move(sf.state), rng);
    return u_zero && k != 0;
}

// ---------------------------------------------------------------------------
// Amplification
// ---------------------------------------------------------------------------

bool distinguishable(const std::function<bool()>& test_trial,
                     const std::function<bool()>& reference_trial, int n, double p_n) {
    const u64 m = amplify_sample_count(n, p_n);
    u64 hits_test = 0, hits_ref = 0;
    for (u64 i = 0; i < m; ++i) {
        if (test_trial()) ++hits_test;
        if (reference_trial()) ++hits_ref;
    }
    const double gap = std::abs(static_cast<double>(hits_test) - static_cast<double>(hits_ref));
    return gap >= static_cast<double>(m) / (2.0 * p_n);
}

// ---------------------------------------------------------------------------
// Hybrid search-to-decision
// ---------------------------------------------------------------------------

int find_critical_t(HybridOracle& oracle, const LevelSource& source, u64 p, int h, int n,
                    Rng& rng) {
    (void)p;
    const double p_n = oracle.advantage_denominator();
    for (int t = 1; t <= h; ++t) {
        auto test = [&] { return oracle.classify_level(source(t), t, rng); };
        auto ref = [&] { return oracle.classify_level(source(t - 1), t, rng); };
        if (distinguishable(test, ref, std::max(n, 8), p_n)) return t;
    }
    throw NoGapFound("find_critical_t: oracle distinguishes no neighboring levels");
}

bool hybrid_digit_test(CosetState state, std::size_t coord, int digit_pos, u64 candidate,
                       u64 known_part, int t, u64 p, int e, HybridOracle& oracle, Rng& rng) {
    if (t + digit_pos - 1 > e)
        throw LevelOverflow("hybrid_digit_test: t + k - 1 exceeds the exponent of p in q");
    const u64 P = ipow(p, t + digit_pos - 1);
    const u64 subtract = (known_part + candidate * ipow(p, digit_pos - 1)) % P;
    AuxOutcome out = measure_linear_aux(std::move(state), coord, P, subtract, rng);
    // matching digit leaves the sample at level t-1; a mismatch thins it to level t
    return !oracle.classify_level(std::move(out.state), t, rng);
}

namespace {

// Largest valid reduced superposition length for the hybrid reduction.
u64 choose_r_reduced(const EdcpParams& params) {
    const u64 r = params.r;
    std::size_t k = 0;
    u64 min_pe = UINT64_MAX;
    for (const auto& [p, e] : params.q.factors) {
        if (p < r) ++k;
        min_pe = std::min(min_pe, ipow(p, e));
    }
    for (u64 cand = std::min(r, min_pe); cand >= 2; --cand) {
        // cand^k <= r, checked without overflow
        bool ok = true;
        u64 acc = 1;
        for (std::size_t i = 0; i < k; ++i) {
            if (acc > r / cand) {
                ok = false;
                break;
            }
            acc *= cand;
        }
        if (ok && acc <= r) return cand;
    }
    throw BadParams("hybrid search: no valid reduced r (constraint (r')^k <= r unsatisfiable)");
}

// A matching digit leaves every repetition at level t-1 (the oracle never
// fires); a mismatch fires it with rate only 1/p_n. The acceptance threshold
// therefore sits halfway into that gap rather than at 1/2.
bool majority_digit_test(Challenger& challenger, u64 r_reduced, u64 p, int t, std::size_t coord,
                         int digit_pos, u64 candidate, u64 known_part, int e,
                         HybridOracle& oracle, int repeats, Rng& rng) {
    int votes = 0;
    for (int i = 0; i < repeats; ++i) {
        CosetState sample = sample_reduced(challenger, r_reduced).state;
        if (t > 1) sample = project_j_mod(std::move(sample), p, t - 1, rng).state;
        if (hybrid_digit_test(std::move(sample), coord, digit_pos, candidate, known_part, t, p, e,
                              oracle, rng))
            ++votes;
    }
    const double threshold = 1.0 - 0.5 / oracle.advantage_denominator();
    return static_cast<double>(votes) >= threshold * static_cast<double>(repeats);
}

}  // namespace

ZqVector search_via_hybrid(HybridOracle& oracle, Challenger& challenger,
                           const SearchOptions& opts) {
    const EdcpParams& params = challenger.params();
    const u64 q = params.q.q;
    Rng& rng = challenger.rng();
    const u64 r_reduced = opts.force_r_reduced.value_or(choose_r_reduced(params));
    const int repeats =
        oracle.is_perfect()
            ? 1
            : std::max<int>(opts.majority_repeats,
                            static_cast<int>(amplify_sample_count(6, oracle.advantage_denominator())));

    std::vector<std::pair<u64, ZqVector>> residues;  // (p^{e-t+1}, s mod that) per prime
    u64 v = 1;
    for (const auto& [p, e] : params.q.factors) {
        int h = 0;
        while (ipow(p, h) < r_reduced) ++h;  // smallest h with r' <= p^h
        if (h == 0) h = 1;
        LevelSource source = [&](int level) {
            CosetState st = sample_reduced(challenger, r_reduced).state;
            if (level > 0) st = project_j_mod(std::move(st), p, level, rng).state;
            return st;
        };
        const int t = h == 1 ? 1 : find_critical_t(oracle, source, p, h, 8, rng);
        const int digits = e - t + 1;
        const u64 P = ipow(p, digits);
        std::vector<u64> coords(params.n, 0);
        for (std::size_t coord = 0; coord < params.n; ++coord) {
            u64 known = 0;
            for (int k = 1; k <= digits; ++k) {
                bool found = false;
                for (u64 a = 0; a < p && !found; ++a) {
                    if (majority_digit_test(challenger, r_reduced, p, t, coord, k, a, known, e,
                                            oracle, repeats, rng)) {
                        known += a * ipow(p, k - 1);
                        found = true;
                    }
                }
                if (!found)
                    throw ReductionFailed("hybrid search: no digit candidate accepted");
            }
            coords[coord] = known % P;
        }
        residues.emplace_back(P, ZqVector(P, coords));
        v *= P;
    }

    ZqVector partial = residues.size() == 1 ? residues.front().second : crt_reconstruct(residues);
    ZqVector candidate = partial.reduced(q);

    if (v < q) {
        // Fourier stage: shift off the known part, reduce to q' = q/v, then
        // read linear equations <u, (s - partial)/v> mod q'.
        const u64 q_prime = q / v;
        Modulus q_prime_mod(q_prime);
        std::vector<LinearEquation> equations;
        std::optional<ZqVector> z;
        for (int round = 0; round < opts.equation_rounds && !z; ++round) {
            for (std::size_t i = 0; i < 4 * params.n; ++i) {
                CosetState st(challenger.sample());
                st = shift_secret(std::move(st), candidate);
                ReduceOutcome red = reduce_r(std::move(st), q_prime, rng);
                int guard = 0;
                while (!red.success) {
                    if (++guard > 64) throw ReductionFailed("hybrid search: reduction stalled");
                    CosetState retry = shift_secret(challenger.sample(), candidate);
                    red = reduce_r(std::move(retry), q_prime, rng);
                }
                SecondFourierOutcome sf = measure_second_fourier(std::move(red.state), rng);
                const u64 w = measure_first_qft_inv(std::move(sf.state), rng);
                equations.push_back({sf.u.reduced(q_prime), w});
            }
            try {
                z = solve_linear_mod(equations, q_prime_mod);
            } catch (const InconsistentSystem&) {
                throw ReductionFailed("hybrid search: inconsistent Fourier equations");
            }
        }
        if (!z) throw ReductionFailed("hybrid search: Fourier stage stayed underdetermined");
        for (std::size_t c = 0; c < params.n; ++c)
            candidate.coords[c] = (candidate.coords[c] + v * z->coords[c]) % q;
    }

    if (!verify_candidate(challenger, candidate, opts.verify_trials))
        throw ReductionFailed("hybrid search: candidate failed verification");
    return candidate;
}

// ---------------------------------------------------------------------------
// Phase search-to-decision
// ---------------------------------------------------------------------------

namespace {

bool majority_phase_test(Challenger& challenger, std::size_t coord, u64 P, u64 subtract, u64 p,
                         PhaseOracle& oracle, int repeats, Rng& rng) {
    // true when the transformed sample still looks unphased (digit match);
    // same gap-splitting threshold as the hybrid digit test
    int unphased_votes = 0;
    for (int i = 0; i < repeats; ++i) {
        const u64 c = 1 + rng.uniform_below(p - 1);
        CosetState st = content_phase(challenger.sample(), coord, P, subtract, c);
        if (!oracle.classify_phased(std::move(st), rng)) ++unphased_votes;
    }
    const double threshold = 1.0 - 0.5 / oracle.advantage_denominator();
    return static_cast<double>(unphased_votes) >= threshold * static_cast<double>(repeats);
}

}  // namespace

ZqVector search_via_phase(PhaseOracle& oracle, Challenger& challenger,
                          const SearchOptions& opts) {
    const EdcpParams& params = challenger.params();
    const u64 q = params.q.q;
    Rng& rng = challenger.rng();
    const int repeats =
        oracle.is_perfect()
            ? 1
            : std::max<int>(opts.majority_repeats,
                            static_cast<int>(amplify_sample_count(6, oracle.advantage_denominator())));

    std::vector<std::pair<u64, ZqVector>> residues;
    for (const auto& [p, e] : params.q.factors) {
        const u64 P_full = ipow(p, e);
        std::vector<u64> coords(params.n, 0);
        for (std::size_t coord = 0; coord < params.n; ++coord) {
            u64 known = 0;
            for (int k = 0; k < e; ++k) {
                const u64 P = ipow(p, k + 1);
                bool found = false;
                for (u64 y = 0; y < p && !found; ++y) {
                    const u64 subtract = (known + y * ipow(p, k)) % P;
                    if (majority_phase_test(challenger, coord, P, subtract, p, oracle, repeats,
                                            rng)) {
                        known += y * ipow(p, k);
                        found = true;
                    }
                }
                if (!found) throw ReductionFailed("phase search: no digit candidate accepted");
            }
            coords[coord] = known % P_full;
        }
        residues.emplace_back(P_full, ZqVector(P_full, coords));
    }

    ZqVector partial = residues.size() == 1 ? residues.front().second : crt_reconstruct(residues);
    ZqVector candidate = partial.reduced(q);
    if (!verify_candidate(challenger, candidate, opts.verify_trials))
        throw ReductionFailed("phase search: candidate failed verification");
    return candidate;
}

bool verify_candidate(Challenger& challenger, const ZqVector& candidate, int trials) {
    Rng& rng = challenger.rng();
    for (int i = 0; i < trials; ++i) {
        CosetState st = shift_secret(challenger.sample(), candidate);
        if (measure_first_qft_inv(std::move(st), rng) != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Shifted-LWE extraction
// ---------------------------------------------------------------------------

namespace {

std::vector<double> centered_gaussian_weights(u64 r, double lambda) {
    const long long C = static_cast<long long>((r - 1) / 2);
    std::vector<double> g(r);
    for (u64 i = 0; i < r; ++i) {
        const long long centered = static_cast<long long>(i) - C;
        g[i] = gaussian_weight(lambda, static_cast<double>(centered));
    }
    return g;
}

struct PhaseAsQ {
    u64 t_q;  // the state's phase slope seen as w_q^{t_q j}
};

PhaseAsQ phase_in_q(const CosetState& state) {
    const u64 q = state.params().q.q;
    const auto ph = state.phase();
    if (q % ph.modulus != 0)
        throw BadParams("extract: state phase modulus does not divide q");
    return {mul_mod(ph.slope % q, q / ph.modulus, q)};
}

ExtractResult extract_impl(CosetState state, double lambda, Rng& rng, u64 shift_scale) {
    const EdcpParams params = state.params();
    const u64 q = params.q.q;
    const u64 r = state.register_size();
    const auto& sup = state.support();
    if (state.second_collapsed() || sup.stride != 1 || sup.base != 0 || sup.count != r)
        throw BadParams("extract: requires a fresh full-support sample");

    // Gaussian reshape of the centered first register, accepted with
    // probability ||eps||_2^2.
    const double accept = extract_accept_probability(r, lambda);
    if (!rng.bernoulli(accept)) return {false, {}};

    // Fourier-measure the second register: outcome a is uniform and the
    // surviving phase slope encodes theta0 = <a, s> + t as w_q^{j*theta0}.
    SecondFourierOutcome sf = measure_second_fourier(std::move(state), rng);
    const u64 theta0 = phase_in_q(sf.state).t_q;

    // First-register Fourier measurement: Pr[y] = err[(theta0 + y) mod q]
    // where err is the squared Fourier mass of the reshaped Gaussian.
    const std::vector<double> err = extract_error_distribution(r, q, lambda);
    double roll = rng.uniform_real();
    u64 e = q - 1;
    for (u64 cand = 0; cand < q; ++cand) {
        if (roll < err[cand]) {
            e = cand;
            break;
        }
        roll -= err[cand];
    }
    const u64 y = (e + q - theta0 % q) % q;

    ExtractResult out;
    out.success = true;
    out.sample.a = sub(ZqVector::zero(q, params.n), sf.u);
    out.sample.b = y;
    out.sample.shift_scale = shift_scale;
    return out;
}

}  // namespace

double extract_accept_probability(u64 r, double lambda) {
    const std::vector<double> g = centered_gaussian_weights(r, lambda);
    double acc = 0.0;
    for (double w : g) acc += w * w / static_cast<double>(r);
    return acc;
}

std::vector<double> extract_error_distribution(u64 r, u64 q, double lambda) {
    const std::vector<double> g = centered_gaussian_weights(r, lambda);
    const long long C = static_cast<long long>((r - 1) / 2);
    std::vector<double> out(q, 0.0);
    double total = 0.0;
    for (u64 e = 0; e < q; ++e) {
        cd acc{0.0, 0.0};
        for (u64 i = 0; i < r; ++i) {
            const long long centered = static_cast<long long>(i) - C;
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(centered) *
                               static_cast<double>(e) / static_cast<double>(q);
            acc += g[i] * cd{std::cos(ang), std::sin(ang)};
        }
        out[e] = std::norm(acc);
        total += out[e];
    }
    for (auto& v : out) v /= total;
    return out;
}

ExtractResult extract_shifted_lwe(CosetState state, double lambda, Rng& rng) {
    if (state.params().q.factors.size() != 1 || state.params().q.factors.front().second != 1)
        throw BadParams("extract_shifted_lwe: q must be prime (use the mod-p mode otherwise)");
    return extract_impl(std::move(state), lambda, rng, 1);
}

ExtractResult extract_shifted_lwe_modp(CosetState state, double lambda, Rng& rng) {
    const u64 q = state.params().q.q;
    const u64 p = state.params().p;
    return extract_impl(std::move(state), lambda, rng, q / p);
}

ExtractResult extract_shifted_lwe_dense(CosetState state, double lambda, Rng& rng) {
    const EdcpParams params = state.params();
    const u64 q = params.q.q;
    const u64 r = state.register_size();
    StateVector dense = to_dense(state);
    dense.embed_register(0, q);
    dense.shift_register(0, -static_cast<long long>((r - 1) / 2));

    std::vector<double> eps(q, 0.0);
    const std::vector<double> g = centered_gaussian_weights(r, lambda);
    const long long C = static_cast<long long>((r - 1) / 2);
    const double norm = 1.0 / std::sqrt(static_cast<double>(r));
    for (u64 i = 0; i < r; ++i) {
        long long pos = static_cast<long long>(i) - C;
        const u64 reg = static_cast<u64>((pos % static_cast<long long>(q) + static_cast<long long>(q)) %
                                         static_cast<long long>(q));
        eps[reg] = g[i] * norm;
    }
    if (!dense.rejection_resample(eps, rng)) return {false, {}};

    dense.apply_qft_second_block(StateVector::Direction::Forward);
    std::vector<u64> a_coords(params.n);
    for (std::size_t c = 0; c < params.n; ++c) a_coords[c] = dense.measure_register(c + 1, rng).first;
    dense.apply_qft(0, StateVector::Direction::Forward);
    const u64 y = dense.measure_register(0, rng).first;

    ExtractResult out;
    out.success = true;
    out.sample.a = sub(ZqVector::zero(q, params.n), ZqVector(q, a_coords));
    out.sample.b = y;
    out.sample.shift_scale = params.q.factors.size() == 1 && params.q.factors.front().second == 1
                                 ? 1
                                 : q / params.p;
    return out;
}

}  // namespace edcp
