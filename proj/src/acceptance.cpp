#include "edcp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "edcp/attacks.hpp"
#include "edcp/dense_oracle.hpp"
#include "edcp/infotheory.hpp"
#include "edcp/qpke.hpp"
#include "edcp/reductions.hpp"

namespace edcp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

u64 scaled(double scale, u64 full, u64 floor_value) {
    const double v = scale * static_cast<double>(full);
    return std::max<u64>(floor_value, static_cast<u64>(std::llround(v)));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// --- 1: encryption roundtrip ------------------------------------------------

CheckResult check_roundtrip(double scale, u64 seed) {
    const auto start = Clock::now();
    struct Config {
        std::size_t n;
        u64 q, r, p;
    };
    const Config configs[] = {{2, 8, 2, 2}, {1, 27, 9, 3}};
    const u64 trials = scaled(scale, 10000, 200);
    u64 failures = 0, total = 0;
    for (const auto& cfg : configs) {
        EdcpParams params(cfg.n, Modulus(cfg.q), cfg.r, cfg.p);
        for (u64 t = 0; t < trials; ++t) {
            const int bit = static_cast<int>(t % 2);
            if (!roundtrip_trial(params, bit, Rng::derive_seed(seed, t * 4 + cfg.q))) ++failures;
            ++total;
        }
    }
    const double elapsed = seconds_since(start);
    CheckResult res;
    res.name = "roundtrip-correctness";
    res.pass = failures == 0 && elapsed <= 30.0;
    res.detail = std::to_string(total) + " trials, " + std::to_string(failures) + " failures, " +
                 fmt(elapsed) + " s";
    return res;
}

// --- 2: ensemble spectra ------------------------------------------------------

CheckResult check_spectra(double, u64) {
    struct Config {
        std::size_t n;
        u64 q, r, p;
    };
    const Config configs[] = {{1, 4, 2, 2}, {1, 9, 3, 3}, {2, 4, 2, 2}};
    bool ok = true;
    std::string detail;
    for (const auto& cfg : configs) {
        EdcpParams params(cfg.n, Modulus(cfg.q), cfg.r, cfg.p);
        const bool match = spectrum_check(params);
        ok = ok && match;
        detail += "(" + std::to_string(cfg.n) + "," + std::to_string(cfg.q) + "," +
                  std::to_string(cfg.r) + ")=" + (match ? "ok " : "BAD ");
    }
    return {"ensemble-spectra", ok, detail};
}

// --- 3: Holevo equality at m = 1 ----------------------------------------------

CheckResult check_holevo(double, u64) {
    struct Config {
        std::size_t n;
        u64 q, r, p;
    };
    const Config configs[] = {{1, 4, 2, 2}, {1, 9, 3, 3}, {2, 4, 2, 2}};
    bool ok = true;
    std::string detail;
    for (const auto& cfg : configs) {
        EdcpParams params(cfg.n, Modulus(cfg.q), cfg.r, cfg.p);
        const EnsembleReport report = holevo_chi(params, 1);
        const double gap = std::abs(report.chi_numeric - report.chi_closed_form);
        ok = ok && gap <= 1e-8;
        detail += fmt(report.chi_numeric) + "/" + fmt(report.chi_closed_form) + " ";
    }
    // spot value: 0.75 bits at (1, 4, 2)
    const double probe = holevo_chi_closed_form(EdcpParams(1, Modulus(4), 2, 2), 1);
    ok = ok && std::abs(probe - 0.75) < 1e-12;
    return {"holevo-equality", ok, detail};
}

// --- 4: self-reduction ---------------------------------------------------------

CheckResult check_self_reduction(double scale, u64 seed) {
    const u64 trials = scaled(scale, 10000, 300);
    bool ok = true;
    std::string worst;
    double worst_margin = 1e9;

    // success frequency for every pair 2 <= r' <= r <= 16
    for (u64 r = 2; r <= 16; ++r) {
        for (u64 rt = 2; rt <= r; ++rt) {
            EdcpParams params(1, Modulus(17), r, 17);
            Challenger challenger(params, Rng::derive_seed(seed, r * 100 + rt));
            u64 hits = 0;
            for (u64 t = 0; t < trials; ++t)
                if (reduce_r(challenger.sample(), rt, challenger.rng()).success) ++hits;
            const double rate = static_cast<double>(hits) / static_cast<double>(trials);
            const double sigma = std::sqrt(0.25 / static_cast<double>(trials));
            const double margin = rate - (0.5 - 3.0 * sigma);
            if (margin < worst_margin) {
                worst_margin = margin;
                worst = "r=" + std::to_string(r) + ",r'=" + std::to_string(rt) +
                        " rate=" + fmt(rate);
            }
            if (rate < 0.5 - 3.0 * sigma) ok = false;
        }
    }

    // post-selected ensembles reproduce the smaller-r ensemble exactly
    double worst_td = 0.0;
    for (u64 r = 2; r <= 8; ++r) {
        EdcpParams params(1, Modulus(8), r, 2);
        Challenger challenger(params, Rng::derive_seed(seed, 7000 + r));
        const ZqVector& s = challenger.secret_for_verification();
        for (u64 rt = 2; rt <= r; ++rt) {
            DensityOperator post =
                DensityOperator::zero(IndexSpace::coset_space(rt, 8, 1));
            double p_success = 0.0;
            std::vector<std::pair<double, StateVector>> members;
            for (u64 x = 0; x < 8; ++x) {
                CosetState st = challenger.sample_with_offset(ZqVector(8, {x}));
                for (auto& branch : inspect::reduce_branches(st, rt)) {
                    if (!branch.success) continue;
                    members.emplace_back(branch.probability / 8.0, to_dense(branch.state));
                    p_success += branch.probability / 8.0;
                }
            }
            for (auto& [w, psi] : members) post.accumulate(w / p_success, psi);
            EdcpParams params_t(1, Modulus(8), rt, 2);
            const double td = trace_distance(post, dense_oracle::ensemble_density(params_t, s));
            worst_td = std::max(worst_td, td);
            if (td >= 1e-9) ok = false;
        }
    }

    return {"self-reduction", ok,
            "worst margin " + worst + ", max ensemble distance " + fmt(worst_td)};
}

// --- 5/6: search-to-decision ---------------------------------------------------

CheckResult check_hybrid_search(double scale, u64 seed) {
    const auto start = Clock::now();
    struct Config {
        std::size_t n;
        u64 q, r, p;
    };
    const Config configs[] = {{1, 9, 3, 3}, {1, 36, 2, 2}, {2, 8, 2, 2}};
    const u64 instances = scaled(scale, 50, 6);
    u64 good = 0, total = 0;
    for (const auto& cfg : configs) {
        EdcpParams params(cfg.n, Modulus(cfg.q), cfg.r, cfg.p);
        for (u64 i = 0; i < instances; ++i) {
            Challenger challenger(params, Rng::derive_seed(seed, 500 + total));
            PerfectHybridOracle oracle;
            try {
                if (search_via_hybrid(oracle, challenger) ==
                    challenger.secret_for_verification())
                    ++good;
            } catch (const Error&) {
            }
            ++total;
        }
    }
    const double elapsed = seconds_since(start);
    return {"hybrid-search", good == total && elapsed <= 120.0,
            std::to_string(good) + "/" + std::to_string(total) + " recovered, " + fmt(elapsed) +
                " s"};
}

CheckResult check_phase_search(double scale, u64 seed) {
    struct Config {
        std::size_t n;
        u64 q, r, p;
    };
    const Config configs[] = {{1, 4, 2, 2}, {1, 6, 2, 2}};
    const u64 instances = scaled(scale, 50, 6);
    u64 good = 0, total = 0;
    for (const auto& cfg : configs) {
        EdcpParams params(cfg.n, Modulus(cfg.q), cfg.r, cfg.p);
        for (u64 i = 0; i < instances; ++i) {
            Challenger challenger(params, Rng::derive_seed(seed, 900 + total));
            PerfectPhaseOracle oracle;
            try {
                if (search_via_phase(oracle, challenger) == challenger.secret_for_verification())
                    ++good;
            } catch (const Error&) {
            }
            ++total;
        }
    }
    return {"phase-search", good == total,
            std::to_string(good) + "/" + std::to_string(total) + " recovered"};
}

// --- 7: shifted-LWE extraction --------------------------------------------------

CheckResult check_lwe_extraction(double scale, u64 seed) {
    const std::size_t n = 1;
    const u64 q = 97, r = 9;
    const double lambda = 9.0;
    EdcpParams params(n, Modulus(q), r, q);
    Challenger challenger(params, Rng::derive_seed(seed, 7701));
    const ZqVector& s = challenger.secret_for_verification();
    Rng rng(Rng::derive_seed(seed, 7702));

    const u64 attempts = scaled(scale, 10000, 2000);
    const double accept = extract_accept_probability(r, lambda);
    u64 successes = 0;
    std::vector<double> histogram(q, 0.0);
    for (u64 i = 0; i < attempts; ++i) {
        const u64 t = 1 + rng.uniform_below(q - 1);
        ExtractResult out = extract_shifted_lwe(challenger.sample(t), lambda, rng);
        if (!out.success) continue;
        ++successes;
        // recover the hidden error from the verification side
        const u64 as = inner_product(out.sample.a, s);
        const u64 e = (out.sample.b + q - as % q + t) % q;
        histogram[e] += 1.0;
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(attempts);
    double tv = 0.0;
    const std::vector<double> oracle_pmf = wrapped_gaussian_pmf(static_cast<double>(q) / lambda, q);
    for (u64 e = 0; e < q; ++e)
        tv += 0.5 * std::abs(histogram[e] / std::max<u64>(successes, 1) - oracle_pmf[e]);
    const bool ok = rate >= 0.5 * accept && tv < 0.1;
    return {"lwe-extraction", ok,
            "success " + fmt(rate) + " (analytic " + fmt(accept) + "), error TV " + fmt(tv)};
}

// --- 8: sieve combination probability -------------------------------------------

CheckResult check_sieve_combine(double scale, u64 seed) {
    EdcpParams params(1, Modulus(8), 4, 2);
    Challenger challenger(params, Rng::derive_seed(seed, 8801));
    const u64 trials = scaled(scale, 10000, 1000);
    u64 hits = 0, label_bad = 0;
    for (u64 i = 0; i < trials; ++i) {
        PhaseState a = edcp_to_phase(challenger).state;
        PhaseState b = edcp_to_phase(challenger).state;
        const ZqVector expected = sub(a.label(), b.label());
        CombineOutcome out = sieve_combine(std::move(a), std::move(b), challenger.rng());
        if (out.success) {
            ++hits;
            if (!(out.state.label() == expected)) ++label_bad;
        }
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(trials);
    const double tol = 3.0 * std::sqrt(0.25 / static_cast<double>(trials));
    const bool ok = std::abs(rate - 0.5) <= tol && label_bad == 0;
    return {"sieve-combine", ok,
            "success " + fmt(rate) + " (tolerance " + fmt(tol) + "), bad labels " +
                std::to_string(label_bad)};
}

// --- 9: end-to-end attacks -------------------------------------------------------

CheckResult check_attacks(double scale, u64 seed) {
    std::string detail;
    bool ok = true;

    {  // r = q Fourier attack at (n=2, q=r=5)
        EdcpParams params(2, Modulus(5), 5, 5);
        const u64 runs = scaled(scale, 1000, 100);
        u64 good = 0;
        for (u64 i = 0; i < runs; ++i) {
            Challenger challenger(params, Rng::derive_seed(seed, 9000 + i));
            try {
                FourierAttackResult res = fourier_attack_r_eq_q(challenger, 1);
                if (res.secret == challenger.secret_for_verification() &&
                    res.samples_used <= 8)
                    ++good;
            } catch (const Error&) {
            }
        }
        const double rate = static_cast<double>(good) / static_cast<double>(runs);
        ok = ok && rate >= 0.99;
        detail += "fourier " + fmt(rate) + " ";
    }

    {  // sieve + PGM at (n=2, q=16)
        EdcpParams params(2, Modulus(16), 4, 2);
        const u64 runs = scaled(scale, 50, 10);
        u64 good = 0;
        for (u64 i = 0; i < runs; ++i) {
            Challenger challenger(params, Rng::derive_seed(seed, 9500 + i));
            try {
                SieveStats stats =
                    kuperberg_recover(challenger, 1, 1, 2.5, challenger.rng());
                if (stats.recovered == challenger.secret_for_verification().coords[1]) ++good;
            } catch (const Error&) {
            }
        }
        const double rate = static_cast<double>(good) / static_cast<double>(runs);
        ok = ok && rate >= 0.5;
        detail += "sieve+pgm " + fmt(rate) + " ";
    }

    {  // POVM completeness at q = 16, t = 5
        Rng rng(Rng::derive_seed(seed, 9901));
        std::vector<ZqVector> labels;
        for (int j = 0; j < 5; ++j) labels.push_back(ZqVector(16, {1 + rng.uniform_below(15)}));
        const double err = pgm_povm_completeness_error(labels, 16);
        ok = ok && err <= 1e-8;
        detail += "povm " + fmt(err);
    }

    return {"end-to-end-attacks", ok, detail};
}

// --- 10: symbolic/dense engine equivalence --------------------------------------

struct ProgramOp {
    enum Kind {
        AdvPhase,
        ContentPhase,
        ShiftSecret,
        Reduce,
        Project,
        Aux,
        SecondFourier,
        Full,
        FirstQft
    } kind;
    u64 a = 0, b = 0, c = 0;
};

struct ProgramSpec {
    EdcpParams params;
    ZqVector secret;
    ZqVector x0;
    std::optional<u64> t0;
    std::vector<ProgramOp> ops;
};

u64 encode_vec(const ZqVector& v, u64 q) {
    u64 key = 0;
    for (u64 c : v.coords) key = key * q + c;
    return key;
}

ProgramSpec random_program(u64 seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.uniform_below(2);
    const u64 qs[] = {4, 6, 8, 9};
    const u64 q = qs[rng.uniform_below(4)];
    const u64 r = 2 + rng.uniform_below(q - 1);
    Modulus qm(q);
    const u64 p = qm.factors.front().first;
    ProgramSpec spec{EdcpParams(n, qm, r, p), ZqVector::zero(q, n), ZqVector::zero(q, n),
                     std::nullopt, {}};
    for (auto& c : spec.secret.coords) c = rng.uniform_below(q);
    for (auto& c : spec.x0.coords) c = rng.uniform_below(q);
    if (rng.bernoulli(0.5)) spec.t0 = rng.uniform_below(p);

    const int e = qm.factors.front().second;
    const u64 deterministic = rng.uniform_below(3);
    for (u64 i = 0; i < deterministic; ++i) {
        const u64 pick = rng.uniform_below(3);
        if (pick == 0)
            spec.ops.push_back({ProgramOp::AdvPhase, q, rng.uniform_below(q), 0});
        else if (pick == 1)
            spec.ops.push_back({ProgramOp::ContentPhase, rng.uniform_below(n), p,
                                rng.uniform_below(p)});
        else
            spec.ops.push_back({ProgramOp::ShiftSecret, rng.uniform_below(q), 0, 0});
    }
    const u64 measurements = 2 + rng.uniform_below(static_cast<u64>(5 - spec.ops.size() - 1));
    for (u64 i = 0; i + 1 < measurements; ++i) {
        const u64 pick = rng.uniform_below(4);
        if (pick == 0 && i == 0)
            spec.ops.push_back({ProgramOp::Reduce, 2 + rng.uniform_below(r - 1), 0, 0});
        else if (pick == 1)
            spec.ops.push_back({ProgramOp::Project, p, 1, 0});
        else if (pick == 2)
            spec.ops.push_back(
                {ProgramOp::Aux, rng.uniform_below(n),
                 static_cast<u64>(1 + rng.uniform_below(static_cast<u64>(e))), rng.uniform_below(q)});
        else
            spec.ops.push_back({ProgramOp::SecondFourier, 0, 0, 0});
    }
    spec.ops.push_back(rng.bernoulli(0.5) ? ProgramOp{ProgramOp::Full, 0, 0, 0}
                                          : ProgramOp{ProgramOp::FirstQft, 0, 0, 0});
    return spec;
}

// symbolic-side distribution of one measurement op, with u64-encoded outcomes
std::vector<std::pair<u64, double>> symbolic_distribution(const CosetState& state,
                                                          const ProgramOp& op) {
    const u64 q = state.params().q.q;
    switch (op.kind) {
        case ProgramOp::Reduce: {
            std::vector<std::pair<u64, double>> out;
            for (const auto& br : inspect::reduce_branches(state, op.a)) {
                const u64 r = state.register_size();
                u64 branch_key;
                if (2 * op.a > r)
                    branch_key = br.success ? 0 : 1;
                else
                    branch_key = br.success ? br.block : r / op.a;
                out.emplace_back(branch_key, br.probability);
            }
            return out;
        }
        case ProgramOp::Project:
            return inspect::project_distribution(state, op.a, static_cast<int>(op.b));
        case ProgramOp::Aux: {
            u64 P = 1;
            for (u64 i = 0; i < op.b; ++i) P *= state.params().p;
            return inspect::aux_distribution(state, op.a, P, op.c);
        }
        case ProgramOp::SecondFourier: {
            // exactly uniform over Z_q^n
            u64 total = 1;
            for (std::size_t i = 0; i < state.params().n; ++i) total *= q;
            std::vector<std::pair<u64, double>> out;
            out.reserve(total);
            for (u64 v = 0; v < total; ++v) out.emplace_back(v, 1.0 / static_cast<double>(total));
            return out;
        }
        case ProgramOp::Full: {
            std::vector<std::pair<u64, double>> out;
            for (const auto& [fo, prob] : inspect::full_distribution(state)) {
                u64 key = fo.j;
                for (u64 c : fo.y.coords) key = key * q + c;
                out.emplace_back(key, prob);
            }
            return out;
        }
        case ProgramOp::FirstQft: {
            std::vector<std::pair<u64, double>> out;
            const auto probs = inspect::first_qft_inv_distribution(state);
            for (u64 k = 0; k < probs.size(); ++k)
                if (probs[k] > 1e-15) out.emplace_back(k, probs[k]);
            return out;
        }
        default:
            throw Error("not a measurement op");
    }
}

// dense-side distribution of the same op
std::vector<std::pair<u64, double>> dense_distribution(const StateVector& state,
                                                       const ProgramOp& op,
                                                       const EdcpParams& params) {
    const u64 q = params.q.q;
    StateVector copy = state;
    switch (op.kind) {
        case ProgramOp::Reduce: {
            const u64 r = state.space().factor(0);
            if (2 * op.a > r) {
                auto fn = [&](u64 idx) { return copy.space().digit(idx, 0) < op.a ? 0ull : 1ull; };
                return copy.function_distribution(fn);
            }
            const u64 full_blocks = r / op.a;
            auto fn = [&](u64 idx) {
                return std::min(copy.space().digit(idx, 0) / op.a, full_blocks);
            };
            return copy.function_distribution(fn);
        }
        case ProgramOp::Project: {
            u64 pk = 1;
            for (u64 i = 0; i < op.b; ++i) pk *= op.a;
            auto fn = [&](u64 idx) { return copy.space().digit(idx, 0) % pk; };
            return copy.function_distribution(fn);
        }
        case ProgramOp::Aux: {
            u64 P = 1;
            for (u64 i = 0; i < op.b; ++i) P *= params.p;
            auto fn = [&](u64 idx) {
                const u64 j = copy.space().digit(idx, 0);
                const u64 y = copy.space().digit(idx, op.a + 1);
                return (y % P + P - mul_mod(j % P, op.c % P, P)) % P;
            };
            return copy.function_distribution(fn);
        }
        case ProgramOp::SecondFourier: {
            copy.apply_qft_second_block(StateVector::Direction::Forward);
            auto fn = [&](u64 idx) {
                u64 key = 0;
                for (std::size_t c = 0; c < params.n; ++c)
                    key = key * q + copy.space().digit(idx, c + 1);
                return key;
            };
            return copy.function_distribution(fn);
        }
        case ProgramOp::Full: {
            auto fn = [&](u64 idx) {
                u64 key = copy.space().digit(idx, 0);
                for (std::size_t c = 1; c < copy.space().num_registers(); ++c)
                    key = key * q + copy.space().digit(idx, c);
                return key;
            };
            return copy.function_distribution(fn);
        }
        case ProgramOp::FirstQft: {
            std::vector<std::pair<u64, double>> out;
            const auto probs = dense_oracle::first_qft_inv_distribution(copy);
            for (u64 k = 0; k < probs.size(); ++k)
                if (probs[k] > 1e-15) out.emplace_back(k, probs[k]);
            return out;
        }
        default:
            throw Error("not a measurement op");
    }
}

double distribution_mismatch(const std::vector<std::pair<u64, double>>& a,
                             const std::vector<std::pair<u64, double>>& b) {
    std::map<u64, double> merged;
    for (const auto& [k, v] : a) merged[k] += v;
    for (const auto& [k, v] : b) merged[k] -= v;
    double worst = 0.0;
    for (const auto& [k, v] : merged) worst = std::max(worst, std::abs(v));
    return worst;
}

struct TraceResult {
    bool ok = true;
    std::string why;
};

// Runs one symbolic trace and replays it densely with forced outcomes,
// checking per-step distributions and post-states.
TraceResult run_trace(const ProgramSpec& spec, u64 trace_seed) {
    Challenger challenger(spec.params, spec.secret, trace_seed);
    Rng rng(Rng::derive_seed(trace_seed, 17));
    CosetState sym = challenger.sample_with_offset(spec.x0, spec.t0);
    StateVector den = dense_oracle::sample_state(spec.params, spec.secret, spec.x0, spec.t0);
    const u64 q = spec.params.q.q;

    auto fail = [](std::string why) { return TraceResult{false, std::move(why)}; };

    for (const auto& op : spec.ops) {
        // runtime validity substitutions, identical on both sides
        ProgramOp actual = op;
        const bool fresh = !sym.second_collapsed() && sym.support().stride == 1 &&
                           sym.support().base == 0 && sym.support().count == sym.register_size();
        if (actual.kind == ProgramOp::Reduce && !fresh) actual = {ProgramOp::AdvPhase, q, 1, 0};
        if ((actual.kind == ProgramOp::ContentPhase || actual.kind == ProgramOp::Aux ||
             actual.kind == ProgramOp::SecondFourier || actual.kind == ProgramOp::ShiftSecret) &&
            sym.second_collapsed())
            actual = {ProgramOp::FirstQft, 0, 0, 0};
        if (actual.kind == ProgramOp::Project && actual.a > sym.register_size())
            actual = {ProgramOp::AdvPhase, q, 1, 0};

        switch (actual.kind) {
            case ProgramOp::AdvPhase:
                sym = adversary_phase(std::move(sym), actual.a, actual.b, 0);
                dense_oracle::apply_first_register_phase(den, actual.a, actual.b, 0);
                break;
            case ProgramOp::ContentPhase: {
                const u64 scale_c = 1 + (actual.c % (actual.b - 1 ? actual.b - 1 : 1));
                sym = content_phase(std::move(sym), actual.a, actual.b, actual.c, scale_c);
                dense_oracle::apply_content_phase(den, actual.a, actual.b, actual.c, scale_c);
                break;
            }
            case ProgramOp::ShiftSecret: {
                ZqVector w = ZqVector::zero(q, spec.params.n);
                w.coords[0] = actual.a;
                sym = shift_secret(std::move(sym), w);
                dense_oracle::apply_secret_shift(den, w);
                break;
            }
            case ProgramOp::Reduce: {
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("reduce distribution mismatch");
                ReduceOutcome out = reduce_r(std::move(sym), actual.a, rng);
                const u64 r_now = den.space().factor(0);
                const u64 branch = 2 * actual.a > r_now ? (out.success ? 0 : 1)
                                                        : (out.success ? out.block : r_now / actual.a);
                dense_oracle::reduce_r_forced(den, actual.a, out.success, branch);
                sym = std::move(out.state);
                break;
            }
            case ProgramOp::Project: {
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("project distribution mismatch");
                ProjectOutcome out = project_j_mod(std::move(sym), actual.a,
                                                   static_cast<int>(actual.b), rng);
                dense_oracle::project_forced(den, actual.a, static_cast<int>(actual.b),
                                             out.residue);
                sym = std::move(out.state);
                break;
            }
            case ProgramOp::Aux: {
                u64 P = 1;
                for (u64 i = 0; i < actual.b; ++i) P *= spec.params.p;
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("aux distribution mismatch");
                AuxOutcome out = measure_linear_aux(std::move(sym), actual.a, P, actual.c, rng);
                dense_oracle::aux_forced(den, actual.a, P, actual.c, out.value);
                sym = std::move(out.state);
                break;
            }
            case ProgramOp::SecondFourier: {
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("fourier outcome distribution not uniform");
                SecondFourierOutcome out = measure_second_fourier(std::move(sym), rng);
                dense_oracle::second_fourier_forced(den, out.u);
                sym = std::move(out.state);
                break;
            }
            case ProgramOp::Full: {
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("full measurement distribution mismatch");
                return {true, ""};
            }
            case ProgramOp::FirstQft: {
                const auto sym_dist = symbolic_distribution(sym, actual);
                const auto den_dist = dense_distribution(den, actual, spec.params);
                if (distribution_mismatch(sym_dist, den_dist) > 1e-9)
                    return fail("qft measurement distribution mismatch");
                return {true, ""};
            }
        }
        if (actual.kind != ProgramOp::Full && actual.kind != ProgramOp::FirstQft) {
            const double fid = fidelity(to_dense(sym), den);
            if (1.0 - fid > 1e-9) return fail("post-state fidelity " + fmt(fid));
        }
    }
    return {true, ""};
}

CheckResult check_engine_equivalence(double scale, u64 seed) {
    const u64 programs = scaled(scale, 200, 20);
    const u64 traces = 10;
    const u64 tv_trials = scaled(scale, 10000, 2000);
    bool ok = true;
    std::string why;
    double worst_tv = 0.0;

    for (u64 pidx = 0; pidx < programs && ok; ++pidx) {
        const ProgramSpec spec = random_program(Rng::derive_seed(seed, 123000 + pidx));
        for (u64 t = 0; t < traces && ok; ++t) {
            TraceResult res = run_trace(spec, Rng::derive_seed(seed, 555000 + pidx * 64 + t));
            if (!res.ok) {
                ok = false;
                why = "program " + std::to_string(pidx) + ": " + res.why;
            }
        }
        if (!ok) break;

        // statistical check on the first measurement op: empirical symbolic
        // outcomes against the exact dense distribution. High-cardinality
        // outcome spaces are excluded here (the empirical-TV noise floor
        // scales with the category count); the exact per-step distribution
        // comparison above already covers those at 1e-9.
        std::size_t m0 = 0;
        while (m0 < spec.ops.size() && (spec.ops[m0].kind == ProgramOp::AdvPhase ||
                                        spec.ops[m0].kind == ProgramOp::ContentPhase ||
                                        spec.ops[m0].kind == ProgramOp::ShiftSecret))
            ++m0;
        if (m0 >= spec.ops.size()) continue;
        if (spec.ops[m0].kind == ProgramOp::SecondFourier || spec.ops[m0].kind == ProgramOp::Full)
            continue;

        Challenger challenger(spec.params, spec.secret, Rng::derive_seed(seed, 777000 + pidx));
        Rng rng(Rng::derive_seed(seed, 888000 + pidx));

        auto make_prefixed = [&]() {
            CosetState st = challenger.sample_with_offset(spec.x0, spec.t0);
            for (std::size_t i = 0; i < m0; ++i) {
                const ProgramOp& op = spec.ops[i];
                if (op.kind == ProgramOp::AdvPhase)
                    st = adversary_phase(std::move(st), op.a, op.b, 0);
                else if (op.kind == ProgramOp::ContentPhase) {
                    const u64 scale_c = 1 + (op.c % (op.b - 1 ? op.b - 1 : 1));
                    st = content_phase(std::move(st), op.a, op.b, op.c, scale_c);
                } else {
                    ZqVector w = ZqVector::zero(spec.params.q.q, spec.params.n);
                    w.coords[0] = op.a;
                    st = shift_secret(std::move(st), w);
                }
            }
            return st;
        };

        // exact target distribution from the dense oracle
        StateVector den = dense_oracle::sample_state(spec.params, spec.secret, spec.x0, spec.t0);
        {
            for (std::size_t i = 0; i < m0; ++i) {
                const ProgramOp& op = spec.ops[i];
                if (op.kind == ProgramOp::AdvPhase)
                    dense_oracle::apply_first_register_phase(den, op.a, op.b, 0);
                else if (op.kind == ProgramOp::ContentPhase) {
                    const u64 scale_c = 1 + (op.c % (op.b - 1 ? op.b - 1 : 1));
                    dense_oracle::apply_content_phase(den, op.a, op.b, op.c, scale_c);
                } else {
                    ZqVector w = ZqVector::zero(spec.params.q.q, spec.params.n);
                    w.coords[0] = op.a;
                    dense_oracle::apply_secret_shift(den, w);
                }
            }
        }
        const ProgramOp& mop = spec.ops[m0];
        std::map<u64, double> target;
        for (const auto& [k, v] : dense_distribution(den, mop, spec.params)) target[k] += v;

        std::map<u64, double> empirical;
        const double weight = 1.0 / static_cast<double>(tv_trials);
        for (u64 trial = 0; trial < tv_trials; ++trial) {
            CosetState st = make_prefixed();
            u64 key = 0;
            switch (mop.kind) {
                case ProgramOp::Reduce: {
                    const u64 r_now = st.register_size();
                    ReduceOutcome out = reduce_r(std::move(st), mop.a, rng);
                    key = 2 * mop.a > r_now ? (out.success ? 0 : 1)
                                            : (out.success ? out.block : r_now / mop.a);
                    break;
                }
                case ProgramOp::Project:
                    key = project_j_mod(std::move(st), mop.a, static_cast<int>(mop.b), rng).residue;
                    break;
                case ProgramOp::Aux: {
                    u64 P = 1;
                    for (u64 i = 0; i < mop.b; ++i) P *= spec.params.p;
                    key = measure_linear_aux(std::move(st), mop.a, P, mop.c, rng).value;
                    break;
                }
                case ProgramOp::SecondFourier:
                    key = encode_vec(measure_second_fourier(std::move(st), rng).u,
                                     spec.params.q.q);
                    break;
                case ProgramOp::Full: {
                    FullOutcome fo = measure_full(std::move(st), rng);
                    key = fo.j;
                    for (u64 c : fo.y.coords) key = key * spec.params.q.q + c;
                    break;
                }
                case ProgramOp::FirstQft:
                    key = measure_first_qft_inv(std::move(st), rng);
                    break;
                default:
                    break;
            }
            empirical[key] += weight;
        }
        double tv = 0.0;
        std::map<u64, double> merged = target;
        for (const auto& [k, v] : empirical) merged[k] -= v;
        for (const auto& [k, v] : merged) tv += 0.5 * std::abs(v);
        worst_tv = std::max(worst_tv, tv);
        if (tv >= 4.0 / std::sqrt(static_cast<double>(tv_trials))) {
            ok = false;
            why = "program " + std::to_string(pidx) + ": outcome TV " + fmt(tv);
        }
    }

    return {"engine-equivalence", ok,
            ok ? std::to_string(programs) + " programs, worst TV " + fmt(worst_tv) : why};
}

// --- 11: property substitutes for asymptotic claims ------------------------------

CheckResult check_scaling_substitutes(double scale, u64 seed) {
    bool ok = true;
    std::string detail;

    {  // sieve stage survival >= pool/8 on average
        EdcpParams params(2, Modulus(16), 4, 2);
        const u64 runs = scaled(scale, 20, 5);
        double ratio_sum = 0.0;
        u64 stages = 0;
        for (u64 i = 0; i < runs; ++i) {
            Challenger challenger(params, Rng::derive_seed(seed, 11000 + i));
            try {
                SieveStats stats = kuperberg_recover(challenger, 1, 1, 2.5, challenger.rng());
                for (std::size_t s = 0; s < stats.stage_survivors.size(); ++s) {
                    ratio_sum += static_cast<double>(stats.stage_survivors[s]) /
                                 static_cast<double>(stats.stage_pool_sizes[s]);
                    ++stages;
                }
            } catch (const Error&) {
            }
        }
        const double mean_ratio = stages ? ratio_sum / static_cast<double>(stages) : 0.0;
        ok = ok && mean_ratio >= 1.0 / 8.0;
        detail += "stage survival " + fmt(mean_ratio) + " ";
    }

    {  // sample lower bound: monotone in success probability and n log q,
       // nonincreasing in log r
        EdcpParams base(1, Modulus(16), 2, 2);
        u64 prev = 0;
        bool monotone = true;
        for (double pr = 0.1; pr <= 1.0; pr += 0.1) {
            const u64 m = fano_min_samples(base, pr);
            if (m < prev) monotone = false;
            prev = m;
        }
        const u64 m_small = fano_min_samples(EdcpParams(1, Modulus(16), 2, 2), 0.9);
        const u64 m_bigq = fano_min_samples(EdcpParams(1, Modulus(256), 2, 2), 0.9);
        const u64 m_bign = fano_min_samples(EdcpParams(2, Modulus(16), 2, 2), 0.9);
        const u64 m_bigr = fano_min_samples(EdcpParams(1, Modulus(16), 8, 2), 0.9);
        monotone = monotone && m_bigq >= m_small && m_bign >= m_small && m_bigr <= m_small;
        ok = ok && monotone;
        detail += std::string("sample bound monotone ") + (monotone ? "yes" : "NO");
    }

    return {"scaling-substitutes", ok, detail};
}

}  // namespace

std::vector<CheckResult> run_acceptance(double scale, u64 seed, const CheckProgress& progress) {
    std::vector<CheckResult> results;
    auto push = [&](CheckResult r) {
        if (progress) progress(r);
        results.push_back(std::move(r));
    };
    push(check_roundtrip(scale, seed));
    push(check_spectra(scale, seed));
    push(check_holevo(scale, seed));
    push(check_self_reduction(scale, seed));
    push(check_hybrid_search(scale, seed));
    push(check_phase_search(scale, seed));
    push(check_lwe_extraction(scale, seed));
    push(check_sieve_combine(scale, seed));
    push(check_attacks(scale, seed));
    push(check_engine_equivalence(scale, seed));
    push(check_scaling_substitutes(scale, seed));
    return results;
}

}  // namespace edcp
