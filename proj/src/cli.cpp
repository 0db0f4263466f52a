#include "edcp/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <thread>

#include "edcp/acceptance.hpp"
#include "edcp/attacks.hpp"
#include "edcp/infotheory.hpp"
#include "edcp/kernels.hpp"
#include "edcp/qpke.hpp"
#include "edcp/reductions.hpp"
#include "edcp/serialize.hpp"

namespace edcp {

namespace {

using Clock = std::chrono::steady_clock;

u64 elapsed_us(Clock::time_point start) {
    return static_cast<u64>(
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count());
}

struct CommonOpts {
    std::size_t n = 1;
    u64 q = 4, r = 2, p = 0;
    u64 seed = 0;
    std::string record_path;
    std::string csv_path;
};

EdcpParams make_params(const CommonOpts& o) {
    Modulus qm(o.q);
    const u64 p = o.p ? o.p : qm.factors.front().first;
    return EdcpParams(o.n, std::move(qm), o.r, p);
}

void attach_record_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--record", o.record_path, "write a machine-readable run record (JSON)");
    cmd->add_option("--csv", o.csv_path, "write per-trial rows (CSV)");
}

// Runs fn(trial, seed) over [0, trials) on a few threads, results ordered by
// trial index. Per-trial seeds come from the fixed splitting rule, so the
// outcome is independent of the thread count.
template <typename Fn>
void run_trials(u64 trials, u64 master_seed, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = trials >= 256 ? std::min(hw, 4u) : 1u;
    if (workers == 1) {
        for (u64 t = 0; t < trials; ++t) fn(t, Rng::derive_seed(master_seed, t));
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (u64 t = w; t < trials; t += workers) fn(t, Rng::derive_seed(master_seed, t));
        });
    }
    for (auto& th : pool) th.join();
}

int finish(const RunRecord& record, const std::vector<CsvRow>& rows, const CommonOpts& o) {
    if (!o.record_path.empty()) write_run_record(record, o.record_path);
    if (!o.csv_path.empty()) write_trial_csv(rows, o.csv_path);
    return 0;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_keygen(const CommonOpts& o, const std::string& out, const std::string& public_out) {
    const EdcpParams params = make_params(o);
    validate_qpke_params(params);
    KeyPair kp = keygen(params, o.seed);
    write_json_file(keypair_to_json(kp, Role::Full), out);
    if (!public_out.empty())
        write_json_file(keypair_to_json(kp, Role::AdversaryView), public_out);
    std::cout << "keygen: n=" << params.n << " q=" << params.q.q << " r=" << params.r
              << " p=" << params.p << " -> " << out << " (SIMULATION-ONLY full record)\n";
    return 0;
}

int cmd_encrypt(const std::string& key_path, int bit, u64 seed, const std::string& out) {
    KeyPair kp = keypair_from_json(read_json_file(key_path), seed);
    Rng rng(Rng::derive_seed(seed, 2));
    Ciphertext ct = encrypt(std::move(kp.public_state), bit, rng);
    write_json_file(ciphertext_to_json(ct, Role::Full), out);
    std::cout << "encrypt: bit=" << bit << " -> " << out << "\n";
    return 0;
}

int cmd_decrypt(const std::string& key_path, const std::string& ct_path, u64 seed) {
    KeyPair kp = keypair_from_json(read_json_file(key_path), seed);
    Ciphertext ct = ciphertext_from_json(read_json_file(ct_path), Rng::derive_seed(seed, 3));
    Rng rng(Rng::derive_seed(seed, 4));
    const int bit = decrypt(kp.secret, std::move(ct), rng);
    std::cout << "decrypt: bit=" << bit << "\n";
    return 0;
}

int cmd_roundtrip(const CommonOpts& o, u64 trials) {
    const EdcpParams params = make_params(o);
    validate_qpke_params(params);
    const auto start = Clock::now();
    std::vector<CsvRow> rows(trials);
    std::vector<int> outcomes(trials);
    run_trials(trials, o.seed, [&](u64 t, u64 seed_t) {
        const auto t0 = Clock::now();
        const int bit = static_cast<int>(t % 2);
        const bool ok = roundtrip_trial(params, bit, seed_t);
        outcomes[t] = ok ? 1 : 0;
        rows[t] = {t, seed_t, ok ? 1 : 0, 1, elapsed_us(t0)};
    });
    u64 good = 0;
    for (int v : outcomes) good += static_cast<u64>(v);
    const double rate = trials ? static_cast<double>(good) / static_cast<double>(trials) : 0.0;
    std::cout << "roundtrip: trials=" << trials << " success_rate=" << rate
              << " wall_clock_s=" << std::chrono::duration<double>(Clock::now() - start).count()
              << "\n";

    RunRecord record;
    record.command = "roundtrip";
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"p", params.p},
                     {"trials", trials}, {"seed", o.seed}};
    for (u64 t = 0; t < trials; ++t)
        record.trials.push_back({{"trial", t}, {"outcome", outcomes[t]}});
    record.aggregates = {{"success_rate", rate}, {"failures", trials - good}};
    return finish(record, rows, o);
}

int cmd_reduce(const CommonOpts& o, u64 instances, bool phase_variant) {
    const EdcpParams params = make_params(o);
    const auto start = Clock::now();
    std::vector<CsvRow> rows(instances);
    std::vector<int> outcomes(instances);
    run_trials(instances, o.seed, [&](u64 t, u64 seed_t) {
        const auto t0 = Clock::now();
        Challenger challenger(params, seed_t);
        bool ok = false;
        try {
            if (phase_variant) {
                PerfectPhaseOracle oracle;
                ok = search_via_phase(oracle, challenger) == challenger.secret_for_verification();
            } else {
                PerfectHybridOracle oracle;
                ok = search_via_hybrid(oracle, challenger) == challenger.secret_for_verification();
            }
        } catch (const Error&) {
        }
        outcomes[t] = ok ? 1 : 0;
        rows[t] = {t, seed_t, ok ? 1 : 0, 0, elapsed_us(t0)};
    });
    u64 good = 0;
    for (int v : outcomes) good += static_cast<u64>(v);
    const char* name = phase_variant ? "reduce-phase" : "reduce-hybrid";
    std::cout << name << ": instances=" << instances << " recovered=" << good
              << " wall_clock_s=" << std::chrono::duration<double>(Clock::now() - start).count()
              << "\n";
    RunRecord record;
    record.command = name;
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"instances", instances},
                     {"seed", o.seed}};
    for (u64 t = 0; t < instances; ++t)
        record.trials.push_back({{"trial", t}, {"outcome", outcomes[t]}});
    record.aggregates = {{"recovered", good}};
    return finish(record, rows, o);
}

int cmd_extract_lwe(const CommonOpts& o, double lambda, u64 attempts) {
    const EdcpParams params = make_params(o);
    if (params.q.factors.size() != 1 || params.q.factors.front().second != 1) {
        std::cerr << "extract-lwe: --q must be prime\n";
        return 2;
    }
    Challenger challenger(params, o.seed);
    const ZqVector& s = challenger.secret_for_verification();
    Rng rng(Rng::derive_seed(o.seed, 1));
    const u64 q = params.q.q;

    u64 successes = 0;
    std::vector<double> histogram(q, 0.0);
    std::vector<CsvRow> rows;
    rows.reserve(attempts);
    for (u64 t = 0; t < attempts; ++t) {
        const auto t0 = Clock::now();
        const u64 tval = 1 + rng.uniform_below(q - 1);
        ExtractResult out = extract_shifted_lwe(challenger.sample(tval), lambda, rng);
        long long outcome = -1;
        if (out.success) {
            ++successes;
            const u64 e = (out.sample.b + q - inner_product(out.sample.a, s) % q + tval) % q;
            histogram[e] += 1.0;
            outcome = static_cast<long long>(e);
        }
        rows.push_back({t, o.seed, outcome, 1, elapsed_us(t0)});
    }
    const double accept = extract_accept_probability(params.r, lambda);
    const double rate = static_cast<double>(successes) / static_cast<double>(attempts);
    double tv = 0.0;
    const std::vector<double> oracle_pmf = wrapped_gaussian_pmf(static_cast<double>(q) / lambda, q);
    for (u64 e = 0; e < q; ++e)
        tv += 0.5 * std::abs(histogram[e] / std::max<u64>(successes, 1) - oracle_pmf[e]);
    std::cout << "extract-lwe: attempts=" << attempts << " success_rate=" << rate
              << " analytic_accept=" << accept << " error_tv=" << tv << "\n";
    RunRecord record;
    record.command = "extract-lwe";
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"lambda", lambda},
                     {"attempts", attempts}, {"seed", o.seed}};
    record.aggregates = {{"success_rate", rate}, {"analytic_accept", accept}, {"error_tv", tv}};
    return finish(record, rows, o);
}

int cmd_attack_sieve(const CommonOpts& o, std::size_t coord, std::size_t block, double pool_exp,
                     u64 runs) {
    const EdcpParams params = make_params(o);
    u64 good = 0;
    std::vector<CsvRow> rows;
    RunRecord record;
    record.command = "attack-sieve";
    for (u64 t = 0; t < runs; ++t) {
        const auto t0 = Clock::now();
        const u64 seed_t = Rng::derive_seed(o.seed, t);
        Challenger challenger(params, seed_t);
        long long outcome = -1;
        u64 samples = 0;
        try {
            SieveStats stats = kuperberg_recover(challenger, coord, block, pool_exp,
                                                 challenger.rng());
            samples = stats.samples_used;
            outcome = static_cast<long long>(stats.recovered);
            if (stats.recovered == challenger.secret_for_verification().coords[coord]) ++good;
        } catch (const Error&) {
        }
        rows.push_back({t, seed_t, outcome, samples, elapsed_us(t0)});
        record.trials.push_back({{"trial", t}, {"outcome", outcome}, {"samples_used", samples}});
    }
    std::cout << "attack-sieve: runs=" << runs << " recovered=" << good << "\n";
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"coord", coord},
                     {"block", block}, {"pool_exp", pool_exp}, {"runs", runs}, {"seed", o.seed}};
    record.aggregates = {{"recovered", good}};
    return finish(record, rows, o);
}

int cmd_attack_pgm(const CommonOpts& o, std::size_t t_states, u64 runs) {
    EdcpParams params = make_params(o);
    u64 good = 0;
    std::vector<CsvRow> rows;
    RunRecord record;
    record.command = "attack-pgm";
    for (u64 t = 0; t < runs; ++t) {
        const auto t0 = Clock::now();
        const u64 seed_t = Rng::derive_seed(o.seed, t);
        Challenger challenger(params, seed_t);
        u64 samples = 0;
        long long outcome = -1;
        try {
            std::vector<PhaseState> states;
            for (std::size_t i = 0; i < t_states; ++i) {
                PhaseSampleStats ps = edcp_to_phase(challenger);
                samples += static_cast<u64>(ps.samples_used);
                states.push_back(std::move(ps.state));
            }
            const u64 recovered = pgm_recover(std::move(states), challenger.rng());
            outcome = static_cast<long long>(recovered);
            if (recovered == challenger.secret_for_verification().coords[params.n - 1]) ++good;
        } catch (const Error&) {
        }
        rows.push_back({t, seed_t, outcome, samples, elapsed_us(t0)});
        record.trials.push_back({{"trial", t}, {"outcome", outcome}, {"samples_used", samples}});
    }
    std::cout << "attack-pgm: runs=" << runs << " recovered=" << good << "\n";
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"t", t_states}, {"runs", runs},
                     {"seed", o.seed}};
    record.aggregates = {{"recovered", good}};
    return finish(record, rows, o);
}

int cmd_attack_fourier(const CommonOpts& o, u64 runs) {
    const EdcpParams params = make_params(o);
    if (params.r != params.q.q) {
        std::cerr << "attack-fourier: requires --r equal to --q\n";
        return 2;
    }
    u64 good = 0;
    std::vector<CsvRow> rows;
    RunRecord record;
    record.command = "attack-fourier";
    for (u64 t = 0; t < runs; ++t) {
        const auto t0 = Clock::now();
        const u64 seed_t = Rng::derive_seed(o.seed, t);
        Challenger challenger(params, seed_t);
        u64 samples = 0;
        int ok = 0;
        try {
            FourierAttackResult res = fourier_attack_r_eq_q(challenger);
            samples = res.samples_used;
            ok = res.secret == challenger.secret_for_verification() ? 1 : 0;
        } catch (const Error&) {
        }
        good += static_cast<u64>(ok);
        rows.push_back({t, seed_t, ok, samples, elapsed_us(t0)});
        record.trials.push_back({{"trial", t}, {"outcome", ok}, {"samples_used", samples}});
    }
    std::cout << "attack-fourier: runs=" << runs << " recovered=" << good << "\n";
    record.config = {{"n", o.n}, {"q", o.q}, {"runs", runs}, {"seed", o.seed}};
    record.aggregates = {{"recovered", good}};
    return finish(record, rows, o);
}

int cmd_holevo(const CommonOpts& o, u64 m) {
    const EdcpParams params = make_params(o);
    const EnsembleReport report = holevo_chi(params, m);
    std::cout << "holevo: n=" << params.n << " q=" << params.q.q << " r=" << params.r
              << " m=" << m << "\n"
              << "  chi_numeric     = " << report.chi_numeric << " bits\n"
              << "  chi_closed_form = " << report.chi_closed_form << " bits\n"
              << "  fano samples for p=0.99: " << fano_min_samples(params, 0.99) << "\n";
    std::cout << "  spectrum (fixed secret):";
    for (const auto& [v, c] : report.spectrum_fixed_secret) std::cout << " " << v << "x" << c;
    std::cout << "\n  spectrum (averaged):    ";
    for (const auto& [v, c] : report.spectrum_averaged) std::cout << " " << v << "x" << c;
    std::cout << "\n";

    RunRecord record;
    record.command = "holevo";
    record.config = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"m", m}};
    record.aggregates = {{"chi_numeric", report.chi_numeric},
                         {"chi_closed_form", report.chi_closed_form}};
    return finish(record, {}, o);
}

int cmd_selftest(u64 seed, double scale, const std::string& record_path) {
    bool all_pass = true;
    RunRecord record;
    record.command = "selftest";
    record.config = {{"seed", seed}, {"scale", scale}};
    const auto results = run_acceptance(scale, seed, [&](const CheckResult& r) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " — " << r.detail << "\n"
                  << std::flush;
    });
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        record.trials.push_back({{"check", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    record.aggregates = {{"all_pass", all_pass}};
    if (!record_path.empty()) write_run_record(record, record_path);
    std::cout << (all_pass ? "selftest: all checks passed" : "selftest: FAILURES present") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"coset-state simulation laboratory"};
    app.require_subcommand(1);

    // keygen
    CommonOpts kg;
    std::string kg_out = "key.json", kg_public;
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
    keygen_cmd->add_option("--n", kg.n)->required();
    keygen_cmd->add_option("--q", kg.q)->required();
    keygen_cmd->add_option("--r", kg.r)->required();
    keygen_cmd->add_option("--p", kg.p);
    keygen_cmd->add_option("--seed", kg.seed)->required();
    keygen_cmd->add_option("--out", kg_out);
    keygen_cmd->add_option("--public-out", kg_public,
                           "adversary-view record (no secret material)");

    // encrypt
    std::string enc_key, enc_out = "ct.json";
    int enc_bit = 0;
    u64 enc_seed = 0;
    auto* enc_cmd = app.add_subcommand("encrypt", "encrypt one bit with a stored key");
    enc_cmd->add_option("--key", enc_key)->required();
    enc_cmd->add_option("--bit", enc_bit)->required()->check(CLI::Range(0, 1));
    enc_cmd->add_option("--seed", enc_seed)->required();
    enc_cmd->add_option("--out", enc_out);

    // decrypt
    std::string dec_key, dec_ct;
    u64 dec_seed = 0;
    auto* dec_cmd = app.add_subcommand("decrypt", "decrypt a stored ciphertext");
    dec_cmd->add_option("--key", dec_key)->required();
    dec_cmd->add_option("--ct", dec_ct)->required();
    dec_cmd->add_option("--seed", dec_seed)->required();

    // roundtrip
    CommonOpts rt;
    u64 rt_trials = 1000;
    auto* rt_cmd = app.add_subcommand("roundtrip", "keygen/encrypt/decrypt trials");
    rt_cmd->add_option("--n", rt.n)->required();
    rt_cmd->add_option("--q", rt.q)->required();
    rt_cmd->add_option("--r", rt.r)->required();
    rt_cmd->add_option("--p", rt.p);
    rt_cmd->add_option("--trials", rt_trials);
    rt_cmd->add_option("--seed", rt.seed)->required();
    attach_record_flags(rt_cmd, rt);

    // reduce-hybrid / reduce-phase
    CommonOpts rh, rp;
    u64 rh_instances = 5, rp_instances = 5;
    auto* rh_cmd = app.add_subcommand("reduce-hybrid",
                                      "hybrid search-to-decision with a perfect oracle");
    rh_cmd->add_option("--n", rh.n)->required();
    rh_cmd->add_option("--q", rh.q)->required();
    rh_cmd->add_option("--r", rh.r)->required();
    rh_cmd->add_option("--instances", rh_instances);
    rh_cmd->add_option("--seed", rh.seed)->required();
    attach_record_flags(rh_cmd, rh);
    auto* rp_cmd = app.add_subcommand("reduce-phase",
                                      "phased search-to-decision with a perfect oracle");
    rp_cmd->add_option("--n", rp.n)->required();
    rp_cmd->add_option("--q", rp.q)->required();
    rp_cmd->add_option("--r", rp.r)->required();
    rp_cmd->add_option("--instances", rp_instances);
    rp_cmd->add_option("--seed", rp.seed)->required();
    attach_record_flags(rp_cmd, rp);

    // extract-lwe
    CommonOpts el;
    double el_lambda = 9.0;
    u64 el_attempts = 10000;
    auto* el_cmd = app.add_subcommand("extract-lwe", "Gaussian-reshaped shifted-LWE extraction");
    el_cmd->add_option("--n", el.n)->required();
    el_cmd->add_option("--q", el.q)->required();
    el_cmd->add_option("--r", el.r)->required();
    el_cmd->add_option("--lambda", el_lambda)->required();
    el_cmd->add_option("--attempts", el_attempts);
    el_cmd->add_option("--seed", el.seed)->required();
    attach_record_flags(el_cmd, el);

    // attack-sieve
    CommonOpts as;
    std::size_t as_coord = SIZE_MAX, as_block = 1;
    double as_pool = 2.5;
    u64 as_runs = 10;
    auto* as_cmd = app.add_subcommand("attack-sieve", "label sieve plus final measurement");
    as_cmd->add_option("--n", as.n)->required();
    as_cmd->add_option("--q", as.q)->required();
    as_cmd->add_option("--r", as.r);
    as_cmd->add_option("--coord", as_coord);
    as_cmd->add_option("--block", as_block);
    as_cmd->add_option("--pool-exp", as_pool);
    as_cmd->add_option("--runs", as_runs);
    as_cmd->add_option("--seed", as.seed)->required();
    attach_record_flags(as_cmd, as);

    // attack-pgm
    CommonOpts ap;
    std::size_t ap_t = 6;
    u64 ap_runs = 20;
    auto* ap_cmd = app.add_subcommand("attack-pgm", "pretty good measurement on phase states");
    ap_cmd->add_option("--n", ap.n);
    ap_cmd->add_option("--q", ap.q)->required();
    ap_cmd->add_option("--r", ap.r);
    ap_cmd->add_option("--t", ap_t);
    ap_cmd->add_option("--runs", ap_runs);
    ap_cmd->add_option("--seed", ap.seed)->required();
    attach_record_flags(ap_cmd, ap);

    // attack-fourier
    CommonOpts af;
    u64 af_runs = 1;
    auto* af_cmd = app.add_subcommand("attack-fourier", "r = q linear-equation attack");
    af_cmd->add_option("--n", af.n)->required();
    af_cmd->add_option("--q", af.q)->required();
    af_cmd->add_option("--r", af.r)->required();
    af_cmd->add_option("--runs", af_runs);
    af_cmd->add_option("--seed", af.seed)->required();
    attach_record_flags(af_cmd, af);

    // holevo
    CommonOpts hv;
    u64 hv_m = 1;
    auto* hv_cmd = app.add_subcommand("holevo", "information bounds for the ensemble");
    hv_cmd->add_option("--n", hv.n)->required();
    hv_cmd->add_option("--q", hv.q)->required();
    hv_cmd->add_option("--r", hv.r)->required();
    hv_cmd->add_option("--m", hv_m);
    attach_record_flags(hv_cmd, hv);

    // selftest
    u64 st_seed = 1;
    double st_scale = 0.1;
    std::string st_record;
    auto* st_cmd = app.add_subcommand("selftest", "reduced-scale verification checks");
    st_cmd->add_option("--seed", st_seed);
    st_cmd->add_option("--scale", st_scale);
    st_cmd->add_option("--record", st_record);

    std::vector<const char*> argv;
    argv.push_back("edcplab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*keygen_cmd) return cmd_keygen(kg, kg_out, kg_public);
        if (*enc_cmd) return cmd_encrypt(enc_key, enc_bit, enc_seed, enc_out);
        if (*dec_cmd) return cmd_decrypt(dec_key, dec_ct, dec_seed);
        if (*rt_cmd) return cmd_roundtrip(rt, rt_trials);
        if (*rh_cmd) return cmd_reduce(rh, rh_instances, false);
        if (*rp_cmd) return cmd_reduce(rp, rp_instances, true);
        if (*el_cmd) return cmd_extract_lwe(el, el_lambda, el_attempts);
        if (*as_cmd) {
            if (as_coord == SIZE_MAX) as_coord = as.n - 1;
            if (as.r == 2 && as.q >= 4) as.r = 4;  // default reduced length
            return cmd_attack_sieve(as, as_coord, as_block, as_pool, as_runs);
        }
        if (*ap_cmd) {
            if (ap.r == 2 && ap.q >= 4) ap.r = 4;
            return cmd_attack_pgm(ap, ap_t, ap_runs);
        }
        if (*af_cmd) return cmd_attack_fourier(af, af_runs);
        if (*hv_cmd) return cmd_holevo(hv, hv_m);
        if (*st_cmd) return cmd_selftest(st_seed, st_scale, st_record);
    } catch (const BadParams& e) {
        std::cerr << "parameter validation failed: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace edcp
